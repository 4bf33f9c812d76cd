#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "srbath/errors.hpp"
#include "srbath/reference.hpp"
#include "srbath/timeseries.hpp"

using namespace srbath;

namespace {

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& body) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream out(p);
    out << body;
    return p;
}

GapTrajectory random_trajectory(std::mt19937_64& gen, std::size_t n,
                                double dt = 4.0) {
    std::normal_distribution<double> dist(0.0, 1.0);
    GapTrajectory traj;
    traj.dt_fs = dt;
    traj.samples_cm1.resize(n);
    for (auto& v : traj.samples_cm1) v = dist(gen);
    return traj;
}

}  // namespace

TEST_CASE("load_trajectory parses simple files") {
    const auto p = write_temp("srbath_traj_ok.csv", "1.0\n2.0\n3.0\n");
    const GapTrajectory traj = load_trajectory(p, 4.0, "site1");
    CHECK(traj.size() == 3);
    CHECK(traj.dt_fs == 4.0);
    CHECK(traj.samples_cm1[2] == 3.0);
    std::filesystem::remove(p);
}

TEST_CASE("load_trajectory skips comments and blank lines") {
    const auto p = write_temp("srbath_traj_comment.csv",
                              "# header\n\n1.5\n# mid comment\n2.5\n");
    const GapTrajectory traj = load_trajectory(p, 2.0);
    CHECK(traj.size() == 2);
    CHECK(traj.samples_cm1[0] == 1.5);
    std::filesystem::remove(p);
}

TEST_CASE("load_trajectory error categories") {
    CHECK_THROWS_AS(load_trajectory("/nonexistent/path.csv", 4.0), parse_error);
    try {
        load_trajectory("/nonexistent/path.csv", 4.0);
    } catch (const parse_error& e) {
        CHECK(e.which() == parse_error::kind::missing_file);
    }

    const auto bad = write_temp("srbath_traj_bad.csv", "1.0\nfoo\n2.0\n");
    try {
        load_trajectory(bad, 4.0);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.which() == parse_error::kind::bad_value);
    }
    std::filesystem::remove(bad);

    const auto empty = write_temp("srbath_traj_empty.csv", "");
    try {
        load_trajectory(empty, 4.0);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.which() == parse_error::kind::too_short);
    }
    std::filesystem::remove(empty);
}

TEST_CASE("autocorrelation of a constant series is zero") {
    GapTrajectory traj;
    traj.dt_fs = 4.0;
    traj.samples_cm1.assign(100, 5.0);
    const CorrelationSeries corr = autocorrelation(traj, 50);
    for (double v : corr.values_cm2) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("autocorrelation of the alternating sequence") {
    GapTrajectory traj;
    traj.dt_fs = 1.0;
    const std::size_t n = 4096;
    traj.samples_cm1.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        traj.samples_cm1[i] = (i % 2 == 0) ? 1.0 : -1.0;
    }
    const CorrelationSeries corr = autocorrelation(traj, 32);
    for (std::size_t k = 0; k < corr.max_lag(); ++k) {
        const double expected = (k % 2 == 0) ? 1.0 : -1.0;
        CHECK(corr.values_cm2[k] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("autocorrelation matches the O(N^2) direct sum") {
    std::mt19937_64 gen(7);
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t n = 16 + static_cast<std::size_t>(gen() % 241);
        const GapTrajectory traj = random_trajectory(gen, n);
        const std::size_t max_lag = 1 + static_cast<std::size_t>(gen() % (n - 1));
        const CorrelationSeries fast = autocorrelation(traj, max_lag);
        const CorrelationSeries ref = reference::autocorrelation(traj, max_lag);
        REQUIRE(fast.max_lag() == ref.max_lag());
        for (std::size_t k = 0; k < max_lag; ++k) {
            CHECK(fast.values_cm2[k] ==
                  doctest::Approx(ref.values_cm2[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("autocorrelation shift invariance") {
    std::mt19937_64 gen(21);
    const GapTrajectory traj = random_trajectory(gen, 200);
    GapTrajectory shifted = traj;
    for (auto& v : shifted.samples_cm1) v += 123.25;
    const CorrelationSeries a = autocorrelation(traj, 64);
    const CorrelationSeries b = autocorrelation(shifted, 64);
    for (std::size_t k = 0; k < a.max_lag(); ++k) {
        CHECK(b.values_cm2[k] ==
              doctest::Approx(a.values_cm2[k]).epsilon(1e-10));
    }
}

TEST_CASE("autocorrelation quadratic scaling") {
    std::mt19937_64 gen(42);
    const GapTrajectory traj = random_trajectory(gen, 150);
    GapTrajectory scaled = traj;
    const double s = 3.5;
    for (auto& v : scaled.samples_cm1) v *= s;
    const CorrelationSeries a = autocorrelation(traj, 40);
    const CorrelationSeries b = autocorrelation(scaled, 40);
    for (std::size_t k = 0; k < a.max_lag(); ++k) {
        CHECK(b.values_cm2[k] ==
              doctest::Approx(s * s * a.values_cm2[k]).epsilon(1e-12));
    }
}

TEST_CASE("autocorrelation rejects bad lags") {
    std::mt19937_64 gen(1);
    const GapTrajectory traj = random_trajectory(gen, 32);
    CHECK_THROWS_AS(autocorrelation(traj, 32), domain_error);
    CHECK_THROWS_AS(autocorrelation(traj, 0), domain_error);
    CHECK_NOTHROW(autocorrelation(traj, 31));
}

TEST_CASE("default max_lag is half the series") {
    std::mt19937_64 gen(2);
    const GapTrajectory traj = random_trajectory(gen, 64);
    CHECK(autocorrelation(traj).max_lag() == 32);
}

TEST_CASE("truncate keeps the leading fraction") {
    CorrelationSeries corr;
    corr.dt_fs = 4.0;
    corr.values_cm2.resize(10000);
    for (std::size_t k = 0; k < corr.max_lag(); ++k) {
        corr.values_cm2[k] = std::cos(0.01 * static_cast<double>(k));
    }
    const CorrelationSeries t = truncate(corr, 0.25);
    CHECK(t.max_lag() == 2500);
    CHECK(t.dt_fs == corr.dt_fs);
    CHECK(t.values_cm2[2499] == corr.values_cm2[2499]);

    const CorrelationSeries full = truncate(corr, 1.0);
    CHECK(full.max_lag() == corr.max_lag());

    CHECK_THROWS_AS(truncate(corr, 0.0), domain_error);
    CHECK_THROWS_AS(truncate(corr, 1.5), domain_error);
    CHECK_THROWS_AS(truncate(corr, -0.1), domain_error);
}
