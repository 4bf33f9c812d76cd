#include <doctest.h>

#include <cmath>
#include <random>

#include "srbath/baseline.hpp"
#include "srbath/bathmodel.hpp"
#include "srbath/errors.hpp"
#include "srbath/reference.hpp"
#include "srbath/units.hpp"

using namespace srbath;

namespace {

// densely sampled analytic damped cosine
CorrelationSeries analytic_corr(double gamma_cm1, double omega_cm1,
                                double amp, double dt_fs, std::size_t n) {
    CorrelationSeries corr;
    corr.dt_fs = dt_fs;
    corr.values_cm2.resize(n);
    const double g = units::wavenumber_to_angular(gamma_cm1);
    const double w = units::wavenumber_to_angular(omega_cm1);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = dt_fs * static_cast<double>(k);
        corr.values_cm2[k] = amp * std::exp(-g * t) * std::cos(w * t);
    }
    return corr;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) /
                        static_cast<double>(n - 1);
    }
    return v;
}

}  // namespace

TEST_CASE("zero correlation transforms to zero") {
    CorrelationSeries corr;
    corr.dt_fs = 4.0;
    corr.values_cm2.assign(100, 0.0);
    const auto sd = cosine_transform_sd(corr, 77.0, {0.0, 100.0, 500.0});
    for (double v : sd.values) CHECK(v == 0.0);
}

TEST_CASE("J(0) vanishes for any correlation") {
    const auto corr = analytic_corr(30.0, 200.0, 1.0, 4.0, 500);
    const auto sd = cosine_transform_sd(corr, 77.0, {0.0, 10.0});
    CHECK(sd.values[0] == 0.0);
    CHECK(sd.values[1] != 0.0);
}

TEST_CASE("transform agrees with the serial reference") {
    const auto corr = analytic_corr(40.0, 310.0, 2.5, 2.0, 1200);
    const auto grid = linspace(0.0, 800.0, 81);
    const auto fast = cosine_transform_sd(corr, 120.0, grid);
    const auto ref = reference::cosine_transform_sd(corr, 120.0, grid);
    for (std::size_t m = 0; m < grid.size(); ++m) {
        CHECK(fast.values[m] ==
              doctest::Approx(ref.values[m]).epsilon(1e-11));
    }
}

TEST_CASE("quadrature converges to the closed-form Lorentzian pair") {
    // gamma = 30, Omega = 200 cm^-1 sampled densely to decay
    const double gamma = 30.0, omega = 200.0;
    const double dt = 0.5;
    const double gr = units::wavenumber_to_angular(gamma);
    const std::size_t n = static_cast<std::size_t>(std::ceil(23.0 / gr / dt));
    const auto corr = analytic_corr(gamma, omega, 1.0, dt, n);

    DrudeLorentzModel model;
    model.temperature_kelvin = 77.0;
    model.atoms = {{gamma, omega, 1.0}};

    const auto sd =
        cosine_transform_sd(corr, 77.0, {omega - 20.0, omega, omega + 20.0});
    for (std::size_t m = 0; m < sd.values.size(); ++m) {
        const double closed = evaluate_sd(model, sd.frequencies_cm1[m]);
        CHECK(sd.values[m] == doctest::Approx(closed).epsilon(1e-3));
    }
}

TEST_CASE("linearity of the transform") {
    const auto c1 = analytic_corr(30.0, 150.0, 1.0, 4.0, 600);
    auto c2 = analytic_corr(60.0, 420.0, 0.7, 4.0, 600);
    const double a = 2.75;
    CorrelationSeries mix;
    mix.dt_fs = 4.0;
    mix.values_cm2.resize(600);
    for (std::size_t k = 0; k < 600; ++k) {
        mix.values_cm2[k] = a * c1.values_cm2[k] + c2.values_cm2[k];
    }
    const auto grid = linspace(0.0, 1000.0, 60);
    const auto s1 = cosine_transform_sd(c1, 77.0, grid);
    const auto s2 = cosine_transform_sd(c2, 77.0, grid);
    const auto sm = cosine_transform_sd(mix, 77.0, grid);
    double scale = 0.0;
    for (double v : sm.values) scale = std::max(scale, std::abs(v));
    for (std::size_t m = 0; m < grid.size(); ++m) {
        CHECK(std::abs(sm.values[m] - (a * s1.values[m] + s2.values[m])) <=
              1e-10 * scale);
    }
}

TEST_CASE("grid refinement changes J below coarse Nyquist by < 1e-4") {
    const double dt = 1.0;
    const double t_span = 16000.0;
    const auto coarse = analytic_corr(50.0, 300.0, 1.0, dt,
                                      static_cast<std::size_t>(t_span / dt));
    const auto fine = analytic_corr(50.0, 300.0, 1.0, dt / 2.0,
                                    static_cast<std::size_t>(2.0 * t_span / dt));
    const auto grid = linspace(0.0, 900.0, 91);  // well below pi/dt
    const auto sc = cosine_transform_sd(coarse, 77.0, grid);
    const auto sf = cosine_transform_sd(fine, 77.0, grid);
    double scale = 0.0;
    for (double v : sf.values) scale = std::max(scale, std::abs(v));
    for (std::size_t m = 0; m < grid.size(); ++m) {
        CHECK(std::abs(sc.values[m] - sf.values[m]) <= 1e-4 * scale);
    }
}

TEST_CASE("frequencies above the Nyquist limit are rejected") {
    const auto corr = analytic_corr(30.0, 200.0, 1.0, 4.0, 100);
    const double nyquist_cm1 =
        units::angular_to_wavenumber(M_PI / corr.dt_fs);
    CHECK_THROWS_AS(
        cosine_transform_sd(corr, 77.0, {nyquist_cm1 * 1.01}), domain_error);
    CHECK_NOTHROW(cosine_transform_sd(corr, 77.0, {nyquist_cm1 * 0.99}));
}

TEST_CASE("windows") {
    CorrelationSeries ones;
    ones.dt_fs = 1.0;
    ones.values_cm2.assign(65, 1.0);

    const auto none = window(ones, WindowKind::none);
    CHECK(none.values_cm2 == ones.values_cm2);

    const auto hann = window(ones, WindowKind::hann);
    CHECK(hann.values_cm2.front() == 1.0);
    CHECK(hann.values_cm2.back() == doctest::Approx(0.0));
    // symmetric taper: monotone decreasing
    for (std::size_t k = 1; k < hann.values_cm2.size(); ++k) {
        CHECK(hann.values_cm2[k] <= hann.values_cm2[k - 1] + 1e-15);
    }

    const auto expinf = window(ones, WindowKind::exponential,
                               std::numeric_limits<double>::infinity());
    CHECK(expinf.values_cm2 == ones.values_cm2);

    const auto exp100 = window(ones, WindowKind::exponential, 100.0);
    CHECK(exp100.values_cm2[10] == doctest::Approx(std::exp(-0.1)));

    CHECK_THROWS_AS(parse_window_kind("gauss"), domain_error);
    CHECK(parse_window_kind("hann") == WindowKind::hann);
}
