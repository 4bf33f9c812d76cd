#include <doctest.h>

#include <cmath>
#include <complex>

#include "srbath/dynamics.hpp"
#include "srbath/errors.hpp"
#include "srbath/units.hpp"

using namespace srbath;

namespace {

DrudeLorentzModel empty_bath(double t_kelvin = 77.0) {
    DrudeLorentzModel m;
    m.temperature_kelvin = t_kelvin;
    return m;
}

DrudeLorentzModel small_bath(double amp, double t_kelvin = 77.0) {
    DrudeLorentzModel m;
    m.temperature_kelvin = t_kelvin;
    m.atoms = {{30.0, 80.0, amp}, {12.0, 220.0, 0.5 * amp}};
    return m;
}

ExcitonSystem two_site(double coupling_cm1, const DrudeLorentzModel& bath) {
    ExcitonSystem sys;
    sys.hamiltonian_cm1 = Eigen::MatrixXd::Zero(2, 2);
    sys.hamiltonian_cm1(0, 1) = coupling_cm1;
    sys.hamiltonian_cm1(1, 0) = coupling_cm1;
    sys.temperature_kelvin = bath.temperature_kelvin;
    sys.site_baths = {bath, bath};
    return sys;
}

}  // namespace

TEST_CASE("zero-bath two-site system follows the Rabi closed form") {
    const ExcitonSystem sys = two_site(100.0, empty_bath());
    PropagateOptions opts;
    opts.t_max_fs = 1000.0;
    opts.dt_fs = 1.0;
    opts.track_positivity = false;
    const auto traj = propagate(sys, site_basis_state(2, 0), opts);
    const double j = units::wavenumber_to_angular(100.0);
    for (std::size_t s = 0; s < traj.size(); ++s) {
        const double t = traj.times_fs[s];
        const double expected = std::cos(j * t) * std::cos(j * t);
        CHECK(std::abs(traj.matrices[s](0, 0).real() - expected) <= 1e-6);
    }
    CHECK(traj.max_trace_drift <= 1e-10);
    CHECK(traj.max_hermiticity_defect <= 1e-12);
}

TEST_CASE("diagonal Hamiltonian: populations frozen, coherences decay") {
    ExcitonSystem sys;
    sys.hamiltonian_cm1 = Eigen::MatrixXd::Zero(2, 2);
    sys.hamiltonian_cm1(0, 0) = 100.0;
    sys.hamiltonian_cm1(1, 1) = 250.0;
    sys.temperature_kelvin = 77.0;
    sys.site_baths = {small_bath(500.0), small_bath(500.0)};

    Eigen::MatrixXcd rho0(2, 2);
    rho0 << 0.625, std::complex<double>(0.25, 0.1),
        std::complex<double>(0.25, -0.1), 0.375;

    PropagateOptions opts;
    opts.t_max_fs = 400.0;
    opts.dt_fs = 1.0;
    opts.output_stride = 20;
    const auto traj = propagate(sys, rho0, opts);
    for (std::size_t s = 0; s < traj.size(); ++s) {
        CHECK(std::abs(traj.matrices[s](0, 0).real() - 0.625) <= 1e-9);
        CHECK(std::abs(traj.matrices[s](1, 1).real() - 0.375) <= 1e-9);
    }
    const double c_start = std::abs(traj.matrices.front()(0, 1));
    const double c_end = std::abs(traj.matrices.back()(0, 1));
    CHECK(c_end < c_start);
}

TEST_CASE("trace and Hermiticity are conserved with active baths") {
    const ExcitonSystem sys = two_site(80.0, small_bath(1000.0));
    PropagateOptions opts;
    opts.t_max_fs = 1000.0;
    opts.dt_fs = 1.0;
    opts.output_stride = 10;
    const auto traj = propagate(sys, site_basis_state(2, 0), opts);
    CHECK(traj.max_trace_drift <= 1e-8);
    CHECK(traj.max_hermiticity_defect <= 1e-10);
    // dissipation is visible: site-1 population relaxes away from pure Rabi
    CHECK(traj.matrices.back()(0, 0).real() < 1.0);
}

TEST_CASE("halving dt changes the trajectory by < 1e-7") {
    const ExcitonSystem sys = two_site(100.0, small_bath(800.0));
    PropagateOptions coarse;
    coarse.t_max_fs = 500.0;
    coarse.dt_fs = 1.0;
    coarse.output_stride = 50;
    coarse.track_positivity = false;
    PropagateOptions fine = coarse;
    fine.dt_fs = 0.5;
    fine.output_stride = 100;
    const auto a = propagate(sys, site_basis_state(2, 0), coarse);
    const auto b = propagate(sys, site_basis_state(2, 0), fine);
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s) {
        REQUIRE(a.times_fs[s] == doctest::Approx(b.times_fs[s]));
        worst = std::max(worst,
                         (a.matrices[s] - b.matrices[s]).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("weak coupling keeps the state nearly positive") {
    // amplitudes scaled for a sub-wavenumber reorganization energy
    DrudeLorentzModel weak;
    weak.temperature_kelvin = 77.0;
    weak.atoms = {{30.0, 80.0, 50.0}, {12.0, 220.0, 25.0}};
    const double reorg = reorganization_energy(weak).value_cm1;
    CHECK(reorg <= 1.0);

    const ExcitonSystem sys = two_site(100.0, weak);
    PropagateOptions opts;
    opts.t_max_fs = 1000.0;
    opts.dt_fs = 1.0;
    opts.output_stride = 10;
    const auto traj = propagate(sys, site_basis_state(2, 0), opts);
    CHECK(traj.min_eigenvalue >= -1e-6);
}

TEST_CASE("basis-change consistency: trace in both bases") {
    const ExcitonSystem sys = two_site(60.0, small_bath(900.0));
    PropagateOptions opts;
    opts.t_max_fs = 200.0;
    opts.dt_fs = 1.0;
    opts.output_stride = 20;
    const auto traj = propagate(sys, site_basis_state(2, 0), opts);
    const Eigen::MatrixXd& v = traj.exciton_vectors;
    for (const auto& rho : traj.matrices) {
        const Eigen::MatrixXcd rho_x = v.transpose() * rho * v;
        CHECK(std::abs(rho_x.trace().real() - rho.trace().real()) <= 1e-12);
    }
}

TEST_CASE("exciton coherence matches a hand-rotated unitary case") {
    const ExcitonSystem sys = two_site(100.0, empty_bath());
    PropagateOptions opts;
    opts.t_max_fs = 100.0;
    opts.dt_fs = 1.0;
    const auto traj = propagate(sys, site_basis_state(2, 0), opts);

    const auto series = observables(
        traj, {parse_observable("xcoh:1:2", 2), parse_observable("xpop:1", 2)});
    // eigenbasis of [[0,J],[J,0]]: |±> = (|0> ± |1>)/sqrt(2); with the
    // largest-component-positive convention both get + signs
    const double j = units::wavenumber_to_angular(100.0);
    for (std::size_t s = 0; s < traj.size(); ++s) {
        const double t = traj.times_fs[s];
        // rho = |psi><psi| with psi = cos(jt)|0> - i sin(jt)|1>
        // exciton populations are exactly 1/2; coherence rotates as e^{2ijt}/2
        const std::complex<double> expected =
            0.5 * std::exp(std::complex<double>(0.0, 2.0 * j * t));
        CHECK(std::abs(series[0][s] - expected) <= 1e-9);
        CHECK(std::abs(series[1][s].real() - 0.5) <= 1e-9);
    }
}

TEST_CASE("observable parsing and naming") {
    const auto o = parse_observable("coh:1:3", 7);
    CHECK(o.kind == Observable::Kind::site_coherence);
    CHECK(o.i == 0);
    CHECK(o.j == 2);
    CHECK(o.name() == "coh1_3");
    CHECK_THROWS_AS(parse_observable("pop:9", 7), domain_error);
    CHECK_THROWS_AS(parse_observable("weird:1", 7), domain_error);
    CHECK_THROWS_AS(parse_observable("coh:0:2", 7), domain_error);
}

TEST_CASE("rho0 validation") {
    const ExcitonSystem sys = two_site(100.0, empty_bath());
    PropagateOptions opts;
    opts.t_max_fs = 10.0;
    opts.dt_fs = 1.0;

    Eigen::MatrixXcd bad_trace = Eigen::MatrixXcd::Zero(2, 2);
    bad_trace(0, 0) = 2.0;
    CHECK_THROWS_AS(propagate(sys, bad_trace, opts), domain_error);

    Eigen::MatrixXcd not_herm(2, 2);
    not_herm << 1.0, std::complex<double>(0.1, 0.2),
        std::complex<double>(0.3, 0.1), 0.0;
    CHECK_THROWS_AS(propagate(sys, not_herm, opts), domain_error);

    Eigen::MatrixXcd not_psd(2, 2);
    not_psd << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(propagate(sys, not_psd, opts), domain_error);

    PropagateOptions bad_dt = opts;
    bad_dt.dt_fs = 3.0;  // does not divide t_max
    CHECK_THROWS_AS(propagate(sys, site_basis_state(2, 0), bad_dt),
                    domain_error);
}

TEST_CASE("system validation") {
    ExcitonSystem sys = two_site(100.0, empty_bath());
    sys.hamiltonian_cm1(0, 1) = 101.0;  // asymmetric
    CHECK_THROWS_AS(sys.validate(), domain_error);

    sys = two_site(100.0, empty_bath());
    sys.site_baths.pop_back();
    CHECK_THROWS_AS(sys.validate(), domain_error);
}
