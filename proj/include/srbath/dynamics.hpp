// dynamics.hpp -- TCL-2 propagation of an N-site excitonic system with
// site-projector coupling to per-site baths:
//
//   drho/dt = -i [H, rho] - sum_n [ A_n, L_n(t) rho - rho L_n(t)^dag ],
//   A_n = |n><n|,  L_n(t) = int_0^t dtau D_n(tau) e^{-iH tau} A_n e^{iH tau}.
//
// The integrator works in the H-eigenbasis interaction picture, where the
// coherent part is exact diagonal phases and L_n reduces to elementwise
// scalar integrals int_0^t D_n(tau) exp(-i w_ab tau) dtau, accumulated with
// per-step Gauss panels. Fixed-step RK4 advances the slow (dissipative) part.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "srbath/bathmodel.hpp"

namespace srbath {

struct ExcitonSystem {
    Eigen::MatrixXd hamiltonian_cm1;           // N x N, symmetric
    std::vector<DrudeLorentzModel> site_baths; // one per site
    double temperature_kelvin = 0.0;

    int n_sites() const { return static_cast<int>(hamiltonian_cm1.rows()); }
    void validate() const;
};

struct DensityTrajectory {
    std::vector<double> times_fs;
    std::vector<Eigen::MatrixXcd> matrices;  // site basis
    Eigen::MatrixXd exciton_vectors;  // columns: eigenvectors, ascending
                                      // eigenvalue, largest component positive
    Eigen::VectorXd exciton_energies_cm1;
    double min_eigenvalue = 0.0;      // most negative rho eigenvalue seen
    double max_trace_drift = 0.0;
    double max_hermiticity_defect = 0.0;

    std::size_t size() const noexcept { return times_fs.size(); }
};

struct PropagateOptions {
    double t_max_fs = 1000.0;
    double dt_fs = 1.0;
    int output_stride = 1;          // store every k-th step
    double kernel_dt_fs = 0.1;      // bath-kernel tabulation grid
    double kernel_omega_max_cm1 = 4000.0;
    double trace_abort_tol = 1e-6;  // abort when |tr rho - 1| exceeds this
    bool track_positivity = true;   // eigenvalue diagnostic per stored sample
};

// rho0 must be Hermitian, unit trace and positive semidefinite to 1e-10.
DensityTrajectory propagate(const ExcitonSystem& sys,
                            const Eigen::MatrixXcd& rho0,
                            const PropagateOptions& opts);

// Same propagation with externally supplied per-site kernels (cm^-2 units on
// the system's time range); used when J comes from a tabulated density
// instead of an atom model.
DensityTrajectory propagate_with_kernels(const Eigen::MatrixXd& hamiltonian_cm1,
                                         const std::vector<BathKernel>& kernels,
                                         const Eigen::MatrixXcd& rho0,
                                         const PropagateOptions& opts);

// Density matrix localized on one site (0-based).
Eigen::MatrixXcd site_basis_state(int n_sites, int site);

struct Observable {
    enum class Kind { site_population, site_coherence,
                      exciton_population, exciton_coherence };
    Kind kind;
    int i = 0;  // 0-based
    int j = 0;

    std::string name() const;
};

// Parses "pop:1", "coh:1:3", "xpop:2", "xcoh:1:3" (1-based indices).
Observable parse_observable(const std::string& token, int n_sites);

// One complex series per requested observable (populations have zero
// imaginary part). Exciton quantities use the trajectory's stored eigenbasis.
std::vector<std::vector<std::complex<double>>> observables(
    const DensityTrajectory& traj, const std::vector<Observable>& which);

}  // namespace srbath
