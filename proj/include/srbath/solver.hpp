// solver.hpp -- TV + L1 regularized recovery of sparse damped-cosine spectra.
//
// The constrained problem
//     argmin ||grad(lambda)||_1 + mu ||lambda||_1   s.t. ||A lambda - C||_2 < eta
// is solved in penalized form
//     min 1/2 ||A lambda - C||_2^2 + tau_tv ||grad(lambda)||_1 + tau_l1 mu ||lambda||_1
// with a continuation loop that halves (tau_tv, tau_l1) until the residual
// constraint holds. Iterations are two-step (TwIST) with a monotone IST
// fallback; the composite prox is dual-projection TV denoising followed by
// soft thresholding. eta is relative to ||C||_2.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "srbath/dictionary.hpp"
#include "srbath/timeseries.hpp"

namespace srbath {

struct SolverConfig {
    double mu = 1.0;            // sparsity weight in the regularizer
    double eta = 1e-7;          // residual tolerance, relative to ||C||_2
    int stall_iters = 100;      // unchanged-solution window that declares convergence
    double stall_tol = 1e-14;   // sup-norm change below this counts as unchanged
    int max_iters = 20000;      // global iteration cap across continuation stages
    int tv_inner_iters = 20;    // dual-projection sweeps inside the TV prox

    double twist_rho = 0.99;    // assumed ill-conditioning parameter
    double continuation_start = 0.1;   // tau_0 as a fraction of ||A^T C||_inf
    double continuation_factor = 0.5;  // geometric decrease per stage
    int stage_max_iters = 150;  // iterations per continuation stage

    bool debias = true;
    double debias_eta = 1e-9;   // relative residual the debiased fit reports against
    double prune_floor = 1e-12; // hard floor on |amplitude| after un-scaling

    void validate() const;
};

struct SparseAtom {
    double gamma_cm1 = 0.0;
    double omega_cm1 = 0.0;
    double amplitude = 0.0;  // un-scaled coefficient, C_k units
};

struct SparseSpectrum {
    std::vector<SparseAtom> atoms;
    double residual_rel = 0.0;  // ||A lambda - C||_2 / ||C||_2
    int iterations = 0;
    bool converged_by_residual = false;
    bool converged_by_stall = false;
    bool hit_iteration_cap = false;
    bool debias_applied = false;
    int debias_dropped = 0;  // atoms removed by the rank-deficiency path

    std::size_t size() const noexcept { return atoms.size(); }
};

SparseSpectrum solve(const CorrelationSeries& corr, const Measurement& meas,
                     const SolverConfig& cfg);

// Approximate proximal operator of tv_weight*TV + l1_weight*L1 on the dense
// (n_gammas x n_omegas) grid: inner_iters dual-projection sweeps of
// anisotropic TV denoising (forward differences, replicate boundary),
// then elementwise soft thresholding.
void tv_l1_prox(std::span<double> grid, std::size_t n_gammas,
                std::size_t n_omegas, double tv_weight, double l1_weight,
                int inner_iters);

// Least-squares amplitude refit on the frozen support (conjugate gradient on
// the normal equations, tolerance 1e-12 or 10x support size iterations).
// Rank-deficient supports drop the smallest-amplitude dependent atom and
// refit; drops are counted in the result.
SparseSpectrum debias(const SparseSpectrum& spectrum,
                      const CorrelationSeries& corr, const Measurement& meas,
                      const SolverConfig& cfg);

}  // namespace srbath
