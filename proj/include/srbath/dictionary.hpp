// dictionary.hpp -- the damped-cosine measurement operator over a
// (linewidth, frequency) grid.
//
// Atom (i,j) sampled at time t_k is
//     scale_ij * exp(-gamma_i t_k) * cos(Omega_j t_k)
// with gamma and Omega converted from cm^-1 to rad/fs internally. Columns are
// normalized to unit Euclidean norm over the time grid (scale recorded so
// coefficients can be un-scaled exactly). The operator is applied from cached
// exp/cos factor tables; the per-atom product is never materialized.
//
// Dense coefficient grids are row-major with the gamma index outermost:
// coeffs[i * n_omegas + j].

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace srbath {

struct AtomGrid {
    std::vector<double> gammas_cm1;  // strictly increasing, >= 0
    std::vector<double> omegas_cm1;  // strictly increasing, >= 0

    // Omega = 0(2)2000 cm^-1 (1001 values), gamma = 0(6)156 cm^-1 (27 values).
    static AtomGrid default_grid();
    static AtomGrid make(double gamma_max_cm1, double gamma_step_cm1,
                         double omega_max_cm1, double omega_step_cm1);

    std::size_t n_gammas() const noexcept { return gammas_cm1.size(); }
    std::size_t n_omegas() const noexcept { return omegas_cm1.size(); }
    std::size_t n_atoms() const noexcept { return n_gammas() * n_omegas(); }
    void validate() const;
};

class Measurement {
public:
    Measurement(AtomGrid grid, std::vector<double> times_fs,
                bool normalize_columns = true);

    const AtomGrid& grid() const noexcept { return grid_; }
    const std::vector<double>& times_fs() const noexcept { return times_fs_; }
    std::size_t n_atoms() const noexcept { return grid_.n_atoms(); }
    std::size_t n_times() const noexcept { return times_fs_.size(); }

    // Column scale factor for atom (i,j); 1 when normalization is off.
    double scale(std::size_t i, std::size_t j) const {
        return scale_[i * grid_.n_omegas() + j];
    }
    const std::vector<double>& scales() const noexcept { return scale_; }

    // y_k = sum_ij coeffs_ij * scale_ij * exp(-g_i t_k) cos(W_j t_k)
    void apply(std::span<const double> coeffs, std::span<double> out) const;

    // g_ij = scale_ij * sum_k residual_k * exp(-g_i t_k) cos(W_j t_k)
    void apply_adjoint(std::span<const double> residual,
                       std::span<double> out) const;

    // Explicit column of the normalized operator, for small dense subproblems.
    std::vector<double> column(std::size_t i, std::size_t j) const;

    // Power-iteration estimate of the spectral norm ||A||_2 (50 iterations or
    // 1e-6 relative stagnation).
    double operator_norm_estimate(int max_iters = 50, double tol = 1e-6) const;

private:
    AtomGrid grid_;
    std::vector<double> times_fs_;
    std::vector<double> exp_table_;  // n_gammas x n_times
    std::vector<double> cos_table_;  // n_omegas x n_times
    std::vector<double> scale_;      // n_gammas x n_omegas
};

}  // namespace srbath
