// reference.hpp -- serial reference implementations of the parallel kernels.
//
// These follow the defining sums directly, one term at a time, with no
// tables, blocking or threading. They exist so the production kernels can be
// checked against them and benchmarked; they are not meant to be fast.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "srbath/baseline.hpp"
#include "srbath/dictionary.hpp"
#include "srbath/timeseries.hpp"

namespace srbath::reference {

CorrelationSeries autocorrelation(const GapTrajectory& traj,
                                  std::size_t max_lag);

TabulatedSpectralDensity cosine_transform_sd(const CorrelationSeries& corr,
                                             double temperature_kelvin,
                                             std::vector<double> freq_grid_cm1);

// Per-atom column norms of the raw (unnormalized) dictionary.
std::vector<double> dictionary_column_norms(const AtomGrid& grid,
                                            const std::vector<double>& times_fs);

// y_k = sum_ij coeffs_ij * scale_ij * exp(-g_i t_k) cos(W_j t_k), atom by atom.
std::vector<double> dictionary_apply(const AtomGrid& grid,
                                     const std::vector<double>& times_fs,
                                     const std::vector<double>& scales,
                                     std::span<const double> coeffs);

std::vector<double> dictionary_apply_adjoint(const AtomGrid& grid,
                                             const std::vector<double>& times_fs,
                                             const std::vector<double>& scales,
                                             std::span<const double> residual);

// One dual-projection TV sweep + soft threshold, plain loops.
void tv_l1_prox(std::span<double> grid, std::size_t n_gammas,
                std::size_t n_omegas, double tv_weight, double l1_weight,
                int inner_iters);

}  // namespace srbath::reference
