#include "srbath/reference.hpp"

#include <cmath>

#include "srbath/errors.hpp"
#include "srbath/units.hpp"

namespace srbath::reference {

CorrelationSeries autocorrelation(const GapTrajectory& traj,
                                  std::size_t max_lag) {
    traj.validate();
    const std::size_t n = traj.size();
    if (max_lag < 1 || max_lag >= n) {
        throw domain_error("reference::autocorrelation: bad max_lag");
    }
    const auto& x = traj.samples_cm1;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x[i];
    mean /= static_cast<double>(n);

    CorrelationSeries corr;
    corr.dt_fs = traj.dt_fs;
    corr.values_cm2.assign(max_lag, 0.0);
    for (std::size_t k = 0; k < max_lag; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) {
            acc += (x[i] - mean) * (x[i + k] - mean);
        }
        corr.values_cm2[k] = acc / static_cast<double>(n - k);
    }
    return corr;
}

TabulatedSpectralDensity cosine_transform_sd(const CorrelationSeries& corr,
                                             double temperature_kelvin,
                                             std::vector<double> freq_grid_cm1) {
    corr.validate();
    const double beta_fs = units::thermal_beta_fs(temperature_kelvin);
    TabulatedSpectralDensity sd;
    sd.temperature_kelvin = temperature_kelvin;
    sd.frequencies_cm1 = std::move(freq_grid_cm1);
    sd.values.assign(sd.frequencies_cm1.size(), 0.0);
    for (std::size_t m = 0; m < sd.values.size(); ++m) {
        const double w = units::wavenumber_to_angular(sd.frequencies_cm1[m]);
        double acc = corr.values_cm2[0];
        for (std::size_t k = 1; k < corr.max_lag(); ++k) {
            acc += 2.0 * corr.values_cm2[k] * std::cos(w * corr.lag_time_fs(k));
        }
        sd.values[m] = 0.5 * beta_fs * w * corr.dt_fs * acc;
    }
    return sd;
}

std::vector<double> dictionary_column_norms(const AtomGrid& grid,
                                            const std::vector<double>& times_fs) {
    std::vector<double> norms(grid.n_atoms(), 0.0);
    for (std::size_t i = 0; i < grid.n_gammas(); ++i) {
        const double g = units::wavenumber_to_angular(grid.gammas_cm1[i]);
        for (std::size_t j = 0; j < grid.n_omegas(); ++j) {
            const double w = units::wavenumber_to_angular(grid.omegas_cm1[j]);
            double acc = 0.0;
            for (double t : times_fs) {
                const double a = std::exp(-g * t) * std::cos(w * t);
                acc += a * a;
            }
            norms[i * grid.n_omegas() + j] = std::sqrt(acc);
        }
    }
    return norms;
}

std::vector<double> dictionary_apply(const AtomGrid& grid,
                                     const std::vector<double>& times_fs,
                                     const std::vector<double>& scales,
                                     std::span<const double> coeffs) {
    if (coeffs.size() != grid.n_atoms() || scales.size() != grid.n_atoms()) {
        throw dimension_error("reference::dictionary_apply: size mismatch");
    }
    std::vector<double> out(times_fs.size(), 0.0);
    for (std::size_t i = 0; i < grid.n_gammas(); ++i) {
        const double g = units::wavenumber_to_angular(grid.gammas_cm1[i]);
        for (std::size_t j = 0; j < grid.n_omegas(); ++j) {
            const std::size_t ij = i * grid.n_omegas() + j;
            const double d = coeffs[ij] * scales[ij];
            if (d == 0.0) continue;
            const double w = units::wavenumber_to_angular(grid.omegas_cm1[j]);
            for (std::size_t k = 0; k < times_fs.size(); ++k) {
                out[k] += d * std::exp(-g * times_fs[k]) * std::cos(w * times_fs[k]);
            }
        }
    }
    return out;
}

std::vector<double> dictionary_apply_adjoint(const AtomGrid& grid,
                                             const std::vector<double>& times_fs,
                                             const std::vector<double>& scales,
                                             std::span<const double> residual) {
    if (residual.size() != times_fs.size() || scales.size() != grid.n_atoms()) {
        throw dimension_error("reference::dictionary_apply_adjoint: size mismatch");
    }
    std::vector<double> out(grid.n_atoms(), 0.0);
    for (std::size_t i = 0; i < grid.n_gammas(); ++i) {
        const double g = units::wavenumber_to_angular(grid.gammas_cm1[i]);
        for (std::size_t j = 0; j < grid.n_omegas(); ++j) {
            const double w = units::wavenumber_to_angular(grid.omegas_cm1[j]);
            double acc = 0.0;
            for (std::size_t k = 0; k < times_fs.size(); ++k) {
                acc += residual[k] * std::exp(-g * times_fs[k]) *
                       std::cos(w * times_fs[k]);
            }
            const std::size_t ij = i * grid.n_omegas() + j;
            out[ij] = scales[ij] * acc;
        }
    }
    return out;
}

void tv_l1_prox(std::span<double> grid, std::size_t n_gammas,
                std::size_t n_omegas, double tv_weight, double l1_weight,
                int inner_iters) {
    if (grid.size() != n_gammas * n_omegas) {
        throw dimension_error("reference::tv_l1_prox: grid size mismatch");
    }
    const std::size_t n = grid.size();
    auto at = [&](const std::vector<double>& v, std::size_t i, std::size_t j) {
        return v[i * n_omegas + j];
    };

    if (tv_weight > 0.0) {
        std::vector<double> z(grid.begin(), grid.end());
        std::vector<double> p1(n, 0.0), p2(n, 0.0), x(n, 0.0);
        const double step = 0.125;  // 1/||div||^2 in 2D
        for (int it = 0; it < inner_iters; ++it) {
            // x = z + div p
            for (std::size_t i = 0; i < n_gammas; ++i) {
                for (std::size_t j = 0; j < n_omegas; ++j) {
                    double d = at(p1, i, j) + at(p2, i, j);
                    if (i > 0) d -= at(p1, i - 1, j);
                    if (j > 0) d -= at(p2, i, j - 1);
                    x[i * n_omegas + j] = z[i * n_omegas + j] + d;
                }
            }
            // p += step * grad x, clipped to [-tv_weight, tv_weight]
            for (std::size_t i = 0; i < n_gammas; ++i) {
                for (std::size_t j = 0; j < n_omegas; ++j) {
                    const std::size_t ij = i * n_omegas + j;
                    const double gx1 =
                        (i + 1 < n_gammas) ? at(x, i + 1, j) - at(x, i, j) : 0.0;
                    const double gx2 =
                        (j + 1 < n_omegas) ? at(x, i, j + 1) - at(x, i, j) : 0.0;
                    p1[ij] = std::clamp(p1[ij] + step * gx1, -tv_weight, tv_weight);
                    p2[ij] = std::clamp(p2[ij] + step * gx2, -tv_weight, tv_weight);
                }
            }
        }
        for (std::size_t i = 0; i < n_gammas; ++i) {
            for (std::size_t j = 0; j < n_omegas; ++j) {
                double d = at(p1, i, j) + at(p2, i, j);
                if (i > 0) d -= at(p1, i - 1, j);
                if (j > 0) d -= at(p2, i, j - 1);
                grid[i * n_omegas + j] = z[i * n_omegas + j] + d;
            }
        }
    }
    if (l1_weight > 0.0) {
        for (std::size_t ij = 0; ij < n; ++ij) {
            const double v = grid[ij];
            const double m = std::abs(v) - l1_weight;
            grid[ij] = m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
        }
    }
}

}  // namespace srbath::reference
