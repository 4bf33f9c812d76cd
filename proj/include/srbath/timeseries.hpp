// timeseries.hpp -- energy-gap trajectories and their unbiased autocorrelation.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace srbath {

// Uniformly sampled scalar energy-gap series. Values are wavenumbers (cm^-1),
// the sampling interval is femtoseconds.
struct GapTrajectory {
    std::vector<double> samples_cm1;
    double dt_fs = 0.0;
    std::string site_label;

    std::size_t size() const noexcept { return samples_cm1.size(); }
    void validate() const;  // dt > 0, >= 2 samples, finite values
};

// Lag-indexed autocorrelation C_k in cm^-2 on the same time grid.
struct CorrelationSeries {
    std::vector<double> values_cm2;
    double dt_fs = 0.0;

    std::size_t max_lag() const noexcept { return values_cm2.size(); }
    double lag_time_fs(std::size_t k) const noexcept {
        return dt_fs * static_cast<double>(k);
    }
    void validate() const;  // dt > 0, nonempty, finite, C_0 >= 0
};

// Reads one gap value per line; blank lines and lines starting with '#' are
// skipped. Throws parse_error with the failure category.
GapTrajectory load_trajectory(const std::filesystem::path& path, double dt_fs,
                              std::string site_label = "");

// C_k = 1/(N-k) * sum_i (D_i - Dbar)(D_{i+k} - Dbar), k = 0..max_lag-1,
// with Dbar the mean over all N samples. Requires 1 <= max_lag < N.
CorrelationSeries autocorrelation(const GapTrajectory& traj,
                                  std::size_t max_lag);

// Default lag window: half the trajectory length.
CorrelationSeries autocorrelation(const GapTrajectory& traj);

// Keeps the first floor(keep_fraction * max_lag) lags, 0 < keep_fraction <= 1.
CorrelationSeries truncate(const CorrelationSeries& corr, double keep_fraction);

}  // namespace srbath
