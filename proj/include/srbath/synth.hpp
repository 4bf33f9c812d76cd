// synth.hpp -- ground-truth generators: damped-cosine correlation functions
// and stationary Gaussian gap processes with a known target autocovariance.
//
// Randomness comes from a counter-based generator (splitmix64 finalizer over
// seed and counter, Box-Muller for normals), so outputs are bit-reproducible
// across platforms and parallel schedules.

#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "srbath/solver.hpp"
#include "srbath/timeseries.hpp"

namespace srbath {

struct SynthSpec {
    std::vector<SparseAtom> atoms;  // amplitudes in C_k units (cm^-2)
    std::size_t n_samples = 0;      // correlation lags to generate
    double dt_fs = 0.0;
    double noise_sigma = 0.0;       // additive white noise, fraction of C_0
    std::uint64_t seed = 0;
    std::size_t modes_per_atom = 2048;  // spectral-synthesis discretization

    void validate() const;
};

// C_k = sum_m a_m exp(-gamma_m t_k) cos(Omega_m t_k) + noise_sigma * C_0 * xi_k
CorrelationSeries synth_correlation(const SynthSpec& spec);

// Stationary Gaussian process whose autocovariance is the atom sum: random
// phase superposition of cosines with frequencies drawn from the exact
// Lorentzian quantiles of each atom (gamma = 0 atoms contribute one exact
// mode). The empirical autocorrelation of a long trajectory converges to the
// target.
GapTrajectory synth_gap_trajectory(const SynthSpec& spec, std::size_t n_steps);

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in (0, 1]; counter-indexed, seed-mixed.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) noexcept {
    const std::uint64_t z = splitmix64(splitmix64(seed) ^ counter);
    return (static_cast<double>(z >> 11) + 1.0) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two counter draws.
double gaussian(std::uint64_t seed, std::uint64_t counter) noexcept;

}  // namespace rng

}  // namespace srbath
