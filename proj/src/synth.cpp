#include "srbath/synth.hpp"

#include <algorithm>
#include <cmath>

#include "srbath/errors.hpp"
#include "srbath/units.hpp"

namespace srbath {

namespace rng {

double gaussian(std::uint64_t seed, std::uint64_t counter) noexcept {
    const double u1 = uniform01(seed, 2 * counter);
    const double u2 = uniform01(seed, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(units::two_pi * u2);
}

}  // namespace rng

void SynthSpec::validate() const {
    if (n_samples < 1) throw domain_error("SynthSpec: n_samples must be >= 1");
    if (!(dt_fs > 0.0)) throw domain_error("SynthSpec: dt must be positive");
    if (!(noise_sigma >= 0.0)) {
        throw domain_error("SynthSpec: noise_sigma must be >= 0");
    }
    if (modes_per_atom < 1) {
        throw domain_error("SynthSpec: modes_per_atom must be >= 1");
    }
    for (const auto& a : atoms) {
        if (!(a.gamma_cm1 >= 0.0) || !(a.omega_cm1 >= 0.0) ||
            !std::isfinite(a.amplitude)) {
            throw domain_error("SynthSpec: bad atom");
        }
    }
}

CorrelationSeries synth_correlation(const SynthSpec& spec) {
    spec.validate();
    CorrelationSeries corr;
    corr.dt_fs = spec.dt_fs;
    corr.values_cm2.assign(spec.n_samples, 0.0);

    double c0 = 0.0;
    for (const auto& a : spec.atoms) c0 += a.amplitude;

#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(spec.n_samples);
         ++k) {
        const double t = spec.dt_fs * static_cast<double>(k);
        double v = 0.0;
        for (const auto& a : spec.atoms) {
            const double g = units::wavenumber_to_angular(a.gamma_cm1);
            const double w = units::wavenumber_to_angular(a.omega_cm1);
            v += a.amplitude * std::exp(-g * t) * std::cos(w * t);
        }
        if (spec.noise_sigma > 0.0) {
            v += spec.noise_sigma * c0 *
                 rng::gaussian(spec.seed, static_cast<std::uint64_t>(k));
        }
        corr.values_cm2[static_cast<std::size_t>(k)] = v;
    }
    return corr;
}

GapTrajectory synth_gap_trajectory(const SynthSpec& spec,
                                   std::size_t n_steps) {
    spec.validate();
    if (n_steps < 2) {
        throw domain_error("synth_gap_trajectory: need at least 2 steps");
    }

    // One cosine mode per Lorentzian quantile of each atom:
    //   amplitude^2 / 2 = a / Q per mode, frequency = Omega + gamma tan(pi(F - 1/2))
    // so the ensemble autocovariance is exactly a e^{-gamma|t|} cos(Omega t).
    // gamma = 0 atoms collapse to a single exact mode. Frequencies are
    // jittered inside their quantile bins to avoid a periodic superposition.
    struct Mode {
        double omega, amp, phase;
    };
    std::vector<Mode> modes;
    std::uint64_t counter = 0;
    for (std::size_t m = 0; m < spec.atoms.size(); ++m) {
        const auto& a = spec.atoms[m];
        if (a.amplitude == 0.0) continue;
        if (a.amplitude < 0.0) {
            throw domain_error(
                "synth_gap_trajectory: gap processes need nonnegative atom "
                "amplitudes");
        }
        const double g = units::wavenumber_to_angular(a.gamma_cm1);
        const double w0 = units::wavenumber_to_angular(a.omega_cm1);
        const std::size_t q_count = (g == 0.0) ? 1 : spec.modes_per_atom;
        const double mode_amp = std::sqrt(2.0 * a.amplitude /
                                          static_cast<double>(q_count));
        for (std::size_t q = 0; q < q_count; ++q) {
            const double jitter =
                0.05 + 0.9 * rng::uniform01(spec.seed, counter++);
            const double phase =
                units::two_pi * rng::uniform01(spec.seed, counter++);
            double w = w0;
            if (g > 0.0) {
                const double quantile =
                    (static_cast<double>(q) + jitter) / static_cast<double>(q_count);
                w = w0 + g * std::tan(M_PI * (quantile - 0.5));
            }
            modes.push_back({w, mode_amp, phase});
        }
    }

    GapTrajectory traj;
    traj.dt_fs = spec.dt_fs;
    traj.site_label = "synthetic";
    traj.samples_cm1.assign(n_steps, 0.0);

    double c0 = 0.0;
    for (const auto& a : spec.atoms) c0 += a.amplitude;
    const double noise_scale =
        spec.noise_sigma > 0.0 ? spec.noise_sigma * std::sqrt(c0) : 0.0;
    const std::uint64_t noise_base = 0x6e6f697365ULL;  // offset noise counters

    constexpr std::size_t chunk = 4096;
    const std::size_t nchunks = (n_steps + chunk - 1) / chunk;
    const std::size_t nq = modes.size();

#pragma omp parallel
    {
        std::vector<double> c(nq), s(nq), rc(nq), rs(nq), amp(nq);
#pragma omp for schedule(static)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(nchunks); ++b) {
            const std::size_t i0 = static_cast<std::size_t>(b) * chunk;
            const std::size_t i1 = std::min(n_steps, i0 + chunk);
            const double t0 = spec.dt_fs * static_cast<double>(i0);
            for (std::size_t q = 0; q < nq; ++q) {
                c[q] = std::cos(modes[q].omega * t0 + modes[q].phase);
                s[q] = std::sin(modes[q].omega * t0 + modes[q].phase);
                rc[q] = std::cos(modes[q].omega * spec.dt_fs);
                rs[q] = std::sin(modes[q].omega * spec.dt_fs);
                amp[q] = modes[q].amp;
            }
            for (std::size_t i = i0; i < i1; ++i) {
                double acc = 0.0;
                for (std::size_t q = 0; q < nq; ++q) acc += amp[q] * c[q];
                if (noise_scale > 0.0) {
                    acc += noise_scale *
                           rng::gaussian(spec.seed ^ noise_base,
                                         static_cast<std::uint64_t>(i));
                }
                traj.samples_cm1[i] = acc;
                for (std::size_t q = 0; q < nq; ++q) {
                    const double cn = c[q] * rc[q] - s[q] * rs[q];
                    s[q] = s[q] * rc[q] + c[q] * rs[q];
                    c[q] = cn;
                }
            }
        }
    }
    return traj;
}

}  // namespace srbath
