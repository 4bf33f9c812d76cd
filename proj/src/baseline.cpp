#include "srbath/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "srbath/errors.hpp"
#include "srbath/units.hpp"

namespace srbath {

void TabulatedSpectralDensity::validate() const {
    if (frequencies_cm1.size() != values.size()) {
        throw dimension_error("TabulatedSpectralDensity: grid/value size mismatch");
    }
    if (frequencies_cm1.empty()) {
        throw domain_error("TabulatedSpectralDensity: empty grid");
    }
    for (std::size_t m = 1; m < frequencies_cm1.size(); ++m) {
        if (!(frequencies_cm1[m] > frequencies_cm1[m - 1])) {
            throw domain_error(
                "TabulatedSpectralDensity: grid not strictly increasing");
        }
    }
}

TabulatedSpectralDensity cosine_transform_sd(const CorrelationSeries& corr,
                                             double temperature_kelvin,
                                             std::vector<double> freq_grid_cm1) {
    corr.validate();
    const double beta_fs = units::thermal_beta_fs(temperature_kelvin);
    const double nyquist = units::two_pi / (2.0 * corr.dt_fs);  // pi/dt, rad/fs
    for (double nu : freq_grid_cm1) {
        if (units::wavenumber_to_angular(nu) > nyquist * (1.0 + 1e-12)) {
            throw domain_error(
                "cosine_transform_sd: frequency above the pi/dt Nyquist limit");
        }
    }

    TabulatedSpectralDensity sd;
    sd.temperature_kelvin = temperature_kelvin;
    sd.frequencies_cm1 = std::move(freq_grid_cm1);
    sd.values.assign(sd.frequencies_cm1.size(), 0.0);

    const double* c = corr.values_cm2.data();
    const auto n_lags = static_cast<std::int64_t>(corr.max_lag());
    const double dt = corr.dt_fs;

#pragma omp parallel for schedule(static)
    for (std::int64_t m = 0; m < static_cast<std::int64_t>(sd.values.size());
         ++m) {
        const double w = units::wavenumber_to_angular(sd.frequencies_cm1[m]);
        // symmetric extension C(-t) = C(t): C_0 once, factor 2 for k >= 1
        double acc = c[0];
        const double phase = w * dt;
        // rotation recurrence for cos(w t_k), re-seeded in blocks to cap drift
        double ck = std::cos(phase);
        double sk = std::sin(phase);
        const double cr = ck, sr = sk;
        for (std::int64_t k = 1; k < n_lags; ++k) {
            if ((k & 1023) == 1) {
                ck = std::cos(phase * static_cast<double>(k));
                sk = std::sin(phase * static_cast<double>(k));
            }
            acc += 2.0 * c[k] * ck;
            const double cn = ck * cr - sk * sr;
            sk = sk * cr + ck * sr;
            ck = cn;
        }
        sd.values[m] = 0.5 * beta_fs * w * dt * acc;
    }
    sd.validate();
    return sd;
}

WindowKind parse_window_kind(const std::string& name) {
    if (name == "none") return WindowKind::none;
    if (name == "hann") return WindowKind::hann;
    if (name == "exponential" || name == "exp") return WindowKind::exponential;
    throw domain_error("unknown window kind: " + name);
}

CorrelationSeries window(const CorrelationSeries& corr, WindowKind kind,
                         double tau_fs) {
    corr.validate();
    CorrelationSeries out = corr;
    const std::size_t n = out.max_lag();
    switch (kind) {
        case WindowKind::none:
            break;
        case WindowKind::hann: {
            if (n == 1) break;
            const double denom = static_cast<double>(n - 1);
            for (std::size_t k = 0; k < n; ++k) {
                const double w =
                    0.5 * (1.0 + std::cos(M_PI * static_cast<double>(k) / denom));
                out.values_cm2[k] *= w;
            }
            break;
        }
        case WindowKind::exponential: {
            if (!(tau_fs > 0.0)) {
                throw domain_error("window: exponential tau must be positive");
            }
            if (std::isinf(tau_fs)) break;
            for (std::size_t k = 0; k < n; ++k) {
                out.values_cm2[k] *= std::exp(-out.lag_time_fs(k) / tau_fs);
            }
            break;
        }
    }
    return out;
}

}  // namespace srbath
