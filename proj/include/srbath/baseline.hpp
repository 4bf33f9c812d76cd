// baseline.hpp -- the Fourier reference method: prefactored cosine transform
// of the gap autocorrelation, evaluated directly at requested frequencies.

#pragma once

#include <limits>
#include <vector>

#include "srbath/timeseries.hpp"

namespace srbath {

// J(omega) tabulated on an explicit frequency grid. Values carry cm^-2 * fs
// units (correlation values times time); the thermal prefactor is
// dimensionless.
struct TabulatedSpectralDensity {
    std::vector<double> frequencies_cm1;  // strictly increasing
    std::vector<double> values;           // J at each grid point
    double temperature_kelvin = 0.0;

    void validate() const;
};

// J(nu_m) = (beta hbar w_m / 2) * dt * [ C_0 + 2 sum_{k>=1} C_k cos(w_m t_k) ]
// -- the symmetric-extension quadrature of the two-sided cosine transform,
// with C(-t) = C(t). Frequencies above pi/dt are rejected.
TabulatedSpectralDensity cosine_transform_sd(const CorrelationSeries& corr,
                                             double temperature_kelvin,
                                             std::vector<double> freq_grid_cm1);

enum class WindowKind { none, hann, exponential };

WindowKind parse_window_kind(const std::string& name);

// Elementwise taper of the retained lags. The exponential window takes a
// decay time in fs (infinity reproduces the input).
CorrelationSeries window(const CorrelationSeries& corr, WindowKind kind,
                         double tau_fs = std::numeric_limits<double>::infinity());

}  // namespace srbath
