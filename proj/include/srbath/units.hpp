// units.hpp -- physical constants and unit conversions.
//
// Internal convention used throughout the library:
//   time               femtoseconds (fs)
//   angular frequency  rad/fs
//   energy             expressed as angular frequency (hbar = 1)
//   temperature        kelvin
// I/O frequencies and energies are wavenumbers (cm^-1); gap trajectories and
// correlation functions carry cm^-1 / cm^-2 values and are converted at the
// point of use. Every conversion constant lives here and nowhere else.

#pragma once

#include <cmath>
#include <stdexcept>

namespace srbath::units {

// CODATA, fixed to these digits for reproducible output.
inline constexpr double speed_of_light_cm_per_fs = 2.99792458e-5;
inline constexpr double boltzmann_cm1_per_kelvin = 0.69503476;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// nu [cm^-1] -> omega [rad/fs]
constexpr double wavenumber_to_angular(double nu_cm1) noexcept {
    return two_pi * speed_of_light_cm_per_fs * nu_cm1;
}

// omega [rad/fs] -> nu [cm^-1]
constexpr double angular_to_wavenumber(double omega_rad_fs) noexcept {
    return omega_rad_fs / (two_pi * speed_of_light_cm_per_fs);
}

// beta = 1/(k_B T) in inverse wavenumbers (cm). T must be positive.
inline double thermal_beta_cm(double temperature_kelvin) {
    if (!(temperature_kelvin > 0.0)) {
        throw std::domain_error("thermal_beta: temperature must be positive");
    }
    return 1.0 / (boltzmann_cm1_per_kelvin * temperature_kelvin);
}

// hbar * beta in fs, i.e. the thermal time that makes hbar*omega*beta
// dimensionless when omega is in rad/fs.
inline double thermal_beta_fs(double temperature_kelvin) {
    return 1.0 /
        wavenumber_to_angular(boltzmann_cm1_per_kelvin * temperature_kelvin);
}

// coth with the small- and large-argument regimes handled explicitly.
// Intended for x > 0; the pole at 0 is the caller's job (the integrands in
// this library multiply by a spectral density that vanishes linearly).
inline double coth(double x) noexcept {
    if (x > 19.0) return 1.0;  // coth(19) - 1 < 1e-16
    return 1.0 / std::tanh(x);
}

}  // namespace srbath::units
