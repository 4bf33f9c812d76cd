// bathmodel.hpp -- closed-form spectral density from recovered atoms, the
// reorganization-energy diagnostic, and the finite-temperature bath kernel
//     D(t) = int_0^wmax J(w) [ coth(hbar w beta / 2) cos(wt) - i sin(wt) ] dw.
//
// Per atom the spectral density is the cosine transform of
// a * exp(-gamma t) cos(Omega t):
//     J(w) = a * (beta hbar w / 2) * gamma * [ 1/(gamma^2 + (w-Omega)^2)
//                                            + 1/(gamma^2 + (w+Omega)^2) ].
// J decays only like 1/w under the thermal prefactor, so the kernel is
// defined on [0, omega_max]; the discarded tail is estimated and reported,
// not silently added.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "srbath/baseline.hpp"
#include "srbath/solver.hpp"

namespace srbath {

// Linewidth assigned to gamma = 0 atoms when building the analytic model;
// keeps the Lorentzian pair integrable while preserving peak weight.
inline constexpr double default_gamma_floor_cm1 = 0.1;

struct DrudeLorentzModel {
    std::vector<SparseAtom> atoms;   // gamma_cm1 > 0 after construction
    double temperature_kelvin = 0.0;

    // Applies the gamma floor to zero-width atoms; returns the count mapped.
    static DrudeLorentzModel from_spectrum(
        const SparseSpectrum& spectrum, double temperature_kelvin,
        double gamma_floor_cm1 = default_gamma_floor_cm1,
        int* n_floored = nullptr);

    bool empty() const noexcept { return atoms.empty(); }
    void validate() const;  // gamma > 0, finite fields, T > 0
};

// J at omega (cm^-1), in the cm^-2 * fs units of the baseline transform.
// Antisymmetric in omega; exactly 0 at omega = 0.
double evaluate_sd(const DrudeLorentzModel& model, double omega_cm1);

struct ReorganizationResult {
    double value_cm1 = 0.0;       // (1/pi) int_0^wmax J(w)/w dw
    double tail_bound_cm1 = 0.0;  // closed-form remainder above omega_max
    double achieved_rel_tol = 0.0;
};

ReorganizationResult reorganization_energy(const DrudeLorentzModel& model,
                                           double omega_max_cm1 = 4000.0,
                                           double rel_tol = 1e-8);

// Cached kernel samples on a uniform time grid with cubic interpolation.
// Values are in cm^-2 (the units of C_k); dynamics converts internally.
class BathKernel {
public:
    BathKernel() = default;
    BathKernel(std::vector<std::complex<double>> samples, double dt_fs);

    std::complex<double> eval(double t_fs) const;  // cubic, [0, t_max]
    double t_max_fs() const noexcept {
        return samples_.empty() ? 0.0
                                : dt_fs_ * static_cast<double>(samples_.size() - 1);
    }
    double dt_fs() const noexcept { return dt_fs_; }
    const std::vector<std::complex<double>>& samples() const noexcept {
        return samples_;
    }

private:
    std::vector<std::complex<double>> samples_;
    double dt_fs_ = 0.0;
};

struct KernelOptions {
    double omega_max_cm1 = 4000.0;  // 2x the default dictionary maximum
    double rel_tol = 1e-10;         // panel refinement target
};

// Single-point evaluation of D(t), t >= 0.
std::complex<double> bath_kernel(const DrudeLorentzModel& model, double t_fs,
                                 const KernelOptions& opts = {});

// Tail of the [omega_max, infinity) remainder of Re D(0), from the 1/w
// asymptote of J coth. Diagnostic only.
double kernel_tail_estimate(const DrudeLorentzModel& model,
                            double omega_max_cm1 = 4000.0);

// Kernel sampled on t = 0, dt, ..., t_max (t_max >= dt).
BathKernel tabulate_kernel(const DrudeLorentzModel& model, double t_max_fs,
                           double dt_fs, const KernelOptions& opts = {});

// Same integral with a piecewise-linear J read off a tabulated spectral
// density -- the Fourier-baseline pathway into the propagator.
BathKernel tabulate_kernel(const TabulatedSpectralDensity& sd, double t_max_fs,
                           double dt_fs);

}  // namespace srbath
