#include "srbath/bathmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "srbath/errors.hpp"
#include "srbath/parallel.hpp"
#include "srbath/units.hpp"

namespace srbath {

namespace {

// Atom parameters in internal units: rad/fs widths and frequencies,
// amplitudes kept in cm^-2 so J carries cm^-2 * fs.
struct InternalAtom {
    double gamma, omega, amp;
};

std::vector<InternalAtom> internal_atoms(const DrudeLorentzModel& model) {
    std::vector<InternalAtom> out;
    out.reserve(model.atoms.size());
    for (const auto& a : model.atoms) {
        out.push_back({units::wavenumber_to_angular(a.gamma_cm1),
                       units::wavenumber_to_angular(a.omega_cm1), a.amplitude});
    }
    return out;
}

// J(w) without the thermal prefactor applied yet would not vanish at 0;
// evaluate the full expression directly.
double sd_internal(const std::vector<InternalAtom>& atoms, double beta_fs,
                   double w) {
    double j = 0.0;
    for (const auto& a : atoms) {
        const double dm = w - a.omega;
        const double dp = w + a.omega;
        j += a.amp * a.gamma *
             (1.0 / (a.gamma * a.gamma + dm * dm) +
              1.0 / (a.gamma * a.gamma + dp * dp));
    }
    return 0.5 * beta_fs * w * j;
}

}  // namespace

DrudeLorentzModel DrudeLorentzModel::from_spectrum(
    const SparseSpectrum& spectrum, double temperature_kelvin,
    double gamma_floor_cm1, int* n_floored) {
    if (!(gamma_floor_cm1 > 0.0)) {
        throw domain_error("from_spectrum: gamma floor must be positive");
    }
    DrudeLorentzModel model;
    model.temperature_kelvin = temperature_kelvin;
    model.atoms = spectrum.atoms;
    int floored = 0;
    for (auto& a : model.atoms) {
        if (a.gamma_cm1 <= 0.0) {
            a.gamma_cm1 = gamma_floor_cm1;
            ++floored;
        }
    }
    if (n_floored != nullptr) *n_floored = floored;
    model.validate();
    return model;
}

void DrudeLorentzModel::validate() const {
    if (!(temperature_kelvin > 0.0)) {
        throw domain_error("DrudeLorentzModel: temperature must be positive");
    }
    for (const auto& a : atoms) {
        if (!(a.gamma_cm1 > 0.0)) {
            throw domain_error("DrudeLorentzModel: gamma must be positive");
        }
        if (!(a.omega_cm1 >= 0.0) || !std::isfinite(a.amplitude)) {
            throw domain_error("DrudeLorentzModel: bad atom");
        }
    }
}

double evaluate_sd(const DrudeLorentzModel& model, double omega_cm1) {
    model.validate();
    const double beta_fs = units::thermal_beta_fs(model.temperature_kelvin);
    const auto atoms = internal_atoms(model);
    return sd_internal(atoms, beta_fs, units::wavenumber_to_angular(omega_cm1));
}

// ---------------------------------------------------------------------------
// Panel quadrature over [0, omega_max]. Panels start from resonance-refined
// breakpoints plus an oscillation bound (panel phase <= 3 rad at the largest
// time of interest), then bisect adaptively on the smooth envelopes
// J(w) coth(beta w / 2) and J(w). Gauss-15 nodes per final panel are cached
// together with the envelope values, so kernel evaluation at any t is a
// weighted cosine/sine sum over fixed nodes.

namespace {

// Gauss-Legendre rules generated at startup by Newton iteration on the
// Legendre polynomial; avoids a long literal block.
struct LegendreRule {
    std::vector<double> x, w;  // on [0, 1]
    explicit LegendreRule(int n) : x(n), w(n) {
        for (int i = 0; i < n; ++i) {
            // Chebyshev initial guess on [-1, 1]
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double p0 = 0, p1 = 0;
            for (int it = 0; it < 100; ++it) {
                p0 = 1.0;
                p1 = t;
                for (int k = 2; k <= n; ++k) {
                    const double pk =
                        ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                const double dp = n * (t * p1 - p0) / (t * t - 1.0);
                const double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            p0 = 1.0;
            p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[n - 1 - i] = 0.5 * (t + 1.0);
            w[n - 1 - i] = 1.0 / ((1.0 - t * t) * dp * dp);  // weight/2 on [0,1]
        }
    }
};

const LegendreRule& gauss15() {
    static const LegendreRule rule(15);
    return rule;
}
const LegendreRule& gauss7() {
    static const LegendreRule rule(7);
    return rule;
}

struct QuadNodes {
    std::vector<double> omega;    // node positions, rad/fs
    std::vector<double> w_jcoth;  // weight * J(w) coth(beta w / 2)
    std::vector<double> w_j;      // weight * J(w)
};

// coth(beta w / 2) with the w -> 0 pole handled by the series
// coth(x) ~ 1/x + x/3; J ~ w cancels the pole in the product.
double coth_weight(double beta_fs, double w) {
    const double x = 0.5 * beta_fs * w;
    if (x < 1e-8) return (x > 0.0) ? (1.0 / x + x / 3.0) : 0.0;
    return units::coth(x);
}

template <class EnvF>
QuadNodes build_nodes(EnvF&& envelope, const std::vector<double>& breakpoints,
                      double max_phase_time, double rel_tol) {
    // envelope(w) -> pair {J coth, J}
    struct Panel {
        double a, b;
        double est_c, est_j;  // Gauss-15 estimates of both envelopes
        double err;
    };
    const auto& g15 = gauss15();
    const auto& g7 = gauss7();

    auto measure = [&](double a, double b) {
        Panel p{a, b, 0.0, 0.0, 0.0};
        const double h = b - a;
        double c7 = 0.0, j7 = 0.0;
        for (int q = 0; q < 15; ++q) {
            const auto [fc, fj] = envelope(a + h * g15.x[q]);
            p.est_c += h * g15.w[q] * fc;
            p.est_j += h * g15.w[q] * fj;
        }
        for (int q = 0; q < 7; ++q) {
            const auto [fc, fj] = envelope(a + h * g7.x[q]);
            c7 += h * g7.w[q] * fc;
            j7 += h * g7.w[q] * fj;
        }
        p.err = std::abs(p.est_c - c7) + std::abs(p.est_j - j7);
        return p;
    };

    // initial panels: breakpoints subdivided to the oscillation bound
    const double max_width =
        max_phase_time > 0.0 ? 3.0 / max_phase_time
                             : std::numeric_limits<double>::infinity();
    std::vector<Panel> panels;
    for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
        const double a = breakpoints[s];
        const double b = breakpoints[s + 1];
        const int nsub = std::max(
            1, static_cast<int>(std::ceil((b - a) / max_width)));
        for (int q = 0; q < nsub; ++q) {
            const double pa = a + (b - a) * q / nsub;
            const double pb = a + (b - a) * (q + 1) / nsub;
            panels.push_back(measure(pa, pb));
        }
    }

    // adaptive bisection on the envelope error
    for (int round = 0; round < 4000; ++round) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        double worst_err = -1.0;
        for (std::size_t p = 0; p < panels.size(); ++p) {
            total += std::abs(panels[p].est_c) + std::abs(panels[p].est_j);
            err += panels[p].err;
            if (panels[p].err > worst_err) {
                worst_err = panels[p].err;
                worst = p;
            }
        }
        if (err <= rel_tol * std::max(total, 1e-300)) break;
        const Panel split = panels[worst];
        const double mid = 0.5 * (split.a + split.b);
        panels[worst] = measure(split.a, mid);
        panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1,
                      measure(mid, split.b));
    }

    std::sort(panels.begin(), panels.end(),
              [](const Panel& l, const Panel& r) { return l.a < r.a; });

    QuadNodes nodes;
    nodes.omega.reserve(panels.size() * 15);
    nodes.w_jcoth.reserve(panels.size() * 15);
    nodes.w_j.reserve(panels.size() * 15);
    for (const auto& p : panels) {
        const double h = p.b - p.a;
        for (int q = 0; q < 15; ++q) {
            const double w = p.a + h * g15.x[q];
            const auto [fc, fj] = envelope(w);
            nodes.omega.push_back(w);
            nodes.w_jcoth.push_back(h * g15.w[q] * fc);
            nodes.w_j.push_back(h * g15.w[q] * fj);
        }
    }
    return nodes;
}

std::vector<double> model_breakpoints(const std::vector<InternalAtom>& atoms,
                                      double omega_max) {
    std::vector<double> bp{0.0, omega_max};
    for (const auto& a : atoms) {
        const double lo = std::max(0.0, a.omega - 8.0 * a.gamma);
        const double hi = std::min(omega_max, a.omega + 8.0 * a.gamma);
        if (hi <= lo) continue;
        // resolve the Lorentzian with ~32 panels across the refined region
        const int nres = 32;
        for (int q = 0; q <= nres; ++q) {
            bp.push_back(lo + (hi - lo) * q / nres);
        }
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-300; }),
             bp.end());
    // clamp into range
    std::vector<double> out;
    for (double v : bp) {
        if (v >= 0.0 && v <= omega_max) out.push_back(v);
    }
    return out;
}

QuadNodes model_nodes(const DrudeLorentzModel& model, double omega_max_cm1,
                      double max_time_fs, double rel_tol) {
    const auto atoms = internal_atoms(model);
    const double beta_fs = units::thermal_beta_fs(model.temperature_kelvin);
    const double wmax = units::wavenumber_to_angular(omega_max_cm1);
    auto envelope = [&](double w) -> std::pair<double, double> {
        const double j = sd_internal(atoms, beta_fs, w);
        return {j * coth_weight(beta_fs, w), j};
    };
    return build_nodes(envelope, model_breakpoints(atoms, wmax), max_time_fs,
                       rel_tol);
}

std::complex<double> eval_nodes(const QuadNodes& nodes, double t_fs) {
    const auto n = static_cast<std::int64_t>(nodes.omega.size());
    const double re = par::block_sum(n, [&](std::int64_t q) {
        return nodes.w_jcoth[static_cast<std::size_t>(q)] *
               std::cos(nodes.omega[static_cast<std::size_t>(q)] * t_fs);
    });
    const double im = par::block_sum(n, [&](std::int64_t q) {
        return (t_fs == 0.0)
                   ? 0.0
                   : nodes.w_j[static_cast<std::size_t>(q)] *
                         std::sin(nodes.omega[static_cast<std::size_t>(q)] * t_fs);
    });
    return {re, -im};
}

// Tabulation via per-node rotation recurrences inside fixed sample chunks;
// deterministic for any thread count.
std::vector<std::complex<double>> tabulate_nodes(const QuadNodes& nodes,
                                                 std::size_t n_samples,
                                                 double dt_fs) {
    std::vector<std::complex<double>> out(n_samples, {0.0, 0.0});
    const std::size_t nq = nodes.omega.size();
    if (nq == 0) return out;
    constexpr std::size_t chunk = 128;
    const std::size_t nchunks = (n_samples + chunk - 1) / chunk;

#pragma omp parallel
    {
        std::vector<double> c(nq), s(nq), rc(nq), rs(nq);
#pragma omp for schedule(static)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(nchunks); ++b) {
            const std::size_t s0 = static_cast<std::size_t>(b) * chunk;
            const std::size_t s1 = std::min(n_samples, s0 + chunk);
            const double t0 = dt_fs * static_cast<double>(s0);
            for (std::size_t q = 0; q < nq; ++q) {
                c[q] = std::cos(nodes.omega[q] * t0);
                s[q] = std::sin(nodes.omega[q] * t0);
                rc[q] = std::cos(nodes.omega[q] * dt_fs);
                rs[q] = std::sin(nodes.omega[q] * dt_fs);
            }
            for (std::size_t smp = s0; smp < s1; ++smp) {
                double re = 0.0, im = 0.0;
                for (std::size_t q = 0; q < nq; ++q) {
                    re += nodes.w_jcoth[q] * c[q];
                    im += nodes.w_j[q] * s[q];
                }
                out[smp] = {re, smp == 0 ? 0.0 : -im};
                for (std::size_t q = 0; q < nq; ++q) {
                    const double cn = c[q] * rc[q] - s[q] * rs[q];
                    s[q] = s[q] * rc[q] + c[q] * rs[q];
                    c[q] = cn;
                }
            }
        }
    }
    return out;
}

}  // namespace

ReorganizationResult reorganization_energy(const DrudeLorentzModel& model,
                                           double omega_max_cm1,
                                           double rel_tol) {
    model.validate();
    ReorganizationResult res;
    if (model.atoms.empty()) return res;

    const auto atoms = internal_atoms(model);
    const double beta_fs = units::thermal_beta_fs(model.temperature_kelvin);
    const double wmax = units::wavenumber_to_angular(omega_max_cm1);

    // integrand J(w)/w; finite at 0 (J ~ w), kept explicit for stability
    auto envelope = [&](double w) -> std::pair<double, double> {
        double v = 0.0;
        for (const auto& a : atoms) {
            const double dm = w - a.omega;
            const double dp = w + a.omega;
            v += a.amp * a.gamma *
                 (1.0 / (a.gamma * a.gamma + dm * dm) +
                  1.0 / (a.gamma * a.gamma + dp * dp));
        }
        v *= 0.5 * beta_fs;
        return {v, v};
    };
    const auto nodes =
        build_nodes(envelope, model_breakpoints(atoms, wmax), 0.0, rel_tol);
    double q = 0.0;
    for (double v : nodes.w_j) q += v;

    // cm^-2*fs integral -> cm^-1: (2 pi c)^2 amplitude conversion, / (2 pi c)
    // back to wavenumbers, / pi from the definition.
    const double to_cm1 =
        units::wavenumber_to_angular(1.0) * units::wavenumber_to_angular(1.0) /
        (M_PI * units::wavenumber_to_angular(1.0));
    res.value_cm1 = to_cm1 * q;
    res.achieved_rel_tol = rel_tol;

    // closed-form remainder above omega_max
    double tail = 0.0;
    for (const auto& a : atoms) {
        const double am = std::atan((wmax - a.omega) / a.gamma);
        const double ap = std::atan((wmax + a.omega) / a.gamma);
        tail += a.amp * 0.5 * beta_fs * ((M_PI_2 - am) + (M_PI_2 - ap));
    }
    res.tail_bound_cm1 = to_cm1 * tail;
    return res;
}

BathKernel::BathKernel(std::vector<std::complex<double>> samples, double dt_fs)
    : samples_(std::move(samples)), dt_fs_(dt_fs) {
    if (samples_.size() < 2 || !(dt_fs_ > 0.0)) {
        throw domain_error("BathKernel: need >= 2 samples and dt > 0");
    }
}

std::complex<double> BathKernel::eval(double t_fs) const {
    if (samples_.empty()) return {0.0, 0.0};
    const double tmax = t_max_fs();
    if (t_fs < -1e-12 || t_fs > tmax * (1.0 + 1e-12) + 1e-12) {
        throw domain_error("BathKernel::eval: time outside tabulated range");
    }
    t_fs = std::clamp(t_fs, 0.0, tmax);
    const auto n = static_cast<std::ptrdiff_t>(samples_.size());
    const auto i = std::clamp<std::ptrdiff_t>(
        static_cast<std::ptrdiff_t>(std::floor(t_fs / dt_fs_)), 0, n - 2);
    // Lagrange interpolation on the uniform grid: 4-point cubic where the
    // stencil fits, degrading gracefully for very short tables
    const int order = static_cast<int>(std::min<std::ptrdiff_t>(4, n));
    const std::ptrdiff_t i0 =
        std::clamp<std::ptrdiff_t>(i - 1, 0, n - order);
    const double u = t_fs / dt_fs_ - static_cast<double>(i0);
    std::complex<double> acc{0.0, 0.0};
    for (int m = 0; m < order; ++m) {
        double lm = 1.0;
        for (int l = 0; l < order; ++l) {
            if (l == m) continue;
            lm *= (u - l) / (m - l);
        }
        acc += lm * samples_[static_cast<std::size_t>(i0 + m)];
    }
    return acc;
}

std::complex<double> bath_kernel(const DrudeLorentzModel& model, double t_fs,
                                 const KernelOptions& opts) {
    model.validate();
    if (t_fs < 0.0) throw domain_error("bath_kernel: t must be >= 0");
    if (model.atoms.empty()) return {0.0, 0.0};
    const auto nodes =
        model_nodes(model, opts.omega_max_cm1, t_fs, opts.rel_tol);
    return eval_nodes(nodes, t_fs);
}

double kernel_tail_estimate(const DrudeLorentzModel& model,
                            double omega_max_cm1) {
    // Re D(0) gains ~ sum_a a beta gamma ln 2 per octave of omega_max; the
    // 1/w decay of J coth makes the infinite-cutoff limit diverge, so the
    // cutoff is part of the kernel definition and this reports the next
    // octave's worth.
    model.validate();
    const auto atoms = internal_atoms(model);
    const double beta_fs = units::thermal_beta_fs(model.temperature_kelvin);
    (void)omega_max_cm1;
    double tail = 0.0;
    for (const auto& a : atoms) {
        tail += std::abs(a.amp) * beta_fs * a.gamma * std::log(2.0);
    }
    return tail;
}

BathKernel tabulate_kernel(const DrudeLorentzModel& model, double t_max_fs,
                           double dt_fs, const KernelOptions& opts) {
    model.validate();
    if (!(dt_fs > 0.0) || !(t_max_fs >= dt_fs)) {
        throw domain_error("tabulate_kernel: need dt > 0 and t_max >= dt");
    }
    const auto n_samples =
        static_cast<std::size_t>(std::llround(t_max_fs / dt_fs)) + 1;
    if (model.atoms.empty()) {
        return BathKernel(
            std::vector<std::complex<double>>(n_samples, {0.0, 0.0}), dt_fs);
    }
    const auto nodes =
        model_nodes(model, opts.omega_max_cm1, t_max_fs, opts.rel_tol);
    return BathKernel(tabulate_nodes(nodes, n_samples, dt_fs), dt_fs);
}

BathKernel tabulate_kernel(const TabulatedSpectralDensity& sd, double t_max_fs,
                           double dt_fs) {
    sd.validate();
    if (!(dt_fs > 0.0) || !(t_max_fs >= dt_fs)) {
        throw domain_error("tabulate_kernel: need dt > 0 and t_max >= dt");
    }
    const double beta_fs = units::thermal_beta_fs(sd.temperature_kelvin);

    // piecewise-linear J between tabulated points, zero outside the grid
    std::vector<double> w(sd.frequencies_cm1.size());
    for (std::size_t m = 0; m < w.size(); ++m) {
        w[m] = units::wavenumber_to_angular(sd.frequencies_cm1[m]);
    }
    auto j_lin = [&](double x) -> double {
        if (x >= w.back()) return x == w.back() ? sd.values.back() : 0.0;
        if (x <= w.front()) {
            // extend linearly to J(0) = 0 when the grid starts above 0
            if (x == w.front()) return sd.values.front();
            return w.front() > 0.0 ? sd.values.front() * (x / w.front()) : 0.0;
        }
        const auto it = std::upper_bound(w.begin(), w.end(), x);
        const std::size_t hi = static_cast<std::size_t>(it - w.begin());
        const std::size_t lo = hi - 1;
        const double f = (x - w[lo]) / (w[hi] - w[lo]);
        return sd.values[lo] + f * (sd.values[hi] - sd.values[lo]);
    };
    auto envelope = [&](double x) -> std::pair<double, double> {
        const double j = j_lin(x);
        return {j * coth_weight(beta_fs, x), j};
    };

    std::vector<double> bp;
    if (w.front() > 0.0) bp.push_back(0.0);
    bp.insert(bp.end(), w.begin(), w.end());
    const auto nodes = build_nodes(envelope, bp, t_max_fs, 1e-10);

    const auto n_samples =
        static_cast<std::size_t>(std::llround(t_max_fs / dt_fs)) + 1;
    return BathKernel(tabulate_nodes(nodes, n_samples, dt_fs), dt_fs);
}

}  // namespace srbath
