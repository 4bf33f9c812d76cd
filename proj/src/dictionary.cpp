#include "srbath/dictionary.hpp"

#include <algorithm>
#include <cmath>

#include "srbath/errors.hpp"
#include "srbath/parallel.hpp"
#include "srbath/units.hpp"

namespace srbath {

AtomGrid AtomGrid::default_grid() { return make(160.0, 6.0, 2000.0, 2.0); }

AtomGrid AtomGrid::make(double gamma_max_cm1, double gamma_step_cm1,
                        double omega_max_cm1, double omega_step_cm1) {
    if (!(gamma_step_cm1 > 0.0) || !(omega_step_cm1 > 0.0)) {
        throw domain_error("AtomGrid: steps must be positive");
    }
    AtomGrid g;
    // last value <= max; 160 is unreachable at step 6, giving 0..156
    for (double v = 0.0; v <= gamma_max_cm1 + 1e-9; v += gamma_step_cm1) {
        g.gammas_cm1.push_back(v);
    }
    for (double v = 0.0; v <= omega_max_cm1 + 1e-9; v += omega_step_cm1) {
        g.omegas_cm1.push_back(v);
    }
    g.validate();
    return g;
}

void AtomGrid::validate() const {
    if (gammas_cm1.empty() || omegas_cm1.empty()) {
        throw domain_error("AtomGrid: empty axis");
    }
    auto check = [](const std::vector<double>& v, const char* what) {
        if (v.front() < 0.0) {
            throw domain_error(std::string("AtomGrid: negative ") + what);
        }
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (!(v[i] > v[i - 1])) {
                throw domain_error(std::string("AtomGrid: ") + what +
                                   " not strictly increasing");
            }
        }
    };
    check(gammas_cm1, "gamma");
    check(omegas_cm1, "omega");
}

Measurement::Measurement(AtomGrid grid, std::vector<double> times_fs,
                         bool normalize_columns)
    : grid_(std::move(grid)), times_fs_(std::move(times_fs)) {
    grid_.validate();
    if (times_fs_.empty()) throw domain_error("Measurement: empty time grid");

    const std::size_t ng = grid_.n_gammas();
    const std::size_t no = grid_.n_omegas();
    const std::size_t nt = times_fs_.size();

    exp_table_.resize(ng * nt);
    cos_table_.resize(no * nt);

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(ng); ++i) {
        const double g = units::wavenumber_to_angular(grid_.gammas_cm1[i]);
        double* row = exp_table_.data() + static_cast<std::size_t>(i) * nt;
        for (std::size_t k = 0; k < nt; ++k) row[k] = std::exp(-g * times_fs_[k]);
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(no); ++j) {
        const double w = units::wavenumber_to_angular(grid_.omegas_cm1[j]);
        double* row = cos_table_.data() + static_cast<std::size_t>(j) * nt;
        for (std::size_t k = 0; k < nt; ++k) row[k] = std::cos(w * times_fs_[k]);
    }

    scale_.assign(ng * no, 1.0);
    if (normalize_columns) {
#pragma omp parallel for schedule(static)
        for (std::int64_t ij = 0; ij < static_cast<std::int64_t>(ng * no); ++ij) {
            const std::size_t i = static_cast<std::size_t>(ij) / no;
            const std::size_t j = static_cast<std::size_t>(ij) % no;
            const double* e = exp_table_.data() + i * nt;
            const double* c = cos_table_.data() + j * nt;
            double acc = 0.0;
            for (std::size_t k = 0; k < nt; ++k) {
                const double a = e[k] * c[k];
                acc += a * a;
            }
            // t_0 = 0 gives every atom a unit first sample, so acc >= 1 on the
            // lag grid; the guard covers exotic time grids only.
            scale_[static_cast<std::size_t>(ij)] =
                acc > 0.0 ? 1.0 / std::sqrt(acc) : 1.0;
        }
    }
}

void Measurement::apply(std::span<const double> coeffs,
                        std::span<double> out) const {
    const std::size_t ng = grid_.n_gammas();
    const std::size_t no = grid_.n_omegas();
    const std::size_t nt = times_fs_.size();
    if (coeffs.size() != ng * no) {
        throw dimension_error("Measurement::apply: coefficient grid size");
    }
    if (out.size() != nt) {
        throw dimension_error("Measurement::apply: output length");
    }

    // out[k] = sum_i E[i,k] * sum_j (coeffs*scale)[i,j] * CT[j,k];
    // parallel over disjoint time chunks, serial within each -> deterministic.
    const std::int64_t chunk = 256;
    const std::int64_t nchunks =
        (static_cast<std::int64_t>(nt) + chunk - 1) / chunk;

#pragma omp parallel
    {
        std::vector<double> inner(static_cast<std::size_t>(chunk));
#pragma omp for schedule(static)
        for (std::int64_t b = 0; b < nchunks; ++b) {
            const std::size_t k0 = static_cast<std::size_t>(b * chunk);
            const std::size_t k1 = std::min(nt, k0 + static_cast<std::size_t>(chunk));
            const std::size_t len = k1 - k0;
            for (std::size_t k = k0; k < k1; ++k) out[k] = 0.0;
            for (std::size_t i = 0; i < ng; ++i) {
                std::fill(inner.begin(), inner.begin() + static_cast<std::ptrdiff_t>(len), 0.0);
                const double* crow = coeffs.data() + i * no;
                const double* srow = scale_.data() + i * no;
                for (std::size_t j = 0; j < no; ++j) {
                    const double d = crow[j] * srow[j];
                    if (d == 0.0) continue;
                    const double* ct = cos_table_.data() + j * nt + k0;
                    for (std::size_t k = 0; k < len; ++k) inner[k] += d * ct[k];
                }
                const double* e = exp_table_.data() + i * nt + k0;
                for (std::size_t k = 0; k < len; ++k) out[k0 + k] += e[k] * inner[k];
            }
        }
    }
}

void Measurement::apply_adjoint(std::span<const double> residual,
                                std::span<double> out) const {
    const std::size_t ng = grid_.n_gammas();
    const std::size_t no = grid_.n_omegas();
    const std::size_t nt = times_fs_.size();
    if (residual.size() != nt) {
        throw dimension_error("Measurement::apply_adjoint: residual length");
    }
    if (out.size() != ng * no) {
        throw dimension_error("Measurement::apply_adjoint: output grid size");
    }

    // h[i,k] = residual[k] * E[i,k], then out[i,j] = scale_ij <h_i, CT_j>.
    std::vector<double> h(ng * nt);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(ng); ++i) {
        const double* e = exp_table_.data() + static_cast<std::size_t>(i) * nt;
        double* hrow = h.data() + static_cast<std::size_t>(i) * nt;
        for (std::size_t k = 0; k < nt; ++k) hrow[k] = residual[k] * e[k];
    }

#pragma omp parallel for schedule(static)
    for (std::int64_t ij = 0; ij < static_cast<std::int64_t>(ng * no); ++ij) {
        const std::size_t i = static_cast<std::size_t>(ij) / no;
        const std::size_t j = static_cast<std::size_t>(ij) % no;
        const double* hrow = h.data() + i * nt;
        const double* ct = cos_table_.data() + j * nt;
        double acc = 0.0;
        for (std::size_t k = 0; k < nt; ++k) acc += hrow[k] * ct[k];
        out[static_cast<std::size_t>(ij)] = scale_[static_cast<std::size_t>(ij)] * acc;
    }
}

std::vector<double> Measurement::column(std::size_t i, std::size_t j) const {
    const std::size_t nt = times_fs_.size();
    std::vector<double> col(nt);
    const double* e = exp_table_.data() + i * nt;
    const double* c = cos_table_.data() + j * nt;
    const double s = scale(i, j);
    for (std::size_t k = 0; k < nt; ++k) col[k] = s * e[k] * c[k];
    return col;
}

double Measurement::operator_norm_estimate(int max_iters, double tol) const {
    const std::size_t na = n_atoms();
    const std::size_t nt = n_times();
    std::vector<double> v(na), av(nt), atav(na);

    // deterministic, mildly rough start vector
    for (std::size_t ij = 0; ij < na; ++ij) {
        v[ij] = 1.0 + 1e-3 * static_cast<double>((ij * 2654435761ULL) % 7);
    }
    double sigma = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        const double nv =
            std::sqrt(par::norm2_squared(v.data(), static_cast<std::int64_t>(na)));
        if (nv == 0.0) return 0.0;
        for (std::size_t ij = 0; ij < na; ++ij) v[ij] /= nv;
        apply(v, av);
        const double sigma_new =
            std::sqrt(par::norm2_squared(av.data(), static_cast<std::int64_t>(nt)));
        apply_adjoint(av, atav);
        v.swap(atav);
        if (it > 0 && std::abs(sigma_new - sigma) <= tol * sigma_new) {
            return sigma_new;
        }
        sigma = sigma_new;
    }
    return sigma;
}

}  // namespace srbath
