#include "srbath/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "srbath/errors.hpp"
#include "srbath/parallel.hpp"

namespace srbath {

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

double l1_norm(const std::vector<double>& v) {
    return par::block_sum(static_cast<std::int64_t>(v.size()),
                          [&](std::int64_t i) { return std::abs(v[i]); });
}

// Anisotropic TV with forward differences and replicate boundary.
double tv_norm(const std::vector<double>& v, std::size_t ng, std::size_t no) {
    return par::block_sum(
        static_cast<std::int64_t>(ng * no), [&](std::int64_t idx) {
            const std::size_t i = static_cast<std::size_t>(idx) / no;
            const std::size_t j = static_cast<std::size_t>(idx) % no;
            double t = 0.0;
            if (i + 1 < ng) t += std::abs(v[(i + 1) * no + j] - v[i * no + j]);
            if (j + 1 < no) t += std::abs(v[i * no + j + 1] - v[i * no + j]);
            return t;
        });
}

void soft_threshold(std::span<double> v, double tau) {
    if (tau <= 0.0) return;
#pragma omp parallel for schedule(static)
    for (std::int64_t ij = 0; ij < static_cast<std::int64_t>(v.size()); ++ij) {
        const double x = v[static_cast<std::size_t>(ij)];
        const double m = std::abs(x) - tau;
        v[static_cast<std::size_t>(ij)] = m > 0.0 ? (x > 0.0 ? m : -m) : 0.0;
    }
}

}  // namespace

void SolverConfig::validate() const {
    if (!(mu >= 0.0)) throw domain_error("SolverConfig: mu must be >= 0");
    if (!(eta > 0.0)) throw domain_error("SolverConfig: eta must be positive");
    if (debias && !(debias_eta < eta)) {
        throw domain_error("SolverConfig: debias_eta must be below eta");
    }
    if (stall_iters < 1 || max_iters < 1 || tv_inner_iters < 1 ||
        stage_max_iters < 1) {
        throw domain_error("SolverConfig: iteration counts must be positive");
    }
    if (!(twist_rho > 0.0) || !(twist_rho < 1.0)) {
        throw domain_error("SolverConfig: twist_rho must lie in (0, 1)");
    }
    if (!(continuation_factor > 0.0) || !(continuation_factor < 1.0)) {
        throw domain_error("SolverConfig: continuation_factor must lie in (0, 1)");
    }
    if (!(continuation_start > 0.0)) {
        throw domain_error("SolverConfig: continuation_start must be positive");
    }
    if (!(prune_floor >= 0.0)) {
        throw domain_error("SolverConfig: prune_floor must be >= 0");
    }
}

void tv_l1_prox(std::span<double> grid, std::size_t n_gammas,
                std::size_t n_omegas, double tv_weight, double l1_weight,
                int inner_iters) {
    if (grid.size() != n_gammas * n_omegas) {
        throw dimension_error("tv_l1_prox: grid size mismatch");
    }
    if (!(tv_weight >= 0.0) || !(l1_weight >= 0.0)) {
        throw domain_error("tv_l1_prox: weights must be >= 0");
    }
    const std::size_t n = grid.size();

    if (tv_weight > 0.0) {
        // Dual projection: min_{|p|_inf <= tv_weight} 1/2 || z + div p ||^2,
        // x = z + div p. Step 1/8 bounds the 2D divergence operator norm.
        std::vector<double> z(grid.begin(), grid.end());
        std::vector<double> p1(n, 0.0), p2(n, 0.0), x(n);
        const double step = 0.125;
        for (int it = 0; it < inner_iters; ++it) {
#pragma omp parallel for schedule(static)
            for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(n); ++idx) {
                const std::size_t i = static_cast<std::size_t>(idx) / n_omegas;
                const std::size_t j = static_cast<std::size_t>(idx) % n_omegas;
                double d = p1[idx] + p2[idx];
                if (i > 0) d -= p1[(i - 1) * n_omegas + j];
                if (j > 0) d -= p2[i * n_omegas + j - 1];
                x[static_cast<std::size_t>(idx)] = z[static_cast<std::size_t>(idx)] + d;
            }
#pragma omp parallel for schedule(static)
            for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(n); ++idx) {
                const std::size_t i = static_cast<std::size_t>(idx) / n_omegas;
                const std::size_t j = static_cast<std::size_t>(idx) % n_omegas;
                const double xc = x[static_cast<std::size_t>(idx)];
                const double g1 =
                    (i + 1 < n_gammas) ? x[(i + 1) * n_omegas + j] - xc : 0.0;
                const double g2 =
                    (j + 1 < n_omegas) ? x[i * n_omegas + j + 1] - xc : 0.0;
                p1[idx] = std::clamp(p1[idx] + step * g1, -tv_weight, tv_weight);
                p2[idx] = std::clamp(p2[idx] + step * g2, -tv_weight, tv_weight);
            }
        }
#pragma omp parallel for schedule(static)
        for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(n); ++idx) {
            const std::size_t i = static_cast<std::size_t>(idx) / n_omegas;
            const std::size_t j = static_cast<std::size_t>(idx) % n_omegas;
            double d = p1[idx] + p2[idx];
            if (i > 0) d -= p1[(i - 1) * n_omegas + j];
            if (j > 0) d -= p2[i * n_omegas + j - 1];
            grid[static_cast<std::size_t>(idx)] = z[static_cast<std::size_t>(idx)] + d;
        }
    }
    soft_threshold(grid, l1_weight);
}

namespace {

struct Workspace {
    std::vector<double> x, x_prev, theta, u;
    std::vector<double> ax, ax_prev, atheta, resid;
};

// CG least squares over an explicit column subset, warm-started. Returns the
// fitted coefficients; cols is n_times x m column-major.
std::vector<double> support_ls_cg(const std::vector<std::vector<double>>& cols,
                                  const std::vector<double>& rhs,
                                  std::vector<double> coeffs, double tol,
                                  int max_iters) {
    const std::size_t m = cols.size();
    const std::size_t nt = rhs.size();
    auto apply_cols = [&](const std::vector<double>& v, std::vector<double>& out) {
        out.assign(nt, 0.0);
        for (std::size_t s = 0; s < m; ++s) {
            const double c = v[s];
            if (c == 0.0) continue;
            const double* col = cols[s].data();
            for (std::size_t k = 0; k < nt; ++k) out[k] += c * col[k];
        }
    };
    auto apply_colsT = [&](const std::vector<double>& v, std::vector<double>& out) {
        out.assign(m, 0.0);
        for (std::size_t s = 0; s < m; ++s) {
            const double* col = cols[s].data();
            double acc = 0.0;
            for (std::size_t k = 0; k < nt; ++k) acc += col[k] * v[k];
            out[s] = acc;
        }
    };
    std::vector<double> av, b(m), r(m), p, gp_t, gp(m);
    apply_colsT(rhs, b);
    apply_cols(coeffs, av);
    std::vector<double> tmp(nt);
    for (std::size_t k = 0; k < nt; ++k) tmp[k] = av[k];
    apply_colsT(tmp, r);
    for (std::size_t s = 0; s < m; ++s) r[s] = b[s] - r[s];
    p = r;
    double rs = 0.0;
    for (double v : r) rs += v * v;
    double b_norm = 0.0;
    for (double v : b) b_norm += v * v;
    b_norm = std::sqrt(b_norm);
    const double stop = tol * (b_norm > 0.0 ? b_norm : 1.0);
    for (int it = 0; it < max_iters && std::sqrt(rs) > stop; ++it) {
        apply_cols(p, gp_t);
        apply_colsT(gp_t, gp);
        double denom = 0.0;
        for (std::size_t s = 0; s < m; ++s) denom += p[s] * gp[s];
        if (!(denom > 0.0)) break;
        const double step = rs / denom;
        double rs_new = 0.0;
        for (std::size_t s = 0; s < m; ++s) {
            coeffs[s] += step * p[s];
            r[s] -= step * gp[s];
            rs_new += r[s] * r[s];
        }
        const double beta = rs_new / rs;
        for (std::size_t s = 0; s < m; ++s) p[s] = r[s] + beta * p[s];
        rs = rs_new;
    }
    return coeffs;
}

double objective(double data_half_sq, double tau_tv, double tau_l1_mu,
                 const std::vector<double>& x, std::size_t ng, std::size_t no) {
    return data_half_sq + tau_tv * tv_norm(x, ng, no) + tau_l1_mu * l1_norm(x);
}

double half_residual_sq(const std::vector<double>& ax,
                        const std::vector<double>& c) {
    const double r2 =
        par::block_sum(static_cast<std::int64_t>(ax.size()), [&](std::int64_t k) {
            const double d = ax[static_cast<std::size_t>(k)] - c[static_cast<std::size_t>(k)];
            return d * d;
        });
    return 0.5 * r2;
}

}  // namespace

SparseSpectrum solve(const CorrelationSeries& corr, const Measurement& meas,
                     const SolverConfig& cfg) {
    cfg.validate();
    corr.validate();
    const std::size_t nt = meas.n_times();
    const std::size_t na = meas.n_atoms();
    const std::size_t ng = meas.grid().n_gammas();
    const std::size_t no = meas.grid().n_omegas();
    if (corr.max_lag() != nt) {
        throw dimension_error("solve: correlation length != measurement grid");
    }
    if (std::abs(meas.times_fs().back() -
                 corr.lag_time_fs(corr.max_lag() - 1)) > 1e-9) {
        throw dimension_error("solve: time grids disagree");
    }

    SparseSpectrum out;
    const std::vector<double>& c = corr.values_cm2;
    const double c_norm =
        std::sqrt(par::norm2_squared(c.data(), static_cast<std::int64_t>(nt)));
    if (c_norm == 0.0) {
        out.converged_by_residual = true;
        return out;
    }

    Workspace w;
    w.x.assign(na, 0.0);
    w.x_prev = w.x;
    w.theta.resize(na);
    w.u.resize(na);
    w.ax.assign(nt, 0.0);
    w.ax_prev = w.ax;
    w.atheta.resize(nt);
    w.resid.resize(nt);

    // tau_0 from the back-projected data; kappa from the operator norm.
    std::vector<double> atc(na);
    meas.apply_adjoint(c, atc);
    double atc_inf = 0.0;
    for (double v : atc) atc_inf = std::max(atc_inf, std::abs(v));
    const double sigma = meas.operator_norm_estimate();
    const double kappa = 1.02 * sigma * sigma;  // padded Lipschitz bound

    const double rho = cfg.twist_rho;
    const double alpha = 2.0 / (1.0 + std::sqrt(1.0 - rho * rho));
    const double xi_min = ((1.0 - rho) / (1.0 + rho)) * ((1.0 - rho) / (1.0 + rho));
    const double beta_w = 2.0 * alpha / (1.0 + xi_min);

    double tau = cfg.continuation_start * atc_inf;
    const double tau_floor = tau * 1e-15;
    bool at_final_stage = false;

    double rel_resid = 1.0;  // x = 0
    double half_sq = 0.5 * c_norm * c_norm;
    double obj = objective(half_sq, tau, tau * cfg.mu, w.x, ng, no);

    int iters = 0;
    int stall_count = 0;
    int stage_iter = 0;
    bool have_prev = false;
    int twist_taken = 0;
    const bool trace = std::getenv("SRBATH_SOLVER_TRACE") != nullptr;

    // objective history for the stage-advance plateau test
    constexpr int plateau_window = 10;
    std::vector<double> obj_hist;
    obj_hist.reserve(static_cast<std::size_t>(cfg.stage_max_iters) + 1);

    while (iters < cfg.max_iters) {
        ++iters;
        ++stage_iter;

        // gradient step u = x - (1/kappa) A^T (A x - C)
        for (std::size_t k = 0; k < nt; ++k) w.resid[k] = w.ax[k] - c[k];
        meas.apply_adjoint(w.resid, w.u);
#pragma omp parallel for schedule(static)
        for (std::int64_t ij = 0; ij < static_cast<std::int64_t>(na); ++ij) {
            w.u[static_cast<std::size_t>(ij)] =
                w.x[static_cast<std::size_t>(ij)] -
                w.u[static_cast<std::size_t>(ij)] / kappa;
        }
        w.theta = w.u;
        tv_l1_prox(w.theta, ng, no, tau / kappa, tau * cfg.mu / kappa,
                   cfg.tv_inner_iters);
        meas.apply(w.theta, w.atheta);
        const double theta_half_sq = half_residual_sq(w.atheta, c);
        const double theta_obj =
            objective(theta_half_sq, tau, tau * cfg.mu, w.theta, ng, no);

        std::vector<double>* next = nullptr;
        std::vector<double>* next_ax = nullptr;
        double next_obj = 0.0, next_half_sq = 0.0;

        if (have_prev) {
            // two-step candidate
            std::vector<double> cand(na), cand_ax(nt);
#pragma omp parallel for schedule(static)
            for (std::int64_t ij = 0; ij < static_cast<std::int64_t>(na); ++ij) {
                cand[static_cast<std::size_t>(ij)] =
                    (1.0 - alpha) * w.x_prev[static_cast<std::size_t>(ij)] +
                    (alpha - beta_w) * w.x[static_cast<std::size_t>(ij)] +
                    beta_w * w.theta[static_cast<std::size_t>(ij)];
            }
            for (std::size_t k = 0; k < nt; ++k) {
                cand_ax[k] = (1.0 - alpha) * w.ax_prev[k] +
                             (alpha - beta_w) * w.ax[k] + beta_w * w.atheta[k];
            }
            const double cand_half_sq = half_residual_sq(cand_ax, c);
            const double cand_obj =
                objective(cand_half_sq, tau, tau * cfg.mu, cand, ng, no);
            if (cand_obj <= obj) {
                w.u.swap(cand);  // reuse u as storage for the accepted iterate
                w.resid.swap(cand_ax);
                next = &w.u;
                next_ax = &w.resid;
                next_obj = cand_obj;
                next_half_sq = cand_half_sq;
                ++twist_taken;
            }
        }
        if (next == nullptr) {
            // monotone fallback: plain IST step (guaranteed descent)
            next = &w.theta;
            next_ax = &w.atheta;
            next_obj = theta_obj;
            next_half_sq = theta_half_sq;
        }

        if (!std::isfinite(next_obj)) {
            throw numeric_error("solve: non-finite objective (divergent step)");
        }

        const double change = sup_diff(*next, w.x);

        w.x_prev.swap(w.x);
        w.ax_prev.swap(w.ax);
        w.x = *next;
        w.ax = *next_ax;
        obj = next_obj;
        half_sq = next_half_sq;
        have_prev = true;

        rel_resid = std::sqrt(2.0 * half_sq) / c_norm;
        if (trace && iters % 50 == 0) {
            int active = 0;
            for (double v : w.x) active += v != 0.0;
            std::fprintf(stderr,
                         "[solve] it=%d tau=%.3e rel=%.3e obj=%.6e "
                         "twist=%d/%d active=%d\n",
                         iters, tau, rel_resid, obj, twist_taken, iters, active);
        }
        if (rel_resid < cfg.eta) {
            out.converged_by_residual = true;
            break;
        }

        stall_count = (change < cfg.stall_tol) ? stall_count + 1 : 0;
        if (stall_count >= cfg.stall_iters) {
            out.converged_by_stall = true;
            break;
        }

        // continuation: halve tau once this stage's objective has flattened
        obj_hist.push_back(obj);
        bool advance = stage_iter >= cfg.stage_max_iters;
        if (!advance && stage_iter >= 2 * plateau_window) {
            const double past =
                obj_hist[obj_hist.size() - 1 - plateau_window];
            advance = past - obj <= 1e-4 * std::abs(obj);
        }
        if (!at_final_stage && advance) {
            tau *= cfg.continuation_factor;
            if (tau < tau_floor) {
                tau = tau_floor;
                at_final_stage = true;
            }
            // restart the stage on the significant support: background dust
            // from the TV smoothing is cheap to re-add but expensive to
            // remove by gradient steps, so each stage begins without it
            double x_inf = 0.0;
            for (double v : w.x) x_inf = std::max(x_inf, std::abs(v));
            const double floor = 1e-2 * x_inf;
            for (auto& v : w.x) {
                if (std::abs(v) < floor) v = 0.0;
            }

            // subspace acceleration: least squares on the surviving support,
            // kept only when it does not raise the new stage's objective
            std::vector<std::size_t> support;
            for (std::size_t ij = 0; ij < na; ++ij) {
                if (w.x[ij] != 0.0) support.push_back(ij);
            }
            if (!support.empty() && support.size() <= 1500) {
                std::vector<std::vector<double>> cols(support.size());
                std::vector<double> coeffs(support.size());
                for (std::size_t s = 0; s < support.size(); ++s) {
                    cols[s] = meas.column(support[s] / no, support[s] % no);
                    coeffs[s] = w.x[support[s]];
                }
                const auto polished = support_ls_cg(
                    cols, c, coeffs, 1e-12,
                    std::min<int>(3000, 10 * static_cast<int>(support.size())));
                std::vector<double> x_pol = w.x;
                for (std::size_t s = 0; s < support.size(); ++s) {
                    x_pol[support[s]] = polished[s];
                }
                std::vector<double> ax_pol(nt);
                meas.apply(x_pol, ax_pol);
                const double pol_half_sq = half_residual_sq(ax_pol, c);
                const double cur_half_sq = [&] {
                    meas.apply(w.x, w.ax);
                    return half_residual_sq(w.ax, c);
                }();
                const double obj_cur =
                    objective(cur_half_sq, tau, tau * cfg.mu, w.x, ng, no);
                const double obj_pol =
                    objective(pol_half_sq, tau, tau * cfg.mu, x_pol, ng, no);
                if (obj_pol <= obj_cur) {
                    w.x.swap(x_pol);
                    w.ax.swap(ax_pol);
                }
            } else {
                meas.apply(w.x, w.ax);
            }

            w.x_prev = w.x;
            w.ax_prev = w.ax;
            have_prev = false;
            half_sq = half_residual_sq(w.ax, c);
            rel_resid = std::sqrt(2.0 * half_sq) / c_norm;
            if (rel_resid < cfg.eta) {
                out.converged_by_residual = true;
                break;
            }
            stage_iter = 0;
            obj_hist.clear();
            obj = objective(half_sq, tau, tau * cfg.mu, w.x, ng, no);
        }
    }
    out.iterations = iters;
    out.hit_iteration_cap =
        !out.converged_by_residual && !out.converged_by_stall;
    out.residual_rel = rel_resid;

    // un-scale and prune
    const auto& gammas = meas.grid().gammas_cm1;
    const auto& omegas = meas.grid().omegas_cm1;
    for (std::size_t i = 0; i < ng; ++i) {
        for (std::size_t j = 0; j < no; ++j) {
            const double amp = w.x[i * no + j] * meas.scale(i, j);
            if (std::abs(amp) > cfg.prune_floor) {
                out.atoms.push_back({gammas[i], omegas[j], amp});
            }
        }
    }
    return out;
}

namespace {

// Locates a grid index whose value matches to within a relative slack.
std::size_t grid_index(const std::vector<double>& axis, double value,
                       const char* what) {
    const auto it = std::lower_bound(axis.begin(), axis.end(), value - 1e-9);
    if (it != axis.end() && std::abs(*it - value) <= 1e-9 * (1.0 + std::abs(value))) {
        return static_cast<std::size_t>(it - axis.begin());
    }
    throw domain_error(std::string("debias: atom ") + what +
                       " not on the measurement grid");
}

}  // namespace

SparseSpectrum debias(const SparseSpectrum& spectrum,
                      const CorrelationSeries& corr, const Measurement& meas,
                      const SolverConfig& cfg) {
    if (spectrum.atoms.empty()) {
        throw domain_error("debias: empty support");
    }
    corr.validate();
    const std::size_t nt = meas.n_times();
    if (corr.max_lag() != nt) {
        throw dimension_error("debias: correlation length != measurement grid");
    }
    const std::vector<double>& c = corr.values_cm2;
    const double c_norm =
        std::sqrt(par::norm2_squared(c.data(), static_cast<std::int64_t>(nt)));

    struct SupportAtom {
        std::size_t i, j;
        double scale;
        double coeff;  // scaled coordinates
    };
    std::vector<SupportAtom> support;
    support.reserve(spectrum.atoms.size());
    for (const auto& a : spectrum.atoms) {
        const std::size_t i = grid_index(meas.grid().gammas_cm1, a.gamma_cm1, "gamma");
        const std::size_t j = grid_index(meas.grid().omegas_cm1, a.omega_cm1, "omega");
        const double s = meas.scale(i, j);
        support.push_back({i, j, s, a.amplitude / s});
    }

    SparseSpectrum out = spectrum;
    out.debias_applied = true;
    out.debias_dropped = 0;

    // exactly dependent atoms (machine-level Gram eigenvalues) are dropped
    // by amplitude before fitting
    while (support.size() > 1) {
        const std::size_t k = support.size();
        Eigen::MatrixXd gram(static_cast<Eigen::Index>(k),
                             static_cast<Eigen::Index>(k));
        std::vector<std::vector<double>> cols(k);
        for (std::size_t s = 0; s < k; ++s) {
            cols[s] = meas.column(support[s].i, support[s].j);
        }
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b2 = a; b2 < k; ++b2) {
                double acc = 0.0;
                for (std::size_t t = 0; t < nt; ++t) {
                    acc += cols[a][t] * cols[b2][t];
                }
                gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b2)) = acc;
                gram(static_cast<Eigen::Index>(b2), static_cast<Eigen::Index>(a)) = acc;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        if (es.eigenvalues().minCoeff() >=
            1e-14 * es.eigenvalues().maxCoeff()) {
            break;
        }
        std::size_t drop = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < k; ++s) {
            const double amp = std::abs(support[s].coeff * support[s].scale);
            if (amp < best) {
                best = amp;
                drop = s;
            }
        }
        support.erase(support.begin() + static_cast<std::ptrdiff_t>(drop));
        ++out.debias_dropped;
    }

    auto fit = [&](const std::vector<SupportAtom>& atoms_in,
                   std::vector<double>& coeffs_out) {
        std::vector<std::vector<double>> cols(atoms_in.size());
        std::vector<double> warm(atoms_in.size());
        for (std::size_t s = 0; s < atoms_in.size(); ++s) {
            cols[s] = meas.column(atoms_in[s].i, atoms_in[s].j);
            warm[s] = atoms_in[s].coeff;
        }
        coeffs_out = support_ls_cg(
            cols, c, std::move(warm), 1e-12,
            10 * static_cast<int>(atoms_in.size()));
        std::vector<double> fitv(nt, 0.0);
        for (std::size_t s = 0; s < atoms_in.size(); ++s) {
            for (std::size_t t = 0; t < nt; ++t) {
                fitv[t] += coeffs_out[s] * cols[s][t];
            }
        }
        double r2 = 0.0;
        for (std::size_t t = 0; t < nt; ++t) {
            const double d = fitv[t] - c[t];
            r2 += d * d;
        }
        return c_norm > 0.0 ? std::sqrt(r2) / c_norm : 0.0;
    };

    std::vector<double> coeffs;
    double resid = fit(support, coeffs);
    for (std::size_t s = 0; s < support.size(); ++s) {
        support[s].coeff = coeffs[s];
    }

    // consolidate: drop atoms whose fitted contribution is negligible, as
    // long as the refit does not degrade the residual
    for (;;) {
        double amp_max = 0.0;
        for (const auto& s : support) {
            amp_max = std::max(amp_max, std::abs(s.coeff * s.scale));
        }
        std::vector<SupportAtom> trimmed;
        for (const auto& s : support) {
            const double amp = std::abs(s.coeff * s.scale);
            if (amp >= 1e-3 * amp_max && amp > cfg.prune_floor) {
                trimmed.push_back(s);
            }
        }
        if (trimmed.size() == support.size() || trimmed.empty()) break;
        std::vector<double> trimmed_coeffs;
        const double trimmed_resid = fit(trimmed, trimmed_coeffs);
        if (trimmed_resid > resid * (1.0 + 1e-9) + 1e-300) break;
        out.debias_dropped +=
            static_cast<int>(support.size() - trimmed.size());
        for (std::size_t s = 0; s < trimmed.size(); ++s) {
            trimmed[s].coeff = trimmed_coeffs[s];
        }
        support.swap(trimmed);
        resid = trimmed_resid;
    }

    out.residual_rel = resid;
    out.atoms.clear();
    for (const auto& s : support) {
        const double amp = s.coeff * s.scale;
        if (std::abs(amp) > cfg.prune_floor) {
            out.atoms.push_back({meas.grid().gammas_cm1[s.i],
                                 meas.grid().omegas_cm1[s.j], amp});
        }
    }
    return out;
}

}  // namespace srbath
