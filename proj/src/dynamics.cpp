#include "srbath/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "srbath/errors.hpp"
#include "srbath/units.hpp"

namespace srbath {

void ExcitonSystem::validate() const {
    const auto n = hamiltonian_cm1.rows();
    if (n < 2 || hamiltonian_cm1.cols() != n) {
        throw domain_error("ExcitonSystem: need a square Hamiltonian, N >= 2");
    }
    const double scale = hamiltonian_cm1.cwiseAbs().maxCoeff();
    const double asym =
        (hamiltonian_cm1 - hamiltonian_cm1.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * std::max(scale, 1.0)) {
        throw domain_error("ExcitonSystem: Hamiltonian not symmetric");
    }
    if (site_baths.size() != static_cast<std::size_t>(n)) {
        throw domain_error("ExcitonSystem: need exactly one bath per site");
    }
    if (!(temperature_kelvin > 0.0)) {
        throw domain_error("ExcitonSystem: temperature must be positive");
    }
    for (const auto& b : site_baths) b.validate();
}

Eigen::MatrixXcd site_basis_state(int n_sites, int site) {
    if (site < 0 || site >= n_sites) {
        throw domain_error("site_basis_state: site index out of range");
    }
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n_sites, n_sites);
    rho(site, site) = 1.0;
    return rho;
}

namespace {

struct EigenFrame {
    Eigen::VectorXd energies;  // rad/fs, mean diagonal removed, ascending
    Eigen::MatrixXd vectors;   // columns, sign convention applied
    Eigen::MatrixXd omega_ab;  // energies(a) - energies(b)
};

EigenFrame build_frame(const Eigen::MatrixXd& hamiltonian_cm1) {
    const auto n = hamiltonian_cm1.rows();
    Eigen::MatrixXd h = hamiltonian_cm1 * units::wavenumber_to_angular(1.0);
    // removing the mean site energy is a global phase; it keeps the RK4
    // stages well conditioned for Hamiltonians with a large diagonal offset
    const double shift = h.trace() / static_cast<double>(n);
    h.diagonal().array() -= shift;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) {
        throw numeric_error("propagate: eigendecomposition failed");
    }
    EigenFrame f;
    f.energies = es.eigenvalues();  // ascending
    f.vectors = es.eigenvectors();
    for (Eigen::Index c = 0; c < f.vectors.cols(); ++c) {
        Eigen::Index imax = 0;
        f.vectors.col(c).cwiseAbs().maxCoeff(&imax);
        if (f.vectors(imax, c) < 0.0) f.vectors.col(c) = -f.vectors.col(c);
    }
    f.omega_ab.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            f.omega_ab(a, b) = f.energies(a) - f.energies(b);
        }
    }
    return f;
}

// e^{-i lambda tau} outer-product phase matrix P_ab = exp(-i w_ab tau)
Eigen::MatrixXcd phase_matrix(const Eigen::VectorXd& energies, double tau) {
    const auto n = energies.size();
    Eigen::VectorXcd u(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        u(a) = std::polar(1.0, -energies(a) * tau);
    }
    return u * u.adjoint();
}

struct Tcl2Engine {
    EigenFrame frame;
    std::vector<Eigen::MatrixXd> b_site;     // V^T |n><n| V per site
    std::vector<const BathKernel*> kernels;  // cm^-2 units
    double kernel_to_internal = 0.0;         // (2 pi c)^2

    std::vector<Eigen::MatrixXcd> k_acc;  // per-site accumulated integrals

    // Gauss-3 panel of int_{t0}^{t0+h} D_n(tau) exp(-i w_ab tau) dtau,
    // added into k_acc copies supplied by the caller.
    void add_panel(std::vector<Eigen::MatrixXcd>& k, double t0, double h) const {
        static const double gx[3] = {0.5 - std::sqrt(15.0) / 10.0, 0.5,
                                     0.5 + std::sqrt(15.0) / 10.0};
        static const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
        for (int q = 0; q < 3; ++q) {
            const double tau = t0 + h * gx[q];
            const Eigen::MatrixXcd p = phase_matrix(frame.energies, tau);
            for (std::size_t n = 0; n < kernels.size(); ++n) {
                const std::complex<double> d =
                    kernels[n]->eval(tau) * kernel_to_internal;
                k[n] += (h * gw[q] * d) * p;
            }
        }
    }

    // dsigma/dt in the eigenbasis interaction picture
    Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& sigma, double t,
                         const std::vector<Eigen::MatrixXcd>& k) const {
        const auto n = sigma.rows();
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
        const Eigen::MatrixXcd p = phase_matrix(frame.energies, t);
        // rotation to the interaction picture multiplies by conj(P)
        for (std::size_t s = 0; s < kernels.size(); ++s) {
            const Eigen::MatrixXcd lambda_rot =
                p.conjugate().cwiseProduct(b_site[s].cwiseProduct(k[s]));
            const Eigen::MatrixXcd a_rot =
                p.conjugate().cwiseProduct(b_site[s].cast<std::complex<double>>());
            const Eigen::MatrixXcd m =
                lambda_rot * sigma - sigma * lambda_rot.adjoint();
            out.noalias() -= a_rot * m - m * a_rot;
        }
        return out;
    }
};

}  // namespace

DensityTrajectory propagate_with_kernels(const Eigen::MatrixXd& hamiltonian_cm1,
                                         const std::vector<BathKernel>& kernels,
                                         const Eigen::MatrixXcd& rho0,
                                         const PropagateOptions& opts) {
    const auto n = hamiltonian_cm1.rows();
    if (rho0.rows() != n || rho0.cols() != n) {
        throw dimension_error("propagate: rho0 dimension mismatch");
    }
    if (kernels.size() != static_cast<std::size_t>(n)) {
        throw dimension_error("propagate: need one kernel per site");
    }
    if (!(opts.dt_fs > 0.0) || !(opts.t_max_fs > 0.0)) {
        throw domain_error("propagate: dt and t_max must be positive");
    }
    const auto n_steps =
        static_cast<std::size_t>(std::llround(opts.t_max_fs / opts.dt_fs));
    if (std::abs(static_cast<double>(n_steps) * opts.dt_fs - opts.t_max_fs) >
        1e-9 * std::max(1.0, opts.t_max_fs)) {
        throw domain_error("propagate: dt must divide t_max");
    }

    // initial-state checks
    {
        const double herm = (rho0 - rho0.adjoint()).cwiseAbs().maxCoeff();
        if (herm > 1e-10) throw domain_error("propagate: rho0 not Hermitian");
        if (std::abs(rho0.trace().real() - 1.0) > 1e-10 ||
            std::abs(rho0.trace().imag()) > 1e-10) {
            throw domain_error("propagate: rho0 trace must be 1");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0);
        if (es.eigenvalues().minCoeff() < -1e-10) {
            throw domain_error("propagate: rho0 not positive semidefinite");
        }
    }

    Tcl2Engine eng;
    eng.frame = build_frame(hamiltonian_cm1);
    eng.kernel_to_internal = units::wavenumber_to_angular(1.0) *
                             units::wavenumber_to_angular(1.0);
    eng.kernels.reserve(kernels.size());
    for (const auto& k : kernels) {
        if (k.samples().empty()) {
            throw domain_error("propagate: kernel not tabulated");
        }
        if (k.t_max_fs() < opts.t_max_fs * (1.0 - 1e-12)) {
            throw domain_error("propagate: kernel shorter than t_max");
        }
        eng.kernels.push_back(&k);
    }
    eng.b_site.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index s = 0; s < n; ++s) {
        const Eigen::VectorXd row = eng.frame.vectors.row(s);
        eng.b_site.push_back(row * row.transpose());
    }
    eng.k_acc.assign(static_cast<std::size_t>(n),
                     Eigen::MatrixXcd::Zero(n, n));

    const Eigen::MatrixXd& v = eng.frame.vectors;
    Eigen::MatrixXcd sigma = v.transpose() * rho0 * v;  // sigma(0) = rho_E(0)

    DensityTrajectory traj;
    traj.exciton_vectors = v;
    traj.exciton_energies_cm1 =
        eng.frame.energies / units::wavenumber_to_angular(1.0);
    traj.min_eigenvalue = 0.0;
    const std::size_t n_stored = n_steps / static_cast<std::size_t>(
                                               std::max(1, opts.output_stride)) +
                                 1;
    traj.times_fs.reserve(n_stored);
    traj.matrices.reserve(n_stored);

    auto store = [&](double t, const Eigen::MatrixXcd& sig) {
        const Eigen::MatrixXcd p = phase_matrix(eng.frame.energies, t);
        const Eigen::MatrixXcd rho_e = p.cwiseProduct(sig);
        Eigen::MatrixXcd rho = v * rho_e * v.transpose();
        traj.times_fs.push_back(t);
        traj.matrices.push_back(rho);
        traj.max_trace_drift =
            std::max(traj.max_trace_drift, std::abs(rho.trace() - 1.0));
        traj.max_hermiticity_defect =
            std::max(traj.max_hermiticity_defect,
                     (rho - rho.adjoint()).cwiseAbs().maxCoeff());
        if (opts.track_positivity) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
            traj.min_eigenvalue =
                std::min(traj.min_eigenvalue, es.eigenvalues().minCoeff());
        }
    };
    store(0.0, sigma);

    const double h = opts.dt_fs;
    std::vector<Eigen::MatrixXcd> k_half = eng.k_acc;
    std::vector<Eigen::MatrixXcd> k_full = eng.k_acc;

    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t = h * static_cast<double>(step);

        k_half = eng.k_acc;
        eng.add_panel(k_half, t, 0.5 * h);
        k_full = k_half;
        eng.add_panel(k_full, t + 0.5 * h, 0.5 * h);

        const Eigen::MatrixXcd k1 = eng.rhs(sigma, t, eng.k_acc);
        const Eigen::MatrixXcd k2 =
            eng.rhs(sigma + (0.5 * h) * k1, t + 0.5 * h, k_half);
        const Eigen::MatrixXcd k3 =
            eng.rhs(sigma + (0.5 * h) * k2, t + 0.5 * h, k_half);
        const Eigen::MatrixXcd k4 = eng.rhs(sigma + h * k3, t + h, k_full);
        sigma += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        eng.k_acc = k_full;

        const double tr_err = std::abs(sigma.trace() - 1.0);
        if (!std::isfinite(sigma.real().cwiseAbs().maxCoeff()) ||
            tr_err > opts.trace_abort_tol) {
            std::ostringstream msg;
            msg << "propagate: aborted at t = " << (t + h)
                << " fs (trace drift " << tr_err << ")";
            throw numeric_error(msg.str());
        }

        const std::size_t done = step + 1;
        if (done % static_cast<std::size_t>(std::max(1, opts.output_stride)) ==
                0 ||
            done == n_steps) {
            store(h * static_cast<double>(done), sigma);
        }
    }
    return traj;
}

DensityTrajectory propagate(const ExcitonSystem& sys,
                            const Eigen::MatrixXcd& rho0,
                            const PropagateOptions& opts) {
    sys.validate();
    KernelOptions kopts;
    kopts.omega_max_cm1 = opts.kernel_omega_max_cm1;

    // share tabulations between sites with identical bath models
    std::vector<BathKernel> kernels(sys.site_baths.size());
    std::vector<int> share(sys.site_baths.size(), -1);
    auto same_model = [](const DrudeLorentzModel& a, const DrudeLorentzModel& b) {
        if (a.atoms.size() != b.atoms.size()) return false;
        for (std::size_t q = 0; q < a.atoms.size(); ++q) {
            if (a.atoms[q].gamma_cm1 != b.atoms[q].gamma_cm1 ||
                a.atoms[q].omega_cm1 != b.atoms[q].omega_cm1 ||
                a.atoms[q].amplitude != b.atoms[q].amplitude) {
                return false;
            }
        }
        return a.temperature_kelvin == b.temperature_kelvin;
    };
    for (std::size_t s = 0; s < sys.site_baths.size(); ++s) {
        for (std::size_t r = 0; r < s; ++r) {
            if (same_model(sys.site_baths[s], sys.site_baths[r])) {
                share[s] = static_cast<int>(r);
                break;
            }
        }
        if (share[s] < 0) {
            kernels[s] = tabulate_kernel(sys.site_baths[s], opts.t_max_fs,
                                         opts.kernel_dt_fs, kopts);
        }
    }
    for (std::size_t s = 0; s < kernels.size(); ++s) {
        if (share[s] >= 0) kernels[s] = kernels[static_cast<std::size_t>(share[s])];
    }
    return propagate_with_kernels(sys.hamiltonian_cm1, kernels, rho0, opts);
}

std::string Observable::name() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::site_population: os << "pop" << (i + 1); break;
        case Kind::site_coherence: os << "coh" << (i + 1) << "_" << (j + 1); break;
        case Kind::exciton_population: os << "xpop" << (i + 1); break;
        case Kind::exciton_coherence:
            os << "xcoh" << (i + 1) << "_" << (j + 1);
            break;
    }
    return os.str();
}

Observable parse_observable(const std::string& token, int n_sites) {
    auto split = [&](const std::string& s) {
        std::vector<std::string> parts;
        std::string cur;
        for (char ch : s) {
            if (ch == ':') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        parts.push_back(cur);
        return parts;
    };
    const auto parts = split(token);
    auto index = [&](const std::string& s) {
        try {
            const int v = std::stoi(s);
            if (v < 1 || v > n_sites) throw std::out_of_range("index");
            return v - 1;
        } catch (const std::exception&) {
            throw domain_error("observables: bad index in '" + token + "'");
        }
    };
    Observable o;
    if (parts.size() == 2 && parts[0] == "pop") {
        o.kind = Observable::Kind::site_population;
        o.i = index(parts[1]);
    } else if (parts.size() == 3 && parts[0] == "coh") {
        o.kind = Observable::Kind::site_coherence;
        o.i = index(parts[1]);
        o.j = index(parts[2]);
    } else if (parts.size() == 2 && parts[0] == "xpop") {
        o.kind = Observable::Kind::exciton_population;
        o.i = index(parts[1]);
    } else if (parts.size() == 3 && parts[0] == "xcoh") {
        o.kind = Observable::Kind::exciton_coherence;
        o.i = index(parts[1]);
        o.j = index(parts[2]);
    } else {
        throw domain_error("observables: unknown selector '" + token + "'");
    }
    return o;
}

std::vector<std::vector<std::complex<double>>> observables(
    const DensityTrajectory& traj, const std::vector<Observable>& which) {
    std::vector<std::vector<std::complex<double>>> out(which.size());
    for (auto& v : out) v.reserve(traj.size());
    const Eigen::MatrixXd& vmat = traj.exciton_vectors;
    for (std::size_t s = 0; s < traj.size(); ++s) {
        const Eigen::MatrixXcd& rho = traj.matrices[s];
        Eigen::MatrixXcd rho_x;
        bool have_x = false;
        for (std::size_t q = 0; q < which.size(); ++q) {
            const Observable& o = which[q];
            switch (o.kind) {
                case Observable::Kind::site_population:
                    out[q].push_back({rho(o.i, o.i).real(), 0.0});
                    break;
                case Observable::Kind::site_coherence:
                    out[q].push_back(rho(o.i, o.j));
                    break;
                case Observable::Kind::exciton_population:
                case Observable::Kind::exciton_coherence: {
                    if (!have_x) {
                        if (vmat.size() == 0) {
                            throw domain_error(
                                "observables: trajectory lacks an eigenbasis");
                        }
                        rho_x = vmat.transpose() * rho * vmat;
                        have_x = true;
                    }
                    if (o.kind == Observable::Kind::exciton_population) {
                        out[q].push_back({rho_x(o.i, o.i).real(), 0.0});
                    } else {
                        out[q].push_back(rho_x(o.i, o.j));
                    }
                    break;
                }
            }
        }
    }
    return out;
}

}  // namespace srbath
