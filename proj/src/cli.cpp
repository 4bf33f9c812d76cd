#include "srbath/cli.hpp"

#include <CLI11.hpp>
#include <complex>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srbath/baseline.hpp"
#include "srbath/bathmodel.hpp"
#include "srbath/dictionary.hpp"
#include "srbath/dynamics.hpp"
#include "srbath/errors.hpp"
#include "srbath/io.hpp"
#include "srbath/parallel.hpp"
#include "srbath/solver.hpp"
#include "srbath/synth.hpp"
#include "srbath/timeseries.hpp"
#include "srbath/units.hpp"

namespace srbath::cli {

namespace fs = std::filesystem;

namespace {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

struct Context {
    fs::path out_dir = ".";
    int threads = 0;
    LogLevel log_level = LogLevel::info;

    std::vector<fs::path> written;
    io::Manifest manifest;

    void info(const std::string& msg) const {
        if (log_level >= LogLevel::info) std::cerr << msg << "\n";
    }
    void debug(const std::string& msg) const {
        if (log_level >= LogLevel::debug) std::cerr << msg << "\n";
    }

    fs::path out(const std::string& name) {
        fs::create_directories(out_dir);
        fs::path p = out_dir / name;
        written.push_back(p);
        manifest.outputs.push_back(p);
        return p;
    }
    void input(const fs::path& p) { manifest.inputs.push_back(p); }
    void param(const std::string& k, const std::string& v) {
        manifest.parameters[k] = v;
    }
    void param(const std::string& k, double v) {
        manifest.parameters[k] = io::format_double(v);
    }
    void param(const std::string& k, std::int64_t v) {
        manifest.parameters[k] = std::to_string(v);
    }

    void finish(const std::string& command) {
        manifest.command = command;
        fs::create_directories(out_dir);
        io::write_manifest(out_dir / (command + "_manifest.json"), manifest);
    }
    void cleanup_partial() {
        for (const auto& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
};

struct GridFlags {
    double omega_max = 2000.0;
    double omega_step = 2.0;
    double gamma_max = 160.0;
    double gamma_step = 6.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--omega-max", omega_max, "largest grid frequency, cm^-1")
            ->envname("SRBATH_OMEGA_MAX");
        cmd->add_option("--omega-step", omega_step, "frequency grid step, cm^-1")
            ->envname("SRBATH_OMEGA_STEP");
        cmd->add_option("--gamma-max", gamma_max, "largest grid linewidth, cm^-1")
            ->envname("SRBATH_GAMMA_MAX");
        cmd->add_option("--gamma-step", gamma_step, "linewidth grid step, cm^-1")
            ->envname("SRBATH_GAMMA_STEP");
    }
    AtomGrid build() const {
        return AtomGrid::make(gamma_max, gamma_step, omega_max, omega_step);
    }
    void record(Context& ctx) const {
        ctx.param("omega_max", omega_max);
        ctx.param("omega_step", omega_step);
        ctx.param("gamma_max", gamma_max);
        ctx.param("gamma_step", gamma_step);
    }
};

struct SolverFlags {
    SolverConfig cfg;
    double truncate_fraction = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--mu", cfg.mu, "sparsity weight")->envname("SRBATH_MU");
        cmd->add_option("--eta", cfg.eta,
                        "residual tolerance, relative to ||C||_2")
            ->envname("SRBATH_ETA");
        cmd->add_option("--max-iters", cfg.max_iters, "global iteration cap")
            ->envname("SRBATH_MAX_ITERS");
        cmd->add_option("--stall-iters", cfg.stall_iters,
                        "unchanged-solution window declaring convergence")
            ->envname("SRBATH_STALL_ITERS");
        cmd->add_flag("--debias,!--no-debias", cfg.debias,
                      "least-squares amplitude refit on the recovered support");
        cmd->add_option("--debias-eta", cfg.debias_eta,
                        "relative residual target reported by the refit")
            ->envname("SRBATH_DEBIAS_ETA");
        cmd->add_option("--tv-inner-iters", cfg.tv_inner_iters,
                        "dual sweeps inside the TV prox");
        cmd->add_option("--truncate", truncate_fraction,
                        "keep this fraction of lags before solving");
    }
    void record(Context& ctx) const {
        ctx.param("mu", cfg.mu);
        ctx.param("eta", cfg.eta);
        ctx.param("max_iters", std::int64_t{cfg.max_iters});
        ctx.param("stall_iters", std::int64_t{cfg.stall_iters});
        ctx.param("debias", cfg.debias ? "true" : "false");
        ctx.param("debias_eta", cfg.debias_eta);
        ctx.param("truncate", truncate_fraction);
    }
};

std::vector<double> measurement_times(const CorrelationSeries& corr) {
    std::vector<double> t(corr.max_lag());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = corr.lag_time_fs(k);
    return t;
}

SparseSpectrum run_recover(Context& ctx, const CorrelationSeries& corr,
                           const AtomGrid& grid, const SolverConfig& cfg) {
    Measurement meas(grid, measurement_times(corr));
    ctx.debug("measurement: " + std::to_string(meas.n_atoms()) + " atoms x " +
              std::to_string(meas.n_times()) + " samples");
    SparseSpectrum spec = solve(corr, meas, cfg);
    ctx.info("solver: " + std::to_string(spec.atoms.size()) + " atoms, rel residual " +
             io::format_double(spec.residual_rel) +
             (spec.converged_by_residual
                  ? " (residual converged)"
                  : spec.converged_by_stall ? " (stalled)" : " (iteration cap)"));
    if (cfg.debias && !spec.atoms.empty()) {
        spec = debias(spec, corr, meas, cfg);
        ctx.info("debias: " + std::to_string(spec.atoms.size()) +
                 " atoms, rel residual " + io::format_double(spec.residual_rel));
    }
    return spec;
}

std::vector<std::vector<double>> observable_rows(
    const DensityTrajectory& traj, const std::vector<Observable>& obs,
    std::vector<std::string>& columns) {
    columns.clear();
    columns.push_back("time_fs");
    for (const auto& o : obs) {
        const bool complex_valued =
            o.kind == Observable::Kind::site_coherence ||
            o.kind == Observable::Kind::exciton_coherence;
        if (complex_valued) {
            columns.push_back("re_" + o.name());
            columns.push_back("im_" + o.name());
        } else {
            columns.push_back(o.name());
        }
    }
    const auto series = observables(traj, obs);
    std::vector<std::vector<double>> rows(traj.size());
    for (std::size_t s = 0; s < traj.size(); ++s) {
        rows[s].push_back(traj.times_fs[s]);
        for (std::size_t q = 0; q < obs.size(); ++q) {
            const bool complex_valued =
                obs[q].kind == Observable::Kind::site_coherence ||
                obs[q].kind == Observable::Kind::exciton_coherence;
            rows[s].push_back(series[q][s].real());
            if (complex_valued) rows[s].push_back(series[q][s].imag());
        }
    }
    return rows;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{
        "srbath: sparse Drude-Lorentz bath spectral densities from short "
        "energy-gap time series, and TCL-2 exciton dynamics driven by them"};
    app.require_subcommand(1);

    Context ctx;
    std::string log_level_name = "info";
    app.add_option("--out-dir", ctx.out_dir, "directory for outputs")
        ->envname("SRBATH_OUT_DIR");
    app.add_option("--threads", ctx.threads, "OpenMP thread cap (0 = default)")
        ->envname("SRBATH_THREADS");
    app.add_option("--log-level", log_level_name, "quiet|info|debug")
        ->envname("SRBATH_LOG_LEVEL");

    // ---- autocorr ----
    auto* c_auto = app.add_subcommand(
        "autocorr", "unbiased autocorrelation of a gap trajectory");
    struct {
        std::string input;
        double dt_fs = 4.0;
        std::int64_t max_lag = 0;
    } a_auto;
    c_auto->add_option("--input", a_auto.input, "gap trajectory CSV")->required();
    c_auto->add_option("--dt-fs", a_auto.dt_fs, "sampling interval, fs")
        ->envname("SRBATH_DT_FS");
    c_auto->add_option("--max-lag", a_auto.max_lag,
                       "lags to keep (default: half the series)");

    // ---- fft ----
    auto* c_fft = app.add_subcommand(
        "fft", "prefactored cosine transform of a correlation function");
    struct {
        std::string input;
        double temperature = 77.0;
        double truncate_fraction = 1.0;
        std::string window = "none";
        double window_tau = 0.0;
        double omega_max = 2000.0;
        double omega_step = 2.0;
    } a_fft;
    c_fft->add_option("--input", a_fft.input, "correlation CSV")->required();
    c_fft->add_option("--temperature", a_fft.temperature, "bath temperature, K")
        ->envname("SRBATH_TEMPERATURE");
    c_fft->add_option("--truncate", a_fft.truncate_fraction,
                      "keep this fraction of lags first");
    c_fft->add_option("--window", a_fft.window, "none|hann|exponential");
    c_fft->add_option("--window-tau", a_fft.window_tau,
                      "decay time for the exponential window, fs");
    c_fft->add_option("--omega-max", a_fft.omega_max, "largest frequency, cm^-1");
    c_fft->add_option("--omega-step", a_fft.omega_step, "frequency step, cm^-1");

    // ---- recover ----
    auto* c_rec = app.add_subcommand(
        "recover", "TV+L1 super-resolution recovery of Drude-Lorentz atoms");
    struct {
        std::vector<std::string> inputs;
    } a_rec;
    GridFlags rec_grid;
    SolverFlags rec_solver;
    c_rec->add_option("--input", a_rec.inputs, "correlation CSV (repeatable)")
        ->required();
    rec_grid.attach(c_rec);
    rec_solver.attach(c_rec);

    // ---- model ----
    auto* c_model = app.add_subcommand(
        "model", "attach a temperature and gamma floor to recovered atoms");
    struct {
        std::string input;
        double temperature = 77.0;
        double gamma_floor = default_gamma_floor_cm1;
    } a_model;
    c_model->add_option("--input", a_model.input, "atoms JSON")->required();
    c_model->add_option("--temperature", a_model.temperature, "temperature, K")
        ->envname("SRBATH_TEMPERATURE");
    c_model->add_option("--gamma-floor", a_model.gamma_floor,
                        "linewidth assigned to gamma = 0 atoms, cm^-1");

    // ---- kernel ----
    auto* c_kernel = app.add_subcommand(
        "kernel", "finite-temperature bath kernel D(t) of a model");
    struct {
        std::string input;
        double t_max = 1000.0;
        double dt = 1.0;
        double omega_max = 4000.0;
    } a_kernel;
    c_kernel->add_option("--input", a_kernel.input, "model JSON")->required();
    c_kernel->add_option("--t-max", a_kernel.t_max, "largest time, fs");
    c_kernel->add_option("--dt", a_kernel.dt, "sample spacing, fs");
    c_kernel->add_option("--omega-max", a_kernel.omega_max,
                         "integration cutoff, cm^-1");

    // ---- propagate ----
    auto* c_prop = app.add_subcommand(
        "propagate", "TCL-2 dynamics of an N-site system with per-site baths");
    struct {
        std::string hamiltonian;
        std::vector<std::string> models;
        std::vector<std::string> tabulated;
        double temperature = 77.0;
        int init_site = 1;
        std::string init_rho;
        double t_max = 1000.0;
        double dt = 1.0;
        int stride = 1;
        double kernel_dt = 0.1;
        double omega_max = 4000.0;
        std::string observables_list = "pop:1,pop:2,pop:3";
    } a_prop;
    c_prop->add_option("--hamiltonian", a_prop.hamiltonian, "N x N CSV, cm^-1")
        ->required();
    c_prop->add_option("--models", a_prop.models,
                       "model JSON paths: one shared or one per site");
    c_prop->add_option("--tabulated-sd", a_prop.tabulated,
                       "tabulated J CSV paths instead of models");
    c_prop->add_option("--temperature", a_prop.temperature,
                       "temperature for tabulated densities, K")
        ->envname("SRBATH_TEMPERATURE");
    c_prop->add_option("--init-site", a_prop.init_site,
                       "initial site (1-based) for a localized exciton");
    c_prop->add_option("--init-rho", a_prop.init_rho,
                       "initial density matrix CSV (N x N or N x 2N re,im)");
    c_prop->add_option("--t-max", a_prop.t_max, "propagation time, fs");
    c_prop->add_option("--dt", a_prop.dt, "integrator step, fs");
    c_prop->add_option("--stride", a_prop.stride, "store every k-th step");
    c_prop->add_option("--kernel-dt", a_prop.kernel_dt,
                       "bath-kernel tabulation step, fs");
    c_prop->add_option("--omega-max", a_prop.omega_max,
                       "kernel integration cutoff, cm^-1");
    c_prop->add_option("--observables", a_prop.observables_list,
                       "comma list: pop:i, coh:i:j, xpop:i, xcoh:i:j");

    // ---- synth ----
    auto* c_synth = app.add_subcommand(
        "synth", "synthetic correlation functions and gap trajectories");
    struct {
        std::string spec;
        std::string mode = "correlation";
        std::int64_t n_steps = 0;
        std::int64_t seed = -1;
    } a_synth;
    c_synth->add_option("--spec", a_synth.spec, "synth spec JSON")->required();
    c_synth->add_option("--mode", a_synth.mode, "correlation|trajectory");
    c_synth->add_option("--n-steps", a_synth.n_steps,
                        "trajectory length (trajectory mode)");
    c_synth->add_option("--seed", a_synth.seed, "override the spec seed")
        ->envname("SRBATH_SEED");

    // ---- compare ----
    auto* c_cmp = app.add_subcommand(
        "compare",
        "Fourier baseline vs super-resolution on the same correlation");
    struct {
        std::string input;
        double temperature = 77.0;
        double gamma_floor = default_gamma_floor_cm1;
    } a_cmp;
    GridFlags cmp_grid;
    SolverFlags cmp_solver;
    c_cmp->add_option("--input", a_cmp.input, "correlation CSV")->required();
    c_cmp->add_option("--temperature", a_cmp.temperature, "temperature, K")
        ->envname("SRBATH_TEMPERATURE");
    c_cmp->add_option("--gamma-floor", a_cmp.gamma_floor,
                      "linewidth for gamma = 0 atoms, cm^-1");
    cmp_grid.attach(c_cmp);
    cmp_solver.attach(c_cmp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (log_level_name == "quiet") ctx.log_level = LogLevel::quiet;
    else if (log_level_name == "debug") ctx.log_level = LogLevel::debug;
    else ctx.log_level = LogLevel::info;
    par::set_threads(ctx.threads);

    try {
        if (c_auto->parsed()) {
            ctx.input(a_auto.input);
            ctx.param("dt_fs", a_auto.dt_fs);
            const GapTrajectory traj =
                load_trajectory(a_auto.input, a_auto.dt_fs);
            const std::size_t lag =
                a_auto.max_lag > 0 ? static_cast<std::size_t>(a_auto.max_lag)
                                   : traj.size() / 2;
            ctx.param("max_lag", static_cast<std::int64_t>(lag));
            const CorrelationSeries corr = autocorrelation(traj, lag);
            io::write_correlation(ctx.out("autocorr.csv"), corr);
            ctx.finish("autocorr");
        } else if (c_fft->parsed()) {
            ctx.input(a_fft.input);
            ctx.param("temperature", a_fft.temperature);
            ctx.param("truncate", a_fft.truncate_fraction);
            ctx.param("window", a_fft.window);
            CorrelationSeries corr = io::read_correlation(a_fft.input);
            if (a_fft.truncate_fraction < 1.0) {
                corr = truncate(corr, a_fft.truncate_fraction);
            }
            const WindowKind kind = parse_window_kind(a_fft.window);
            if (kind == WindowKind::exponential) {
                corr = window(corr, kind, a_fft.window_tau);
            } else {
                corr = window(corr, kind);
            }
            std::vector<double> freqs;
            for (double nu = 0.0; nu <= a_fft.omega_max + 1e-9;
                 nu += a_fft.omega_step) {
                freqs.push_back(nu);
            }
            const auto sd =
                cosine_transform_sd(corr, a_fft.temperature, std::move(freqs));
            io::write_spectral_density(ctx.out("spectral_density.csv"), sd);
            ctx.finish("fft");
        } else if (c_rec->parsed()) {
            rec_grid.record(ctx);
            rec_solver.record(ctx);
            rec_solver.cfg.validate();
            const AtomGrid grid = rec_grid.build();
            const bool multi = a_rec.inputs.size() > 1;
            for (const auto& in : a_rec.inputs) {
                ctx.input(in);
                CorrelationSeries corr = io::read_correlation(in);
                if (rec_solver.truncate_fraction < 1.0) {
                    corr = truncate(corr, rec_solver.truncate_fraction);
                }
                const SparseSpectrum spec =
                    run_recover(ctx, corr, grid, rec_solver.cfg);
                const std::string name =
                    multi ? "atoms_" + fs::path(in).stem().string() + ".json"
                          : "atoms.json";
                io::write_spectrum(ctx.out(name), spec);
            }
            ctx.finish("recover");
        } else if (c_model->parsed()) {
            ctx.input(a_model.input);
            ctx.param("temperature", a_model.temperature);
            ctx.param("gamma_floor", a_model.gamma_floor);
            const SparseSpectrum spec = io::read_spectrum(a_model.input);
            int floored = 0;
            const DrudeLorentzModel model = DrudeLorentzModel::from_spectrum(
                spec, a_model.temperature, a_model.gamma_floor, &floored);
            if (floored > 0) {
                ctx.info("model: " + std::to_string(floored) +
                         " zero-width atoms mapped to gamma = " +
                         io::format_double(a_model.gamma_floor) + " cm^-1");
            }
            io::write_model(ctx.out("model.json"), model);
            const auto reorg = reorganization_energy(model);
            ctx.info("model: reorganization energy " +
                     io::format_double(reorg.value_cm1) + " cm^-1 (tail bound " +
                     io::format_double(reorg.tail_bound_cm1) + ")");
            ctx.finish("model");
        } else if (c_kernel->parsed()) {
            ctx.input(a_kernel.input);
            ctx.param("t_max", a_kernel.t_max);
            ctx.param("dt", a_kernel.dt);
            ctx.param("omega_max", a_kernel.omega_max);
            const DrudeLorentzModel model = io::read_model(a_kernel.input);
            KernelOptions kopts;
            kopts.omega_max_cm1 = a_kernel.omega_max;
            const BathKernel kern =
                tabulate_kernel(model, a_kernel.t_max, a_kernel.dt, kopts);
            std::vector<std::vector<double>> rows;
            for (std::size_t s = 0; s < kern.samples().size(); ++s) {
                const double t = kern.dt_fs() * static_cast<double>(s);
                rows.push_back({t, kern.samples()[s].real(),
                                kern.samples()[s].imag()});
            }
            io::write_table(ctx.out("kernel.csv"), {"t_fs", "re_D", "im_D"},
                            rows, {"bath kernel, cm^-2 units"});
            ctx.finish("kernel");
        } else if (c_prop->parsed()) {
            ctx.input(a_prop.hamiltonian);
            ctx.param("t_max", a_prop.t_max);
            ctx.param("dt", a_prop.dt);
            ctx.param("temperature", a_prop.temperature);
            ctx.param("observables", a_prop.observables_list);
            const Eigen::MatrixXd h = io::read_matrix_csv(a_prop.hamiltonian);
            const int n = static_cast<int>(h.rows());

            Eigen::MatrixXcd rho0;
            if (!a_prop.init_rho.empty()) {
                ctx.input(a_prop.init_rho);
                rho0 = io::read_density_csv(a_prop.init_rho);
            } else {
                rho0 = site_basis_state(n, a_prop.init_site - 1);
            }

            PropagateOptions popts;
            popts.t_max_fs = a_prop.t_max;
            popts.dt_fs = a_prop.dt;
            popts.output_stride = a_prop.stride;
            popts.kernel_dt_fs = a_prop.kernel_dt;
            popts.kernel_omega_max_cm1 = a_prop.omega_max;

            DensityTrajectory traj;
            if (!a_prop.tabulated.empty()) {
                if (!a_prop.models.empty()) {
                    throw domain_error(
                        "propagate: give either --models or --tabulated-sd");
                }
                std::vector<BathKernel> kernels;
                auto expand = [&](const std::vector<std::string>& list) {
                    std::vector<std::string> out = list;
                    if (out.size() == 1 && n > 1) {
                        out.assign(static_cast<std::size_t>(n), out.front());
                    }
                    if (out.size() != static_cast<std::size_t>(n)) {
                        throw domain_error(
                            "propagate: need one bath per site (or one shared)");
                    }
                    return out;
                };
                for (const auto& p : expand(a_prop.tabulated)) {
                    ctx.input(p);
                    const auto sd =
                        io::read_spectral_density(p, a_prop.temperature);
                    kernels.push_back(
                        tabulate_kernel(sd, a_prop.t_max, a_prop.kernel_dt));
                }
                traj = propagate_with_kernels(h, kernels, rho0, popts);
            } else {
                if (a_prop.models.empty()) {
                    throw domain_error(
                        "propagate: --models or --tabulated-sd required");
                }
                ExcitonSystem sys;
                sys.hamiltonian_cm1 = h;
                sys.temperature_kelvin = a_prop.temperature;
                std::vector<std::string> list = a_prop.models;
                if (list.size() == 1 && n > 1) {
                    list.assign(static_cast<std::size_t>(n), list.front());
                }
                if (list.size() != static_cast<std::size_t>(n)) {
                    throw domain_error(
                        "propagate: need one model per site (or one shared)");
                }
                for (const auto& p : list) {
                    ctx.input(p);
                    sys.site_baths.push_back(io::read_model(p));
                    sys.site_baths.back().temperature_kelvin =
                        a_prop.temperature;
                }
                traj = propagate(sys, rho0, popts);
            }
            ctx.info("propagate: trace drift " +
                     io::format_double(traj.max_trace_drift) +
                     ", min eigenvalue " +
                     io::format_double(traj.min_eigenvalue));

            std::vector<Observable> obs;
            for (const auto& tok : split_list(a_prop.observables_list)) {
                obs.push_back(parse_observable(tok, n));
            }
            std::vector<std::string> columns;
            const auto rows = observable_rows(traj, obs, columns);
            io::write_table(ctx.out("dynamics.csv"), columns, rows);
            ctx.finish("propagate");
        } else if (c_synth->parsed()) {
            ctx.input(a_synth.spec);
            SynthSpec spec = io::read_synth_spec(a_synth.spec);
            if (a_synth.seed >= 0) {
                spec.seed = static_cast<std::uint64_t>(a_synth.seed);
            }
            ctx.param("mode", a_synth.mode);
            ctx.param("seed", static_cast<std::int64_t>(spec.seed));
            if (a_synth.mode == "correlation") {
                const CorrelationSeries corr = synth_correlation(spec);
                io::write_correlation(ctx.out("synth_correlation.csv"), corr);
            } else if (a_synth.mode == "trajectory") {
                const std::size_t steps =
                    a_synth.n_steps > 0
                        ? static_cast<std::size_t>(a_synth.n_steps)
                        : spec.n_samples;
                ctx.param("n_steps", static_cast<std::int64_t>(steps));
                const GapTrajectory traj = synth_gap_trajectory(spec, steps);
                io::write_trajectory(ctx.out("synth_trajectory.csv"), traj);
            } else {
                throw domain_error("synth: mode must be correlation|trajectory");
            }
            ctx.finish("synth");
        } else if (c_cmp->parsed()) {
            ctx.input(a_cmp.input);
            ctx.param("temperature", a_cmp.temperature);
            cmp_grid.record(ctx);
            cmp_solver.record(ctx);
            cmp_solver.cfg.validate();
            CorrelationSeries corr = io::read_correlation(a_cmp.input);
            if (cmp_solver.truncate_fraction < 1.0) {
                corr = truncate(corr, cmp_solver.truncate_fraction);
            }
            const AtomGrid grid = cmp_grid.build();
            const auto sd = cosine_transform_sd(corr, a_cmp.temperature,
                                                grid.omegas_cm1);
            const SparseSpectrum spec =
                run_recover(ctx, corr, grid, cmp_solver.cfg);
            io::write_spectrum(ctx.out("atoms.json"), spec);
            const DrudeLorentzModel model = DrudeLorentzModel::from_spectrum(
                spec, a_cmp.temperature, a_cmp.gamma_floor);
            std::vector<std::vector<double>> rows;
            for (std::size_t m = 0; m < grid.omegas_cm1.size(); ++m) {
                rows.push_back(
                    {grid.omegas_cm1[m], sd.values[m],
                     model.atoms.empty()
                         ? 0.0
                         : evaluate_sd(model, grid.omegas_cm1[m])});
            }
            io::write_table(ctx.out("compare.csv"),
                            {"frequency_cm1", "J_fft", "J_recovered"}, rows);
            ctx.finish("compare");
        }
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        ctx.cleanup_partial();
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        ctx.cleanup_partial();
        return 1;
    }
    return 0;
}

}  // namespace srbath::cli
