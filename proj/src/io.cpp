#include "srbath/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "srbath/errors.hpp"

namespace srbath::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    // %.17g round-trips every double; trim to shorter forms when exact
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw parse_error(parse_error::kind::missing_file,
                          "cannot open for writing: " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error(parse_error::kind::missing_file,
                          "cannot open: " + path.string());
    }
    return in;
}

bool is_comment_or_blank(const std::string& line) {
    const auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

std::vector<double> split_csv_numbers(const std::string& line,
                                      const std::filesystem::path& path) {
    std::vector<double> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str()) {
            throw parse_error(parse_error::kind::bad_value,
                              "non-numeric cell in " + path.string());
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw parse_error(parse_error::kind::bad_format,
                          "empty row in " + path.string());
    }
    return out;
}

}  // namespace

void write_correlation(const std::filesystem::path& path,
                       const CorrelationSeries& corr) {
    auto out = open_out(path);
    out << "# correlation function\n";
    out << "# dt_fs=" << format_double(corr.dt_fs) << "\n";
    out << "# columns: lag_fs,value_cm2\n";
    for (std::size_t k = 0; k < corr.max_lag(); ++k) {
        out << format_double(corr.lag_time_fs(k)) << ","
            << format_double(corr.values_cm2[k]) << "\n";
    }
}

CorrelationSeries read_correlation(const std::filesystem::path& path) {
    auto in = open_in(path);
    CorrelationSeries corr;
    std::string line;
    double dt_header = 0.0;
    std::vector<double> lags;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_comment_or_blank(line)) {
            const auto pos = line.find("dt_fs=");
            if (pos != std::string::npos) {
                dt_header = std::strtod(line.c_str() + pos + 6, nullptr);
            }
            continue;
        }
        const auto row = split_csv_numbers(line, path);
        if (row.size() != 2) {
            throw parse_error(parse_error::kind::bad_format,
                              "expected lag_fs,value rows in " + path.string());
        }
        lags.push_back(row[0]);
        corr.values_cm2.push_back(row[1]);
    }
    if (corr.values_cm2.size() < 2) {
        throw parse_error(parse_error::kind::too_short,
                          "correlation file too short: " + path.string());
    }
    corr.dt_fs = dt_header > 0.0 ? dt_header : lags[1] - lags[0];
    for (std::size_t k = 1; k < lags.size(); ++k) {
        if (std::abs(lags[k] - lags[k - 1] - corr.dt_fs) >
            1e-6 * std::max(1.0, corr.dt_fs)) {
            throw parse_error(parse_error::kind::bad_format,
                              "non-uniform lag grid in " + path.string());
        }
    }
    corr.validate();
    return corr;
}

void write_trajectory(const std::filesystem::path& path,
                      const GapTrajectory& traj) {
    auto out = open_out(path);
    out << "# energy gap trajectory";
    if (!traj.site_label.empty()) out << " (" << traj.site_label << ")";
    out << "\n# dt_fs=" << format_double(traj.dt_fs) << "\n";
    out << "# one gap per line, cm^-1\n";
    for (double v : traj.samples_cm1) out << format_double(v) << "\n";
}

void write_spectral_density(const std::filesystem::path& path,
                            const TabulatedSpectralDensity& sd) {
    auto out = open_out(path);
    out << "# spectral density, temperature_K="
        << format_double(sd.temperature_kelvin) << "\n";
    out << "frequency_cm1,J\n";
    for (std::size_t m = 0; m < sd.values.size(); ++m) {
        out << format_double(sd.frequencies_cm1[m]) << ","
            << format_double(sd.values[m]) << "\n";
    }
}

TabulatedSpectralDensity read_spectral_density(
    const std::filesystem::path& path, double temperature_kelvin) {
    auto in = open_in(path);
    TabulatedSpectralDensity sd;
    sd.temperature_kelvin = temperature_kelvin;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_comment_or_blank(line)) continue;
        if (!header_seen && line.find("frequency_cm1") != std::string::npos) {
            header_seen = true;
            continue;
        }
        const auto row = split_csv_numbers(line, path);
        if (row.size() < 2) {
            throw parse_error(parse_error::kind::bad_format,
                              "expected frequency,J rows in " + path.string());
        }
        sd.frequencies_cm1.push_back(row[0]);
        sd.values.push_back(row[1]);
    }
    sd.validate();
    return sd;
}

namespace {

json spectrum_to_json(const SparseSpectrum& s) {
    json atoms = json::array();
    for (const auto& a : s.atoms) {
        atoms.push_back({{"gamma_cm1", a.gamma_cm1},
                         {"omega_cm1", a.omega_cm1},
                         {"amplitude", a.amplitude}});
    }
    return json{{"atoms", atoms},
                {"diagnostics",
                 {{"residual_rel", s.residual_rel},
                  {"iterations", s.iterations},
                  {"converged_by_residual", s.converged_by_residual},
                  {"converged_by_stall", s.converged_by_stall},
                  {"hit_iteration_cap", s.hit_iteration_cap},
                  {"debias_applied", s.debias_applied},
                  {"debias_dropped", s.debias_dropped}}}};
}

SparseSpectrum spectrum_from_json(const json& j) {
    SparseSpectrum s;
    for (const auto& a : j.at("atoms")) {
        s.atoms.push_back({a.at("gamma_cm1").get<double>(),
                           a.at("omega_cm1").get<double>(),
                           a.at("amplitude").get<double>()});
    }
    if (j.contains("diagnostics")) {
        const auto& d = j.at("diagnostics");
        s.residual_rel = d.value("residual_rel", 0.0);
        s.iterations = d.value("iterations", 0);
        s.converged_by_residual = d.value("converged_by_residual", false);
        s.converged_by_stall = d.value("converged_by_stall", false);
        s.hit_iteration_cap = d.value("hit_iteration_cap", false);
        s.debias_applied = d.value("debias_applied", false);
        s.debias_dropped = d.value("debias_dropped", 0);
    }
    return s;
}

}  // namespace

void write_spectrum(const std::filesystem::path& path,
                    const SparseSpectrum& spectrum) {
    auto out = open_out(path);
    out << spectrum_to_json(spectrum).dump(2) << "\n";
}

SparseSpectrum read_spectrum(const std::filesystem::path& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
        return spectrum_from_json(j);
    } catch (const json::exception& e) {
        throw parse_error(parse_error::kind::bad_format,
                          "bad spectrum JSON in " + path.string() + ": " + e.what());
    }
}

void write_model(const std::filesystem::path& path,
                 const DrudeLorentzModel& model) {
    json atoms = json::array();
    for (const auto& a : model.atoms) {
        atoms.push_back({{"gamma_cm1", a.gamma_cm1},
                         {"omega_cm1", a.omega_cm1},
                         {"amplitude", a.amplitude}});
    }
    json j{{"atoms", atoms}, {"temperature_K", model.temperature_kelvin}};
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

DrudeLorentzModel read_model(const std::filesystem::path& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
        DrudeLorentzModel m;
        m.temperature_kelvin = j.at("temperature_K").get<double>();
        for (const auto& a : j.at("atoms")) {
            m.atoms.push_back({a.at("gamma_cm1").get<double>(),
                               a.at("omega_cm1").get<double>(),
                               a.at("amplitude").get<double>()});
        }
        m.validate();
        return m;
    } catch (const json::exception& e) {
        throw parse_error(parse_error::kind::bad_format,
                          "bad model JSON in " + path.string() + ": " + e.what());
    }
}

SynthSpec read_synth_spec(const std::filesystem::path& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
        SynthSpec s;
        for (const auto& a : j.at("atoms")) {
            s.atoms.push_back({a.at("gamma_cm1").get<double>(),
                               a.at("omega_cm1").get<double>(),
                               a.at("amplitude").get<double>()});
        }
        s.n_samples = j.at("n_samples").get<std::size_t>();
        s.dt_fs = j.at("dt_fs").get<double>();
        s.noise_sigma = j.value("noise_sigma", 0.0);
        s.seed = j.value("seed", std::uint64_t{0});
        s.modes_per_atom = j.value("modes_per_atom", std::size_t{2048});
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw parse_error(parse_error::kind::bad_format,
                          "bad synth spec JSON in " + path.string() + ": " + e.what());
    }
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_comment_or_blank(line)) continue;
        rows.push_back(split_csv_numbers(line, path));
    }
    if (rows.empty()) {
        throw parse_error(parse_error::kind::too_short,
                          "empty matrix file: " + path.string());
    }
    const std::size_t n = rows.size();
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) {
            throw parse_error(parse_error::kind::bad_format,
                              "ragged matrix rows in " + path.string());
        }
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
        }
    }
    return m;
}

Eigen::MatrixXcd read_density_csv(const std::filesystem::path& path) {
    // N x 2N real CSV: alternating re,im cells per matrix entry, or N x N
    // of plain reals
    const Eigen::MatrixXd raw = read_matrix_csv(path);
    const auto n = raw.rows();
    if (raw.cols() == n) {
        return raw.cast<std::complex<double>>();
    }
    if (raw.cols() == 2 * n) {
        Eigen::MatrixXcd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                m(i, j) = {raw(i, 2 * j), raw(i, 2 * j + 1)};
            }
        }
        return m;
    }
    throw parse_error(parse_error::kind::bad_format,
                      "density matrix must be N x N or N x 2N: " + path.string());
}

void write_table(const std::filesystem::path& path,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows,
                 const std::vector<std::string>& comments) {
    auto out = open_out(path);
    for (const auto& c : comments) out << "# " << c << "\n";
    for (std::size_t q = 0; q < columns.size(); ++q) {
        out << columns[q] << (q + 1 < columns.size() ? "," : "\n");
    }
    for (const auto& r : rows) {
        if (r.size() != columns.size()) {
            throw dimension_error("write_table: row width != column count");
        }
        for (std::size_t q = 0; q < r.size(); ++q) {
            out << format_double(r[q]) << (q + 1 < r.size() ? "," : "\n");
        }
    }
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    return h;
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
    json j;
    j["command"] = m.command;
    {
        char ts[64];
        const std::time_t now = std::time(nullptr);
        std::tm tm_utc{};
        gmtime_r(&now, &tm_utc);
        std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
        j["timestamp"] = ts;  // the one field allowed to differ between runs
    }
    j["parameters"] = json::object();
    for (const auto& [k, v] : m.parameters) j["parameters"][k] = v;
    j["inputs"] = json::object();
    for (const auto& p : m.inputs) {
        char hex[32];
        std::snprintf(hex, sizeof(hex), "fnv1a:%016" PRIx64, fnv1a_file(p));
        j["inputs"][p.string()] = hex;
    }
    j["outputs"] = json::array();
    for (const auto& p : m.outputs) j["outputs"].push_back(p.string());
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

}  // namespace srbath::io
