#include "srbath/timeseries.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "srbath/errors.hpp"

namespace srbath {

void GapTrajectory::validate() const {
    if (!(dt_fs > 0.0)) throw domain_error("GapTrajectory: dt must be positive");
    if (samples_cm1.size() < 2) {
        throw domain_error("GapTrajectory: need at least 2 samples");
    }
    for (double v : samples_cm1) {
        if (!std::isfinite(v)) {
            throw domain_error("GapTrajectory: non-finite sample");
        }
    }
}

void CorrelationSeries::validate() const {
    if (!(dt_fs > 0.0)) {
        throw domain_error("CorrelationSeries: dt must be positive");
    }
    if (values_cm2.empty()) throw domain_error("CorrelationSeries: empty");
    for (double v : values_cm2) {
        if (!std::isfinite(v)) {
            throw domain_error("CorrelationSeries: non-finite value");
        }
    }
    if (values_cm2.front() < 0.0) {
        throw domain_error("CorrelationSeries: negative zero-lag variance");
    }
}

GapTrajectory load_trajectory(const std::filesystem::path& path, double dt_fs,
                              std::string site_label) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error(parse_error::kind::missing_file,
                          "cannot open trajectory file: " + path.string());
    }
    GapTrajectory traj;
    traj.dt_fs = dt_fs;
    traj.site_label = std::move(site_label);

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip trailing CR from files written on other platforms
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') continue;
        char* end = nullptr;
        const double v = std::strtod(line.c_str() + pos, &end);
        // allow a trailing comment or whitespace, nothing else
        while (end && (*end == ' ' || *end == '\t')) ++end;
        if (end == line.c_str() + pos || (*end != '\0' && *end != '#')) {
            std::ostringstream msg;
            msg << "non-numeric row at line " << lineno << " of "
                << path.string();
            throw parse_error(parse_error::kind::bad_value, msg.str());
        }
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "non-finite value at line " << lineno << " of "
                << path.string();
            throw parse_error(parse_error::kind::bad_value, msg.str());
        }
        traj.samples_cm1.push_back(v);
    }
    if (traj.samples_cm1.size() < 2) {
        throw parse_error(parse_error::kind::too_short,
                          "trajectory has fewer than 2 rows: " + path.string());
    }
    traj.validate();
    return traj;
}

CorrelationSeries autocorrelation(const GapTrajectory& traj,
                                  std::size_t max_lag) {
    traj.validate();
    const std::size_t n = traj.size();
    if (max_lag < 1 || max_lag >= n) {
        throw domain_error("autocorrelation: require 1 <= max_lag < n_samples");
    }
    const double* x = traj.samples_cm1.data();

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x[i];
    mean /= static_cast<double>(n);

    CorrelationSeries corr;
    corr.dt_fs = traj.dt_fs;
    corr.values_cm2.assign(max_lag, 0.0);
    double* c = corr.values_cm2.data();

    // Each lag is an independent serial sum, so the result does not depend on
    // the thread count.
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(max_lag); ++k) {
        const std::size_t nk = n - static_cast<std::size_t>(k);
        double acc = 0.0;
        for (std::size_t i = 0; i < nk; ++i) {
            acc += (x[i] - mean) * (x[i + static_cast<std::size_t>(k)] - mean);
        }
        c[k] = acc / static_cast<double>(nk);
    }
    return corr;
}

CorrelationSeries autocorrelation(const GapTrajectory& traj) {
    traj.validate();
    return autocorrelation(traj, traj.size() / 2);
}

CorrelationSeries truncate(const CorrelationSeries& corr,
                           double keep_fraction) {
    corr.validate();
    if (!(keep_fraction > 0.0) || keep_fraction > 1.0) {
        throw domain_error("truncate: keep_fraction must be in (0, 1]");
    }
    const auto keep = static_cast<std::size_t>(
        std::floor(keep_fraction * static_cast<double>(corr.max_lag())));
    if (keep < 1) {
        throw domain_error("truncate: fraction keeps no lags");
    }
    CorrelationSeries out;
    out.dt_fs = corr.dt_fs;
    out.values_cm2.assign(corr.values_cm2.begin(),
                          corr.values_cm2.begin() + static_cast<std::ptrdiff_t>(keep));
    return out;
}

}  // namespace srbath
