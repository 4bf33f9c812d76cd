// io.hpp -- CSV/JSON readers and writers for the pipeline's file formats,
// plus the run manifest.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srbath/baseline.hpp"
#include "srbath/bathmodel.hpp"
#include "srbath/solver.hpp"
#include "srbath/synth.hpp"
#include "srbath/timeseries.hpp"

namespace srbath::io {

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

// --- correlation series -----------------------------------------------------
// Format: '#'-comment header carrying dt, then "lag_fs,value" rows.
void write_correlation(const std::filesystem::path& path,
                       const CorrelationSeries& corr);
CorrelationSeries read_correlation(const std::filesystem::path& path);

// --- gap trajectories (one value per line, '#' comments) --------------------
void write_trajectory(const std::filesystem::path& path,
                      const GapTrajectory& traj);

// --- tabulated spectral densities: frequency_cm1,J --------------------------
void write_spectral_density(const std::filesystem::path& path,
                            const TabulatedSpectralDensity& sd);
TabulatedSpectralDensity read_spectral_density(const std::filesystem::path& path,
                                               double temperature_kelvin);

// --- sparse atom lists / bath models (JSON) ---------------------------------
void write_spectrum(const std::filesystem::path& path,
                    const SparseSpectrum& spectrum);
SparseSpectrum read_spectrum(const std::filesystem::path& path);

void write_model(const std::filesystem::path& path,
                 const DrudeLorentzModel& model);
DrudeLorentzModel read_model(const std::filesystem::path& path);

// --- synth specs (JSON) ------------------------------------------------------
SynthSpec read_synth_spec(const std::filesystem::path& path);

// --- dense matrices (CSV rows of comma-separated values) --------------------
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);
Eigen::MatrixXcd read_density_csv(const std::filesystem::path& path);

// --- generic numeric table with a header line -------------------------------
void write_table(const std::filesystem::path& path,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows,
                 const std::vector<std::string>& comments = {});

// --- run manifest ------------------------------------------------------------
// FNV-1a over the file bytes; cheap content fingerprint for manifests.
std::uint64_t fnv1a_file(const std::filesystem::path& path);

struct Manifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::vector<std::filesystem::path> inputs;
    std::vector<std::filesystem::path> outputs;
};

void write_manifest(const std::filesystem::path& path, const Manifest& m);

}  // namespace srbath::io
