#pragma once

#include "delaysync/dde.hpp"
#include "delaysync/sweep.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace delaysync {

/// Shortest decimal representation that round-trips to the same double;
/// locale-independent, '.' decimal separator.
std::string format_double(double v);

/// Writes via a temp file in the same directory plus rename, so readers
/// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// The computation-relevant part of a sweep invocation. This is what gets
/// embedded in every output file; re-running from it reproduces the
/// outputs byte for byte. Worker count and output paths are deliberately
/// excluded: they do not affect the results.
struct SweepRunConfig {
    std::string graph_spec;
    std::string model = "hindmarsh-rose";
    double gamma_min = 0.25, gamma_max = 12.0, gamma_step = 0.25;
    double tau_min = 0.0, tau_max = 6.0, tau_step = 0.05;
    double transient = 300.0, window = 100.0, epsilon = 1e-2;
    double step = 0.0; // 0 = auto: min(tau/4, 0.01)
    int record_stride = 10;
    std::uint64_t seed = 1;
    int num_seeds = 1;
    std::string time_unit = "ms"; // 1 simulation time unit == 1 ms

    SweepGrid grid() const;
    SyncConfig sync() const;
    std::vector<std::pair<std::string, std::string>> as_key_values() const;
};

struct RegionArtifactPaths {
    std::filesystem::path region_csv;
    std::filesystem::path boundary_csv;
    std::filesystem::path summary_json;
};

/// Region CSV (gamma,tau,synchronized,diverged,max_error), boundary CSV
/// (gamma,tau_max) and a JSON summary carrying the spectrum, the empirical
/// optimum, the unimodality score and the full config echo.
void emit_region_artifacts(const RegionMap& region, const LaplacianSpectrum& spectrum,
                           const SweepRunConfig& config, const RegionArtifactPaths& paths);

/// Re-reads what compare_topologies needs from a sweep summary.
TopologyResult load_topology_result(const std::filesystem::path& summary_json);

/// Re-reads the embedded config for round-trip runs.
SweepRunConfig load_config_from_summary(const std::filesystem::path& summary_json);

struct SimulateRunConfig {
    std::string graph_spec;
    std::string model = "hindmarsh-rose";
    double gamma = 0.0;
    double tau = 0.0;
    double t_end = 100.0;
    double step = 0.0; // 0 = auto
    int record_stride = 10;
    std::uint64_t seed = 1;
    std::string time_unit = "ms";
};

/// Trajectory CSV (t,node,zeta1,...,y1,...; nodes are 1-based) plus a JSON
/// metadata sidecar with the config echo, the initial condition and the
/// divergence flag.
void write_trajectory_artifacts(const std::filesystem::path& csv_path,
                                const std::filesystem::path& metadata_path,
                                const Trajectory& traj, int node_count, int internal_dim,
                                int output_dim, const SimulateRunConfig& config,
                                std::span<const double> x0);

/// Two-column CSV with '# key=value' config lines before the header.
void write_curve_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<std::pair<double, double>>& rows,
                     const std::vector<std::pair<std::string, std::string>>& config_lines);

std::string comparison_report_json(const ComparisonReport& report);

} // namespace delaysync
