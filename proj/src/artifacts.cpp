#include "delaysync/artifacts.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace delaysync {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("rename failed for " + path.string() + ": " + ec.message());
}

SweepGrid SweepRunConfig::grid() const {
    return SweepGrid::from_ranges(gamma_min, gamma_max, gamma_step, tau_min, tau_max, tau_step);
}

SyncConfig SweepRunConfig::sync() const {
    SyncConfig cfg;
    cfg.transient = transient;
    cfg.window = window;
    cfg.epsilon = epsilon;
    cfg.step = step;
    cfg.record_stride = record_stride;
    return cfg;
}

std::vector<std::pair<std::string, std::string>> SweepRunConfig::as_key_values() const {
    return {
        {"graph", graph_spec},
        {"model", model},
        {"gamma_range", format_double(gamma_min) + ":" + format_double(gamma_max) + ":" +
                            format_double(gamma_step)},
        {"tau_range", format_double(tau_min) + ":" + format_double(tau_max) + ":" +
                          format_double(tau_step)},
        {"transient", format_double(transient)},
        {"window", format_double(window)},
        {"epsilon", format_double(epsilon)},
        {"step", format_double(step)},
        {"record_stride", std::to_string(record_stride)},
        {"seed", std::to_string(seed)},
        {"num_seeds", std::to_string(num_seeds)},
        {"time_unit", time_unit},
    };
}

namespace {

json config_to_json(const SweepRunConfig& c) {
    return json{{"graph", c.graph_spec},
                {"model", c.model},
                {"gamma_min", c.gamma_min},
                {"gamma_max", c.gamma_max},
                {"gamma_step", c.gamma_step},
                {"tau_min", c.tau_min},
                {"tau_max", c.tau_max},
                {"tau_step", c.tau_step},
                {"transient", c.transient},
                {"window", c.window},
                {"epsilon", c.epsilon},
                {"step", c.step},
                {"record_stride", c.record_stride},
                {"seed", c.seed},
                {"num_seeds", c.num_seeds},
                {"time_unit", c.time_unit}};
}

SweepRunConfig config_from_json(const json& j) {
    SweepRunConfig c;
    c.graph_spec = j.at("graph").get<std::string>();
    c.model = j.at("model").get<std::string>();
    c.gamma_min = j.at("gamma_min").get<double>();
    c.gamma_max = j.at("gamma_max").get<double>();
    c.gamma_step = j.at("gamma_step").get<double>();
    c.tau_min = j.at("tau_min").get<double>();
    c.tau_max = j.at("tau_max").get<double>();
    c.tau_step = j.at("tau_step").get<double>();
    c.transient = j.at("transient").get<double>();
    c.window = j.at("window").get<double>();
    c.epsilon = j.at("epsilon").get<double>();
    c.step = j.at("step").get<double>();
    c.record_stride = j.at("record_stride").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.num_seeds = j.at("num_seeds").get<int>();
    c.time_unit = j.at("time_unit").get<std::string>();
    return c;
}

std::string config_comment_block(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string out;
    for (const auto& [key, value] : kv) out += "# " + key + "=" + value + "\n";
    return out;
}

json spectrum_to_json(const LaplacianSpectrum& s) {
    return json{{"eigenvalues", s.eigenvalues},
                {"lambda2", s.lambda2},
                {"lambda_k", s.lambda_k},
                {"quotient", s.quotient}};
}

} // namespace

void emit_region_artifacts(const RegionMap& region, const LaplacianSpectrum& spectrum,
                           const SweepRunConfig& config, const RegionArtifactPaths& paths) {
    const auto kv = config.as_key_values();

    std::string csv = config_comment_block(kv);
    csv += "gamma,tau,synchronized,diverged,max_error\n";
    const auto& grid = region.grid;
    for (std::size_t gi = 0; gi < grid.gamma_values.size(); ++gi) {
        for (std::size_t ti = 0; ti < grid.tau_values.size(); ++ti) {
            const std::size_t cell = region.index(gi, ti);
            csv += format_double(grid.gamma_values[gi]);
            csv += ',';
            csv += format_double(grid.tau_values[ti]);
            csv += ',';
            csv += region.synchronized[cell] ? '1' : '0';
            csv += ',';
            csv += region.diverged[cell] ? '1' : '0';
            csv += ',';
            csv += format_double(region.max_error[cell]);
            csv += '\n';
        }
    }
    write_file_atomic(paths.region_csv, csv);

    const BoundaryCurve curve = boundary_curve(region);
    std::string boundary = config_comment_block(kv);
    boundary += "gamma,tau_max\n";
    for (const auto& p : curve.points)
        boundary += format_double(p.gamma) + "," + format_double(p.tau_max) + "\n";
    write_file_atomic(paths.boundary_csv, boundary);

    const TopologyResult result = summarize_region(region, spectrum);
    json summary;
    summary["config"] = config_to_json(config);
    summary["graph_name"] = region.graph_name;
    summary["spectrum"] = spectrum_to_json(spectrum);
    summary["cells"] = {{"total", region.grid.cells()},
                        {"synchronized",
                         std::count(region.synchronized.begin(), region.synchronized.end(), 1)},
                        {"diverged", std::count(region.diverged.begin(), region.diverged.end(), 1)}};
    summary["boundary_holes"] = curve.holes;
    summary["unimodality"] = {{"is_unimodal", result.unimodality.is_unimodal},
                              {"violations", result.unimodality.violations}};
    summary["grid_cell"] = {{"gamma", result.gamma_cell}, {"tau", result.tau_cell}};
    if (result.optimum) {
        summary["optimum"] = {{"gamma_star", result.optimum->gamma_star},
                              {"tau_star", result.optimum->tau_star},
                              {"gamma_index", result.optimum->gamma_index},
                              {"tau_index", result.optimum->tau_index}};
    } else {
        summary["optimum"] = nullptr;
        summary["note"] = "no synchronized cells";
    }
    write_file_atomic(paths.summary_json, summary.dump(2) + "\n");
}

TopologyResult load_topology_result(const std::filesystem::path& summary_json) {
    std::ifstream in(summary_json);
    if (!in) throw std::runtime_error("cannot read summary: " + summary_json.string());
    const json j = json::parse(in);

    TopologyResult result;
    result.name = j.at("graph_name").get<std::string>();
    const auto& sp = j.at("spectrum");
    result.spectrum.eigenvalues = sp.at("eigenvalues").get<std::vector<double>>();
    result.spectrum.lambda2 = sp.at("lambda2").get<double>();
    result.spectrum.lambda_k = sp.at("lambda_k").get<double>();
    result.spectrum.quotient = sp.at("quotient").get<double>();
    const auto& uni = j.at("unimodality");
    result.unimodality.is_unimodal = uni.at("is_unimodal").get<bool>();
    result.unimodality.violations = uni.at("violations").get<int>();
    result.gamma_cell = j.at("grid_cell").at("gamma").get<double>();
    result.tau_cell = j.at("grid_cell").at("tau").get<double>();
    if (!j.at("optimum").is_null()) {
        const auto& opt = j.at("optimum");
        result.optimum = EmpiricalOptimum{opt.at("gamma_star").get<double>(),
                                          opt.at("tau_star").get<double>(),
                                          opt.at("gamma_index").get<std::size_t>(),
                                          opt.at("tau_index").get<std::size_t>()};
    }
    return result;
}

SweepRunConfig load_config_from_summary(const std::filesystem::path& summary_json) {
    std::ifstream in(summary_json);
    if (!in) throw std::runtime_error("cannot read summary: " + summary_json.string());
    const json j = json::parse(in);
    return config_from_json(j.at("config"));
}

void write_trajectory_artifacts(const std::filesystem::path& csv_path,
                                const std::filesystem::path& metadata_path,
                                const Trajectory& traj, int node_count, int internal_dim,
                                int output_dim, const SimulateRunConfig& config,
                                std::span<const double> x0) {
    const int n = internal_dim + output_dim;
    std::string csv = "t,node";
    for (int c = 1; c <= internal_dim; ++c) csv += ",zeta" + std::to_string(c);
    for (int c = 1; c <= output_dim; ++c) csv += ",y" + std::to_string(c);
    csv += '\n';
    for (std::size_t s = 0; s < traj.samples(); ++s) {
        const auto x = traj.state(s);
        const std::string t = format_double(traj.times[s]);
        for (int i = 0; i < node_count; ++i) {
            csv += t;
            csv += ',';
            csv += std::to_string(i + 1);
            for (int c = 0; c < n; ++c) {
                csv += ',';
                csv += format_double(x[i * n + c]);
            }
            csv += '\n';
        }
    }
    write_file_atomic(csv_path, csv);

    json meta;
    meta["config"] = json{{"graph", config.graph_spec}, {"model", config.model},
                          {"gamma", config.gamma},     {"tau", config.tau},
                          {"t_end", config.t_end},     {"step", config.step},
                          {"record_stride", config.record_stride},
                          {"seed", config.seed},       {"time_unit", config.time_unit}};
    meta["effective_step"] = traj.step;
    meta["initial_condition"] = std::vector<double>(x0.begin(), x0.end());
    meta["initial_history"] = "constant";
    meta["diverged"] = traj.diverged;
    if (traj.diverged) meta["divergence_time"] = traj.divergence_time;
    meta["samples"] = traj.samples();
    write_file_atomic(metadata_path, meta.dump(2) + "\n");
}

void write_curve_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<std::pair<double, double>>& rows,
                     const std::vector<std::pair<std::string, std::string>>& config_lines) {
    std::string csv = config_comment_block(config_lines);
    csv += header + "\n";
    for (const auto& [a, b] : rows) csv += format_double(a) + "," + format_double(b) + "\n";
    write_file_atomic(path, csv);
}

std::string comparison_report_json(const ComparisonReport& report) {
    json j;
    j["all_pass"] = report.all_pass;
    json rows = json::array();
    for (const auto& r : report.topologies) {
        json row;
        row["name"] = r.name;
        row["lambda2"] = r.spectrum.lambda2;
        row["lambda_k"] = r.spectrum.lambda_k;
        row["quotient"] = r.spectrum.quotient;
        row["unimodal"] = r.unimodality.is_unimodal;
        if (r.optimum) {
            row["gamma_star"] = r.optimum->gamma_star;
            row["tau_star"] = r.optimum->tau_star;
        } else {
            row["gamma_star"] = nullptr;
            row["tau_star"] = nullptr;
        }
        rows.push_back(row);
    }
    j["topologies"] = rows;
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back(json{{"a", c.a},
                              {"b", c.b},
                              {"prediction", c.prediction},
                              {"applicable", c.applicable},
                              {"pass", c.pass},
                              {"detail", c.detail}});
    }
    j["checks"] = checks;
    return j.dump(2) + "\n";
}

} // namespace delaysync
