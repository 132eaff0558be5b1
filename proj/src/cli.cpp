#include "delaysync/cli.hpp"

#include "delaysync/artifacts.hpp"
#include "delaysync/network.hpp"
#include "delaysync/sweep.hpp"
#include "delaysync/theory.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

namespace delaysync {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::optional<TopologyKind> kind_from_name(const std::string& name) {
    if (name == "complete" || name == "k") return TopologyKind::Complete;
    if (name == "path") return TopologyKind::Path;
    if (name == "ring") return TopologyKind::Ring;
    if (name == "star") return TopologyKind::Star;
    return std::nullopt;
}

GraphSpec load_graph_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read graph file: " + path.string());
    const json j = json::parse(in);
    const int k = j.at("k").get<int>();
    const std::string kind = j.value("kind", std::string("custom"));
    const std::string name = j.value("name", path.stem().string());
    if (auto builtin = kind_from_name(kind)) {
        if (j.contains("edges"))
            throw std::invalid_argument("graph file: explicit edges require kind \"custom\"");
        return {build_topology(*builtin, k), name};
    }
    if (kind != "custom") throw std::invalid_argument("graph file: unknown kind \"" + kind + "\"");
    if (!j.contains("edges")) throw std::invalid_argument("graph file: kind \"custom\" needs edges");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument("graph file: each edge must be [i, j, weight]");
        edges.push_back({e[0].get<int>() - 1, e[1].get<int>() - 1, e[2].get<double>()});
    }
    return {WeightedGraph(k, std::move(edges)), name};
}

} // namespace

GraphSpec parse_graph_spec(const std::string& spec) {
    // Builtin shapes: a kind name followed by the node count.
    const auto digits = spec.find_first_of("0123456789");
    if (digits != std::string::npos && digits > 0 &&
        spec.find_first_not_of("0123456789", digits) == std::string::npos) {
        if (auto kind = kind_from_name(spec.substr(0, digits))) {
            const int k = std::stoi(spec.substr(digits));
            const std::string canonical =
                (spec[0] == 'k' && digits == 1 ? "k" : std::string(topology_name(*kind))) +
                std::to_string(k);
            return {build_topology(*kind, k), canonical};
        }
    }
    if (fs::exists(spec)) return load_graph_file(spec);
    throw std::invalid_argument("graph spec \"" + spec +
                                "\" is neither a builtin shape nor an existing file");
}

namespace {

void parse_range(const std::string& text, double& lo, double& hi, double& step) {
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw std::invalid_argument("range must be min:max:step, got \"" + text + "\"");
    lo = std::stod(text.substr(0, first));
    hi = std::stod(text.substr(first + 1, second - first - 1));
    step = std::stod(text.substr(second + 1));
}

int default_workers() {
    if (const char* env = std::getenv("DELAY_SYNC_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed >= 1) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int cmd_spectrum(const std::string& graph_arg, const std::string& out_path) {
    const GraphSpec gs = parse_graph_spec(graph_arg);
    const LaplacianSpectrum s = analyze(gs.graph);
    std::string csv = "index,eigenvalue\n";
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
        csv += std::to_string(i + 1) + "," + format_double(s.eigenvalues[i]) + "\n";
    if (out_path.empty())
        std::cout << csv;
    else
        write_file_atomic(out_path, csv);
    std::cerr << "lambda2=" << format_double(s.lambda2) << " lambda_k=" << format_double(s.lambda_k)
              << " quotient=" << format_double(s.quotient) << "\n";
    return kExitOk;
}

int cmd_simulate(const SimulateRunConfig& cfg, const std::string& out_path) {
    const GraphSpec gs = parse_graph_spec(cfg.graph_spec);
    const auto model = make_model(cfg.model);
    const NetworkSystem net(model, gs.graph, cfg.gamma, cfg.tau);

    IntegratorConfig icfg;
    icfg.step = cfg.step > 0.0 ? cfg.step : (cfg.tau > 0.0 ? std::min(cfg.tau / 4.0, 0.01) : 0.01);
    icfg.t_end = cfg.t_end;
    icfg.record_stride = cfg.record_stride;

    const std::vector<double> x0 =
        default_initial_state(net.node_count(), model->state_dim(), cfg.seed);
    const auto sys = as_delay_system(net);
    const Trajectory traj = integrate(*sys, x0, icfg);

    const fs::path csv = out_path;
    fs::path meta = csv;
    meta.replace_extension(".meta.json");
    write_trajectory_artifacts(csv, meta, traj, net.node_count(), model->internal_dim(),
                               model->output_dim(), cfg, x0);
    if (traj.diverged) {
        std::cerr << "trajectory diverged at t=" << format_double(traj.divergence_time)
                  << "; partial output written\n";
        return kExitRuntime;
    }
    std::cout << "wrote " << csv.string() << " and " << meta.string() << " ("
              << traj.samples() << " samples)\n";
    return kExitOk;
}

int cmd_sweep(const SweepRunConfig& cfg, int workers, const std::string& out_path,
              std::string boundary_path, std::string summary_path) {
    const GraphSpec gs = parse_graph_spec(cfg.graph_spec);
    const LaplacianSpectrum spectrum = analyze(gs.graph);
    const auto model = make_model(cfg.model);

    SweepSettings settings;
    settings.sync = cfg.sync();
    settings.seed = cfg.seed;
    settings.num_seeds = cfg.num_seeds;
    settings.workers = workers;

    const RegionMap region = run_sweep(model, gs.graph, gs.name, cfg.grid(), settings);

    const fs::path region_csv = out_path;
    if (boundary_path.empty()) {
        fs::path p = region_csv;
        p.replace_extension("");
        boundary_path = p.string() + "_boundary.csv";
    }
    if (summary_path.empty()) {
        fs::path p = region_csv;
        p.replace_extension("");
        summary_path = p.string() + "_summary.json";
    }
    emit_region_artifacts(region, spectrum, cfg, {region_csv, boundary_path, summary_path});

    const TopologyResult result = summarize_region(region, spectrum);
    if (result.optimum) {
        std::cout << "gamma_star_emp=" << format_double(result.optimum->gamma_star)
                  << " tau_star_emp=" << format_double(result.optimum->tau_star) << cfg.time_unit
                  << " unimodal=" << (result.unimodality.is_unimodal ? "yes" : "no") << "\n";
    } else {
        std::cout << "no synchronized cells\n";
    }
    std::cout << "wrote " << region_csv.string() << ", " << boundary_path << ", " << summary_path
              << "\n";

    const auto total = region.grid.cells();
    const auto diverged =
        static_cast<std::size_t>(std::count(region.diverged.begin(), region.diverged.end(), 1));
    if (diverged == total) {
        std::cerr << "every cell diverged\n";
        return kExitRuntime;
    }
    return kExitOk;
}

struct TheoryArgs {
    double alpha = 1.0, c0 = 1.0, c1 = 1.0, c2 = 1.0;
    double lambda2 = 1.0, lambda_k = 1.0;
    std::string graph_spec;
    std::string phi_out;
    std::string gamma_range;
    double check_gamma = -1.0, check_tau = -1.0;
    double delta_bar = 0.0;
    bool theorem_literal = false;
};

int cmd_theory(const TheoryArgs& args) {
    SpectralPair sp = SpectralPair::checked(args.lambda2, args.lambda_k);
    if (!args.graph_spec.empty()) {
        const LaplacianSpectrum s = analyze(parse_graph_spec(args.graph_spec).graph);
        sp = SpectralPair::checked(s.lambda2, s.lambda_k);
    }
    const auto constants = SemipassiveConstants::checked(args.alpha, args.c0, args.c1, args.c2);
    const DerivedConstants d = derived_constants(constants);
    const double gs = gamma_star(d, sp);
    const double gt = gamma_tilde(d, sp);
    const double ts = tau_star(d, sp);

    std::cout << "gamma_prime=" << format_double(d.gamma_prime) << "\n"
              << "cbar1=" << format_double(d.cbar1) << "\n"
              << "cbar2=" << format_double(d.cbar2) << "\n"
              << "gamma_star=" << format_double(gs) << "\n"
              << "gamma_tilde=" << format_double(gt) << "\n"
              << "tau_star=" << format_double(ts) << "\n";

    if (args.check_gamma >= 0.0 && args.check_tau >= 0.0) {
        std::optional<double> delta_bar;
        if (args.delta_bar > 0.0) delta_bar = args.delta_bar;
        const bool inside = in_region(args.check_gamma, args.check_tau, d, sp, delta_bar,
                                      args.theorem_literal ? RegionCondition::TheoremForm
                                                           : RegionCondition::ProofForm);
        std::cout << "in_region(" << format_double(args.check_gamma) << ","
                  << format_double(args.check_tau) << ")=" << (inside ? "true" : "false") << "\n";
    }

    if (!args.phi_out.empty()) {
        double lo = 0.5 * d.gamma_prime / sp.lambda2;
        double hi = 5.0 * gs;
        double step = (hi - lo) / 500.0;
        if (!args.gamma_range.empty()) parse_range(args.gamma_range, lo, hi, step);
        std::vector<std::pair<double, double>> rows;
        for (double g = lo; g <= hi * (1.0 + 1e-12); g += step)
            rows.push_back({g, phi(g, d, sp).value});
        write_curve_csv(args.phi_out, "gamma,phi",
                        rows,
                        {{"alpha", format_double(args.alpha)},
                         {"c0", format_double(args.c0)},
                         {"c1", format_double(args.c1)},
                         {"c2", format_double(args.c2)},
                         {"lambda2", format_double(sp.lambda2)},
                         {"lambda_k", format_double(sp.lambda_k)}});
        std::cout << "wrote " << args.phi_out << "\n";
    }
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& summaries, const std::string& out_path) {
    std::vector<TopologyResult> results;
    results.reserve(summaries.size());
    for (const auto& path : summaries) results.push_back(load_topology_result(path));
    const ComparisonReport report = compare_topologies(results);
    std::cout << report.render_table();
    if (!out_path.empty()) {
        write_file_atomic(out_path, comparison_report_json(report));
        std::cout << "wrote " << out_path << "\n";
    }
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"delay-coupled oscillator networks: spectra, simulation, synchronization maps"};
    app.require_subcommand(1);

    // --- spectrum ---
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Laplacian spectrum of a graph as CSV");
    std::string spectrum_graph;
    std::string spectrum_out;
    spectrum_cmd->add_option("--graph", spectrum_graph, "builtin name or graph JSON file")
        ->required();
    spectrum_cmd->add_option("--out", spectrum_out, "output CSV (default: stdout)");

    // --- simulate ---
    auto* simulate_cmd = app.add_subcommand("simulate", "integrate one network trajectory");
    SimulateRunConfig sim_cfg;
    std::string sim_out = "traj.csv";
    simulate_cmd->add_option("--graph", sim_cfg.graph_spec, "builtin name or graph JSON file")
        ->required();
    simulate_cmd->add_option("--model", sim_cfg.model, "node model name");
    simulate_cmd->add_option("--gamma", sim_cfg.gamma, "coupling strength")->required();
    simulate_cmd->add_option("--tau", sim_cfg.tau, "coupling delay [ms]")->required();
    simulate_cmd->add_option("--t-end", sim_cfg.t_end, "integration horizon [ms]");
    simulate_cmd->add_option("--step", sim_cfg.step, "step size (0 = auto min(tau/4, 0.01))");
    simulate_cmd->add_option("--record-stride", sim_cfg.record_stride, "record every Nth step");
    simulate_cmd->add_option("--seed", sim_cfg.seed, "initial-condition seed");
    simulate_cmd->add_option("--out", sim_out, "trajectory CSV path");

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "map the synchronization region over (gamma, tau)");
    sweep_cmd->set_config("--config", "", "read options from a TOML config file");
    SweepRunConfig sweep_cfg;
    std::string gamma_range, tau_range;
    std::string sweep_out = "region.csv";
    std::string boundary_out, summary_out, from_summary;
    int workers = default_workers();
    auto* opt_graph = sweep_cmd->add_option("--graph", sweep_cfg.graph_spec,
                                            "builtin name or graph JSON file");
    auto* opt_model = sweep_cmd->add_option("--model", sweep_cfg.model, "node model name");
    auto* opt_gr = sweep_cmd->add_option("--gamma-range", gamma_range, "min:max:step (default 0.25:12:0.25)");
    auto* opt_tr = sweep_cmd->add_option("--tau-range", tau_range, "min:max:step [ms] (default 0:6:0.05)");
    auto* opt_transient = sweep_cmd->add_option("--transient", sweep_cfg.transient,
                                                "discarded settling time [ms]");
    auto* opt_window = sweep_cmd->add_option("--window", sweep_cfg.window, "measurement window [ms]");
    auto* opt_epsilon = sweep_cmd->add_option("--epsilon", sweep_cfg.epsilon, "sync threshold");
    auto* opt_step = sweep_cmd->add_option("--step", sweep_cfg.step, "integrator step (0 = auto)");
    auto* opt_stride = sweep_cmd->add_option("--record-stride", sweep_cfg.record_stride,
                                             "record every Nth step");
    auto* opt_seed = sweep_cmd->add_option("--seed", sweep_cfg.seed, "initial-condition seed");
    auto* opt_seeds = sweep_cmd->add_option("--seeds", sweep_cfg.num_seeds,
                                            "number of seeds (verdict = AND over seeds)");
    sweep_cmd->add_option("--workers", workers, "worker threads (default: $DELAY_SYNC_WORKERS or cores)");
    sweep_cmd->add_option("--out", sweep_out, "region CSV path");
    sweep_cmd->add_option("--boundary-out", boundary_out, "boundary CSV path");
    sweep_cmd->add_option("--summary-out", summary_out, "summary JSON path");
    sweep_cmd->add_option("--from-summary", from_summary,
                          "start from the config embedded in a previous summary JSON");

    // --- theory ---
    auto* theory_cmd = app.add_subcommand("theory", "closed-form boundary, optimum and region tests");
    TheoryArgs theory_args;
    theory_cmd->add_option("--alpha", theory_args.alpha, "internal contraction rate");
    theory_cmd->add_option("--c0", theory_args.c0, "internal cross-term constant");
    theory_cmd->add_option("--c1", theory_args.c1, "output growth constant");
    theory_cmd->add_option("--c2", theory_args.c2, "output cross-term constant");
    theory_cmd->add_option("--lambda2", theory_args.lambda2, "smallest nonzero Laplacian eigenvalue");
    theory_cmd->add_option("--lambdak", theory_args.lambda_k, "largest Laplacian eigenvalue");
    theory_cmd->add_option("--graph", theory_args.graph_spec,
                           "take lambda2/lambdak from this graph instead");
    theory_cmd->add_option("--phi-out", theory_args.phi_out, "write the phi(gamma) curve CSV here");
    theory_cmd->add_option("--gamma-range", theory_args.gamma_range, "phi curve range min:max:step");
    theory_cmd->add_option("--gamma", theory_args.check_gamma, "query point: coupling strength");
    theory_cmd->add_option("--tau", theory_args.check_tau, "query point: delay");
    theory_cmd->add_option("--delta-bar", theory_args.delta_bar,
                           "optional boundedness bound (adds gamma < delta_bar/2)");
    theory_cmd->add_flag("--theorem-literal", theory_args.theorem_literal,
                         "use the theorem-statement gain condition gamma > gamma_prime "
                         "instead of the proof condition lambda2*gamma > gamma_prime");

    // --- compare ---
    auto* compare_cmd = app.add_subcommand("compare", "cross-topology report from sweep summaries");
    std::vector<std::string> compare_summaries;
    std::string compare_out;
    compare_cmd->add_option("--summary", compare_summaries, "sweep summary JSON (repeat, >= 2)")
        ->required()
        ->expected(-2);
    compare_cmd->add_option("--out", compare_out, "report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (spectrum_cmd->parsed()) return cmd_spectrum(spectrum_graph, spectrum_out);
        if (simulate_cmd->parsed()) return cmd_simulate(sim_cfg, sim_out);
        if (sweep_cmd->parsed()) {
            if (!from_summary.empty()) {
                // Values from the embedded config, except where flags were given.
                SweepRunConfig loaded = load_config_from_summary(from_summary);
                if (opt_graph->count() == 0) sweep_cfg.graph_spec = loaded.graph_spec;
                if (opt_model->count() == 0) sweep_cfg.model = loaded.model;
                if (opt_gr->count() == 0) {
                    sweep_cfg.gamma_min = loaded.gamma_min;
                    sweep_cfg.gamma_max = loaded.gamma_max;
                    sweep_cfg.gamma_step = loaded.gamma_step;
                }
                if (opt_tr->count() == 0) {
                    sweep_cfg.tau_min = loaded.tau_min;
                    sweep_cfg.tau_max = loaded.tau_max;
                    sweep_cfg.tau_step = loaded.tau_step;
                }
                if (opt_transient->count() == 0) sweep_cfg.transient = loaded.transient;
                if (opt_window->count() == 0) sweep_cfg.window = loaded.window;
                if (opt_epsilon->count() == 0) sweep_cfg.epsilon = loaded.epsilon;
                if (opt_step->count() == 0) sweep_cfg.step = loaded.step;
                if (opt_stride->count() == 0) sweep_cfg.record_stride = loaded.record_stride;
                if (opt_seed->count() == 0) sweep_cfg.seed = loaded.seed;
                if (opt_seeds->count() == 0) sweep_cfg.num_seeds = loaded.num_seeds;
            } else if (opt_graph->count() == 0) {
                throw std::invalid_argument("sweep: --graph is required (or --from-summary)");
            }
            if (opt_gr->count() > 0)
                parse_range(gamma_range, sweep_cfg.gamma_min, sweep_cfg.gamma_max,
                            sweep_cfg.gamma_step);
            if (opt_tr->count() > 0)
                parse_range(tau_range, sweep_cfg.tau_min, sweep_cfg.tau_max, sweep_cfg.tau_step);
            return cmd_sweep(sweep_cfg, workers, sweep_out, boundary_out, summary_out);
        }
        if (theory_cmd->parsed()) return cmd_theory(theory_args);
        if (compare_cmd->parsed()) return cmd_compare(compare_summaries, compare_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}

} // namespace delaysync
