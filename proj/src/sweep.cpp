#include "delaysync/sweep.hpp"

#include "delaysync/theory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace delaysync {

std::vector<double> SweepGrid::range(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("range: need hi >= lo, step > 0");
    std::vector<double> values;
    for (long i = 0;; ++i) {
        const double v = lo + static_cast<double>(i) * step;
        if (v > hi * (1.0 + 1e-9) + 1e-15) break;
        values.push_back(v);
    }
    return values;
}

SweepGrid SweepGrid::from_ranges(double gamma_min, double gamma_max, double gamma_step,
                                 double tau_min, double tau_max, double tau_step) {
    SweepGrid grid;
    grid.gamma_values = range(gamma_min, gamma_max, gamma_step);
    grid.tau_values = range(tau_min, tau_max, tau_step);
    grid.validate();
    return grid;
}

void SweepGrid::validate() const {
    for (const auto* values : {&gamma_values, &tau_values}) {
        if (values->empty()) throw std::invalid_argument("sweep grid: empty axis");
        double prev = -1.0;
        for (double v : *values) {
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument("sweep grid: values must be finite and nonnegative");
            if (v <= prev) throw std::invalid_argument("sweep grid: values must be strictly ascending");
            prev = v;
        }
    }
}

bool RegionMap::any_diverged() const {
    return std::any_of(diverged.begin(), diverged.end(), [](std::uint8_t v) { return v != 0; });
}

RegionMap run_sweep(std::shared_ptr<const NodeModel> model, const WeightedGraph& graph,
                    std::string graph_name, const SweepGrid& grid,
                    const SweepSettings& settings) {
    grid.validate();
    if (settings.workers < 1) throw std::invalid_argument("run_sweep: workers must be >= 1");
    if (settings.num_seeds < 1) throw std::invalid_argument("run_sweep: num_seeds must be >= 1");

    RegionMap region;
    region.grid = grid;
    region.graph_name = std::move(graph_name);
    region.model_name = model->name();
    region.seed = settings.seed;
    region.num_seeds = settings.num_seeds;
    region.sync = settings.sync;

    const std::size_t cells = grid.cells();
    region.synchronized.assign(cells, 0);
    region.diverged.assign(cells, 0);
    region.max_error.assign(cells, 0.0);

    // One initial condition per seed, shared by every cell.
    const int n = model->state_dim();
    std::vector<std::vector<double>> initial_states;
    initial_states.reserve(settings.num_seeds);
    for (int s = 0; s < settings.num_seeds; ++s)
        initial_states.push_back(
            default_initial_state(graph.node_count(), n, settings.seed + static_cast<std::uint64_t>(s)));

    const std::size_t ntau = grid.tau_values.size();
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    const std::size_t report_every = std::max<std::size_t>(1, cells / 20);

    auto work = [&]() {
        for (;;) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= cells) return;
            const std::size_t gi = cell / ntau;
            const std::size_t ti = cell % ntau;
            const NetworkSystem net(model, graph, grid.gamma_values[gi], grid.tau_values[ti]);

            bool synchronized = true;
            bool diverged = false;
            double max_error = 0.0;
            for (const auto& x0 : initial_states) {
                const SyncVerdict v = is_synchronized(net, settings.sync, x0);
                synchronized = synchronized && v.synchronized;
                diverged = diverged || v.diverged;
                max_error = std::max(max_error, v.max_error);
            }
            region.synchronized[cell] = synchronized ? 1 : 0;
            region.diverged[cell] = diverged ? 1 : 0;
            region.max_error[cell] = max_error;

            const std::size_t finished = done.fetch_add(1) + 1;
            if (finished % report_every == 0 || finished == cells)
                std::fprintf(stderr, "\rsweep %s: %zu/%zu cells", region.graph_name.c_str(),
                             finished, cells);
        }
    };

    if (settings.workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(settings.workers);
        for (int w = 0; w < settings.workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    std::fprintf(stderr, "\n");
    return region;
}

BoundaryCurve boundary_curve(const RegionMap& region) {
    BoundaryCurve curve;
    const std::size_t ntau = region.grid.tau_values.size();
    for (std::size_t gi = 0; gi < region.grid.gamma_values.size(); ++gi) {
        std::size_t top = 0;
        while (top < ntau && region.cell_synchronized(gi, top)) ++top;
        for (std::size_t ti = top; ti < ntau; ++ti)
            if (region.cell_synchronized(gi, ti)) ++curve.holes;
        if (top == 0) continue; // nothing synchronized from tau = 0 upward
        curve.points.push_back({region.grid.gamma_values[gi], region.grid.tau_values[top - 1],
                                gi, top - 1});
    }
    return curve;
}

std::optional<EmpiricalOptimum> empirical_optimum(const RegionMap& region) {
    const BoundaryCurve curve = boundary_curve(region);
    if (curve.points.empty()) return std::nullopt;
    const BoundaryPoint* best = &curve.points.front();
    for (const auto& p : curve.points)
        if (p.tau_max > best->tau_max) best = &p; // ties keep the smallest gamma
    return EmpiricalOptimum{best->gamma, best->tau_max, best->gamma_index, best->tau_index};
}

UnimodalityScore unimodality_score(const BoundaryCurve& curve, double tau_cell) {
    if (curve.points.size() < 3)
        throw std::invalid_argument("unimodality_score: need at least 3 boundary points");
    if (!(tau_cell > 0.0)) throw std::invalid_argument("unimodality_score: bad grid cell size");

    // Moves of at most one grid cell are treated as flat.
    const double significant = 1.5 * tau_cell;
    UnimodalityScore score;
    bool seen_fall = false;
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const double diff = curve.points[i + 1].tau_max - curve.points[i].tau_max;
        if (diff > significant) {
            if (seen_fall) ++score.violations;
        } else if (diff < -significant) {
            seen_fall = true;
        }
    }
    score.is_unimodal = score.violations == 0;
    return score;
}

TopologyResult summarize_region(const RegionMap& region, const LaplacianSpectrum& spectrum) {
    TopologyResult result;
    result.name = region.graph_name;
    result.spectrum = spectrum;
    result.optimum = empirical_optimum(region);
    result.gamma_cell = region.grid.gamma_values.size() > 1
                            ? region.grid.gamma_values[1] - region.grid.gamma_values[0]
                            : 0.0;
    result.tau_cell = region.grid.tau_values.size() > 1
                          ? region.grid.tau_values[1] - region.grid.tau_values[0]
                          : 0.0;
    const BoundaryCurve curve = boundary_curve(region);
    if (curve.points.size() >= 3 && result.tau_cell > 0.0)
        result.unimodality = unimodality_score(curve, result.tau_cell);
    return result;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace

ComparisonReport compare_topologies(const std::vector<TopologyResult>& results,
                                    double tau_equal_rel_tol) {
    if (results.size() < 2)
        throw std::invalid_argument("compare_topologies: need at least two regions");
    ComparisonReport report;
    report.topologies = results;

    auto add_check = [&](PairwiseCheck check) {
        if (check.applicable && !check.pass) report.all_pass = false;
        report.checks.push_back(std::move(check));
    };

    for (std::size_t i = 0; i < results.size(); ++i) {
        for (std::size_t j = i + 1; j < results.size(); ++j) {
            const auto& a = results[i];
            const auto& b = results[j];
            const SpectralPair spa{a.spectrum.lambda2, a.spectrum.lambda_k};
            const SpectralPair spb{b.spectrum.lambda2, b.spectrum.lambda_k};
            const SpectralComparison pred = corollary2_compare(spa, spb, 1e-6);

            PairwiseCheck tau_check;
            tau_check.a = a.name;
            tau_check.b = b.name;
            if (!a.optimum || !b.optimum) {
                tau_check.prediction = "tau* comparison";
                tau_check.applicable = false;
                tau_check.detail = "missing empirical optimum";
                add_check(std::move(tau_check));
                continue;
            }
            const double ta = a.optimum->tau_star;
            const double tb = b.optimum->tau_star;
            const double slack = std::max({tau_equal_rel_tol * std::max(ta, tb),
                                           a.tau_cell, b.tau_cell});
            switch (pred.tau_order) {
            case TauOrder::Equal:
                tau_check.prediction = "equal quotients: tau*(" + a.name + ") = tau*(" + b.name + ")";
                tau_check.pass = std::abs(ta - tb) <= slack;
                break;
            case TauOrder::Less:
                tau_check.prediction = "larger quotient: tau*(" + a.name + ") < tau*(" + b.name + ")";
                tau_check.pass = ta < tb;
                break;
            case TauOrder::Greater:
                tau_check.prediction = "smaller quotient: tau*(" + a.name + ") > tau*(" + b.name + ")";
                tau_check.pass = ta > tb;
                break;
            }
            tau_check.detail = "tau* = " + fmt(ta) + " vs " + fmt(tb);
            add_check(std::move(tau_check));

            PairwiseCheck gamma_check;
            gamma_check.a = a.name;
            gamma_check.b = b.name;
            const double ga = a.optimum->gamma_star;
            const double gb = b.optimum->gamma_star;
            const double gslack = std::max(a.gamma_cell, b.gamma_cell);
            switch (pred.gamma_order) {
            case GammaOrder::Equal:
                gamma_check.prediction = "gamma*(" + a.name + ") = gamma*(" + b.name + ")";
                gamma_check.pass = std::abs(ga - gb) <= gslack;
                break;
            case GammaOrder::LessEqual:
                gamma_check.prediction = "gamma*(" + a.name + ") <= gamma*(" + b.name + ")";
                gamma_check.pass = ga <= gb + gslack;
                break;
            case GammaOrder::GreaterEqual:
                gamma_check.prediction = "gamma*(" + a.name + ") >= gamma*(" + b.name + ")";
                gamma_check.pass = ga >= gb - gslack;
                break;
            case GammaOrder::Incomparable:
                gamma_check.prediction = "gamma* order (not predicted for these spectra)";
                gamma_check.applicable = false;
                break;
            }
            gamma_check.detail = "gamma* = " + fmt(ga) + " vs " + fmt(gb);
            add_check(std::move(gamma_check));
        }
    }

    // The smallest-quotient group must attain the largest tau*.
    double min_q = std::numeric_limits<double>::infinity();
    double best_tau = 0.0;
    for (const auto& r : results) {
        min_q = std::min(min_q, r.spectrum.quotient);
        if (r.optimum) best_tau = std::max(best_tau, r.optimum->tau_star);
    }
    for (const auto& r : results) {
        if (!r.optimum) continue;
        if (r.spectrum.quotient > min_q * (1.0 + 1e-6)) continue;
        PairwiseCheck check;
        check.a = r.name;
        check.b = "(all)";
        check.prediction = "smallest quotient attains the maximum tau*";
        const double slack = std::max(tau_equal_rel_tol * best_tau, r.tau_cell);
        check.pass = r.optimum->tau_star >= best_tau - slack;
        check.detail = "tau* = " + fmt(r.optimum->tau_star) + ", max = " + fmt(best_tau);
        add_check(std::move(check));
    }
    return report;
}

std::string ComparisonReport::render_table() const {
    std::ostringstream out;
    out << "topology        gamma*   tau*[ms]  lambda_k  lambda2   quotient  unimodal\n";
    for (const auto& r : topologies) {
        char line[160];
        std::snprintf(line, sizeof line, "%-15s %-8s %-9s %-9s %-9s %-9s %s\n", r.name.c_str(),
                      r.optimum ? fmt(r.optimum->gamma_star).c_str() : "-",
                      r.optimum ? fmt(r.optimum->tau_star).c_str() : "-",
                      fmt(r.spectrum.lambda_k).c_str(), fmt(r.spectrum.lambda2).c_str(),
                      fmt(r.spectrum.quotient).c_str(), r.unimodality.is_unimodal ? "yes" : "no");
        out << line;
    }
    out << "\n";
    for (const auto& c : checks) {
        out << (c.applicable ? (c.pass ? "[pass] " : "[FAIL] ") : "[skip] ") << c.prediction;
        if (!c.detail.empty()) out << "  (" << c.detail << ")";
        out << "\n";
    }
    return out.str();
}

} // namespace delaysync
