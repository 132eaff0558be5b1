#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "delaysync/sweep.hpp"

#include <cmath>

using namespace delaysync;

namespace {

// Short settling times keep the unit tests quick; the acceptance suite
// runs the real defaults.
SyncConfig fast_sync() {
    SyncConfig cfg;
    cfg.transient = 60.0;
    cfg.window = 20.0;
    return cfg;
}

RegionMap synthetic_region(const std::vector<double>& gammas, const std::vector<double>& taus,
                           const std::vector<std::vector<int>>& columns) {
    RegionMap region;
    region.grid.gamma_values = gammas;
    region.grid.tau_values = taus;
    region.graph_name = "synthetic";
    region.model_name = "none";
    const std::size_t cells = gammas.size() * taus.size();
    region.synchronized.assign(cells, 0);
    region.diverged.assign(cells, 0);
    region.max_error.assign(cells, 0.0);
    for (std::size_t gi = 0; gi < gammas.size(); ++gi)
        for (std::size_t ti = 0; ti < taus.size(); ++ti)
            region.synchronized[region.index(gi, ti)] =
                static_cast<std::uint8_t>(columns[gi][ti]);
    return region;
}

TopologyResult synthetic_result(const std::string& name, double lambda2, double lambda_k,
                                double gamma_star, double tau_star) {
    TopologyResult r;
    r.name = name;
    r.spectrum.lambda2 = lambda2;
    r.spectrum.lambda_k = lambda_k;
    r.spectrum.quotient = lambda_k / lambda2;
    r.spectrum.eigenvalues = {0.0, lambda2, lambda_k};
    r.optimum = EmpiricalOptimum{gamma_star, tau_star, 0, 0};
    r.unimodality = {true, 0};
    r.gamma_cell = 0.25;
    r.tau_cell = 0.05;
    return r;
}

} // namespace

TEST_CASE("grid construction") {
    const SweepGrid grid = SweepGrid::from_ranges(0.5, 2.0, 0.5, 0.0, 0.2, 0.1);
    REQUIRE(grid.gamma_values.size() == 4);
    CHECK(grid.gamma_values.back() == doctest::Approx(2.0));
    REQUIRE(grid.tau_values.size() == 3);
    CHECK(grid.cells() == 12);

    CHECK_THROWS_AS(SweepGrid::from_ranges(2.0, 1.0, 0.5, 0.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(SweepGrid::from_ranges(0.0, 1.0, -0.5, 0.0, 1.0, 0.5), std::invalid_argument);

    SweepGrid bad;
    bad.gamma_values = {1.0, 1.0};
    bad.tau_values = {0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("single-cell sweep: strong coupling synchronizes K2") {
    auto model = make_model("hindmarsh-rose");
    const auto k2 = build_topology(TopologyKind::Complete, 2);
    SweepGrid grid;
    grid.gamma_values = {2.0};
    grid.tau_values = {0.0};
    SweepSettings settings;
    settings.sync = SyncConfig{}; // real defaults for the oracle cell
    settings.seed = 1;
    settings.workers = 2;
    const RegionMap region = run_sweep(model, k2, "k2", grid, settings);
    CHECK(region.cell_synchronized(0, 0));
    CHECK_FALSE(region.cell_diverged(0, 0));
}

TEST_CASE("gamma = 0 row never synchronizes") {
    auto model = make_model("hindmarsh-rose");
    const auto k2 = build_topology(TopologyKind::Complete, 2);
    SweepGrid grid;
    grid.gamma_values = {0.0};
    grid.tau_values = {0.0, 0.5};
    SweepSettings settings;
    settings.sync = fast_sync();
    settings.workers = 2;
    const RegionMap region = run_sweep(model, k2, "k2", grid, settings);
    CHECK_FALSE(region.cell_synchronized(0, 0));
    CHECK_FALSE(region.cell_synchronized(0, 1));
}

TEST_CASE("worker count does not change the region") {
    auto model = make_model("hindmarsh-rose");
    const auto k2 = build_topology(TopologyKind::Complete, 2);
    const SweepGrid grid = SweepGrid::from_ranges(1.0, 3.0, 1.0, 0.0, 0.6, 0.3);
    SweepSettings settings;
    settings.sync = fast_sync();
    settings.seed = 5;

    settings.workers = 1;
    const RegionMap serial = run_sweep(model, k2, "k2", grid, settings);
    settings.workers = 4;
    const RegionMap parallel = run_sweep(model, k2, "k2", grid, settings);

    CHECK(serial.synchronized == parallel.synchronized);
    CHECK(serial.diverged == parallel.diverged);
    CHECK(serial.max_error == parallel.max_error);
}

TEST_CASE("re-evaluating the same cells reproduces the verdicts") {
    auto model = make_model("hindmarsh-rose");
    const auto k2 = build_topology(TopologyKind::Complete, 2);
    SweepSettings settings;
    settings.sync = fast_sync();
    settings.workers = 2;

    const SweepGrid coarse = SweepGrid::from_ranges(2.0, 4.0, 2.0, 0.0, 0.8, 0.4);
    const SweepGrid fine = SweepGrid::from_ranges(2.0, 4.0, 2.0, 0.0, 0.8, 0.2);
    const RegionMap rc = run_sweep(model, k2, "k2", coarse, settings);
    const RegionMap rf = run_sweep(model, k2, "k2", fine, settings);
    // tau 0.0 -> fine index 0, 0.4 -> 2, 0.8 -> 4.
    for (std::size_t gi = 0; gi < coarse.grid.gamma_values.size(); ++gi) {
        for (std::size_t ti = 0; ti < coarse.grid.tau_values.size(); ++ti) {
            CHECK(rc.cell_synchronized(gi, ti) == rf.cell_synchronized(gi, 2 * ti));
            CHECK(rc.max_error[rc.index(gi, ti)] == rf.max_error[rf.index(gi, 2 * ti)]);
        }
    }
}

TEST_CASE("boundary curve with contiguity from zero") {
    const RegionMap region = synthetic_region(
        {1.0, 2.0, 3.0, 4.0}, {0.0, 0.1, 0.2, 0.3},
        {{1, 1, 1, 0}, {1, 1, 0, 1}, {0, 1, 1, 1}, {0, 0, 0, 0}});
    const BoundaryCurve curve = boundary_curve(region);
    REQUIRE(curve.points.size() == 2);
    CHECK(curve.points[0].gamma == 1.0);
    CHECK(curve.points[0].tau_max == doctest::Approx(0.2));
    CHECK(curve.points[1].gamma == 2.0);
    CHECK(curve.points[1].tau_max == doctest::Approx(0.1));
    // One isolated cell above the gap in column 2, three in column 3.
    CHECK(curve.holes == 4);
}

TEST_CASE("empirical optimum") {
    const RegionMap empty = synthetic_region({1.0, 2.0}, {0.0, 0.1},
                                             {{0, 0}, {0, 0}});
    CHECK_FALSE(empirical_optimum(empty).has_value());

    const RegionMap peaked = synthetic_region(
        {1.0, 2.0, 3.0}, {0.0, 0.1, 0.2, 0.3},
        {{1, 1, 0, 0}, {1, 1, 1, 1}, {1, 1, 1, 0}});
    const auto opt = empirical_optimum(peaked);
    REQUIRE(opt.has_value());
    CHECK(opt->gamma_star == 2.0);
    CHECK(opt->tau_star == doctest::Approx(0.3));

    // Ties go to the smallest gamma.
    const RegionMap tied = synthetic_region({1.0, 2.0}, {0.0, 0.1},
                                            {{1, 1}, {1, 1}});
    CHECK(empirical_optimum(tied)->gamma_star == 1.0);
}

TEST_CASE("unimodality score") {
    auto curve_of = [](const std::vector<double>& taus) {
        BoundaryCurve curve;
        for (std::size_t i = 0; i < taus.size(); ++i)
            curve.points.push_back({static_cast<double>(i), taus[i], i, 0});
        return curve;
    };

    const auto rising_falling = curve_of({0.1, 0.3, 0.5, 0.4, 0.2});
    CHECK(unimodality_score(rising_falling, 0.05).is_unimodal);
    CHECK(unimodality_score(rising_falling, 0.05).violations == 0);

    // A monotone rising curve peaks at the edge: degenerate unimodal.
    CHECK(unimodality_score(curve_of({0.1, 0.2, 0.3, 0.4}), 0.05).is_unimodal);

    // Two separated peaks two cells high.
    const auto twin_peaks = curve_of({0.1, 0.3, 0.1, 0.3, 0.1});
    const auto score = unimodality_score(twin_peaks, 0.05);
    CHECK_FALSE(score.is_unimodal);
    CHECK(score.violations >= 1);

    // One-cell wobble is allowed.
    CHECK(unimodality_score(curve_of({0.10, 0.30, 0.25, 0.30, 0.10}), 0.05).is_unimodal);

    CHECK_THROWS_AS(unimodality_score(curve_of({0.1, 0.2}), 0.05), std::invalid_argument);
}

TEST_CASE("compare_topologies mirrors the published orderings") {
    // Values as published for the two-node chain, the 3-path and the
    // 4-path with uniform 1/k weights.
    const std::vector<TopologyResult> results{
        synthetic_result("g1", 1.0, 1.0, 2.00, 4.25),
        synthetic_result("g2", 1.0 / 3.0, 1.0, 5.70, 1.10),
        synthetic_result("g4", 0.1464, 0.8536, 10.6, 0.33),
    };
    const ComparisonReport report = compare_topologies(results);
    CHECK(report.all_pass);
    const std::string table = report.render_table();
    CHECK(table.find("g1") != std::string::npos);
    CHECK(table.find("[FAIL]") == std::string::npos);

    // Isomorphic graphs: equal spectra, tau* within one grid cell.
    const std::vector<TopologyResult> twins{
        synthetic_result("a", 0.5, 1.5, 3.0, 2.00),
        synthetic_result("b", 0.5, 1.5, 3.0, 2.04),
    };
    CHECK(compare_topologies(twins).all_pass);

    // A larger quotient with a larger tau* must fail.
    const std::vector<TopologyResult> wrong{
        synthetic_result("low_q", 1.0, 1.0, 2.0, 1.0),
        synthetic_result("high_q", 1.0, 5.0, 4.0, 2.0),
    };
    CHECK_FALSE(compare_topologies(wrong).all_pass);

    CHECK_THROWS_AS(compare_topologies({results[0]}), std::invalid_argument);
}
