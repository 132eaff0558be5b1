#pragma once

#include "delaysync/network.hpp"

#include <optional>
#include <string>

namespace delaysync {

/// Strictly ascending, finite, nonempty coordinate lists for the
/// (gamma, tau) plane. Values generated from a:b:step ranges are
/// a + i*step, truncated at b (inclusive within one part in 1e-9).
struct SweepGrid {
    std::vector<double> gamma_values;
    std::vector<double> tau_values;

    static SweepGrid from_ranges(double gamma_min, double gamma_max, double gamma_step,
                                 double tau_min, double tau_max, double tau_step);
    static std::vector<double> range(double lo, double hi, double step);

    std::size_t cells() const { return gamma_values.size() * tau_values.size(); }
    void validate() const;
};

struct SweepSettings {
    SyncConfig sync;
    std::uint64_t seed = 1;
    int num_seeds = 1; // > 1: verdict is the AND over seeds seed..seed+n-1
    int workers = 1;
};

/// Empirical synchronization map: one verdict per grid cell, all cells
/// evaluated with identical initial conditions. Layout is gamma-major:
/// cell (gi, ti) lives at gi * tau_values.size() + ti.
struct RegionMap {
    SweepGrid grid;
    std::vector<std::uint8_t> synchronized;
    std::vector<std::uint8_t> diverged;
    std::vector<double> max_error;

    std::string graph_name;
    std::string model_name;
    std::uint64_t seed = 1;
    int num_seeds = 1;
    SyncConfig sync;

    std::size_t index(std::size_t gi, std::size_t ti) const {
        return gi * grid.tau_values.size() + ti;
    }
    bool cell_synchronized(std::size_t gi, std::size_t ti) const {
        return synchronized[index(gi, ti)] != 0;
    }
    bool cell_diverged(std::size_t gi, std::size_t ti) const {
        return diverged[index(gi, ti)] != 0;
    }
    bool any_diverged() const;
};

/// Evaluates every cell with network::is_synchronized on a fixed-size
/// worker pool. The result is independent of the worker count: cells are
/// written to preallocated slots and each cell's arithmetic is
/// self-contained. Per-cell divergence is recorded, never fatal.
RegionMap run_sweep(std::shared_ptr<const NodeModel> model, const WeightedGraph& graph,
                    std::string graph_name, const SweepGrid& grid, const SweepSettings& settings);

struct BoundaryPoint {
    double gamma = 0.0;
    double tau_max = 0.0;
    std::size_t gamma_index = 0;
    std::size_t tau_index = 0;
};

/// tau_max(gamma) under the contiguity-from-zero rule: the top of the
/// lowest contiguous synchronized block in each column. Columns whose
/// bottom cell is desynchronized are omitted; synchronized cells above a
/// gap are counted as holes (numerical noise, not region).
struct BoundaryCurve {
    std::vector<BoundaryPoint> points;
    long holes = 0;
};

BoundaryCurve boundary_curve(const RegionMap& region);

struct EmpiricalOptimum {
    double gamma_star = 0.0;
    double tau_star = 0.0;
    std::size_t gamma_index = 0;
    std::size_t tau_index = 0;
};

/// The boundary-curve cell with the largest tau; ties go to the smallest
/// gamma. Empty when no cell synchronized.
std::optional<EmpiricalOptimum> empirical_optimum(const RegionMap& region);

/// Rise-then-fall test with a one-grid-cell noise allowance: only moves
/// larger than one tau grid cell count as significant, and any significant
/// rise after the first significant fall is a violation.
struct UnimodalityScore {
    bool is_unimodal = false;
    int violations = 0;
};

UnimodalityScore unimodality_score(const BoundaryCurve& curve, double tau_cell);

/// Everything compare_topologies needs about one finished sweep.
struct TopologyResult {
    std::string name;
    LaplacianSpectrum spectrum;
    std::optional<EmpiricalOptimum> optimum;
    UnimodalityScore unimodality;
    double gamma_cell = 0.0;
    double tau_cell = 0.0;
};

TopologyResult summarize_region(const RegionMap& region, const LaplacianSpectrum& spectrum);

struct PairwiseCheck {
    std::string a;
    std::string b;
    std::string prediction; // human-readable expected relation
    bool applicable = true; // gamma claims can be incomparable
    bool pass = false;
    std::string detail;
};

struct ComparisonReport {
    std::vector<TopologyResult> topologies;
    std::vector<PairwiseCheck> checks;
    bool all_pass = true;

    std::string render_table() const;
};

/// Tabulates (gamma*, tau*, lambda2, lambda_k, q) per topology and checks
/// every pairwise spectral prediction: equal quotients give equal tau*
/// (within tau_equal_rel_tol plus one grid cell), a larger quotient gives
/// a strictly smaller tau*, and the smallest-quotient group attains the
/// maximum tau*.
ComparisonReport compare_topologies(const std::vector<TopologyResult>& results,
                                    double tau_equal_rel_tol = 0.10);

} // namespace delaysync
