#pragma once

#include "delaysync/graph.hpp"

#include <string>

namespace delaysync {

/// Resolves a graph argument: either a builtin name (k2, complete5,
/// path3, ring6, star4, all with uniform weights 1/k) or a path to a JSON
/// graph file with fields k, kind and, for kind "custom", edges as
/// [i, j, weight] triples with 1-based node indices.
struct GraphSpec {
    WeightedGraph graph;
    std::string name;
};

GraphSpec parse_graph_spec(const std::string& spec);

/// Entry point behind the delaysync binary. Subcommands: spectrum,
/// simulate, sweep, theory, compare. Exit codes: 0 success, 2 config or
/// usage error, 3 runtime or divergence-dominated failure.
int run_cli(int argc, const char* const* argv);

} // namespace delaysync
