#pragma once

#include "delaysync/linalg.hpp"

#include <string>
#include <vector>

namespace delaysync {

/// One undirected edge, stored once with i < j (0-based node indices).
struct Edge {
    int i = 0;
    int j = 0;
    double weight = 0.0;
};

enum class TopologyKind { Complete, Path, Ring, Star };

/// Simple weighted undirected graph. Immutable after construction; the
/// constructor rejects self-loops, duplicate edges, negative weights and
/// k < 2.
class WeightedGraph {
public:
    WeightedGraph(int node_count, std::vector<Edge> edges);

    int node_count() const { return k_; }
    const std::vector<Edge>& edges() const { return edges_; }

    double weighted_degree(int node) const;
    double max_weighted_degree() const;

private:
    int k_;
    std::vector<Edge> edges_;
};

/// Eigenvalues of a graph Laplacian, sorted nondecreasing, with the
/// extremes and their quotient extracted.
struct LaplacianSpectrum {
    std::vector<double> eigenvalues;
    double lambda2 = 0.0;
    double lambda_k = 0.0;
    double quotient = 0.0; // lambda_k / lambda2, >= 1 for connected graphs
};

/// Builds one of the stock shapes with uniform weights 1/k.
WeightedGraph build_topology(TopologyKind kind, int node_count);
/// Same, with one explicit weight on every edge.
WeightedGraph build_topology(TopologyKind kind, int node_count, double weight);

/// Rescales all weights by a common factor so the maximum weighted degree
/// becomes exactly 1. Throws if every weight is zero.
WeightedGraph normalize_max_degree(const WeightedGraph& g);

/// L = D - A. Rows sum to zero by construction.
Matrix laplacian(const WeightedGraph& g);

/// Connectivity over edges with strictly positive weight (graph search).
bool is_connected(const WeightedGraph& g);

/// Full spectrum of a symmetric Laplacian via the Jacobi solver. Throws if
/// the matrix is visibly asymmetric or if lambda2 indicates a disconnected
/// graph (lambda2 <= 1e-9 * scale).
LaplacianSpectrum spectrum(const Matrix& L);

/// Convenience: laplacian + spectrum with a connectivity cross-check
/// (graph search is the primary test, lambda2 > tolerance the assertion).
LaplacianSpectrum analyze(const WeightedGraph& g);

const char* topology_name(TopologyKind kind);

} // namespace delaysync
