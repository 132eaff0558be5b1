#include "delaysync/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace delaysync {

WeightedGraph::WeightedGraph(int node_count, std::vector<Edge> edges)
    : k_(node_count), edges_(std::move(edges)) {
    if (k_ < 2) throw std::invalid_argument("graph: need at least 2 nodes");
    std::set<std::pair<int, int>> seen;
    for (auto& e : edges_) {
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.i < 0 || e.j >= k_) throw std::invalid_argument("graph: edge index out of range");
        if (e.i == e.j) throw std::invalid_argument("graph: self-loop");
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
            throw std::invalid_argument("graph: edge weight must be a nonnegative real");
        if (!seen.insert({e.i, e.j}).second) throw std::invalid_argument("graph: duplicate edge");
    }
}

double WeightedGraph::weighted_degree(int node) const {
    double d = 0.0;
    for (const auto& e : edges_)
        if (e.i == node || e.j == node) d += e.weight;
    return d;
}

double WeightedGraph::max_weighted_degree() const {
    double worst = 0.0;
    for (int i = 0; i < k_; ++i) worst = std::max(worst, weighted_degree(i));
    return worst;
}

WeightedGraph build_topology(TopologyKind kind, int node_count) {
    if (node_count < 2) throw std::invalid_argument("build_topology: need at least 2 nodes");
    return build_topology(kind, node_count, 1.0 / node_count);
}

WeightedGraph build_topology(TopologyKind kind, int node_count, double weight) {
    const int k = node_count;
    if (k < 2) throw std::invalid_argument("build_topology: need at least 2 nodes");
    std::vector<Edge> edges;
    switch (kind) {
    case TopologyKind::Complete:
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) edges.push_back({i, j, weight});
        break;
    case TopologyKind::Path:
        for (int i = 0; i + 1 < k; ++i) edges.push_back({i, i + 1, weight});
        break;
    case TopologyKind::Ring:
        // A 3-ring is K3; emitting {0,1},{1,2},{0,2} keeps the edge set unique.
        for (int i = 0; i + 1 < k; ++i) edges.push_back({i, i + 1, weight});
        if (k > 2) edges.push_back({0, k - 1, weight});
        break;
    case TopologyKind::Star:
        for (int i = 1; i < k; ++i) edges.push_back({0, i, weight});
        break;
    }
    return WeightedGraph(k, std::move(edges));
}

WeightedGraph normalize_max_degree(const WeightedGraph& g) {
    const double d = g.max_weighted_degree();
    if (d <= 0.0) throw std::invalid_argument("normalize_max_degree: all weights are zero");
    std::vector<Edge> edges = g.edges();
    for (auto& e : edges) e.weight /= d;
    return WeightedGraph(g.node_count(), std::move(edges));
}

Matrix laplacian(const WeightedGraph& g) {
    const int k = g.node_count();
    Matrix L(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    for (const auto& e : g.edges()) {
        L(e.i, e.j) -= e.weight;
        L(e.j, e.i) -= e.weight;
        L(e.i, e.i) += e.weight;
        L(e.j, e.j) += e.weight;
    }
    return L;
}

bool is_connected(const WeightedGraph& g) {
    const int k = g.node_count();
    std::vector<std::vector<int>> adj(k);
    for (const auto& e : g.edges()) {
        if (e.weight > 0.0) {
            adj[e.i].push_back(e.j);
            adj[e.j].push_back(e.i);
        }
    }
    std::vector<bool> visited(k, false);
    std::vector<int> stack{0};
    visited[0] = true;
    int seen = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (!visited[w]) {
                visited[w] = true;
                ++seen;
                stack.push_back(w);
            }
        }
    }
    return seen == k;
}

LaplacianSpectrum spectrum(const Matrix& L) {
    LaplacianSpectrum s;
    s.eigenvalues = jacobi_eigenvalues(L);
    const std::size_t k = s.eigenvalues.size();
    if (k < 2) throw std::invalid_argument("spectrum: Laplacian smaller than 2x2");
    const double scale = std::max(1.0, std::abs(s.eigenvalues.back()));
    if (std::abs(s.eigenvalues.front()) > 1e-10 * scale)
        throw std::domain_error("spectrum: smallest eigenvalue is not zero (not a Laplacian?)");
    s.lambda2 = s.eigenvalues[1];
    s.lambda_k = s.eigenvalues.back();
    if (s.lambda2 <= 1e-9 * scale)
        throw std::domain_error("spectrum: lambda2 ~ 0, graph is disconnected");
    s.quotient = s.lambda_k / s.lambda2;
    return s;
}

LaplacianSpectrum analyze(const WeightedGraph& g) {
    if (!is_connected(g)) throw std::domain_error("analyze: graph is not connected");
    LaplacianSpectrum s = spectrum(laplacian(g));
    // Graph search already decided connectivity; lambda2 > 0 is a consistency
    // assertion on the eigensolver, not the primary test.
    if (s.lambda2 <= 1e-9 * std::max(1.0, s.lambda_k))
        throw std::logic_error("analyze: connected graph with vanishing lambda2");
    return s;
}

const char* topology_name(TopologyKind kind) {
    switch (kind) {
    case TopologyKind::Complete: return "complete";
    case TopologyKind::Path: return "path";
    case TopologyKind::Ring: return "ring";
    case TopologyKind::Star: return "star";
    }
    return "?";
}

} // namespace delaysync
