#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "delaysync/graph.hpp"

#include <cmath>
#include <random>

using namespace delaysync;

namespace {

// Independent eigenvalue oracle for k <= 4: roots of det(L - x I) located
// by sign changes on a fine grid and polished by bisection. The
// determinant is a direct cofactor expansion, nothing shared with the
// Jacobi path.
double det_minor(const Matrix& a, double x) {
    const std::size_t n = a.rows();
    auto e = [&](std::size_t i, std::size_t j) { return a(i, j) - (i == j ? x : 0.0); };
    if (n == 1) return e(0, 0);
    if (n == 2) return e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
    if (n == 3)
        return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
               e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
               e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
    // n == 4: expand along the first row with 3x3 cofactors of the
    // shifted matrix.
    Matrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = e(i, j);
    double total = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        Matrix sub(3, 3);
        for (std::size_t i = 1; i < 4; ++i) {
            std::size_t jj = 0;
            for (std::size_t j = 0; j < 4; ++j) {
                if (j == c) continue;
                sub(i - 1, jj++) = m(i, j);
            }
        }
        const double cof = sub(0, 0) * (sub(1, 1) * sub(2, 2) - sub(1, 2) * sub(2, 1)) -
                           sub(0, 1) * (sub(1, 0) * sub(2, 2) - sub(1, 2) * sub(2, 0)) +
                           sub(0, 2) * (sub(1, 0) * sub(2, 1) - sub(1, 1) * sub(2, 0));
        total += (c % 2 == 0 ? 1.0 : -1.0) * m(0, c) * cof;
    }
    return total;
}

std::vector<double> charpoly_eigenvalues(const Matrix& L) {
    const std::size_t n = L.rows();
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) radius += std::abs(L(i, j));
        hi = std::max(hi, L(i, i) + radius);
    }
    const double lo = -0.1 * std::max(1.0, hi);
    hi = hi + 0.1 * std::max(1.0, hi);

    std::vector<double> roots;
    const int grid = 20000;
    double prev_x = lo;
    double prev_f = det_minor(L, lo);
    for (int g = 1; g <= grid; ++g) {
        const double x = lo + (hi - lo) * g / grid;
        const double f = det_minor(L, x);
        if (prev_f == 0.0) roots.push_back(prev_x);
        if (prev_f * f < 0.0) {
            double a = prev_x, b = x;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = det_minor(L, mid);
                if (det_minor(L, a) * fm <= 0.0)
                    b = mid;
                else
                    a = mid;
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = f;
    }
    return roots;
}

WeightedGraph random_connected_graph(std::mt19937_64& rng, int k) {
    std::uniform_real_distribution<double> weight(0.1, 2.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (;;) {
        std::vector<Edge> edges;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (coin(rng) < 0.5) edges.push_back({i, j, weight(rng)});
        if (edges.empty()) continue;
        WeightedGraph g(k, std::move(edges));
        if (is_connected(g)) return g;
    }
}

} // namespace

TEST_CASE("build_topology shapes and weights") {
    const auto k2 = build_topology(TopologyKind::Complete, 2);
    REQUIRE(k2.edges().size() == 1);
    CHECK(k2.edges()[0].weight == doctest::Approx(0.5).epsilon(1e-15));

    const auto p3 = build_topology(TopologyKind::Path, 3);
    REQUIRE(p3.edges().size() == 2);
    CHECK(p3.edges()[0].i == 0);
    CHECK(p3.edges()[0].j == 1);
    CHECK(p3.edges()[1].i == 1);
    CHECK(p3.edges()[1].j == 2);
    for (const auto& e : p3.edges()) CHECK(e.weight == doctest::Approx(1.0 / 3.0));

    // A 3-ring is K3.
    const auto r3 = build_topology(TopologyKind::Ring, 3);
    const auto c3 = build_topology(TopologyKind::Complete, 3);
    CHECK(r3.edges().size() == c3.edges().size());

    const auto s4 = build_topology(TopologyKind::Star, 4);
    CHECK(s4.edges().size() == 3);
    for (const auto& e : s4.edges()) CHECK(e.i == 0);
}

TEST_CASE("graph construction errors") {
    CHECK_THROWS_AS(build_topology(TopologyKind::Complete, 1), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph(1, {}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 1, 1.0}, {1, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph(3, {{0, 5, 1.0}}), std::invalid_argument);
}

TEST_CASE("normalize_max_degree") {
    const auto k2 = normalize_max_degree(build_topology(TopologyKind::Complete, 2));
    CHECK(k2.edges()[0].weight == doctest::Approx(1.0).epsilon(1e-15));

    // path(3) at 1/3: the middle node has degree 2/3, so weights become 1/2.
    const auto p3 = normalize_max_degree(build_topology(TopologyKind::Path, 3));
    for (const auto& e : p3.edges()) CHECK(e.weight == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p3.max_weighted_degree() == doctest::Approx(1.0).epsilon(1e-14));

    // Idempotent.
    const auto again = normalize_max_degree(p3);
    for (std::size_t i = 0; i < p3.edges().size(); ++i)
        CHECK(again.edges()[i].weight == p3.edges()[i].weight);

    CHECK_THROWS_AS(normalize_max_degree(WeightedGraph(2, {{0, 1, 0.0}})),
                    std::invalid_argument);
}

TEST_CASE("laplacian assembly") {
    const Matrix L2 = laplacian(build_topology(TopologyKind::Complete, 2));
    CHECK(L2(0, 0) == doctest::Approx(0.5));
    CHECK(L2(0, 1) == doctest::Approx(-0.5));
    CHECK(L2(1, 0) == doctest::Approx(-0.5));
    CHECK(L2(1, 1) == doctest::Approx(0.5));

    const Matrix L3 = laplacian(build_topology(TopologyKind::Path, 3));
    const double w = 1.0 / 3.0;
    CHECK(L3(0, 0) == doctest::Approx(w));
    CHECK(L3(1, 1) == doctest::Approx(2 * w));
    CHECK(L3(0, 2) == doctest::Approx(0.0));
    CHECK(L3(1, 0) == doctest::Approx(-w));

    // Row sums vanish for random graphs.
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = random_connected_graph(rng, 2 + static_cast<int>(rng() % 5));
        const Matrix L = laplacian(g);
        for (std::size_t i = 0; i < L.rows(); ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < L.cols(); ++j) row += L(i, j);
            CHECK(std::abs(row) < 1e-12);
        }
        CHECK(max_asymmetry(L) == 0.0);
    }
}

TEST_CASE("spectrum against hand values and Jacobi quality") {
    const auto s2 = analyze(build_topology(TopologyKind::Complete, 2));
    CHECK(s2.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s2.lambda2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s2.quotient == doctest::Approx(1.0).epsilon(1e-12));

    const auto s3 = analyze(build_topology(TopologyKind::Path, 3));
    CHECK(s3.lambda2 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(s3.lambda_k == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s3.quotient == doctest::Approx(3.0).epsilon(1e-12));

    const auto s4 = analyze(build_topology(TopologyKind::Path, 4));
    CHECK(s4.lambda2 == doctest::Approx((2.0 - std::sqrt(2.0)) / 4.0).epsilon(1e-12));
    CHECK(s4.eigenvalues[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s4.lambda_k == doctest::Approx((2.0 + std::sqrt(2.0)) / 4.0).epsilon(1e-12));
    CHECK(std::abs(s4.lambda2 - 0.1464) < 5e-5);
    CHECK(std::abs(s4.lambda_k - 0.8536) < 5e-5);
}

TEST_CASE("jacobi vs characteristic polynomial roots for k <= 4") {
    std::mt19937_64 rng(11);
    int compared = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 3);
        const auto g = random_connected_graph(rng, k);
        const Matrix L = laplacian(g);
        const auto jac = jacobi_eigenvalues(L);
        const auto oracle = charpoly_eigenvalues(L);
        if (oracle.size() != jac.size()) continue; // clustered roots: no clean brackets
        ++compared;
        for (std::size_t i = 0; i < jac.size(); ++i)
            CHECK(std::abs(jac[i] - oracle[i]) < 1e-10);
    }
    CHECK(compared >= 25);
}

TEST_CASE("is_connected") {
    CHECK(is_connected(build_topology(TopologyKind::Complete, 2)));
    CHECK(is_connected(build_topology(TopologyKind::Path, 5)));
    const WeightedGraph disjoint(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    CHECK_FALSE(is_connected(disjoint));
    CHECK_THROWS_AS(analyze(disjoint), std::domain_error);
    // Zero-weight edges do not connect.
    const WeightedGraph zero_bridge(3, {{0, 1, 1.0}, {1, 2, 0.0}});
    CHECK_FALSE(is_connected(zero_bridge));
}

TEST_CASE("spectral invariants on random graphs") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 6);
        const auto g = random_connected_graph(rng, k);
        const auto eig = jacobi_eigenvalues(laplacian(g));
        CHECK(std::abs(eig[0]) < 1e-10);
        for (double e : eig) CHECK(e > -1e-10);
        CHECK(eig[1] > 1e-9); // exactly one zero eigenvalue when connected

        // Scaling all weights by c scales every eigenvalue by c.
        for (double c : {0.5, 2.0, 10.0}) {
            std::vector<Edge> scaled = g.edges();
            for (auto& e : scaled) e.weight *= c;
            const auto eig_scaled =
                jacobi_eigenvalues(laplacian(WeightedGraph(g.node_count(), scaled)));
            for (std::size_t i = 0; i < eig.size(); ++i)
                CHECK(eig_scaled[i] == doctest::Approx(c * eig[i]).epsilon(1e-9));
        }
    }

    // Disconnected graphs have at least two vanishing eigenvalues.
    const auto eig = jacobi_eigenvalues(laplacian(WeightedGraph(4, {{0, 1, 1.0}, {2, 3, 1.0}})));
    CHECK(std::abs(eig[0]) < 1e-12);
    CHECK(std::abs(eig[1]) < 1e-12);
}

TEST_CASE("complete graphs have quotient 1") {
    for (int k = 2; k <= 6; ++k) {
        const auto g = normalize_max_degree(build_topology(TopologyKind::Complete, k));
        const auto s = analyze(g);
        CHECK(s.quotient == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("jacobi rejects asymmetric input") {
    Matrix bad(2, 2);
    bad(0, 1) = 1.0;
    bad(1, 0) = 0.5;
    CHECK_THROWS_AS(jacobi_eigenvalues(bad), std::invalid_argument);
}
