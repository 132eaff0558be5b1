#pragma once

#include "delaysync/dde.hpp"
#include "delaysync/graph.hpp"
#include "delaysync/models.hpp"

#include <cstdint>
#include <memory>

namespace delaysync {

/// k identical nodes coupled through delayed output differences:
///     u = -gamma (L kron I_m) y(t - tau).
/// Immutable once constructed; the constructor validates connectivity and
/// parameter ranges. The stacked state is node-major: node i occupies
/// components [i*n, (i+1)*n).
class NetworkSystem {
public:
    NetworkSystem(std::shared_ptr<const NodeModel> model, WeightedGraph graph, double gamma,
                  double tau);

    const NodeModel& model() const { return *model_; }
    std::shared_ptr<const NodeModel> model_ptr() const { return model_; }
    const WeightedGraph& graph() const { return graph_; }
    const Matrix& laplacian() const { return laplacian_; }
    double gamma() const { return gamma_; }
    double tau() const { return tau_; }
    int node_count() const { return graph_.node_count(); }
    int dimension() const { return node_count() * model_->state_dim(); }

private:
    std::shared_ptr<const NodeModel> model_;
    WeightedGraph graph_;
    Matrix laplacian_;
    double gamma_;
    double tau_;
};

/// u = -gamma (L kron I_m) y_delayed for stacked outputs (k*m entries).
std::vector<double> coupling_input(std::span<const double> y_delayed, const Matrix& L,
                                   double gamma, int output_dim);

/// Closed-loop dynamics as a DelaySystem: node vector fields evaluated at
/// the current state, coupling evaluated on the delayed outputs only.
std::unique_ptr<DelaySystem> as_delay_system(const NetworkSystem& net);

struct SyncConfig {
    double transient = 300.0; // discarded before measuring
    double window = 100.0;    // measurement span
    double epsilon = 1e-2;    // threshold on the worst pairwise state gap
    double step = 0.0;        // 0 = auto: min(tau/4, 0.01)
    int record_stride = 10;
    double overflow_guard = 1e9;
};

struct SyncVerdict {
    bool synchronized = false;
    double max_error = 0.0;
    bool diverged = false;
};

/// Worst pairwise full-state distance max_{t in window} max_{i<j} |x_i - x_j|
/// over the recorded samples with t in [t_begin, t_end].
double sync_error(const Trajectory& traj, int node_count, double t_begin, double t_end);

/// Integrates over [0, transient + window] and compares the post-transient
/// sync error against epsilon. Divergence always yields a negative verdict.
SyncVerdict is_synchronized(const NetworkSystem& net, const SyncConfig& cfg,
                            std::span<const double> x0);

/// True when every recorded sample past the transient satisfies |x| <= bound
/// (Euclidean norm of the stacked state) and the trajectory did not diverge.
bool boundedness_check(const Trajectory& traj, double bound, double transient = 0.0);

/// Reduced Laplacian: lower-right (k-1)x(k-1) block of M~ L M~^{-1} with
/// M~ = [[1, 0], [1, -I]]. Its spectrum is spec(L) minus one zero.
Matrix reduced_laplacian(const Matrix& L);

/// Default initial condition for synchronization tests: one seeded random
/// common point in [-1,1]^n, each node offset from it in a seeded random
/// direction with magnitude 0.5.
std::vector<double> default_initial_state(int node_count, int state_dim, std::uint64_t seed);

} // namespace delaysync
