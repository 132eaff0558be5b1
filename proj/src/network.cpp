#include "delaysync/network.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace delaysync {

NetworkSystem::NetworkSystem(std::shared_ptr<const NodeModel> model, WeightedGraph graph,
                             double gamma, double tau)
    : model_(std::move(model)), graph_(std::move(graph)), gamma_(gamma), tau_(tau) {
    if (!model_) throw std::invalid_argument("network: null model");
    if (!is_connected(graph_)) throw std::invalid_argument("network: graph is not connected");
    if (!std::isfinite(gamma_) || gamma_ < 0.0)
        throw std::invalid_argument("network: gamma must be finite and nonnegative");
    if (!std::isfinite(tau_) || tau_ < 0.0)
        throw std::invalid_argument("network: tau must be finite and nonnegative");
    laplacian_ = laplacian(graph_);
}

std::vector<double> coupling_input(std::span<const double> y_delayed, const Matrix& L,
                                   double gamma, int output_dim) {
    const std::size_t k = L.rows();
    if (L.cols() != k) throw std::invalid_argument("coupling_input: Laplacian not square");
    if (y_delayed.size() != k * static_cast<std::size_t>(output_dim))
        throw std::invalid_argument("coupling_input: output vector has wrong dimension");
    std::vector<double> u(y_delayed.size(), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double lij = L(i, j);
            if (lij == 0.0) continue;
            for (int c = 0; c < output_dim; ++c) u[i * output_dim + c] += lij * y_delayed[j * output_dim + c];
        }
    }
    for (double& v : u) v = -gamma * v;
    return u;
}

namespace {

class NetworkDynamics final : public DelaySystem {
public:
    explicit NetworkDynamics(const NetworkSystem& net)
        : model_(net.model_ptr()), laplacian_(net.laplacian()), gamma_(net.gamma()),
          tau_(net.tau()), k_(net.node_count()), n_(net.model().state_dim()),
          m_(net.model().output_dim()), u_(static_cast<std::size_t>(m_)) {}

    int dimension() const override { return k_ * n_; }
    double delay() const override { return tau_; }

    void derivative(double, std::span<const double> x, std::span<const double> x_delayed,
                    std::span<double> dx) const override {
        const int nz = n_ - m_;
        for (int i = 0; i < k_; ++i) {
            for (int c = 0; c < m_; ++c) {
                double acc = 0.0;
                for (int j = 0; j < k_; ++j) {
                    const double lij = laplacian_(i, j);
                    if (lij != 0.0) acc += lij * x_delayed[j * n_ + nz + c];
                }
                u_[c] = -gamma_ * acc;
            }
            model_->derivative(x.subspan(i * n_, n_), u_, dx.subspan(i * n_, n_));
        }
    }

private:
    std::shared_ptr<const NodeModel> model_;
    Matrix laplacian_;
    double gamma_;
    double tau_;
    int k_;
    int n_;
    int m_;
    mutable std::vector<double> u_; // per-instance scratch; instances are single-threaded
};

} // namespace

std::unique_ptr<DelaySystem> as_delay_system(const NetworkSystem& net) {
    return std::make_unique<NetworkDynamics>(net);
}

double sync_error(const Trajectory& traj, int node_count, double t_begin, double t_end) {
    if (node_count < 2) throw std::invalid_argument("sync_error: need at least 2 nodes");
    if (traj.dimension % node_count != 0)
        throw std::invalid_argument("sync_error: trajectory dimension not divisible by node count");
    if (!(t_begin <= t_end)) throw std::invalid_argument("sync_error: empty window");
    const int n = traj.dimension / node_count;
    double worst = -1.0;
    for (std::size_t s = 0; s < traj.samples(); ++s) {
        const double t = traj.times[s];
        if (t < t_begin || t > t_end) continue;
        const auto x = traj.state(s);
        for (int i = 0; i < node_count; ++i) {
            for (int j = i + 1; j < node_count; ++j) {
                double d2 = 0.0;
                for (int c = 0; c < n; ++c) {
                    const double d = x[i * n + c] - x[j * n + c];
                    d2 += d * d;
                }
                worst = std::max(worst, d2);
            }
        }
    }
    if (worst < 0.0) throw std::invalid_argument("sync_error: no samples in window");
    return std::sqrt(worst);
}

SyncVerdict is_synchronized(const NetworkSystem& net, const SyncConfig& cfg,
                            std::span<const double> x0) {
    if (!(cfg.transient > 0.0 && cfg.window > 0.0 && cfg.epsilon > 0.0))
        throw std::invalid_argument("sync config: transient, window, epsilon must be positive");
    IntegratorConfig icfg;
    icfg.step = cfg.step > 0.0 ? cfg.step
                               : (net.tau() > 0.0 ? std::min(net.tau() / 4.0, 0.01) : 0.01);
    icfg.t_end = cfg.transient + cfg.window;
    icfg.record_stride = cfg.record_stride;
    icfg.overflow_guard = cfg.overflow_guard;

    const auto sys = as_delay_system(net);
    const Trajectory traj = integrate(*sys, x0, icfg);

    SyncVerdict verdict;
    verdict.diverged = traj.diverged;
    if (traj.diverged) {
        verdict.synchronized = false;
        verdict.max_error = std::numeric_limits<double>::infinity();
        return verdict;
    }
    verdict.max_error =
        sync_error(traj, net.node_count(), cfg.transient, cfg.transient + cfg.window);
    verdict.synchronized = verdict.max_error < cfg.epsilon;
    return verdict;
}

bool boundedness_check(const Trajectory& traj, double bound, double transient) {
    if (traj.diverged) return false;
    for (std::size_t s = 0; s < traj.samples(); ++s) {
        if (traj.times[s] < transient) continue;
        double norm2 = 0.0;
        for (double v : traj.state(s)) norm2 += v * v;
        if (std::sqrt(norm2) > bound) return false;
    }
    return true;
}

Matrix reduced_laplacian(const Matrix& L) {
    const std::size_t k = L.rows();
    if (k < 2 || L.cols() != k) throw std::invalid_argument("reduced_laplacian: need a k>=2 square Laplacian");
    // M~ = [[1, 0], [1, -I]] is an involution, so M~ L M~^{-1} = M~ L M~.
    Matrix m(k, k);
    m(0, 0) = 1.0;
    for (std::size_t i = 1; i < k; ++i) {
        m(i, 0) = 1.0;
        m(i, i) = -1.0;
    }
    const Matrix similar = m * L * m;
    Matrix reduced(k - 1, k - 1);
    for (std::size_t i = 1; i < k; ++i)
        for (std::size_t j = 1; j < k; ++j) reduced(i - 1, j - 1) = similar(i, j);
    return reduced;
}

namespace {

class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { // [0, 1), 53-bit, engine-portable
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace

std::vector<double> default_initial_state(int node_count, int state_dim, std::uint64_t seed) {
    if (node_count < 1 || state_dim < 1)
        throw std::invalid_argument("initial state: bad dimensions");
    SeededRng rng(seed);
    std::vector<double> common(state_dim);
    for (double& v : common) v = 2.0 * rng.uniform() - 1.0;

    std::vector<double> x0(static_cast<std::size_t>(node_count) * state_dim);
    for (int i = 0; i < node_count; ++i) {
        std::vector<double> dir(state_dim);
        double norm = 0.0;
        do {
            norm = 0.0;
            for (double& v : dir) {
                v = rng.gaussian();
                norm += v * v;
            }
            norm = std::sqrt(norm);
        } while (norm < 1e-3);
        for (int c = 0; c < state_dim; ++c)
            x0[static_cast<std::size_t>(i) * state_dim + c] = common[c] + 0.5 * dir[c] / norm;
    }
    return x0;
}

} // namespace delaysync
