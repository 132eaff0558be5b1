#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace delaysync {

/// Right-hand side of a delay differential equation with one constant
/// delay: dx/dt = f(t, x(t), x(t - tau)). For tau = 0 the integrator
/// passes the current (stage) state as the delayed argument.
///
/// Instances are used single-threadedly by one integrator; run one
/// instance per concurrent integration.
class DelaySystem {
public:
    virtual ~DelaySystem() = default;
    virtual int dimension() const = 0;
    virtual double delay() const = 0;
    virtual void derivative(double t, std::span<const double> x,
                            std::span<const double> x_delayed, std::span<double> dx) const = 0;
};

/// Uniform-grid ring buffer of past (state, derivative) pairs used to
/// evaluate delayed arguments. Nodes sit at base_time + index * step;
/// queries between nodes use cubic Hermite interpolation (exact on grid
/// nodes and for cubic data). Queries within 1e-9 of a node, relative to
/// the step, return the stored value bit-exactly.
class HistoryBuffer {
public:
    /// Constant initial function x(s) = x0 on [-tau, 0]; node derivatives
    /// are seeded by evaluating the system on that constant history.
    HistoryBuffer(const DelaySystem& sys, std::span<const double> x0, double tau, double step);

    /// Bare buffer starting with a single node (state, derivative) at
    /// time t0; grows via push(). Used by tests and custom drivers.
    HistoryBuffer(int dimension, double t0, double step, std::size_t capacity,
                  std::span<const double> x, std::span<const double> dx);

    /// Appends the node at newest_time() + step, evicting the oldest
    /// entry once the capacity is reached.
    void push(std::span<const double> x, std::span<const double> dx);

    /// State at an arbitrary time inside the stored window.
    void state_at(double t, std::span<double> out) const;

    double oldest_time() const;
    double newest_time() const;
    double step() const { return step_; }
    int dimension() const { return dim_; }
    std::size_t size() const { return count_; }
    std::span<const double> newest_derivative() const;

private:
    std::span<const double> node_state(long index) const;
    std::span<const double> node_derivative(long index) const;
    std::span<double> slot(std::vector<double>& store, long index);

    int dim_ = 0;
    double step_ = 0.0;
    double base_time_ = 0.0; // time of node index 0
    long oldest_ = 0;
    long newest_ = -1;
    std::size_t capacity_ = 0;
    std::size_t count_ = 0;
    std::vector<double> states_;
    std::vector<double> derivs_;
};

struct IntegratorConfig {
    double step = 0.01;
    double t_end = 1.0;
    int record_stride = 1;
    double overflow_guard = 1e9;
};

struct Trajectory {
    int dimension = 0;
    double step = 0.0;
    double delay = 0.0;
    int record_stride = 1;
    std::vector<double> times;
    std::vector<double> states; // times.size() * dimension, row-major
    bool diverged = false;
    double divergence_time = 0.0;

    std::size_t samples() const { return times.size(); }
    std::span<const double> state(std::size_t i) const {
        return std::span<const double>(states).subspan(i * dimension, dimension);
    }
};

/// Classical fixed-step RK4 from t = 0 with delayed arguments supplied by
/// cubic Hermite interpolation of the history buffer. Requires
/// step <= tau when tau > 0 so every stage's delayed argument lies in the
/// already-computed past. States beyond the overflow guard stop the run
/// with the diverged flag set and a partial trajectory returned.
Trajectory integrate(const DelaySystem& sys, std::span<const double> x0,
                     const IntegratorConfig& cfg);

} // namespace delaysync
