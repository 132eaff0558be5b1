#include "delaysync/dde.hpp"

#include <cmath>
#include <stdexcept>

namespace delaysync {

namespace {

long history_intervals(double tau, double step) {
    return static_cast<long>(std::ceil(tau / step - 1e-12));
}

} // namespace

HistoryBuffer::HistoryBuffer(const DelaySystem& sys, std::span<const double> x0, double tau,
                             double step) {
    if (tau < 0.0) throw std::invalid_argument("history: delay must be nonnegative");
    if (!(step > 0.0)) throw std::invalid_argument("history: step must be positive");
    dim_ = static_cast<int>(x0.size());
    step_ = step;
    const long intervals = tau > 0.0 ? history_intervals(tau, step) : 0;
    base_time_ = -static_cast<double>(intervals) * step;
    capacity_ = static_cast<std::size_t>(intervals) + 2;
    states_.assign(capacity_ * dim_, 0.0);
    derivs_.assign(capacity_ * dim_, 0.0);

    std::vector<double> dx(dim_);
    for (long idx = 0; idx <= intervals; ++idx) {
        const double t = base_time_ + static_cast<double>(idx) * step_;
        sys.derivative(t, x0, x0, dx);
        auto xs = slot(states_, idx);
        auto ds = slot(derivs_, idx);
        std::copy(x0.begin(), x0.end(), xs.begin());
        std::copy(dx.begin(), dx.end(), ds.begin());
    }
    oldest_ = 0;
    newest_ = intervals;
    count_ = static_cast<std::size_t>(intervals) + 1;
}

HistoryBuffer::HistoryBuffer(int dimension, double t0, double step, std::size_t capacity,
                             std::span<const double> x, std::span<const double> dx) {
    if (!(step > 0.0)) throw std::invalid_argument("history: step must be positive");
    if (capacity < 2) throw std::invalid_argument("history: capacity must be at least 2");
    dim_ = dimension;
    step_ = step;
    base_time_ = t0;
    capacity_ = capacity;
    states_.assign(capacity_ * dim_, 0.0);
    derivs_.assign(capacity_ * dim_, 0.0);
    auto xs = slot(states_, 0);
    auto ds = slot(derivs_, 0);
    std::copy(x.begin(), x.end(), xs.begin());
    std::copy(dx.begin(), dx.end(), ds.begin());
    oldest_ = 0;
    newest_ = 0;
    count_ = 1;
}

std::span<double> HistoryBuffer::slot(std::vector<double>& store, long index) {
    const long cap = static_cast<long>(capacity_);
    const long pos = ((index % cap) + cap) % cap;
    return std::span<double>(store).subspan(static_cast<std::size_t>(pos) * dim_, dim_);
}

std::span<const double> HistoryBuffer::node_state(long index) const {
    const long cap = static_cast<long>(capacity_);
    const long pos = ((index % cap) + cap) % cap;
    return std::span<const double>(states_).subspan(static_cast<std::size_t>(pos) * dim_, dim_);
}

std::span<const double> HistoryBuffer::node_derivative(long index) const {
    const long cap = static_cast<long>(capacity_);
    const long pos = ((index % cap) + cap) % cap;
    return std::span<const double>(derivs_).subspan(static_cast<std::size_t>(pos) * dim_, dim_);
}

void HistoryBuffer::push(std::span<const double> x, std::span<const double> dx) {
    ++newest_;
    auto xs = slot(states_, newest_);
    auto ds = slot(derivs_, newest_);
    std::copy(x.begin(), x.end(), xs.begin());
    std::copy(dx.begin(), dx.end(), ds.begin());
    if (count_ < capacity_)
        ++count_;
    else
        ++oldest_;
}

double HistoryBuffer::oldest_time() const {
    return base_time_ + static_cast<double>(oldest_) * step_;
}

double HistoryBuffer::newest_time() const {
    return base_time_ + static_cast<double>(newest_) * step_;
}

std::span<const double> HistoryBuffer::newest_derivative() const {
    return node_derivative(newest_);
}

void HistoryBuffer::state_at(double t, std::span<double> out) const {
    const double u = (t - base_time_) / step_;
    const double rounded = std::round(u);
    const double node_tol = 1e-9 * std::max(1.0, std::abs(u));

    if (std::abs(u - rounded) <= node_tol) {
        const long idx = static_cast<long>(rounded);
        if (idx < oldest_ || idx > newest_)
            throw std::out_of_range("history: query outside stored window");
        auto xs = node_state(idx);
        std::copy(xs.begin(), xs.end(), out.begin());
        return;
    }

    const long lo = static_cast<long>(std::floor(u));
    if (lo < oldest_ || lo + 1 > newest_)
        throw std::out_of_range("history: query outside stored window");

    const double s = u - static_cast<double>(lo);
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;

    auto x0 = node_state(lo);
    auto x1 = node_state(lo + 1);
    auto d0 = node_derivative(lo);
    auto d1 = node_derivative(lo + 1);
    for (int c = 0; c < dim_; ++c)
        out[c] = h00 * x0[c] + h01 * x1[c] + step_ * (h10 * d0[c] + h11 * d1[c]);
}

namespace {

bool state_ok(std::span<const double> x, double guard) {
    for (double v : x)
        if (!std::isfinite(v) || std::abs(v) > guard) return false;
    return true;
}

void rk4_combine(std::span<const double> x, double h, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4, std::span<double> out) {
    const double w = h / 6.0;
    for (std::size_t c = 0; c < x.size(); ++c)
        out[c] = x[c] + w * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
}

void axpy_state(std::span<const double> x, double a, std::span<const double> k,
                std::span<double> out) {
    for (std::size_t c = 0; c < x.size(); ++c) out[c] = x[c] + a * k[c];
}

} // namespace

Trajectory integrate(const DelaySystem& sys, std::span<const double> x0,
                     const IntegratorConfig& cfg) {
    const int dim = sys.dimension();
    const double tau = sys.delay();
    const double h = cfg.step;
    if (static_cast<int>(x0.size()) != dim)
        throw std::invalid_argument("integrate: initial state has wrong dimension");
    if (!(h > 0.0)) throw std::invalid_argument("integrate: step must be positive");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be positive");
    if (cfg.record_stride < 1) throw std::invalid_argument("integrate: record_stride must be >= 1");
    if (tau > 0.0 && h > tau * (1.0 + 1e-12))
        throw std::invalid_argument("integrate: step must not exceed the delay");
    for (double v : x0)
        if (!std::isfinite(v)) throw std::invalid_argument("integrate: non-finite initial state");

    const long nsteps = std::max<long>(1, std::llround(cfg.t_end / h));

    Trajectory traj;
    traj.dimension = dim;
    traj.step = h;
    traj.delay = tau;
    traj.record_stride = cfg.record_stride;
    traj.times.reserve(static_cast<std::size_t>(nsteps / cfg.record_stride) + 2);
    traj.states.reserve((static_cast<std::size_t>(nsteps / cfg.record_stride) + 2) * dim);

    auto record = [&](double t, std::span<const double> x) {
        traj.times.push_back(t);
        traj.states.insert(traj.states.end(), x.begin(), x.end());
    };

    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> xs(dim), xnew(dim);
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim);
    record(0.0, x);

    if (tau == 0.0) {
        for (long i = 0; i < nsteps; ++i) {
            const double t = static_cast<double>(i) * h;
            sys.derivative(t, x, x, k1);
            axpy_state(x, 0.5 * h, k1, xs);
            sys.derivative(t + 0.5 * h, xs, xs, k2);
            axpy_state(x, 0.5 * h, k2, xs);
            sys.derivative(t + 0.5 * h, xs, xs, k3);
            axpy_state(x, h, k3, xs);
            sys.derivative(t + h, xs, xs, k4);
            rk4_combine(x, h, k1, k2, k3, k4, xnew);
            if (!state_ok(xnew, cfg.overflow_guard)) {
                traj.diverged = true;
                traj.divergence_time = static_cast<double>(i + 1) * h;
                return traj;
            }
            x = xnew;
            if ((i + 1) % cfg.record_stride == 0 || i + 1 == nsteps)
                record(static_cast<double>(i + 1) * h, x);
        }
        return traj;
    }

    HistoryBuffer history(sys, x0, tau, h);
    std::vector<double> xd_mid(dim), xd_end(dim), dnew(dim);
    // k1 at each node equals the derivative stored when the node was
    // pushed, so each step costs four fresh derivative evaluations.
    std::vector<double> dcur(history.newest_derivative().begin(),
                             history.newest_derivative().end());

    for (long i = 0; i < nsteps; ++i) {
        const double t = static_cast<double>(i) * h;
        k1 = dcur;
        history.state_at(t + 0.5 * h - tau, xd_mid);
        axpy_state(x, 0.5 * h, k1, xs);
        sys.derivative(t + 0.5 * h, xs, xd_mid, k2);
        axpy_state(x, 0.5 * h, k2, xs);
        sys.derivative(t + 0.5 * h, xs, xd_mid, k3);
        history.state_at(t + h - tau, xd_end);
        axpy_state(x, h, k3, xs);
        sys.derivative(t + h, xs, xd_end, k4);
        rk4_combine(x, h, k1, k2, k3, k4, xnew);
        if (!state_ok(xnew, cfg.overflow_guard)) {
            traj.diverged = true;
            traj.divergence_time = static_cast<double>(i + 1) * h;
            return traj;
        }
        sys.derivative(t + h, xnew, xd_end, dnew);
        history.push(xnew, dnew);
        dcur = dnew;
        x = xnew;
        if ((i + 1) % cfg.record_stride == 0 || i + 1 == nsteps)
            record(static_cast<double>(i + 1) * h, x);
    }
    return traj;
}

} // namespace delaysync
