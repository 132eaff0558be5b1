#include "delaysync/models.hpp"

#include <cmath>
#include <stdexcept>

namespace delaysync {

std::vector<double> NodeState::flat() const {
    std::vector<double> x;
    x.reserve(zeta.size() + y.size());
    x.insert(x.end(), zeta.begin(), zeta.end());
    x.insert(x.end(), y.begin(), y.end());
    return x;
}

NodeState NodeState::from_flat(std::span<const double> x, int output_dim) {
    if (output_dim <= 0 || static_cast<std::size_t>(output_dim) > x.size())
        throw std::invalid_argument("NodeState: bad output dimension");
    NodeState s;
    const std::size_t nz = x.size() - static_cast<std::size_t>(output_dim);
    s.zeta.assign(x.begin(), x.begin() + nz);
    s.y.assign(x.begin() + nz, x.end());
    return s;
}

Matrix NodeModel::internal_jacobian(std::span<const double> x) const {
    const int nz = internal_dim();
    const int n = state_dim();
    const int m = output_dim();
    Matrix jac(nz, nz);
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> xm(x.begin(), x.end());
    std::vector<double> dp(n), dm(n);
    const std::vector<double> u(m, 0.0);
    const double step = 1e-6;
    for (int col = 0; col < nz; ++col) {
        xp[col] = x[col] + step;
        xm[col] = x[col] - step;
        derivative(xp, u, dp);
        derivative(xm, u, dm);
        for (int row = 0; row < nz; ++row) jac(row, col) = (dp[row] - dm[row]) / (2.0 * step);
        xp[col] = x[col];
        xm[col] = x[col];
    }
    return jac;
}

const std::string& HindmarshRose::name() const {
    static const std::string n = "hindmarsh-rose";
    return n;
}

void HindmarshRose::derivative(std::span<const double> x, std::span<const double> u,
                               std::span<double> dx) const {
    const double z1 = x[0];
    const double z2 = x[1];
    const double y = x[2];
    dx[0] = 1.0 - 5.0 * y * y - z1;
    dx[1] = 0.005 * (4.0 * y + 6.472 - z2);
    dx[2] = -y * y * y + 3.0 * y * y + z1 - z2 + 3.25 + u[0];
}

Matrix HindmarshRose::internal_jacobian(std::span<const double>) const {
    Matrix jac(2, 2);
    jac(0, 0) = -1.0;
    jac(1, 1) = -0.005;
    return jac;
}

std::shared_ptr<const NodeModel> make_model(const std::string& name) {
    if (name == "hindmarsh-rose") return std::make_shared<HindmarshRose>();
    throw std::invalid_argument("unknown model: " + name);
}

SemipassivityParams SemipassivityParams::checked(double sigma, double varsigma1,
                                                 double varsigma2) {
    if (!(varsigma1 > 0.0 && varsigma1 < 1.0))
        throw std::invalid_argument("semipassivity params: varsigma1 must be in (0,1)");
    if (!(varsigma2 > 0.0 && varsigma2 < 1.0))
        throw std::invalid_argument("semipassivity params: varsigma2 must be in (0,1)");
    if (!(sigma > 0.0 && sigma < 4.0 * varsigma1 * (1.0 - varsigma2) / 25.0))
        throw std::invalid_argument(
            "semipassivity params: need 0 < sigma < 4 varsigma1 (1-varsigma2) / 25");
    return SemipassivityParams{sigma, varsigma1, varsigma2};
}

namespace {

const HindmarshRose& hr_model() {
    static const HindmarshRose model;
    return model;
}

void require_hr_state(const NodeState& s) {
    if (s.zeta.size() != 2 || s.y.size() != 1)
        throw std::invalid_argument("expected a Hindmarsh-Rose state (zeta1, zeta2, y)");
    for (double v : s.zeta)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite state");
    if (!std::isfinite(s.y[0])) throw std::invalid_argument("non-finite state");
}

} // namespace

NodeState hr_derivative(const NodeState& s, double u) {
    require_hr_state(s);
    if (!std::isfinite(u)) throw std::invalid_argument("non-finite input");
    const std::vector<double> x = s.flat();
    std::vector<double> dx(3);
    const double uv[1] = {u};
    hr_model().derivative(x, uv, dx);
    return NodeState::from_flat(dx, 1);
}

double hr_storage(const NodeState& s, const SemipassivityParams& p) {
    require_hr_state(s);
    const double z1 = s.zeta[0];
    const double z2 = s.zeta[1];
    const double y = s.y[0];
    return 0.5 * y * y + p.sigma * z1 * z1 + 25.0 * z2 * z2;
}

double hr_H(const NodeState& s, const SemipassivityParams& p) {
    require_hr_state(s);
    const double z1 = s.zeta[0];
    const double z2 = s.zeta[1];
    const double y = s.y[0];
    const double s1 = p.varsigma1;
    const double s2 = p.varsigma2;
    const double sg = p.sigma;

    const double t1 = s1 * y * y * y * y - 3.0 * y * y * y - y * y / (4.0 * sg * (1.0 - s2));
    const double t2 = (sg * s2 - 25.0 * sg * sg / (4.0 * (1.0 - s1))) * z1 * z1;
    const double t3 = 0.25 * z2 * z2 - 1.618 * z2;
    const double sq1 = z1 - y / (2.0 * sg * (1.0 - s2));
    const double t4 = sg * (1.0 - s2) * sq1 * sq1 - sg * z1;
    const double sq2 = y * y + 5.0 * sg * z1 / (2.0 * (1.0 - s1));
    const double t5 = (1.0 - s1) * sq2 * sq2 - 3.25 * y;
    return t1 + t2 + t3 + t4 + t5;
}

namespace {

// Halton sequence, radical inverse in the given base.
double radical_inverse(long index, int base) {
    double f = 1.0;
    double r = 0.0;
    long i = index;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

} // namespace

ShellScanResult h41_scan(const SemipassivityParams& p, double delta, double radius,
                         long samples) {
    if (!(delta > 0.0) || !(radius > 0.0))
        throw std::invalid_argument("h41_scan: delta and radius must be positive");
    ShellScanResult result;
    if (samples <= 0) {
        result.vacuous = true;
        return result;
    }

    const double outer = 4.0 * radius;
    constexpr int bases[3] = {2, 3, 5};
    long accepted = 0;
    long index = 1;
    result.worst_margin = std::numeric_limits<double>::infinity();
    while (accepted < samples) {
        double pt[3];
        for (int d = 0; d < 3; ++d)
            pt[d] = (2.0 * radical_inverse(index, bases[d]) - 1.0) * outer;
        ++index;
        const double norm = std::sqrt(pt[0] * pt[0] + pt[1] * pt[1] + pt[2] * pt[2]);
        if (norm <= radius || norm > outer) continue;
        ++accepted;
        NodeState s{{pt[0], pt[1]}, {pt[2]}};
        const double margin = hr_H(s, p) - delta * pt[2] * pt[2];
        if (margin < result.worst_margin) result.worst_margin = margin;
        if (margin <= 0.0) result.holds = false;
    }
    result.points_tested = accepted;
    return result;
}

DemidovichResult demidovich_check(const NodeModel& model, std::span<const NodeState> states,
                                  const Matrix& P, double margin) {
    if (states.empty()) throw std::invalid_argument("demidovich_check: empty sample set");
    const int nz = model.internal_dim();
    if (P.rows() != static_cast<std::size_t>(nz) || P.cols() != static_cast<std::size_t>(nz))
        throw std::invalid_argument("demidovich_check: P has wrong dimensions");
    for (double ev : jacobi_eigenvalues(P))
        if (!(ev > 0.0)) throw std::invalid_argument("demidovich_check: P is not positive definite");

    DemidovichResult result;
    result.max_eigenvalue = -std::numeric_limits<double>::infinity();
    for (const NodeState& s : states) {
        const std::vector<double> x = s.flat();
        if (static_cast<int>(x.size()) != model.state_dim())
            throw std::invalid_argument("demidovich_check: state dimension mismatch");
        const Matrix J = model.internal_jacobian(x);
        const Matrix PJ = P * J;
        Matrix Q(nz, nz);
        for (int i = 0; i < nz; ++i)
            for (int j = 0; j < nz; ++j) Q(i, j) = 0.5 * (PJ(i, j) + PJ(j, i));
        const std::vector<double> eig = jacobi_eigenvalues(Q);
        result.max_eigenvalue = std::max(result.max_eigenvalue, eig.back());
    }
    result.passes = result.max_eigenvalue <= -margin;
    return result;
}

} // namespace delaysync
