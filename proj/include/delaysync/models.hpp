#pragma once

#include "delaysync/linalg.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace delaysync {

/// Per-node state split into internal part (zeta) and output part (y).
struct NodeState {
    std::vector<double> zeta;
    std::vector<double> y;

    std::vector<double> flat() const;
    static NodeState from_flat(std::span<const double> x, int output_dim);
};

/// Node dynamics
///     zeta' = q(zeta, y)
///     y'    = a(zeta, y) + u
/// with the input entering the output channel additively with unit gain.
/// The flat state layout is (zeta..., y...). Implementations must be
/// stateless: derivative() is a pure function of its arguments.
class NodeModel {
public:
    virtual ~NodeModel() = default;

    virtual int state_dim() const = 0;  // n
    virtual int output_dim() const = 0; // m
    virtual const std::string& name() const = 0;

    virtual void derivative(std::span<const double> x, std::span<const double> u,
                            std::span<double> dx) const = 0;

    /// Jacobian of the internal dynamics, dq/dzeta, row-major
    /// (n-m)x(n-m). The default is a central finite difference with step
    /// 1e-6; analytic overrides are preferred.
    virtual Matrix internal_jacobian(std::span<const double> x) const;

    int internal_dim() const { return state_dim() - output_dim(); }
};

/// Hindmarsh-Rose neuron, state (zeta1, zeta2, y):
///     zeta1' = 1 - 5 y^2 - zeta1
///     zeta2' = 0.005 (4 y + 6.472 - zeta2)
///     y'     = -y^3 + 3 y^2 + zeta1 - zeta2 + 3.25 + u
/// Chaotic for u = 0. No free parameters.
class HindmarshRose final : public NodeModel {
public:
    int state_dim() const override { return 3; }
    int output_dim() const override { return 1; }
    const std::string& name() const override;
    void derivative(std::span<const double> x, std::span<const double> u,
                    std::span<double> dx) const override;
    Matrix internal_jacobian(std::span<const double> x) const override;
};

std::shared_ptr<const NodeModel> make_model(const std::string& name);

/// Constants of the Hindmarsh-Rose storage-function certificate:
/// varsigma1, varsigma2 in (0,1) and 0 < sigma < 4 varsigma1 (1-varsigma2) / 25.
/// Defaults are the interval midpoints with sigma = 0.01.
struct SemipassivityParams {
    double sigma = 0.01;
    double varsigma1 = 0.5;
    double varsigma2 = 0.5;

    static SemipassivityParams checked(double sigma, double varsigma1, double varsigma2);
};

/// One derivative evaluation at a NodeState (validates finiteness).
NodeState hr_derivative(const NodeState& s, double u);

/// Storage function V = y^2/2 + sigma zeta1^2 + 25 zeta2^2.
double hr_storage(const NodeState& s, const SemipassivityParams& p);

/// The dissipation-rate function H paired with hr_storage; nonnegative far
/// from the origin, sign-indefinite near it.
double hr_H(const NodeState& s, const SemipassivityParams& p);

/// Sampled check that H(x) - delta |y|^2 > 0 on the shell
/// radius < |x| <= 4 radius, using a Halton low-discrepancy sequence.
/// A spot-check, not a proof: it can only ever find counterexamples.
struct ShellScanResult {
    bool holds = true;
    long points_tested = 0;
    double worst_margin = 0.0; // min of H - delta|y|^2 over the sample
    bool vacuous = false;      // samples == 0
};
ShellScanResult h41_scan(const SemipassivityParams& p, double delta, double radius,
                         long samples);

/// Eigenvalues of (P J + J^T P)/2 with J = dq/dzeta, maximized over the
/// sample states. Passes when the maximum is <= -margin.
struct DemidovichResult {
    double max_eigenvalue = 0.0;
    bool passes = false;
};
DemidovichResult demidovich_check(const NodeModel& model, std::span<const NodeState> states,
                                  const Matrix& P, double margin);

} // namespace delaysync
