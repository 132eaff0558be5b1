#include "delaysync/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace delaysync {

SemipassiveConstants SemipassiveConstants::checked(double alpha, double c0, double c1,
                                                   double c2) {
    for (double v : {alpha, c0, c1, c2})
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("semipassive constants must be positive reals");
    return SemipassiveConstants{alpha, c0, c1, c2};
}

DerivedConstants derived_constants(const SemipassiveConstants& c) {
    for (double v : {c.alpha, c.c0, c.c1, c.c2})
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("semipassive constants must be positive reals");
    DerivedConstants d;
    const double s = c.c0 + c.c2;
    d.gamma_prime = s * s / (4.0 * c.alpha) + c.c1;
    d.cbar1 = (2.0 * c.alpha * c.c1 + c.c0 * c.c2 + c.c2 * c.c2) / (c.c2 * c.c2);
    d.cbar2 = 2.0 * c.alpha / (c.c2 * c.c2);
    return d;
}

SpectralPair SpectralPair::checked(double lambda2, double lambda_k) {
    if (!(lambda2 > 0.0) || !(lambda_k >= lambda2) || !std::isfinite(lambda_k))
        throw std::invalid_argument("spectral pair: need 0 < lambda2 <= lambda_k");
    return SpectralPair{lambda2, lambda_k};
}

PhiValue phi(double gamma, const DerivedConstants& d, const SpectralPair& sp) {
    if (!(gamma > 0.0)) throw std::invalid_argument("phi: gamma must be positive");
    const double a = d.cbar2 + d.cbar1 / (gamma * sp.lambda_k);
    const double b =
        2.0 * d.cbar2 * (sp.lambda2 * gamma - d.gamma_prime) / (sp.lambda_k * sp.lambda_k * gamma * gamma);
    PhiValue out;
    // -a + sqrt(a^2 + b) evaluated as b / (a + sqrt(a^2 + b)): no
    // cancellation for large gamma and an exact zero at the domain edge.
    out.value = b / (a + std::sqrt(a * a + b));
    out.below_domain = sp.lambda2 * gamma < d.gamma_prime;
    return out;
}

double gamma_star(const DerivedConstants& d, const SpectralPair& sp) {
    const double l2 = sp.lambda2;
    const double lk = sp.lambda_k;
    const double denom = l2 + 2.0 * lk * d.cbar1;
    const double first = (1.0 + l2 / denom) * d.gamma_prime / l2;
    const double inner = l2 * l2 + 2.0 * l2 * lk * d.cbar1 + 2.0 * lk * lk * d.cbar2 * d.gamma_prime;
    const double second =
        std::sqrt(2.0 * d.cbar1 * d.cbar1 * d.cbar2 * d.gamma_prime * inner) / (d.cbar2 * l2 * denom);
    return first + second;
}

double gamma_tilde(const DerivedConstants& d, const SpectralPair& sp) {
    const double l2 = sp.lambda2;
    const double lk = sp.lambda_k;
    const double numer = 2.0 * d.cbar2 * d.gamma_prime - d.cbar1 * d.cbar1;
    const double inner = l2 * l2 + 2.0 * l2 * lk * d.cbar1 + 2.0 * lk * lk * d.cbar2 * d.gamma_prime;
    const double denom = d.cbar2 * (l2 + d.cbar1 * lk) +
                         d.cbar1 * std::sqrt(d.cbar2 * inner / (2.0 * d.gamma_prime));
    return numer / denom;
}

double tau_star(const DerivedConstants& d, const SpectralPair& sp) {
    const double q = sp.quotient();
    const double twocg = 2.0 * d.cbar2 * d.gamma_prime;
    const double root =
        std::sqrt(twocg + 4.0 * d.cbar2 * d.cbar1 * d.gamma_prime * q + twocg * q * twocg * q);
    return d.cbar2 / (q * (d.cbar1 + twocg * q + root));
}

bool in_region(double gamma, double tau, const DerivedConstants& d, const SpectralPair& sp,
               std::optional<double> delta_bar, RegionCondition condition) {
    if (!(gamma >= 0.0) || !(tau >= 0.0))
        throw std::invalid_argument("in_region: gamma and tau must be nonnegative");
    if (delta_bar && !(gamma < *delta_bar / 2.0)) return false;
    const bool gain_ok = condition == RegionCondition::ProofForm
                             ? sp.lambda2 * gamma > d.gamma_prime
                             : gamma > d.gamma_prime;
    if (!gain_ok || gamma <= 0.0) return false;
    return tau < phi(gamma, d, sp).value;
}

namespace {

bool close_rel(double a, double b, double rel_tol) {
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

} // namespace

SpectralComparison corollary2_compare(const SpectralPair& a, const SpectralPair& b,
                                      double rel_tol) {
    SpectralComparison out;
    const double qa = a.quotient();
    const double qb = b.quotient();
    const bool q_equal = close_rel(qa, qb, rel_tol);
    out.tau_order = q_equal ? TauOrder::Equal : (qa > qb ? TauOrder::Less : TauOrder::Greater);

    const bool l2_equal = close_rel(a.lambda2, b.lambda2, rel_tol);
    if (q_equal) {
        // Equal quotient: gamma_star scales as gamma_prime/lambda2.
        out.gamma_order = l2_equal ? GammaOrder::Equal
                                   : (a.lambda2 > b.lambda2 ? GammaOrder::LessEqual
                                                            : GammaOrder::GreaterEqual);
    } else if (l2_equal) {
        // Fixed lambda2: the larger quotient has the smaller gamma_star.
        out.gamma_order = qa > qb ? GammaOrder::LessEqual : GammaOrder::GreaterEqual;
    } else {
        out.gamma_order = GammaOrder::Incomparable;
    }
    return out;
}

} // namespace delaysync
