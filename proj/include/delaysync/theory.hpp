#pragma once

#include <optional>

namespace delaysync {

/// Constants of the semipassivity/convergence certificates feeding the
/// closed forms: alpha from the internal-dynamics contraction rate, c0 the
/// cross term, c1/c2 the output-channel growth bounds. The underlying
/// analysis only guarantees existence; numeric values are user inputs.
struct SemipassiveConstants {
    double alpha = 1.0;
    double c0 = 1.0;
    double c1 = 1.0;
    double c2 = 1.0;

    static SemipassiveConstants checked(double alpha, double c0, double c1, double c2);
};

/// gamma_prime = (c0+c2)^2/(4 alpha) + c1,
/// cbar1 = (2 alpha c1 + c0 c2 + c2^2)/c2^2, cbar2 = 2 alpha / c2^2.
struct DerivedConstants {
    double gamma_prime = 0.0;
    double cbar1 = 0.0;
    double cbar2 = 0.0;
};

DerivedConstants derived_constants(const SemipassiveConstants& c);

/// Extreme nonzero Laplacian eigenvalues of a connected graph.
struct SpectralPair {
    double lambda2 = 1.0;
    double lambda_k = 1.0;

    static SpectralPair checked(double lambda2, double lambda_k);
    double quotient() const { return lambda_k / lambda2; }
};

/// Delay bound phi(gamma): zero at gamma = gamma_prime/lambda2, unimodal
/// on [gamma_prime/lambda2, inf), tending to zero as gamma -> inf. Values
/// for gamma below the domain are negative and returned as-is with the
/// flag set (boundary plots need the raw curve).
struct PhiValue {
    double value = 0.0;
    bool below_domain = false;
};

PhiValue phi(double gamma, const DerivedConstants& d, const SpectralPair& sp);

/// The maximizing coupling strength of phi; always > gamma_prime/lambda2.
double gamma_star(const DerivedConstants& d, const SpectralPair& sp);

/// The second stationary point of phi; always strictly negative, hence
/// outside the domain.
double gamma_tilde(const DerivedConstants& d, const SpectralPair& sp);

/// tau_star = phi(gamma_star) in closed form; depends on the topology only
/// through the quotient lambda_k/lambda2.
double tau_star(const DerivedConstants& d, const SpectralPair& sp);

/// Region membership. The proof form uses lambda2*gamma > gamma_prime (the
/// condition the boundary formula is derived from); the theorem statement
/// uses gamma > gamma_prime. They coincide only for lambda2 = 1.
enum class RegionCondition { ProofForm, TheoremForm };

bool in_region(double gamma, double tau, const DerivedConstants& d, const SpectralPair& sp,
               std::optional<double> delta_bar = std::nullopt,
               RegionCondition condition = RegionCondition::ProofForm);

enum class TauOrder { Less, Equal, Greater };
enum class GammaOrder { LessEqual, Equal, GreaterEqual, Incomparable };

struct SpectralComparison {
    TauOrder tau_order = TauOrder::Equal;
    GammaOrder gamma_order = GammaOrder::Incomparable;
};

/// Predicted ordering of (tau_star, gamma_star) for two topologies from
/// their spectra alone. The tau order follows the quotients. The gamma
/// order is only claimed at equal quotient (via lambda2) or equal lambda2
/// (via the quotient); anything else is reported incomparable.
SpectralComparison corollary2_compare(const SpectralPair& a, const SpectralPair& b,
                                      double rel_tol = 1e-9);

} // namespace delaysync
