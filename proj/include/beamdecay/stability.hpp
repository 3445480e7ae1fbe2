#pragma once

/**
 * @file stability.hpp
 * @brief Lyapunov bounds and the exponential decay certificate.
 *
 * With the auxiliary functional J(t) squeezed as -beta0 E <= J <= beta1 E,
 * the Lyapunov function L = E + lambda J gives
 *
 *     E(t) <= M exp(-sigma t) E(0),
 *     M = (1 + beta1 lambda) / (1 - beta0 lambda),
 *     sigma = 2 lambda / (1 + beta1 lambda),
 *
 * for every penalty 0 < lambda < min(1 / beta0, gamma m0 / (2 m1)).
 */

#include <span>
#include <string>
#include <vector>

#include "beamdecay/model.hpp"

namespace beamdecay {

enum class BoundsVariant { general, constant_coefficient };

std::string to_string(BoundsVariant v);

struct LyapunovBounds {
    double beta0 = 0.0;  ///< s
    double beta1 = 0.0;  ///< s
    BoundsVariant variant = BoundsVariant::general;
};

/// Bounds for variable coefficients from m1 = sup m, mu1 = sup mu and
/// r0 = inf r:
///   beta0 = (L^2 / 2) sqrt(m1 / r0)
///   beta1 = beta0 {1 + [L^2 mu1 + (2 / L)(ka- + ka+)] / sqrt(m1 r0)}
LyapunovBounds beta_bounds_general(double m1, double mu1, double r0, double length,
                                   double ka_left, double ka_right);

/// Constant-coefficient bounds:
///   beta0 = (L^2 / 2) sqrt(m / r)
///   beta1 = beta0 [1 + L^2 sqrt(m / r) gamma] + (L / 2r)(ka- + ka+)
/// The damper term is half of what the general formula gives for the same
/// beam; both are kept as written.
LyapunovBounds beta_bounds_constant(double m, double gamma, double r, double length,
                                    double ka_left, double ka_right);

/// Bounds appropriate for the spec: the constant variant for uniform
/// coefficients, the general one otherwise.
LyapunovBounds beta_bounds(const BeamSpec& spec, const BoundaryControls& bc);

/// Open admissible interval (0, upper) for the penalty lambda.
struct LambdaRange {
    double lower = 0.0;
    double upper = 0.0;
    /// True when 1 / beta0 is the binding constraint.
    bool inverse_beta0_binding = false;
};

LambdaRange lambda_range(double beta0, double gamma, double m0, double m1);

struct DecayCertificate {
    double lambda = 0.0;      ///< 1/s
    double overshoot = 0.0;   ///< M
    double rate = 0.0;        ///< sigma, 1/s
    double lambda_max = 0.0;  ///< supremum of admissible lambda
    LyapunovBounds bounds;
};

/// Throws LAMBDA_INADMISSIBLE naming the violated bound, or
/// CERTIFICATE_INELIGIBLE when gamma <= 0.
DecayCertificate certificate(const LyapunovBounds& bounds, double lambda, double gamma, double m0,
                             double m1);

/// Default penalty: this fraction of lambda_max.
inline constexpr double kAutoLambdaFraction = 0.96;

/// Certificate for a validated spec. A non-positive `lambda` selects
/// kAutoLambdaFraction * lambda_max.
DecayCertificate certify(const BeamSpec& spec, const BoundaryControls& bc, double lambda = 0.0);

/// E0 M exp(-sigma t) at each time.
std::vector<double> decay_envelope(const DecayCertificate& cert, double initial_energy,
                                   std::span<const double> times);

// ---------------------------------------------------------------------------
// Reference strip beam and its decay-rate table.

/// Geometry and material of the 0.502 m polymer strip used for the decay
/// table, with the tabulated (two significant digit) section values.
struct StripBeam {
    static constexpr double length = 0.502;          // m
    static constexpr double width = 1.7e-3;          // m
    static constexpr double height = 0.89e-3;        // m
    static constexpr double density = 1.42e3;        // kg/m^3
    static constexpr double youngs_modulus = 3.1e9;  // N/m^2
    static constexpr double tabulated_mass = 2.14e-3;      // kg/m
    static constexpr double tabulated_rigidity = 0.31e-3;  // N m^2

    static BeamSpec spec(double gamma);
};

struct DecayTableInput {
    double gamma = 0.0;
    double ka_left = 0.0;
    double ka_right = 0.0;
    double lambda = 0.0;  ///< <= 0 selects the automatic policy
};

struct DecayTableRow {
    DecayTableInput input;
    LyapunovBounds bounds;
    DecayCertificate cert;
    /// beta1 from the general formula on the same beam (for comparison).
    double beta1_general = 0.0;
};

/// The six (gamma, ka, lambda) combinations: gamma in {0.1, 1, 5},
/// ka in {0, 0.01} on both ends, lambda in {0.04, 0.4, 2.4}.
std::vector<DecayTableInput> strip_table_inputs();

/// Reference (beta0, beta1, M, sigma) for strip_table_inputs(), two decimals.
struct DecayTableReference {
    double beta0, beta1, overshoot, rate;
};
std::vector<DecayTableReference> strip_table_reference();

/// Certificates on the strip beam with tabulated m and r.
std::vector<DecayTableRow> decay_table(std::span<const DecayTableInput> inputs);

// ---------------------------------------------------------------------------
// Integral inequalities behind the bounds, checked on sampled profiles.

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// int u^2 <= (L^4 / 4) int u''^2 for u vanishing at both ends. Samples on a
/// uniform grid including both ends (at least 4 points).
InequalityCheck poincare_check(std::span<const double> samples, double length);

struct TraceCheck {
    InequalityCheck left;   ///< u'(0)^2 <= L int u''^2
    InequalityCheck right;  ///< u'(L)^2 <= L int u''^2
    bool holds() const { return left.holds && right.holds; }
};

TraceCheck trace_check(std::span<const double> samples, double length);

/// Relative slack allowed on the right-hand side of the inequality checks.
inline constexpr double kInequalitySlack = 1e-8;

namespace quadrature {

/// Composite Simpson on a uniform grid; a 3/8 panel closes an odd interval
/// count. Needs at least 2 samples (trapezoid for exactly 2).
double simpson(std::span<const double> f, double h);

/// Central second differences, second-order one-sided at both ends.
std::vector<double> second_derivative(std::span<const double> f, double h);

/// Second-order one-sided slopes at both ends.
std::pair<double, double> end_slopes(std::span<const double> f, double h);

}  // namespace quadrature

}  // namespace beamdecay
