#pragma once

/**
 * @file model.hpp
 * @brief Continuous problem data for the controlled beam.
 *
 * The governed system is
 *
 *     m(x) u_tt + mu(x) u_t + (r(x) u_xx)_xx = 0,   0 < x < L,
 *     u(0,t) = 0,  -r u_xx(0,t) = -kr_left u_x(0,t) - ka_left u_xt(0,t),
 *     u(L,t) = 0,  -r u_xx(L,t) =  kr_right u_x(L,t) + ka_right u_xt(L,t),
 *
 * with torsional springs (kr) and dampers (ka) at both hinged ends and
 * viscous damping mu = gamma * m.
 */

#include <functional>
#include <string>
#include <vector>

namespace beamdecay {

/// A positive coefficient over [0, L]: constant, piecewise constant or
/// sampled on a uniform grid (linear interpolation between samples).
class CoefficientField {
public:
    enum class Kind { constant, piecewise_constant, sampled };

    CoefficientField() = default;

    static CoefficientField constant(double value);
    /// `breakpoints` are the interior piece boundaries; `values` has one more
    /// entry than `breakpoints`. Pieces are right-continuous.
    static CoefficientField piecewise(std::vector<double> breakpoints, std::vector<double> values);
    /// Samples at x_i = i L / (n - 1), i = 0..n-1, n >= 2.
    static CoefficientField sampled(std::vector<double> values);

    Kind kind() const { return kind_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    /// Value at x in [0, length]. Throws DOMAIN_ERROR outside the domain or
    /// on a malformed field.
    double at(double x, double length) const;

    CoefficientField scaled(double factor) const;

    /// True when the field is the same constant everywhere on [0, length].
    bool is_uniform(double length) const;

private:
    Kind kind_ = Kind::constant;
    std::vector<double> values_{0.0};
    std::vector<double> breakpoints_;
};

struct CoefficientBounds {
    double inf;
    double sup;
};

CoefficientBounds coefficient_bounds(const CoefficientField& field, double length);

struct BeamSpec {
    double length = 0.0;            ///< m
    CoefficientField mass;          ///< m(x), kg/m
    CoefficientField damping;       ///< mu(x), kg/(m s)
    CoefficientField rigidity;      ///< r(x) = E I, N m^2
    double gamma = 0.0;             ///< 1/s, mu = gamma m when gamma > 0

    /// Builds a spec with mu = gamma m.
    static BeamSpec proportional(double length, CoefficientField mass, CoefficientField rigidity,
                                 double gamma);

    bool has_constant_coefficients() const;
};

struct BoundaryControls {
    double kr_left = 0.0;   ///< N m
    double ka_left = 0.0;   ///< N m s
    double kr_right = 0.0;  ///< N m
    double ka_right = 0.0;  ///< N m s
};

/// A profile on [0, L], either closed form (value and slope known exactly)
/// or samples on a uniform grid including both endpoints.
class Profile {
public:
    using Function = std::function<double(double)>;

    /// Identically zero.
    Profile();

    static Profile zero();
    static Profile closed_form(std::string tag, Function value, Function slope);
    static Profile sampled(std::vector<double> samples);

    /// A x^2 (L - x)^2 / L^4.
    static Profile demo(double length, double amplitude = 0.01);
    /// A sin(k pi x / L).
    static Profile mode(double length, int k, double amplitude);

    bool is_sampled() const { return sampled_; }
    const std::string& tag() const { return tag_; }
    const std::vector<double>& samples() const { return samples_; }

    double value(double x, double length) const;
    /// Exact slope for closed forms; central differences of the samples
    /// (second order one-sided at the ends) interpolated linearly otherwise.
    double slope(double x, double length) const;

private:
    Profile(bool sampled, std::string tag, Function value, Function slope,
            std::vector<double> samples);

    bool sampled_ = false;
    std::string tag_;
    Function value_;
    Function slope_;
    std::vector<double> samples_;
};

struct InitialConditions {
    Profile deflection;  ///< u0, m
    Profile velocity;    ///< u1, m/s
};

enum class Violation {
    length_not_positive,
    coefficient_malformed,
    coefficient_not_finite,
    mass_not_positive,
    rigidity_not_positive,
    damping_negative,
    gamma_negative,
    damping_inconsistent_with_gamma,
    boundary_constant_negative,
    no_damping_or_spring,
    initial_deflection_endpoint_nonzero,
    initial_condition_not_finite,
};

/// Identifier such as "RIGIDITY_NOT_POSITIVE".
std::string to_string(Violation v);

struct ValidationIssue {
    Violation code;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    /// gamma > 0, required for the decay certificate (not a hard failure).
    bool certificate_eligible = false;

    bool ok() const { return issues.empty(); }
    bool contains(Violation v) const;
};

ValidationReport validate(const BeamSpec& spec, const BoundaryControls& bc,
                          const InitialConditions& ic);

struct SectionProperties {
    double area;          ///< S = b h, m^2
    double inertia;       ///< I = b h^3 / 12, m^4
    double mass_per_length;  ///< m = rho S, kg/m
    double rigidity;      ///< r = E I, N m^2
};

/// Rectangular cross section of width b and height h.
SectionProperties derived_constant_params(double density, double youngs_modulus, double width,
                                          double height);

}  // namespace beamdecay
