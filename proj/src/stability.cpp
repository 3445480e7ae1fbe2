#include "beamdecay/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "beamdecay/errors.hpp"

namespace beamdecay {

std::string to_string(BoundsVariant v) {
    return v == BoundsVariant::general ? "general" : "constant";
}

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::domain_error, std::string(what) + " must be positive");
}

void require_nonnegative(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::domain_error, std::string(what) + " must be nonnegative");
}

}  // namespace

LyapunovBounds beta_bounds_general(double m1, double mu1, double r0, double length,
                                   double ka_left, double ka_right) {
    require_positive(m1, "m1");
    require_positive(r0, "r0");
    require_positive(length, "length");
    require_nonnegative(mu1, "mu1");
    require_nonnegative(ka_left, "ka_left");
    require_nonnegative(ka_right, "ka_right");

    LyapunovBounds b;
    b.variant = BoundsVariant::general;
    b.beta0 = 0.5 * length * length * std::sqrt(m1 / r0);
    b.beta1 = b.beta0 * (1.0 + (length * length * mu1 + 2.0 / length * (ka_left + ka_right)) /
                                   std::sqrt(m1 * r0));
    return b;
}

LyapunovBounds beta_bounds_constant(double m, double gamma, double r, double length,
                                    double ka_left, double ka_right) {
    require_positive(m, "m");
    require_positive(r, "r");
    require_positive(length, "length");
    require_nonnegative(gamma, "gamma");
    require_nonnegative(ka_left, "ka_left");
    require_nonnegative(ka_right, "ka_right");

    LyapunovBounds b;
    b.variant = BoundsVariant::constant_coefficient;
    const double root = std::sqrt(m / r);
    b.beta0 = 0.5 * length * length * root;
    b.beta1 = b.beta0 * (1.0 + length * length * root * gamma) +
              length / (2.0 * r) * (ka_left + ka_right);
    return b;
}

LyapunovBounds beta_bounds(const BeamSpec& spec, const BoundaryControls& bc) {
    const double l = spec.length;
    const auto m = coefficient_bounds(spec.mass, l);
    const auto r = coefficient_bounds(spec.rigidity, l);
    if (spec.has_constant_coefficients())
        return beta_bounds_constant(m.sup, spec.gamma, r.inf, l, bc.ka_left, bc.ka_right);
    const auto mu = coefficient_bounds(spec.damping, l);
    return beta_bounds_general(m.sup, mu.sup, r.inf, l, bc.ka_left, bc.ka_right);
}

LambdaRange lambda_range(double beta0, double gamma, double m0, double m1) {
    if (!(gamma > 0.0))
        throw Error(ErrorCode::certificate_ineligible,
                    "decay certificate needs a positive damping constant gamma");
    require_positive(beta0, "beta0");
    require_positive(m0, "m0");
    require_positive(m1, "m1");
    const double inv = 1.0 / beta0;
    const double damp = gamma * m0 / (2.0 * m1);
    return {0.0, std::min(inv, damp), inv <= damp};
}

DecayCertificate certificate(const LyapunovBounds& bounds, double lambda, double gamma, double m0,
                             double m1) {
    const auto range = lambda_range(bounds.beta0, gamma, m0, m1);
    if (!(lambda > range.lower)) {
        throw Error(ErrorCode::lambda_inadmissible, "lambda must be positive");
    }
    if (!(lambda < 1.0 / bounds.beta0)) {
        std::ostringstream os;
        os << "lambda=" << lambda << " violates lambda < 1/beta0=" << 1.0 / bounds.beta0;
        throw Error(ErrorCode::lambda_inadmissible, os.str());
    }
    const double damp = gamma * m0 / (2.0 * m1);
    if (!(lambda < damp)) {
        std::ostringstream os;
        os << "lambda=" << lambda << " violates lambda < gamma m0/(2 m1)=" << damp;
        throw Error(ErrorCode::lambda_inadmissible, os.str());
    }
    DecayCertificate c;
    c.lambda = lambda;
    c.bounds = bounds;
    c.lambda_max = range.upper;
    c.overshoot = (1.0 + bounds.beta1 * lambda) / (1.0 - bounds.beta0 * lambda);
    c.rate = 2.0 * lambda / (1.0 + bounds.beta1 * lambda);
    return c;
}

DecayCertificate certify(const BeamSpec& spec, const BoundaryControls& bc, double lambda) {
    const auto bounds = beta_bounds(spec, bc);
    const auto m = coefficient_bounds(spec.mass, spec.length);
    const auto range = lambda_range(bounds.beta0, spec.gamma, m.inf, m.sup);
    if (!(lambda > 0.0)) lambda = kAutoLambdaFraction * range.upper;
    return certificate(bounds, lambda, spec.gamma, m.inf, m.sup);
}

std::vector<double> decay_envelope(const DecayCertificate& cert, double initial_energy,
                                   std::span<const double> times) {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(initial_energy * cert.overshoot * std::exp(-cert.rate * t));
    return out;
}

// ---------------------------------------------------------------------------

BeamSpec StripBeam::spec(double gamma) {
    return BeamSpec::proportional(length, CoefficientField::constant(tabulated_mass),
                                  CoefficientField::constant(tabulated_rigidity), gamma);
}

std::vector<DecayTableInput> strip_table_inputs() {
    return {
        {0.1, 0.0, 0.0, 0.04}, {0.1, 0.01, 0.01, 0.04},
        {1.0, 0.0, 0.0, 0.4},  {1.0, 0.01, 0.01, 0.4},
        {5.0, 0.0, 0.0, 2.4},  {5.0, 0.01, 0.01, 2.4},
    };
}

std::vector<DecayTableReference> strip_table_reference() {
    return {
        {0.33, 0.35, 1.03, 0.08},  {0.33, 16.55, 1.68, 0.05},
        {0.33, 0.55, 1.41, 0.66},  {0.33, 16.75, 8.87, 0.10},
        {0.33, 1.42, 21.19, 1.09}, {0.33, 17.62, 208.12, 0.11},
    };
}

std::vector<DecayTableRow> decay_table(std::span<const DecayTableInput> inputs) {
    constexpr double l = StripBeam::length;
    constexpr double m = StripBeam::tabulated_mass;
    constexpr double r = StripBeam::tabulated_rigidity;
    std::vector<DecayTableRow> rows;
    rows.reserve(inputs.size());
    for (const auto& in : inputs) {
        DecayTableRow row;
        row.input = in;
        row.bounds = beta_bounds_constant(m, in.gamma, r, l, in.ka_left, in.ka_right);
        row.beta1_general = beta_bounds_general(m, in.gamma * m, r, l, in.ka_left, in.ka_right).beta1;
        double lambda = in.lambda;
        if (!(lambda > 0.0))
            lambda = kAutoLambdaFraction * lambda_range(row.bounds.beta0, in.gamma, m, m).upper;
        row.cert = certificate(row.bounds, lambda, in.gamma, m, m);
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------

namespace quadrature {

double simpson(std::span<const double> f, double h) {
    const auto n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (f[0] + f[1]);
    if (n == 3) return h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);
    const std::size_t intervals = n - 1;
    // Simpson over an even number of intervals, then a 3/8 panel if needed.
    const std::size_t even = intervals % 2 == 0 ? intervals : intervals - 3;
    double s = 0.0;
    for (std::size_t i = 0; i < even; i += 2) s += f[i] + 4.0 * f[i + 1] + f[i + 2];
    s *= h / 3.0;
    if (even != intervals) {
        const std::size_t i = even;
        s += 3.0 * h / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
    }
    return s;
}

std::vector<double> second_derivative(std::span<const double> f, double h) {
    const auto n = f.size();
    if (n < 4) throw Error(ErrorCode::precondition_violation, "need at least 4 samples");
    std::vector<double> d(n);
    const double h2 = h * h;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / h2;
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    return d;
}

std::pair<double, double> end_slopes(std::span<const double> f, double h) {
    const auto n = f.size();
    if (n < 3) throw Error(ErrorCode::precondition_violation, "need at least 3 samples");
    return {(-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h),
            (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h)};
}

}  // namespace quadrature

namespace {

double grid_step(std::span<const double> samples, double length) {
    require_positive(length, "length");
    if (samples.size() < 4)
        throw Error(ErrorCode::precondition_violation, "profile needs at least 4 samples");
    double scale = 0.0;
    for (double v : samples) {
        if (!std::isfinite(v)) throw Error(ErrorCode::precondition_violation, "non-finite sample");
        scale = std::max(scale, std::abs(v));
    }
    const double tol = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    if (std::abs(samples.front()) > tol || std::abs(samples.back()) > tol)
        throw Error(ErrorCode::precondition_violation, "profile must vanish at both ends");
    return length / static_cast<double>(samples.size() - 1);
}

double curvature_integral(std::span<const double> samples, double h) {
    auto d2 = quadrature::second_derivative(samples, h);
    for (double& v : d2) v *= v;
    return quadrature::simpson(d2, h);
}

InequalityCheck make_check(double lhs, double rhs) {
    return {lhs, rhs, lhs <= rhs * (1.0 + kInequalitySlack)};
}

}  // namespace

InequalityCheck poincare_check(std::span<const double> samples, double length) {
    const double h = grid_step(samples, length);
    std::vector<double> sq(samples.begin(), samples.end());
    for (double& v : sq) v *= v;
    const double lhs = quadrature::simpson(sq, h);
    const double rhs = std::pow(length, 4) / 4.0 * curvature_integral(samples, h);
    return make_check(lhs, rhs);
}

TraceCheck trace_check(std::span<const double> samples, double length) {
    const double h = grid_step(samples, length);
    const double rhs = length * curvature_integral(samples, h);
    const auto [left, right] = quadrature::end_slopes(samples, h);
    return {make_check(left * left, rhs), make_check(right * right, rhs)};
}

}  // namespace beamdecay
