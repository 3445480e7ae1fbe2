#include "beamdecay/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "beamdecay/errors.hpp"

namespace beamdecay {

namespace {

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Describes what is wrong with the field's shape, empty when well formed.
std::string shape_problem(const CoefficientField& f, double length) {
    switch (f.kind()) {
        case CoefficientField::Kind::constant:
            if (f.values().size() != 1) return "constant field needs exactly one value";
            return {};
        case CoefficientField::Kind::piecewise_constant: {
            const auto& bp = f.breakpoints();
            if (f.values().size() != bp.size() + 1)
                return "piecewise field needs one more value than breakpoints";
            for (std::size_t i = 0; i < bp.size(); ++i) {
                if (!std::isfinite(bp[i]) || bp[i] < 0.0 || bp[i] > length)
                    return "breakpoint outside [0, length]";
                if (i > 0 && !(bp[i] > bp[i - 1])) return "breakpoints not strictly increasing";
            }
            return {};
        }
        case CoefficientField::Kind::sampled:
            if (f.values().size() < 2) return "sampled field needs at least two samples";
            return {};
    }
    return "unknown field kind";
}

double lerp_uniform(const std::vector<double>& samples, double x, double length) {
    const auto n = samples.size();
    const double s = x / length * static_cast<double>(n - 1);
    auto i = static_cast<std::size_t>(std::floor(s));
    if (i >= n - 1) return samples.back();
    const double w = s - static_cast<double>(i);
    return (1.0 - w) * samples[i] + w * samples[i + 1];
}

}  // namespace

CoefficientField CoefficientField::constant(double value) {
    CoefficientField f;
    f.kind_ = Kind::constant;
    f.values_ = {value};
    return f;
}

CoefficientField CoefficientField::piecewise(std::vector<double> breakpoints,
                                             std::vector<double> values) {
    CoefficientField f;
    f.kind_ = Kind::piecewise_constant;
    f.breakpoints_ = std::move(breakpoints);
    f.values_ = std::move(values);
    return f;
}

CoefficientField CoefficientField::sampled(std::vector<double> values) {
    CoefficientField f;
    f.kind_ = Kind::sampled;
    f.values_ = std::move(values);
    return f;
}

double CoefficientField::at(double x, double length) const {
    if (auto problem = shape_problem(*this, length); !problem.empty())
        throw Error(ErrorCode::domain_error, problem);
    if (!(x >= 0.0 && x <= length))
        throw Error(ErrorCode::domain_error, "evaluation point outside [0, length]");
    switch (kind_) {
        case Kind::constant:
            return values_[0];
        case Kind::piecewise_constant: {
            auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
            return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
        }
        case Kind::sampled:
            return lerp_uniform(values_, x, length);
    }
    return values_[0];
}

CoefficientField CoefficientField::scaled(double factor) const {
    CoefficientField f = *this;
    for (double& v : f.values_) v *= factor;
    return f;
}

bool CoefficientField::is_uniform(double length) const {
    const auto b = coefficient_bounds(*this, length);
    return b.inf == b.sup;
}

CoefficientBounds coefficient_bounds(const CoefficientField& field, double length) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw Error(ErrorCode::domain_error, "length must be positive");
    if (auto problem = shape_problem(field, length); !problem.empty())
        throw Error(ErrorCode::domain_error, problem);
    if (!all_finite(field.values()))
        throw Error(ErrorCode::domain_error, "coefficient values must be finite");

    const auto& v = field.values();
    if (field.kind() != CoefficientField::Kind::piecewise_constant) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return {*lo, *hi};
    }
    // Skip zero-width pieces (a breakpoint sitting on 0 or L).
    const auto& bp = field.breakpoints();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = i == 0 ? 0.0 : bp[i - 1];
        const double b = i == bp.size() ? length : bp[i];
        if (b > a) {
            lo = std::min(lo, v[i]);
            hi = std::max(hi, v[i]);
        }
    }
    return {lo, hi};
}

BeamSpec BeamSpec::proportional(double length, CoefficientField mass, CoefficientField rigidity,
                                double gamma) {
    BeamSpec spec;
    spec.length = length;
    spec.damping = mass.scaled(gamma);
    spec.mass = std::move(mass);
    spec.rigidity = std::move(rigidity);
    spec.gamma = gamma;
    return spec;
}

bool BeamSpec::has_constant_coefficients() const {
    return mass.is_uniform(length) && damping.is_uniform(length) && rigidity.is_uniform(length);
}

// ---------------------------------------------------------------------------

Profile::Profile(bool sampled, std::string tag, Function value, Function slope,
                 std::vector<double> samples)
    : sampled_(sampled),
      tag_(std::move(tag)),
      value_(std::move(value)),
      slope_(std::move(slope)),
      samples_(std::move(samples)) {}

Profile::Profile()
    : Profile(false, "zero", [](double) { return 0.0; }, [](double) { return 0.0; }, {}) {}

Profile Profile::zero() { return Profile(); }

Profile Profile::closed_form(std::string tag, Function value, Function slope) {
    return Profile(false, std::move(tag), std::move(value), std::move(slope), {});
}

Profile Profile::sampled(std::vector<double> samples) {
    return Profile(true, "sampled", nullptr, nullptr, std::move(samples));
}

Profile Profile::demo(double length, double amplitude) {
    const double l4 = std::pow(length, 4);
    return closed_form(
        "demo",
        [=](double x) { return amplitude * x * x * (length - x) * (length - x) / l4; },
        [=](double x) {
            return amplitude * (2.0 * x * (length - x) * (length - x) -
                                2.0 * x * x * (length - x)) / l4;
        });
}

Profile Profile::mode(double length, int k, double amplitude) {
    const double w = k * std::numbers::pi / length;
    return closed_form(
        "mode", [=](double x) { return amplitude * std::sin(w * x); },
        [=](double x) { return amplitude * w * std::cos(w * x); });
}

double Profile::value(double x, double length) const {
    if (!sampled_) return value_(x);
    if (samples_.size() < 2) throw Error(ErrorCode::domain_error, "profile needs two samples");
    if (!(x >= 0.0 && x <= length))
        throw Error(ErrorCode::domain_error, "evaluation point outside [0, length]");
    return lerp_uniform(samples_, x, length);
}

double Profile::slope(double x, double length) const {
    if (!sampled_) return slope_(x);
    const auto n = samples_.size();
    if (n < 3) throw Error(ErrorCode::domain_error, "slope of a sampled profile needs three samples");
    const double h = length / static_cast<double>(n - 1);
    std::vector<double> d(n);
    d[0] = (-3.0 * samples_[0] + 4.0 * samples_[1] - samples_[2]) / (2.0 * h);
    d[n - 1] = (3.0 * samples_[n - 1] - 4.0 * samples_[n - 2] + samples_[n - 3]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (samples_[i + 1] - samples_[i - 1]) / (2.0 * h);
    return lerp_uniform(d, x, length);
}

// ---------------------------------------------------------------------------

std::string to_string(Violation v) {
    switch (v) {
        case Violation::length_not_positive: return "LENGTH_NOT_POSITIVE";
        case Violation::coefficient_malformed: return "COEFFICIENT_MALFORMED";
        case Violation::coefficient_not_finite: return "COEFFICIENT_NOT_FINITE";
        case Violation::mass_not_positive: return "MASS_NOT_POSITIVE";
        case Violation::rigidity_not_positive: return "RIGIDITY_NOT_POSITIVE";
        case Violation::damping_negative: return "DAMPING_NEGATIVE";
        case Violation::gamma_negative: return "GAMMA_NEGATIVE";
        case Violation::damping_inconsistent_with_gamma: return "DAMPING_INCONSISTENT_WITH_GAMMA";
        case Violation::boundary_constant_negative: return "BOUNDARY_CONSTANT_NEGATIVE";
        case Violation::no_damping_or_spring: return "NO_DAMPING_OR_SPRING";
        case Violation::initial_deflection_endpoint_nonzero:
            return "INITIAL_DEFLECTION_ENDPOINT_NONZERO";
        case Violation::initial_condition_not_finite: return "INITIAL_CONDITION_NOT_FINITE";
    }
    return "UNKNOWN";
}

bool ValidationReport::contains(Violation v) const {
    return std::any_of(issues.begin(), issues.end(),
                       [v](const ValidationIssue& i) { return i.code == v; });
}

namespace {

// Points where two fields of any kind can differ: every sample position and
// breakpoint of both fields plus the midpoints between consecutive ones.
// Both fields are affine between consecutive points, so agreement at these
// points implies agreement everywhere.
std::vector<double> probe_points(const CoefficientField& a, const CoefficientField& b,
                                 double length) {
    std::vector<double> pts{0.0, length};
    for (const auto* f : {&a, &b}) {
        if (f->kind() == CoefficientField::Kind::piecewise_constant)
            pts.insert(pts.end(), f->breakpoints().begin(), f->breakpoints().end());
        if (f->kind() == CoefficientField::Kind::sampled) {
            const auto n = f->values().size();
            for (std::size_t i = 0; i < n; ++i)
                pts.push_back(length * static_cast<double>(i) / static_cast<double>(n - 1));
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const auto n = pts.size();
    for (std::size_t i = 0; i + 1 < n; ++i) pts.push_back(0.5 * (pts[i] + pts[i + 1]));
    return pts;
}

void check_field(const char* name, const CoefficientField& f, double length, ValidationReport& r,
                 bool& usable) {
    usable = false;
    if (auto problem = shape_problem(f, length); !problem.empty()) {
        r.issues.push_back({Violation::coefficient_malformed, std::string(name) + ": " + problem});
        return;
    }
    if (!all_finite(f.values())) {
        r.issues.push_back({Violation::coefficient_not_finite, name});
        return;
    }
    usable = true;
}

void check_profile(const char* name, const Profile& p, double length, bool is_deflection,
                   ValidationReport& r) {
    constexpr int kProbe = 257;
    if (p.is_sampled() && p.samples().size() < 2) {
        r.issues.push_back({Violation::initial_condition_not_finite,
                            std::string(name) + ": fewer than two samples"});
        return;
    }
    double scale = 0.0;
    for (int i = 0; i < kProbe; ++i) {
        const double x = length * i / (kProbe - 1);
        const double v = p.value(x, length);
        if (!std::isfinite(v)) {
            r.issues.push_back({Violation::initial_condition_not_finite, name});
            return;
        }
        scale = std::max(scale, std::abs(v));
    }
    if (p.is_sampled() && !all_finite(p.samples())) {
        r.issues.push_back({Violation::initial_condition_not_finite, name});
        return;
    }
    if (is_deflection) {
        // Closed forms such as sin(k pi x / L) carry one rounding error at L.
        const double tol = 64.0 * std::numeric_limits<double>::epsilon() * scale;
        if (std::abs(p.value(0.0, length)) > tol || std::abs(p.value(length, length)) > tol)
            r.issues.push_back({Violation::initial_deflection_endpoint_nonzero, name});
    }
}

}  // namespace

ValidationReport validate(const BeamSpec& spec, const BoundaryControls& bc,
                          const InitialConditions& ic) {
    ValidationReport r;
    const double l = spec.length;
    const bool length_ok = std::isfinite(l) && l > 0.0;
    if (!length_ok) r.issues.push_back({Violation::length_not_positive, "length"});

    if (!std::isfinite(spec.gamma) || spec.gamma < 0.0)
        r.issues.push_back({Violation::gamma_negative, "gamma"});

    if (length_ok) {
        bool m_ok = false, mu_ok = false, r_ok = false;
        check_field("m", spec.mass, l, r, m_ok);
        check_field("mu", spec.damping, l, r, mu_ok);
        check_field("r", spec.rigidity, l, r, r_ok);
        if (m_ok && coefficient_bounds(spec.mass, l).inf <= 0.0)
            r.issues.push_back({Violation::mass_not_positive, "m"});
        if (r_ok && coefficient_bounds(spec.rigidity, l).inf <= 0.0)
            r.issues.push_back({Violation::rigidity_not_positive, "r"});
        if (mu_ok && coefficient_bounds(spec.damping, l).inf < 0.0)
            r.issues.push_back({Violation::damping_negative, "mu"});
        if (m_ok && mu_ok && spec.gamma > 0.0) {
            for (double x : probe_points(spec.mass, spec.damping, l)) {
                const double expected = spec.gamma * spec.mass.at(x, l);
                const double got = spec.damping.at(x, l);
                if (std::abs(got - expected) > 1e-12 * std::abs(expected)) {
                    r.issues.push_back({Violation::damping_inconsistent_with_gamma,
                                        "mu(x) != gamma m(x) at x=" + std::to_string(x)});
                    break;
                }
            }
        }
        check_profile("u0", ic.deflection, l, true, r);
        check_profile("u1", ic.velocity, l, false, r);
    }

    const double ks[] = {bc.kr_left, bc.ka_left, bc.kr_right, bc.ka_right};
    if (std::any_of(std::begin(ks), std::end(ks), [](double k) { return !(k >= 0.0); }))
        r.issues.push_back({Violation::boundary_constant_negative, "boundary constants"});
    double sum = spec.gamma;
    for (double k : ks) sum += k;
    if (!(sum > 0.0))
        r.issues.push_back({Violation::no_damping_or_spring,
                            "gamma + kr_left + ka_left + kr_right + ka_right must be positive"});

    r.certificate_eligible = std::isfinite(spec.gamma) && spec.gamma > 0.0;
    return r;
}

SectionProperties derived_constant_params(double density, double youngs_modulus, double width,
                                          double height) {
    for (double v : {density, youngs_modulus, width, height})
        if (!(v > 0.0) || !std::isfinite(v))
            throw Error(ErrorCode::domain_error, "section inputs must be positive and finite");
    SectionProperties p{};
    p.area = width * height;
    p.inertia = width * height * height * height / 12.0;
    p.mass_per_length = density * p.area;
    p.rigidity = youngs_modulus * p.inertia;
    return p;
}

}  // namespace beamdecay
