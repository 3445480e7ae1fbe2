#include "beamdecay/properties.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "beamdecay/discretization.hpp"
#include "beamdecay/energy.hpp"
#include "beamdecay/errors.hpp"
#include "beamdecay/stability.hpp"
#include "beamdecay/timestepper.hpp"

namespace beamdecay {

namespace {

constexpr std::array<std::pair<Suite, std::string_view>, 4> kSuiteNames = {{
    {Suite::poincare, "poincare"},
    {Suite::trace, "trace"},
    {Suite::sandwich, "sandwich"},
    {Suite::dissipativity, "dissipativity"},
}};

}  // namespace

std::string to_string(Suite s) {
    for (const auto& [suite, name] : kSuiteNames)
        if (suite == s) return std::string(name);
    return "unknown";
}

std::optional<Suite> parse_suite(std::string_view name) {
    for (const auto& [suite, n] : kSuiteNames)
        if (n == name) return suite;
    return std::nullopt;
}

std::vector<Suite> all_suites() {
    return {Suite::poincare, Suite::trace, Suite::sandwich, Suite::dissipativity};
}

std::vector<double> natural_spline_samples(const std::vector<double>& knots, int samples) {
    const int k = static_cast<int>(knots.size()) - 1;
    if (k < 1 || samples < 2) throw Error(ErrorCode::domain_error, "spline needs 2 knots and 2 samples");
    const double hk = 1.0 / k;
    // Second derivatives at the knots, zero at both ends.
    Eigen::VectorXd m2 = Eigen::VectorXd::Zero(k + 1);
    if (k >= 2) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k - 1, k - 1);
        Eigen::VectorXd b(k - 1);
        for (int i = 1; i < k; ++i) {
            a(i - 1, i - 1) = 4.0;
            if (i > 1) a(i - 1, i - 2) = 1.0;
            if (i < k - 1) a(i - 1, i) = 1.0;
            b(i - 1) = 6.0 * (knots[i - 1] - 2.0 * knots[i] + knots[i + 1]) / (hk * hk);
        }
        m2.segment(1, k - 1) = a.partialPivLu().solve(b);
    }
    std::vector<double> out(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        const double x = static_cast<double>(s) / (samples - 1);
        int i = std::min(static_cast<int>(x / hk), k - 1);
        const double t1 = (i + 1) * hk - x;
        const double t0 = x - i * hk;
        out[static_cast<std::size_t>(s)] =
            (m2(i) * t1 * t1 * t1 + m2(i + 1) * t0 * t0 * t0) / (6.0 * hk) +
            (knots[i] - m2(i) * hk * hk / 6.0) * t1 / hk +
            (knots[i + 1] - m2(i + 1) * hk * hk / 6.0) * t0 / hk;
    }
    out.front() = knots.front();
    out.back() = knots.back();
    return out;
}

std::vector<double> random_knots(std::mt19937_64& rng, int min_interior, int max_interior) {
    std::uniform_int_distribution<int> count(min_interior, max_interior);
    std::normal_distribution<double> value(0.0, 1.0);
    const int interior = count(rng);
    std::vector<double> knots(static_cast<std::size_t>(interior) + 2, 0.0);
    for (int i = 1; i <= interior; ++i) knots[static_cast<std::size_t>(i)] = value(rng);
    return knots;
}

namespace {

using Knots = std::vector<double>;

// Drops, then zeroes, interior knots while the case keeps failing.
Knots shrink(Knots knots, const std::function<bool(const Knots&)>& fails) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 1; i + 1 < knots.size() && knots.size() > 3; ++i) {
            Knots trial = knots;
            trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
            if (fails(trial)) {
                knots = std::move(trial);
                changed = true;
                break;
            }
        }
        if (changed) continue;
        for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
            if (knots[i] == 0.0) continue;
            Knots trial = knots;
            trial[i] = 0.0;
            if (fails(trial)) {
                knots = std::move(trial);
                changed = true;
                break;
            }
        }
    }
    return knots;
}

std::vector<double> grid(double length, int samples) {
    std::vector<double> x(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) x[static_cast<std::size_t>(i)] = length * i / (samples - 1);
    return x;
}

std::string format_check(const char* what, const InequalityCheck& c) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": lhs=" << c.lhs << " rhs=" << c.rhs;
    return os.str();
}

SuiteResult run_inequality(Suite suite, const PropertyConfig& cfg, std::mt19937_64& rng) {
    const double l = StripBeam::length;
    auto evaluate = [&](const Knots& k, std::string* detail) {
        const auto u = natural_spline_samples(k, cfg.samples);
        if (suite == Suite::poincare) {
            const auto c = poincare_check(u, l);
            if (detail) *detail = format_check("poincare", c);
            return c.holds;
        }
        const auto c = trace_check(u, l);
        if (detail) *detail = format_check("trace left", c.left) + "; " + format_check("trace right", c.right);
        return c.holds();
    };
    SuiteResult r;
    r.suite = suite;
    for (int t = 0; t < cfg.profiles; ++t) {
        const Knots k = random_knots(rng);
        ++r.trials;
        if (evaluate(k, nullptr)) {
            ++r.passed;
        } else if (!r.counterexample) {
            const Knots small = shrink(k, [&](const Knots& c) { return !evaluate(c, nullptr); });
            Counterexample ce;
            evaluate(small, &ce.detail);
            ce.x = grid(l, cfg.samples);
            ce.u = natural_spline_samples(small, cfg.samples);
            r.counterexample = std::move(ce);
        }
    }
    return r;
}

// Continuous functionals of a sampled (u, v) pair on the strip beam.
struct SandwichCase {
    int row = 0;
    int pairing = 0;  // 0: v = -alpha u, 1: v = +alpha u, 2: independent v
    double kr = 0.0;
    double lambda = 0.0;
    Knots v_knots;
};

struct SandwichEval {
    bool holds;
    std::string detail;
    std::vector<double> u, v;
};

SandwichEval evaluate_sandwich(const Knots& uk, const SandwichCase& sc, const PropertyConfig& cfg) {
    const double l = StripBeam::length;
    const double m = StripBeam::tabulated_mass;
    const double r = StripBeam::tabulated_rigidity;
    const auto rows = strip_table_inputs();
    const auto& in = rows[static_cast<std::size_t>(sc.row)];
    auto bounds = beta_bounds_constant(m, in.gamma, r, l, in.ka_left, in.ka_right);
    bounds.beta0 *= cfg.beta0_scale;
    bounds.beta1 *= cfg.beta1_scale;

    const int n = cfg.samples;
    const double h = l / (n - 1);
    SandwichEval ev{true, {}, natural_spline_samples(uk, n), {}};
    const auto& u = ev.u;
    const auto d2 = quadrature::second_derivative(u, h);
    std::vector<double> f(u.size());
    auto integral = [&](const std::vector<double>& p, const std::vector<double>& q) {
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = p[i] * q[i];
        return quadrature::simpson(f, h);
    };
    const double curv = integral(d2, d2);
    const double uu = integral(u, u);
    if (!(uu > 0.0)) return ev;  // zero profile: every term vanishes

    const double alpha = std::sqrt(r * curv / (m * uu));
    if (sc.pairing == 2) {
        ev.v = natural_spline_samples(sc.v_knots, n);
    } else {
        ev.v = u;
        for (double& x : ev.v) x *= sc.pairing == 0 ? -alpha : alpha;
    }
    const double vv = integral(ev.v, ev.v);
    const double uv = integral(u, ev.v);
    const auto [a, b] = quadrature::end_slopes(u, h);

    const double e = 0.5 * m * vv + 0.5 * r * curv + 0.5 * sc.kr * (a * a + b * b);
    const double j = m * uv + 0.5 * in.gamma * m * uu + 0.5 * in.ka_left * a * a + 0.5 * in.ka_right * b * b;
    const double big_l = lyapunov_l(e, j, sc.lambda);
    const double lo = big_l - (1.0 - bounds.beta0 * sc.lambda) * e;
    const double hi = (1.0 + bounds.beta1 * sc.lambda) * e - big_l;
    ev.holds = lo >= -kSandwichSlack * e && hi >= -kSandwichSlack * e;
    std::ostringstream os;
    os.precision(17);
    os << "row=" << sc.row << " gamma=" << in.gamma << " ka=" << in.ka_left << " lambda=" << sc.lambda
       << " beta0=" << bounds.beta0 << " beta1=" << bounds.beta1 << " E=" << e << " J=" << j
       << " L-(1-beta0 lambda)E=" << lo << " (1+beta1 lambda)E-L=" << hi;
    ev.detail = os.str();
    return ev;
}

SuiteResult run_sandwich(const PropertyConfig& cfg, std::mt19937_64& rng) {
    const auto rows = strip_table_inputs();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SuiteResult res;
    res.suite = Suite::sandwich;
    for (int t = 0; t < cfg.sandwich_trials; ++t) {
        SandwichCase sc;
        sc.row = t % static_cast<int>(rows.size());
        sc.pairing = (t / static_cast<int>(rows.size())) % 3;
        const auto& in = rows[static_cast<std::size_t>(sc.row)];
        // Table penalty on even trials, a random admissible one otherwise.
        if (t % 2 == 0) {
            sc.lambda = in.lambda;
        } else {
            const auto b = beta_bounds_constant(StripBeam::tabulated_mass, in.gamma,
                                                StripBeam::tabulated_rigidity, StripBeam::length,
                                                in.ka_left, in.ka_right);
            const auto range = lambda_range(b.beta0, in.gamma, StripBeam::tabulated_mass,
                                            StripBeam::tabulated_mass);
            sc.lambda = range.upper * (0.01 + 0.98 * unit(rng));
        }
        sc.kr = unit(rng) < 0.5 ? 0.0 : 0.1 * unit(rng);
        // Few knots give smooth profiles close to the extremal shapes.
        const Knots uk = random_knots(rng, 1, 8);
        sc.v_knots = random_knots(rng, 1, 8);
        ++res.trials;
        auto ev = evaluate_sandwich(uk, sc, cfg);
        if (ev.holds) {
            ++res.passed;
        } else if (!res.counterexample) {
            const Knots small = shrink(uk, [&](const Knots& k) { return !evaluate_sandwich(k, sc, cfg).holds; });
            ev = evaluate_sandwich(small, sc, cfg);
            res.counterexample = Counterexample{ev.detail, grid(StripBeam::length, cfg.samples), ev.u, ev.v};
        }
    }
    return res;
}

SuiteResult run_dissipativity(const PropertyConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SuiteResult res;
    res.suite = Suite::dissipativity;
    const double l = StripBeam::length;
    const auto mesh = uniform_mesh(l, 16);
    for (int t = 0; t < cfg.dissipativity_trials; ++t) {
        const double gamma = t % 3 == 0 ? 0.0 : 2.0 * unit(rng);
        BoundaryControls bc{0.01 * unit(rng), 0.02 * unit(rng), 0.01 * unit(rng), 0.02 * unit(rng)};
        const auto spec = StripBeam::spec(gamma);
        const auto beam = assemble(spec, bc, mesh);

        auto u0 = natural_spline_samples(random_knots(rng), cfg.samples);
        auto u1 = natural_spline_samples(random_knots(rng), cfg.samples);
        for (double& x : u0) x *= 0.01;
        for (double& x : u1) x *= 0.1;
        const auto state =
            interpolate_initial({Profile::sampled(u0), Profile::sampled(u1)}, mesh);

        IntegratorConfig ic;
        ic.dt = 1e-4;
        ic.t_final = 0.25;
        ic.snapshot_stride = 1000;
        ic.record_traces = false;
        EnergyMonitor monitor(beam);
        integrate(beam, state.displacement, state.velocity, ic, std::ref(monitor));
        ++res.trials;
        if (monitor.non_increasing() && monitor.bounded_by_initial()) {
            ++res.passed;
        } else if (!res.counterexample) {
            std::ostringstream os;
            os.precision(17);
            os << "gamma=" << gamma << " ka_left=" << bc.ka_left << " ka_right=" << bc.ka_right
               << " kr_left=" << bc.kr_left << " kr_right=" << bc.kr_right
               << " max_step_increase=" << monitor.max_increase() << " E0=" << monitor.initial();
            res.counterexample = Counterexample{os.str(), grid(l, cfg.samples), u0, u1};
        }
    }
    return res;
}

}  // namespace

SuiteResult run_suite(Suite suite, const PropertyConfig& cfg) {
    if (cfg.samples < 8) throw Error(ErrorCode::config_error, "property profiles need >= 8 samples");
    // Independent stream per suite so filtering does not change results.
    std::mt19937_64 rng(cfg.seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(suite) + 1));
    switch (suite) {
        case Suite::poincare:
        case Suite::trace:
            return run_inequality(suite, cfg, rng);
        case Suite::sandwich:
            return run_sandwich(cfg, rng);
        case Suite::dissipativity:
            return run_dissipativity(cfg, rng);
    }
    return {};
}

}  // namespace beamdecay
