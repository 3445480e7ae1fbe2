#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "beamdecay/energy.hpp"
#include "beamdecay/properties.hpp"
#include "csv.hpp"

namespace beamdecay::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void print(std::ostream& os, const std::string& s) { os << s << '\n'; }

std::string two(double v) { return fmt::format("{:.2f}", round_half_even(v, 2)); }

bool print_report(const ValidationReport& report, std::ostream& err) {
    if (report.ok()) return true;
    print(err, "invalid configuration:");
    for (const auto& issue : report.issues)
        print(err, fmt::format("  {}: {}", to_string(issue.code), issue.detail));
    return false;
}

struct BoundsPair {
    double beta1_general = kNaN;
    double beta1_constant = kNaN;
};

BoundsPair both_beta1(const BeamSpec& spec, const BoundaryControls& bc) {
    const double l = spec.length;
    const auto m = coefficient_bounds(spec.mass, l);
    const auto mu = coefficient_bounds(spec.damping, l);
    const auto r = coefficient_bounds(spec.rigidity, l);
    BoundsPair b;
    b.beta1_general = beta_bounds_general(m.sup, mu.sup, r.inf, l, bc.ka_left, bc.ka_right).beta1;
    if (spec.has_constant_coefficients())
        b.beta1_constant =
            beta_bounds_constant(m.sup, spec.gamma, r.inf, l, bc.ka_left, bc.ka_right).beta1;
    return b;
}

void wrote(std::ostream& os, const std::filesystem::path& p) { print(os, "wrote " + p.string()); }

// Tabulated penalty for a damping constant of the strip table.
std::optional<double> table_lambda(double gamma) {
    for (const auto& in : strip_table_inputs())
        if (std::abs(in.gamma - gamma) <= 1e-12 * std::max(1.0, gamma)) return in.lambda;
    return std::nullopt;
}

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::config_error:
        case ErrorCode::domain_error:
        case ErrorCode::precondition_violation:
        case ErrorCode::lambda_inadmissible:
        case ErrorCode::mesh_incompatible:
        case ErrorCode::resolution_error:
            return kExitConfig;
        case ErrorCode::certificate_ineligible:
            return kExitIneligible;
        default:
            return kExitOther;
    }
}

// ---------------------------------------------------------------------------

int cmd_certify(const CommandContext& ctx) {
    const auto spec = beam_from_config(ctx.config);
    const auto bc = controls_from_config(ctx.config);
    const auto ic = initial_from_config(ctx.config, spec.length);
    const auto report = validate(spec, bc, ic);
    if (!print_report(report, ctx.err)) return kExitConfig;
    if (!report.certificate_eligible) {
        print(ctx.err, "CERTIFICATE_INELIGIBLE: the decay certificate needs gamma > 0");
        return kExitIneligible;
    }

    const auto cert = certify(spec, bc, lambda_from_config(ctx.config));
    const auto b1 = both_beta1(spec, bc);

    CsvTable table({"gamma", "ka_minus", "ka_plus", "beta0", "beta1", "lambda_max", "lambda", "M",
                    "sigma", "variant", "beta1_general", "beta1_constant", "beta1_difference"});
    table.add(spec.gamma).add(bc.ka_left).add(bc.ka_right).add(cert.bounds.beta0)
        .add(cert.bounds.beta1).add(cert.lambda_max).add(cert.lambda).add(cert.overshoot)
        .add(cert.rate).add(to_string(cert.bounds.variant)).add(b1.beta1_general)
        .add(b1.beta1_constant).add(b1.beta1_general - b1.beta1_constant);
    table.end_row();

    const double horizon = value_or(ctx.config, "/certificate/horizon", 100.0);
    const int points = value_or(ctx.config, "/certificate/envelope_points", 1001);
    if (!(horizon > 0.0) || points < 2)
        throw Error(ErrorCode::config_error, "certificate.horizon must be > 0 and envelope_points >= 2");
    CsvTable env({"t", "decay", "bound"});
    for (int i = 0; i < points; ++i) {
        const double t = horizon * i / (points - 1);
        const double d = std::exp(-cert.rate * t);
        env.add(t).add(d).add(cert.overshoot * d);
        env.end_row();
    }

    auto& os = ctx.out;
    print(os, fmt::format("decay certificate ({} bounds)", to_string(cert.bounds.variant)));
    print(os, fmt::format("  beta0={}  [{}]", two(cert.bounds.beta0), format_double(cert.bounds.beta0)));
    print(os, fmt::format("  beta1={}  [{}]", two(cert.bounds.beta1), format_double(cert.bounds.beta1)));
    print(os, fmt::format("  lambda_max={}", format_double(cert.lambda_max)));
    print(os, fmt::format("  lambda={}", format_double(cert.lambda)));
    print(os, fmt::format("  M={}  [{}]", two(cert.overshoot), format_double(cert.overshoot)));
    print(os, fmt::format("  sigma={}  [{}]", two(cert.rate), format_double(cert.rate)));
    print(os, fmt::format("  beta1 general formula={}  constant formula={}  difference={}",
                          format_double(b1.beta1_general), format_double(b1.beta1_constant),
                          format_double(b1.beta1_general - b1.beta1_constant)));
    print(os, fmt::format("  E(t) <= {} exp(-{} t) E(0)", format_double(cert.overshoot),
                          format_double(cert.rate)));
    wrote(os, write_csv(ctx.out_dir, "certificate.csv", table));
    wrote(os, write_csv(ctx.out_dir, "envelope.csv", env));
    return kExitSuccess;
}

// ---------------------------------------------------------------------------

std::vector<GoldenCell> golden_cells(const std::vector<DecayTableRow>& rows,
                                     const std::vector<std::size_t>& reference_rows) {
    const auto ref = strip_table_reference();
    std::vector<GoldenCell> cells;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::size_t i = reference_rows.empty() ? k : reference_rows.at(k);
        if (i >= ref.size()) break;
        const auto& r = rows[k];
        const std::pair<const char*, std::pair<double, double>> items[] = {
            {"beta0", {r.bounds.beta0, ref[i].beta0}},
            {"beta1", {r.bounds.beta1, ref[i].beta1}},
            {"M", {r.cert.overshoot, ref[i].overshoot}},
            {"sigma", {r.cert.rate, ref[i].rate}},
        };
        for (const auto& [name, vals] : items) {
            const double rounded = round_half_even(vals.first, 2);
            cells.push_back({i, name, vals.first, rounded, vals.second,
                             std::abs(rounded - vals.second) <= kGoldenTolerance + 1e-12});
        }
    }
    return cells;
}

int cmd_table1(const CommandContext& ctx) {
    const auto policy = value_or(ctx.config, "/lambda_policy", std::string("table"));
    if (policy != "table" && policy != "auto")
        throw Error(ErrorCode::config_error, "lambda_policy must be \"table\" or \"auto\"");
    std::optional<std::vector<double>> gammas;
    if (ctx.config.contains("gamma_list")) gammas = ctx.config.at("gamma_list").get<std::vector<double>>();

    const auto all = strip_table_inputs();
    std::vector<DecayTableInput> inputs;
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (gammas && std::none_of(gammas->begin(), gammas->end(), [&](double g) {
                return std::abs(g - all[i].gamma) <= 1e-12 * std::max(1.0, g);
            }))
            continue;
        auto in = all[i];
        if (policy == "auto") in.lambda = 0.0;
        inputs.push_back(in);
        index.push_back(i);
    }
    const auto rows = decay_table(inputs);

    CsvTable table({"gamma", "ka_minus", "ka_plus", "lambda", "beta0", "beta1", "M", "sigma",
                    "lambda_max", "beta1_general", "beta1_difference"});
    auto& os = ctx.out;
    print(os, fmt::format("{:>6} {:>6} {:>6} {:>8} {:>7} {:>7} {:>8} {:>6} {:>14}", "gamma", "ka-",
                          "ka+", "lambda", "beta0", "beta1", "M", "sigma", "beta1(general)"));
    for (const auto& r : rows) {
        table.add(r.input.gamma).add(r.input.ka_left).add(r.input.ka_right).add(r.cert.lambda)
            .add(r.bounds.beta0).add(r.bounds.beta1).add(r.cert.overshoot).add(r.cert.rate)
            .add(r.cert.lambda_max).add(r.beta1_general).add(r.beta1_general - r.bounds.beta1);
        table.end_row();
        print(os, fmt::format("{:>6} {:>6} {:>6} {:>8.4g} {:>7} {:>7} {:>8} {:>6} {:>14.6g}",
                              r.input.gamma, r.input.ka_left, r.input.ka_right, r.cert.lambda,
                              two(r.bounds.beta0), two(r.bounds.beta1), two(r.cert.overshoot),
                              two(r.cert.rate), r.beta1_general));
    }
    wrote(os, write_csv(ctx.out_dir, "table1.csv", table));

    if (policy != "table") {
        print(os, "lambda_policy=auto: golden comparison skipped");
        return kExitSuccess;
    }
    int bad = 0;
    for (const auto& cell : golden_cells(rows, index)) {
        if (cell.ok) continue;
        ++bad;
        const auto& in = all[cell.row];
        print(ctx.err, fmt::format("golden mismatch: row {} (gamma={}, ka={}) {}: computed {} -> {:.2f} "
                                   "vs reference {:.2f}",
                                   cell.row + 1, in.gamma, in.ka_left, cell.column,
                                   format_double(cell.computed), cell.rounded, cell.reference));
    }
    if (bad > 0) {
        print(ctx.err, fmt::format("{} cell(s) differ from the reference table by more than {}", bad,
                                   kGoldenTolerance));
        return kExitGoldenMismatch;
    }
    print(os, "all cells match the reference table");
    return kExitSuccess;
}

// ---------------------------------------------------------------------------

namespace {

struct SimulationResult {
    EnergyLedger ledger;
    std::optional<DecayCertificate> cert;
    std::optional<CertificateCheck> check;
    std::optional<SandwichCheck> sandwich;
    std::optional<double> sigma_measured;
    std::string sigma_note;
    double drift = 0.0;
    bool non_increasing = true;
    double max_step_increase = 0.0;
};

SimulationResult simulate_run(const BeamSpec& spec, const BoundaryControls& bc,
                              const InitialConditions& ic, const Json& config,
                              const ValidationReport& report, Trajectory* keep) {
    const auto mesh = mesh_from_config(config, spec.length);
    const auto beam = assemble(spec, bc, mesh);
    const auto state = interpolate_initial(ic, mesh);
    const auto icfg = integrator_from_config(config, beam);

    SimulationResult res;
    if (report.certificate_eligible) res.cert = certify(spec, bc, lambda_from_config(config));
    EnergyMonitor monitor(beam);
    auto traj = integrate(beam, state.displacement, state.velocity, icfg, std::ref(monitor));
    res.ledger = build_ledger(beam, traj, res.cert ? res.cert->lambda : 0.0);
    res.drift = monitor.relative_drift();
    res.non_increasing = monitor.non_increasing();
    res.max_step_increase = monitor.max_increase();
    if (res.ledger.e0 > 0.0) {
        if (res.cert) {
            res.check = certificate_check(res.ledger, *res.cert);
            res.sandwich = sandwich_check(res.ledger, res.cert->bounds);
        }
        try {
            res.sigma_measured = measured_decay_rate(res.ledger);
        } catch (const Error& e) {
            res.sigma_note = e.what();
        }
    }
    if (keep) *keep = std::move(traj);
    return res;
}

}  // namespace

int cmd_simulate(const CommandContext& ctx) {
    const auto spec = beam_from_config(ctx.config);
    const auto bc = controls_from_config(ctx.config);
    const auto ic = initial_from_config(ctx.config, spec.length);
    const auto report = validate(spec, bc, ic);
    if (!print_report(report, ctx.err)) return kExitConfig;

    Trajectory traj;
    const auto res = simulate_run(spec, bc, ic, ctx.config, report, &traj);
    const auto& led = res.ledger;

    CsvTable tcsv({"t", "E", "J", "L", "diss_viscous", "diss_left", "diss_right", "ux0", "uxl",
                   "uxt0", "uxtl"});
    // End rotations are the first and last unknowns.
    const int n_elements = mesh_from_config(ctx.config, spec.length).n_elements;
    const int il = 0;
    const int ir = 2 * n_elements - 1;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        tcsv.add(traj.times[i]).add(led.energy[i]).add(led.aux[i]).add(led.lyapunov[i])
            .add(traj.diss_viscous[i]).add(traj.diss_left[i]).add(traj.diss_right[i])
            .add(traj.displacement[i](il)).add(traj.displacement[i](ir))
            .add(traj.velocity[i](il)).add(traj.velocity[i](ir));
        tcsv.end_row();
    }
    const auto running = running_decay_rate(led);
    CsvTable lcsv({"t", "E", "J", "L", "residual", "envelope", "sigma_measured_running"});
    for (std::size_t i = 0; i < led.size(); ++i) {
        const double env = res.cert ? led.e0 * res.cert->overshoot * std::exp(-res.cert->rate * led.times[i])
                                    : kNaN;
        lcsv.add(led.times[i]).add(led.energy[i]).add(led.aux[i]).add(led.lyapunov[i])
            .add(led.residual[i]).add(env).add(running[i]);
        lcsv.end_row();
    }

    auto& os = ctx.out;
    print(os, fmt::format("simulation: {} elements, dt={}, steps={}, t_final={}", n_elements,
                          format_double(traj.dt), traj.n_steps, format_double(traj.t_final)));
    print(os, fmt::format("E(0)={}", format_double(led.e0)));
    if (!(led.e0 > 0.0)) {
        print(os, "warning ZERO_ENERGY: the initial state carries no energy; sigma_measured not computed");
    } else {
        print(os, fmt::format("max identity residual={} ({} E(0))", format_double(led.max_abs_residual()),
                              format_double(led.max_abs_residual() / led.e0)));
        const bool conservative = spec.gamma == 0.0 && bc.ka_left == 0.0 && bc.ka_right == 0.0 &&
                                  coefficient_bounds(spec.damping, spec.length).sup == 0.0;
        if (conservative)
            print(os, fmt::format("dissipativity: constant energy, drift={}", format_double(res.drift)));
        else
            print(os, fmt::format("dissipativity: {}, max step increase={} ({} E(0))",
                                  res.non_increasing ? "non-increasing" : "VIOLATED",
                                  format_double(res.max_step_increase),
                                  format_double(res.max_step_increase / led.e0)));
        if (res.check) {
            print(os, fmt::format("certificate: {} (M={}, sigma={}, lambda={}), margin={}",
                                  res.check->holds ? "holds" : "VIOLATED", format_double(res.cert->overshoot),
                                  format_double(res.cert->rate), format_double(res.cert->lambda),
                                  format_double(res.check->margin)));
            print(os, fmt::format("sandwich: {} (lower margin={}, upper margin={})",
                                  res.sandwich->holds ? "holds" : "VIOLATED",
                                  format_double(res.sandwich->lower_margin),
                                  format_double(res.sandwich->upper_margin)));
        } else {
            print(os, "certificate: not applicable (CERTIFICATE_INELIGIBLE, gamma = 0)");
        }
        if (res.sigma_measured) {
            print(os, fmt::format("sigma_measured={}{}", format_double(*res.sigma_measured),
                                  res.cert ? fmt::format(" (sigma_theory={})", format_double(res.cert->rate))
                                           : std::string()));
        } else {
            print(os, "sigma_measured: undefined (" + res.sigma_note + ")");
        }
    }
    wrote(os, write_csv(ctx.out_dir, "trajectory.csv", tcsv));
    wrote(os, write_csv(ctx.out_dir, "ledger.csv", lcsv));
    return kExitSuccess;
}

// ---------------------------------------------------------------------------

int cmd_sweep(const CommandContext& ctx) {
    const Json sweep = ctx.config.value("sweep", Json::object());
    const auto gammas = sweep.value("gamma", std::vector<double>{0.1, 1.0, 5.0});
    std::vector<std::pair<double, double>> kas;
    if (sweep.contains("ka")) {
        for (double k : sweep.at("ka").get<std::vector<double>>()) kas.emplace_back(k, k);
    } else {
        for (double l : sweep.value("ka_left", std::vector<double>{0.0}))
            for (double r : sweep.value("ka_right", std::vector<double>{0.0})) kas.emplace_back(l, r);
    }
    const bool simulate = sweep.value("simulate", false);
    const auto cap = simulate ? sweep.value("max_points_simulate", std::size_t{100})
                              : sweep.value("max_points", std::size_t{10000});
    const std::size_t n_points = gammas.size() * kas.size();
    if (n_points > cap) {
        print(ctx.err, fmt::format("sweep grid has {} points, over the cap of {}", n_points, cap));
        return kExitResourceCap;
    }

    // Penalty policy: number, "auto", or "table" (the table's lambda for gamma).
    const Json lam = sweep.contains("lambda") ? sweep.at("lambda") : Json("auto");
    std::vector<double> lambdas(gammas.size(), 0.0);
    for (std::size_t g = 0; g < gammas.size(); ++g) {
        if (lam.is_number()) {
            lambdas[g] = lam.get<double>();
        } else if (lam == "table") {
            const auto pl = table_lambda(gammas[g]);
            if (!pl) throw Error(ErrorCode::config_error,
                                 fmt::format("no reference lambda for gamma={}", gammas[g]));
            lambdas[g] = *pl;
        } else if (lam != "auto") {
            throw Error(ErrorCode::config_error, "sweep.lambda must be a number, \"auto\" or \"table\"");
        }
    }

    struct Point {
        double gamma, ka_left, ka_right, lambda_in;
        std::string status = "ok";
        std::optional<DecayCertificate> cert;
        std::optional<SimulationResult> sim;
    };
    std::vector<Point> points;
    for (std::size_t g = 0; g < gammas.size(); ++g)
        for (const auto& [l, r] : kas) points.push_back(Point{gammas[g], l, r, lambdas[g], "ok", std::nullopt, std::nullopt});

    Json base = ctx.config;
    if (!base.contains("beam")) base["beam"] = Json{{"preset", "strip"}};
    auto evaluate = [&](Point& p) {
        Json cfg = base;
        cfg["beam"]["gamma"] = p.gamma;
        cfg["boundary"]["ka_left"] = p.ka_left;
        cfg["boundary"]["ka_right"] = p.ka_right;
        try {
            const auto spec = beam_from_config(cfg);
            const auto bc = controls_from_config(cfg);
            const auto ic = initial_from_config(cfg, spec.length);
            const auto report = validate(spec, bc, ic);
            if (!report.ok()) {
                p.status = to_string(report.issues.front().code);
                return;
            }
            if (!report.certificate_eligible) {
                p.status = "CERTIFICATE_INELIGIBLE";
            } else {
                p.cert = certify(spec, bc, p.lambda_in);
            }
            if (simulate) {
                if (p.cert) cfg["certificate"]["lambda"] = p.cert->lambda;
                p.sim = simulate_run(spec, bc, ic, cfg, report, nullptr);
            }
        } catch (const Error& e) {
            p.status = std::string(to_string(e.code()));
        }
    };

    const int workers = std::max(1, value_or(ctx.config, "/workers", 1));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) evaluate(points[i]);
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers && static_cast<std::size_t>(w) < points.size(); ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<std::string> header = {"gamma", "ka_minus", "ka_plus", "status", "lambda",
                                       "lambda_max", "beta0", "beta1", "M", "sigma"};
    if (simulate)
        for (const char* c : {"sigma_measured", "certificate_holds", "max_residual_over_e0"}) header.emplace_back(c);
    CsvTable table(header);
    for (const auto& p : points) {
        table.add(p.gamma).add(p.ka_left).add(p.ka_right).add(p.status);
        if (p.cert)
            table.add(p.cert->lambda).add(p.cert->lambda_max).add(p.cert->bounds.beta0)
                .add(p.cert->bounds.beta1).add(p.cert->overshoot).add(p.cert->rate);
        else
            for (int k = 0; k < 6; ++k) table.add(kNaN);
        if (simulate) {
            if (p.sim) {
                const auto& s = *p.sim;
                table.add(s.sigma_measured.value_or(kNaN));
                table.add(s.check ? std::string(s.check->holds ? "true" : "false") : std::string("n/a"));
                table.add(s.ledger.e0 > 0.0 ? s.ledger.max_abs_residual() / s.ledger.e0 : kNaN);
            } else {
                table.add(kNaN).add("n/a").add(kNaN);
            }
        }
        table.end_row();
    }
    print(ctx.out, fmt::format("sweep: {} point(s), {} worker(s)", points.size(), workers));
    for (const auto& p : points) {
        if (p.cert)
            print(ctx.out, fmt::format("  gamma={} ka=({}, {}) lambda={} M={} sigma={}", p.gamma,
                                       p.ka_left, p.ka_right, format_double(p.cert->lambda),
                                       two(p.cert->overshoot), two(p.cert->rate)));
        else
            print(ctx.out, fmt::format("  gamma={} ka=({}, {}) {}", p.gamma, p.ka_left, p.ka_right, p.status));
    }
    wrote(ctx.out, write_csv(ctx.out_dir, "sweep.csv", table));
    return kExitSuccess;
}

// ---------------------------------------------------------------------------

int cmd_check(const CommandContext& ctx) {
    PropertyConfig pc;
    const auto& c = ctx.config;
    pc.seed = value_or(c, "/seed", std::uint64_t{42});
    pc.profiles = value_or(c, "/profiles", pc.profiles);
    pc.samples = value_or(c, "/samples", pc.samples);
    pc.sandwich_trials = value_or(c, "/sandwich_trials", pc.sandwich_trials);
    pc.dissipativity_trials = value_or(c, "/dissipativity_trials", pc.dissipativity_trials);
    pc.beta0_scale = value_or(c, "/beta0_scale", pc.beta0_scale);
    pc.beta1_scale = value_or(c, "/beta1_scale", pc.beta1_scale);

    std::vector<Suite> suites;
    if (c.contains("suite")) {
        const auto& s = c.at("suite");
        std::vector<std::string> names =
            s.is_array() ? s.get<std::vector<std::string>>() : std::vector<std::string>{s.get<std::string>()};
        for (const auto& n : names) {
            const auto parsed = parse_suite(n);
            if (!parsed) throw Error(ErrorCode::config_error, "unknown suite '" + n + "'");
            suites.push_back(*parsed);
        }
    } else {
        suites = all_suites();
    }

    CsvTable table({"suite", "trials", "passed", "failed"});
    bool failed = false;
    for (Suite s : suites) {
        const auto r = run_suite(s, pc);
        table.add(to_string(s)).add(r.trials).add(r.passed).add(r.trials - r.passed);
        table.end_row();
        print(ctx.out, fmt::format("{}: {}/{} passed", to_string(s), r.passed, r.trials));
        if (r.ok()) continue;
        failed = true;
        const auto& ce = *r.counterexample;
        print(ctx.err, fmt::format("{} counterexample: {}", to_string(s), ce.detail));
        std::vector<std::string> header = {"x", "u"};
        if (!ce.v.empty()) header.emplace_back("v");
        CsvTable cx(header);
        for (std::size_t i = 0; i < ce.x.size(); ++i) {
            cx.add(ce.x[i]).add(ce.u[i]);
            if (!ce.v.empty()) cx.add(ce.v[i]);
            cx.end_row();
        }
        wrote(ctx.err, write_csv(ctx.out_dir, "counterexample_" + to_string(s) + ".csv", cx));
    }
    print(ctx.out, fmt::format("seed={}", pc.seed));
    wrote(ctx.out, write_csv(ctx.out_dir, "check.csv", table));
    return failed ? kExitPropertyFailure : kExitSuccess;
}

// ---------------------------------------------------------------------------

int run(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
    static const std::map<std::string, std::function<int(const CommandContext&)>> commands = {
        {"certify", cmd_certify}, {"table1", cmd_table1}, {"simulate", cmd_simulate},
        {"sweep", cmd_sweep},     {"check", cmd_check},
    };
    const auto it = commands.find(manifest.command);
    if (it == commands.end()) {
        print(err, "unknown command '" + manifest.command + "'");
        return kExitConfig;
    }
    std::filesystem::path out_dir = manifest.output_dir;
    if (const char* env = std::getenv("BEAMDECAY_OUT"); env && *env) out_dir = env;
    try {
        const CommandContext ctx{load_config(manifest), out_dir, out, err};
        return it->second(ctx);
    } catch (const Error& e) {
        print(err, fmt::format("error: {}", e.what()));
        return exit_code_for(e.code());
    } catch (const Json::exception& e) {
        print(err, fmt::format("error: CONFIG_ERROR: {}", e.what()));
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        print(err, fmt::format("error: {}", e.what()));
        return kExitOther;
    } catch (const std::exception& e) {
        print(err, fmt::format("error: {}", e.what()));
        return kExitOther;
    }
}

}  // namespace beamdecay::cli
