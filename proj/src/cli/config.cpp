#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "beamdecay/errors.hpp"
#include "beamdecay/stability.hpp"

namespace beamdecay::cli {

namespace {

[[noreturn]] void config_fail(const std::string& what) {
    throw Error(ErrorCode::config_error, what);
}

std::string pointer_from_dotted(std::string_view key) {
    std::string p;
    std::size_t start = 0;
    while (start <= key.size()) {
        const auto dot = key.find('.', start);
        const auto part = key.substr(start, dot == std::string_view::npos ? std::string_view::npos
                                                                         : dot - start);
        if (part.empty()) config_fail("malformed override key '" + std::string(key) + "'");
        p += '/';
        p += part;
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return p;
}

CoefficientField field_from(const Json& j, const char* name) {
    if (j.is_number()) return CoefficientField::constant(j.get<double>());
    if (j.is_object()) {
        if (j.contains("piecewise")) {
            const auto& p = j.at("piecewise");
            return CoefficientField::piecewise(p.at("breakpoints").get<std::vector<double>>(),
                                               p.at("values").get<std::vector<double>>());
        }
        if (j.contains("sampled")) return CoefficientField::sampled(j.at("sampled").get<std::vector<double>>());
    }
    config_fail(std::string("beam.") + name + " must be a number, {piecewise} or {sampled}");
}

Profile profile_from(const Json& j, double length, const char* name) {
    if (j.is_null()) return Profile::zero();
    if (j.is_array()) return Profile::sampled(j.get<std::vector<double>>());
    if (!j.is_object()) config_fail(std::string("initial.") + name + " must be an object");
    const auto kind = j.value("kind", std::string("zero"));
    if (kind == "zero") return Profile::zero();
    if (kind == "demo") return Profile::demo(length, j.value("amplitude", 0.01));
    if (kind == "mode") return Profile::mode(length, j.value("k", 1), j.value("amplitude", 0.01));
    if (kind == "samples") return Profile::sampled(j.at("values").get<std::vector<double>>());
    config_fail(std::string("unknown initial.") + name + ".kind '" + kind + "'");
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Json::exception& e) {
        config_fail(std::string("config: ") + e.what());
    }
}

}  // namespace

void apply_override(Json& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        config_fail("override '" + std::string(assignment) + "' is not key=value");
    const auto key = assignment.substr(0, eq);
    const std::string raw(assignment.substr(eq + 1));
    Json value = Json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    config[Json::json_pointer(pointer_from_dotted(key))] = std::move(value);
}

Json load_config(const RunManifest& manifest) {
    Json config = Json::object();
    if (manifest.config_path) {
        std::ifstream in(*manifest.config_path);
        if (!in) config_fail("cannot open config '" + *manifest.config_path + "'");
        config = Json::parse(in, nullptr, false, true);
        if (config.is_discarded() || !config.is_object())
            config_fail("config '" + *manifest.config_path + "' is not a JSON object");
    }
    for (const auto& o : manifest.overrides) apply_override(config, o);
    if (manifest.seed) config["seed"] = *manifest.seed;
    if (manifest.workers) config["workers"] = *manifest.workers;
    return config;
}

BeamSpec beam_from_config(const Json& config) {
    return guarded([&] {
        const Json beam = config.value("beam", Json::object());
        const double gamma = beam.value("gamma", 0.0);
        const auto preset = beam.value("preset", std::string());
        BeamSpec spec;
        if (preset == "strip") {
            spec = StripBeam::spec(gamma);
        } else if (preset == "strip_derived") {
            const auto s = derived_constant_params(StripBeam::density, StripBeam::youngs_modulus,
                                                   StripBeam::width, StripBeam::height);
            spec = BeamSpec::proportional(StripBeam::length, CoefficientField::constant(s.mass_per_length),
                                          CoefficientField::constant(s.rigidity), gamma);
        } else if (!preset.empty()) {
            config_fail("unknown beam.preset '" + preset + "'");
        } else if (beam.contains("section")) {
            const auto& s = beam.at("section");
            const auto p = derived_constant_params(s.at("density").get<double>(),
                                                   s.at("youngs_modulus").get<double>(),
                                                   s.at("width").get<double>(),
                                                   s.at("height").get<double>());
            spec = BeamSpec::proportional(beam.at("length").get<double>(),
                                          CoefficientField::constant(p.mass_per_length),
                                          CoefficientField::constant(p.rigidity), gamma);
        } else {
            if (!beam.contains("length") || !beam.contains("mass") || !beam.contains("rigidity"))
                config_fail("beam needs a preset, a section, or length/mass/rigidity");
            spec = BeamSpec::proportional(beam.at("length").get<double>(),
                                          field_from(beam.at("mass"), "mass"),
                                          field_from(beam.at("rigidity"), "rigidity"), gamma);
        }
        if (beam.contains("length") && !preset.empty()) spec.length = beam.at("length").get<double>();
        if (beam.contains("damping")) spec.damping = field_from(beam.at("damping"), "damping");
        return spec;
    });
}

BoundaryControls controls_from_config(const Json& config) {
    return guarded([&] {
        const Json b = config.value("boundary", Json::object());
        return BoundaryControls{b.value("kr_left", 0.0), b.value("ka_left", 0.0),
                                b.value("kr_right", 0.0), b.value("ka_right", 0.0)};
    });
}

InitialConditions initial_from_config(const Json& config, double length) {
    return guarded([&] {
        const Json i = config.value("initial", Json::object());
        const Json u0 = i.contains("deflection") ? i.at("deflection") : Json{{"kind", "demo"}};
        const Json u1 = i.contains("velocity") ? i.at("velocity") : Json();
        return InitialConditions{profile_from(u0, length, "deflection"),
                                 profile_from(u1, length, "velocity")};
    });
}

Mesh mesh_from_config(const Json& config, double length) {
    const int n = guarded([&] { return value_or(config, "/mesh/elements", 64); });
    if (n < 2) config_fail("mesh.elements must be >= 2");
    return uniform_mesh(length, n);
}

IntegratorConfig integrator_from_config(const Json& config, const DiscreteBeam& beam) {
    IntegratorConfig ic = guarded([&] {
        IntegratorConfig c;
        const Json j = config.value("integrator", Json::object());
        c.t_final = j.value("t_final", 20.0);
        c.beta = j.value("beta", 0.25);
        c.gamma = j.value("gamma", 0.5);
        c.snapshot_stride = j.value("snapshot_stride", 0);
        c.record_traces = j.value("record_traces", true);
        const Json dt = j.contains("dt") ? j.at("dt") : Json("auto");
        if (dt.is_string()) {
            if (dt.get<std::string>() != "auto") config_fail("integrator.dt must be a number or \"auto\"");
            c.dt = 0.0;
        } else {
            c.dt = dt.get<double>();
        }
        return c;
    });
    if (!(ic.t_final > 0.0)) config_fail("integrator.t_final must be positive");
    if (ic.dt == 0.0) ic.dt = default_time_step(beam, ic.t_final);
    if (ic.snapshot_stride <= 0) {
        // Roughly 2000 snapshots per run unless asked otherwise.
        const auto steps = static_cast<double>(std::llround(ic.t_final / ic.dt));
        ic.snapshot_stride = std::max(1, static_cast<int>(std::ceil(steps / 2000.0)));
    }
    ic.validate();
    return ic;
}

double lambda_from_config(const Json& config) {
    return guarded([&] {
        const Json::json_pointer p("/certificate/lambda");
        if (!config.contains(p)) return 0.0;
        const auto& v = config.at(p);
        if (v.is_string()) {
            if (v.get<std::string>() != "auto") config_fail("certificate.lambda must be a number or \"auto\"");
            return 0.0;
        }
        const double l = v.get<double>();
        if (!(l > 0.0)) config_fail("certificate.lambda must be positive");
        return l;
    });
}

}  // namespace beamdecay::cli
