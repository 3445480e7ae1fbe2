#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "beamdecay/discretization.hpp"
#include "beamdecay/energy.hpp"
#include "beamdecay/errors.hpp"
#include "beamdecay/model.hpp"
#include "beamdecay/properties.hpp"
#include "beamdecay/stability.hpp"
#include "beamdecay/timestepper.hpp"

namespace py = pybind11;
using namespace beamdecay;

namespace {

py::dict cert_dict(const DecayCertificate& c) {
    py::dict d;
    d["lambda"] = c.lambda;
    d["M"] = c.overshoot;
    d["sigma"] = c.rate;
    d["lambda_max"] = c.lambda_max;
    d["beta0"] = c.bounds.beta0;
    d["beta1"] = c.bounds.beta1;
    d["variant"] = to_string(c.bounds.variant);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Beam energy decay: certificates, finite elements, Newmark integration";

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = error;
            py::object inst = exc(e.what());
            inst.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error.ptr(), inst.ptr());
        }
    });

    // model
    py::class_<CoefficientField>(m, "CoefficientField")
        .def_static("constant", &CoefficientField::constant)
        .def_static("piecewise", &CoefficientField::piecewise, py::arg("breakpoints"), py::arg("values"))
        .def_static("sampled", &CoefficientField::sampled)
        .def("at", &CoefficientField::at, py::arg("x"), py::arg("length"))
        .def("bounds", [](const CoefficientField& f, double length) {
            const auto b = coefficient_bounds(f, length);
            return py::make_tuple(b.inf, b.sup);
        });

    py::class_<BeamSpec>(m, "BeamSpec")
        .def_static("proportional", &BeamSpec::proportional, py::arg("length"), py::arg("mass"),
                    py::arg("rigidity"), py::arg("gamma"))
        .def_static("strip", &StripBeam::spec, py::arg("gamma"))
        .def_readwrite("length", &BeamSpec::length)
        .def_readwrite("mass", &BeamSpec::mass)
        .def_readwrite("damping", &BeamSpec::damping)
        .def_readwrite("rigidity", &BeamSpec::rigidity)
        .def_readwrite("gamma", &BeamSpec::gamma);

    py::class_<BoundaryControls>(m, "BoundaryControls")
        .def(py::init([](double krl, double kal, double krr, double kar) {
                 return BoundaryControls{krl, kal, krr, kar};
             }),
             py::arg("kr_left") = 0.0, py::arg("ka_left") = 0.0, py::arg("kr_right") = 0.0,
             py::arg("ka_right") = 0.0)
        .def_readwrite("kr_left", &BoundaryControls::kr_left)
        .def_readwrite("ka_left", &BoundaryControls::ka_left)
        .def_readwrite("kr_right", &BoundaryControls::kr_right)
        .def_readwrite("ka_right", &BoundaryControls::ka_right);

    py::class_<Profile>(m, "Profile")
        .def_static("zero", &Profile::zero)
        .def_static("demo", &Profile::demo, py::arg("length"), py::arg("amplitude") = 0.01)
        .def_static("mode", &Profile::mode, py::arg("length"), py::arg("k"), py::arg("amplitude"))
        .def_static("sampled", &Profile::sampled)
        .def("value", &Profile::value)
        .def("slope", &Profile::slope);

    m.def("validate", [](const BeamSpec& spec, const BoundaryControls& bc, const Profile& u0, const Profile& u1) {
        const auto r = validate(spec, bc, {u0, u1});
        py::list issues;
        for (const auto& i : r.issues) issues.append(py::make_tuple(to_string(i.code), i.detail));
        py::dict d;
        d["ok"] = r.ok();
        d["certificate_eligible"] = r.certificate_eligible;
        d["issues"] = issues;
        return d;
    }, py::arg("spec"), py::arg("controls"), py::arg("deflection"), py::arg("velocity") = Profile::zero());

    m.def("derived_constant_params", [](double rho, double e, double b, double h) {
        const auto s = derived_constant_params(rho, e, b, h);
        py::dict d;
        d["area"] = s.area;
        d["inertia"] = s.inertia;
        d["mass_per_length"] = s.mass_per_length;
        d["rigidity"] = s.rigidity;
        return d;
    }, py::arg("density"), py::arg("youngs_modulus"), py::arg("width"), py::arg("height"));

    // stability
    m.def("beta_bounds_general", [](double m1, double mu1, double r0, double l, double kal, double kar) {
        const auto b = beta_bounds_general(m1, mu1, r0, l, kal, kar);
        return py::make_tuple(b.beta0, b.beta1);
    });
    m.def("beta_bounds_constant", [](double mass, double gamma, double r, double l, double kal, double kar) {
        const auto b = beta_bounds_constant(mass, gamma, r, l, kal, kar);
        return py::make_tuple(b.beta0, b.beta1);
    });
    m.def("certify", [](const BeamSpec& spec, const BoundaryControls& bc, double lambda) {
        return cert_dict(certify(spec, bc, lambda));
    }, py::arg("spec"), py::arg("controls"), py::arg("lambda_") = 0.0);
    m.def("decay_table", [] {
        const auto inputs = strip_table_inputs();
        py::list rows;
        for (const auto& r : decay_table(inputs)) {
            auto d = cert_dict(r.cert);
            d["gamma"] = r.input.gamma;
            d["ka_left"] = r.input.ka_left;
            d["ka_right"] = r.input.ka_right;
            d["beta1_general"] = r.beta1_general;
            rows.append(d);
        }
        return rows;
    });
    m.def("decay_table_reference", [] {
        py::list rows;
        for (const auto& r : strip_table_reference())
            rows.append(py::make_tuple(r.beta0, r.beta1, r.overshoot, r.rate));
        return rows;
    });
    m.def("poincare_check", [](const std::vector<double>& s, double length) {
        const auto c = poincare_check(s, length);
        return py::make_tuple(c.lhs, c.rhs, c.holds);
    });
    m.def("trace_check", [](const std::vector<double>& s, double length) {
        const auto c = trace_check(s, length);
        return py::make_tuple(c.left.lhs, c.right.lhs, c.left.rhs, c.holds());
    });

    // discretization and integration
    py::class_<DiscreteBeam>(m, "DiscreteBeam")
        .def_readonly("mass", &DiscreteBeam::mass)
        .def_readonly("damping", &DiscreteBeam::damping)
        .def_readonly("stiffness", &DiscreteBeam::stiffness)
        .def_readonly("left_rotation", &DiscreteBeam::left_rotation)
        .def_readonly("right_rotation", &DiscreteBeam::right_rotation)
        .def_property_readonly("size", &DiscreteBeam::size)
        .def_property_readonly("nodes", [](const DiscreteBeam& b) { return b.mesh.nodes(); });

    m.def("assemble", [](const BeamSpec& spec, const BoundaryControls& bc, int n) {
        return assemble(spec, bc, uniform_mesh(spec.length, n));
    }, py::arg("spec"), py::arg("controls"), py::arg("elements"));

    m.def("initial_state", [](const DiscreteBeam& b, const Profile& u0, const Profile& u1) {
        const auto s = interpolate_initial({u0, u1}, b.mesh);
        return py::make_tuple(s.displacement, s.velocity);
    }, py::arg("beam"), py::arg("deflection"), py::arg("velocity") = Profile::zero());

    m.def("default_time_step", &default_time_step);
    m.def("energy", &energy);
    m.def("auxiliary_j", &auxiliary_j);

    // Integrates and returns the energy ledger as plain lists.
    m.def("simulate", [](const DiscreteBeam& b, const Vector& q0, const Vector& v0, double dt,
                         double t_final, int stride, double lambda) {
        IntegratorConfig cfg{dt, t_final};
        cfg.snapshot_stride = stride;
        cfg.record_traces = false;
        Trajectory traj;
        {
            py::gil_scoped_release release;
            traj = integrate(b, q0, v0, cfg);
        }
        const auto l = build_ledger(b, traj, lambda);
        py::dict d;
        d["t"] = l.times;
        d["E"] = l.energy;
        d["J"] = l.aux;
        d["L"] = l.lyapunov;
        d["residual"] = l.residual;
        d["dt"] = traj.dt;
        return d;
    }, py::arg("beam"), py::arg("q0"), py::arg("v0"), py::arg("dt"), py::arg("t_final"),
       py::arg("stride") = 1, py::arg("lambda_") = 0.0);

    m.def("measured_decay_rate", [](const std::vector<double>& t, const std::vector<double>& e,
                                    double ta, double tb) { return measured_decay_rate(t, e, ta, tb); });

    // property suites
    m.def("run_suite", [](const std::string& name, std::uint64_t seed, int profiles, double beta0_scale) {
        const auto s = parse_suite(name);
        if (!s) throw Error(ErrorCode::config_error, "unknown suite '" + name + "'");
        PropertyConfig pc;
        pc.seed = seed;
        pc.profiles = profiles;
        pc.sandwich_trials = profiles;
        pc.beta0_scale = beta0_scale;
        const auto r = run_suite(*s, pc);
        py::dict d;
        d["trials"] = r.trials;
        d["passed"] = r.passed;
        d["ok"] = r.ok();
        d["counterexample"] = r.counterexample ? py::cast(r.counterexample->detail) : py::none();
        return d;
    }, py::arg("suite"), py::arg("seed") = 42, py::arg("profiles") = 1000, py::arg("beta0_scale") = 1.0);
}
