#include "beamdecay/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "beamdecay/errors.hpp"

namespace beamdecay {

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::config_error, "dt must be positive");
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw Error(ErrorCode::config_error, "t_final must be positive");
    if (snapshot_stride < 1) throw Error(ErrorCode::config_error, "snapshot_stride must be >= 1");
    if (!(gamma >= 0.5)) throw Error(ErrorCode::config_error, "Newmark gamma must be >= 1/2");
    if (!(beta >= 0.5 * gamma)) throw Error(ErrorCode::config_error, "Newmark beta must be >= gamma/2");
    if (steps() == 0) throw Error(ErrorCode::config_error, "t_final is shorter than half a step");
}

std::size_t IntegratorConfig::steps() const {
    return static_cast<std::size_t>(std::llround(t_final / dt));
}

NewmarkStepper::NewmarkStepper(const SparseMatrix& mass, const SparseMatrix& damping,
                               const SparseMatrix& stiffness, double dt, double beta, double gamma)
    : mass_(mass), damping_(damping), stiffness_(stiffness), dt_(dt), beta_(beta), gamma_(gamma) {
    if (mass.rows() != mass.cols() || damping.rows() != mass.rows() ||
        stiffness.rows() != mass.rows())
        throw Error(ErrorCode::domain_error, "system matrices have inconsistent sizes");
    if (dt == 0.0 || !std::isfinite(dt)) throw Error(ErrorCode::domain_error, "dt must be nonzero");

    const SparseMatrix eff = mass_ + (gamma_ * dt_) * damping_ + (beta_ * dt_ * dt_) * stiffness_;
    effective_.compute(eff);
    if (effective_.info() != Eigen::Success ||
        (dt_ > 0.0 && (effective_.vectorD().array() <= 0.0).any()))
        throw Error(ErrorCode::numerical_error, "effective matrix factorization failed");
    mass_factor_.compute(mass_);
    if (mass_factor_.info() != Eigen::Success || (mass_factor_.vectorD().array() <= 0.0).any())
        throw Error(ErrorCode::numerical_error, "mass matrix is not positive definite");
}

NewmarkStepper::NewmarkStepper(const DiscreteBeam& beam, double dt, double beta, double gamma)
    : NewmarkStepper(beam.mass, beam.damping, beam.stiffness, dt, beta, gamma) {}

Vector NewmarkStepper::initial_acceleration(const Vector& q, const Vector& v) const {
    const Vector rhs = -(damping_ * v) - stiffness_ * q;
    return mass_factor_.solve(rhs);
}

void NewmarkStepper::step(Vector& q, Vector& v, Vector& a) const {
    const double dt2 = dt_ * dt_;
    q_pred_ = q + dt_ * v + (dt2 * (0.5 - beta_)) * a;
    v_pred_ = v + (dt_ * (1.0 - gamma_)) * a;
    rhs_.noalias() = -(damping_ * v_pred_);
    rhs_.noalias() -= stiffness_ * q_pred_;
    a = effective_.solve(rhs_);
    q = q_pred_ + (beta_ * dt2) * a;
    v = v_pred_ + (gamma_ * dt_) * a;
}

Trajectory integrate(const DiscreteBeam& beam, const Vector& q0, const Vector& v0,
                     const IntegratorConfig& cfg, const StepObserver& observer) {
    cfg.validate();
    if (q0.size() != beam.size() || v0.size() != beam.size())
        throw Error(ErrorCode::domain_error, "initial state size does not match the beam");

    const NewmarkStepper stepper(beam, cfg.dt, cfg.beta, cfg.gamma);
    const std::size_t n = cfg.steps();
    const double dt = cfg.dt;
    const int il = beam.left_rotation;
    const int ir = beam.right_rotation;
    const double ka_l = beam.controls.ka_left;
    const double ka_r = beam.controls.ka_right;

    Trajectory traj;
    traj.dt = dt;
    traj.n_steps = n;
    traj.t_final = static_cast<double>(n) * dt;
    const std::size_t n_snap = n / static_cast<std::size_t>(cfg.snapshot_stride) + 2;
    traj.times.reserve(n_snap);
    if (cfg.record_traces) {
        for (auto* t : {&traj.ux0, &traj.uxl, &traj.uxt0, &traj.uxtl}) t->reserve(n + 1);
    }

    Vector q = q0, v = v0;
    Vector a = stepper.initial_acceleration(q, v);
    double dv = 0.0, dl = 0.0, dr = 0.0;

    auto record = [&](std::size_t i) {
        const double t = static_cast<double>(i) * dt;
        if (cfg.record_traces) {
            traj.ux0.push_back(q(il));
            traj.uxl.push_back(q(ir));
            traj.uxt0.push_back(v(il));
            traj.uxtl.push_back(v(ir));
        }
        if (i % static_cast<std::size_t>(cfg.snapshot_stride) == 0 || i == n) {
            traj.step_index.push_back(i);
            traj.times.push_back(t);
            traj.displacement.push_back(q);
            traj.velocity.push_back(v);
            traj.acceleration.push_back(a);
            traj.diss_viscous.push_back(dv);
            traj.diss_left.push_back(dl);
            traj.diss_right.push_back(dr);
        }
        if (observer) observer(StepView{i, t, q, v, a, dv, dl, dr});
    };

    record(0);
    Vector cv = beam.viscous_damping * v;
    double d_old = v.dot(cv);
    for (std::size_t i = 1; i <= n; ++i) {
        const Vector v_old = v;
        stepper.step(q, v, a);
        if (!q.allFinite() || !v.allFinite())
            throw Error(ErrorCode::numerical_error, "non-finite state at step " + std::to_string(i));
        // Viscous: exact integral of v^T C v for v linear over the step.
        cv = beam.viscous_damping * v;
        const double d_new = v.dot(cv);
        const double d_mix = v_old.dot(cv);
        dv += dt / 3.0 * (d_old + d_mix + d_new);
        d_old = d_new;
        // Boundary dampers: step-averaged angular velocity.
        const double wl = 0.5 * (v_old(il) + v(il));
        const double wr = 0.5 * (v_old(ir) + v(ir));
        dl += ka_l * dt * wl * wl;
        dr += ka_r * dt * wr * wr;
        record(i);
    }
    return traj;
}

double max_frequency_estimate(const DiscreteBeam& beam, int max_iterations, double tolerance) {
    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>> mf(beam.mass);
    if (mf.info() != Eigen::Success)
        throw Error(ErrorCode::numerical_error, "mass matrix factorization failed");
    const int n = beam.size();
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(1.0 + i);
    double lambda = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        Vector y = mf.solve(beam.stiffness * x);
        const double norm = std::sqrt(y.dot(beam.mass * y));
        if (!(norm > 0.0)) return 0.0;
        y /= norm;
        const double next = y.dot(beam.stiffness * y);
        x = y;
        if (std::abs(next - lambda) <= tolerance * std::abs(next)) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(std::max(lambda, 0.0));
}

double default_time_step(const DiscreteBeam& beam, double t_final) {
    if (!(t_final > 0.0)) throw Error(ErrorCode::domain_error, "t_final must be positive");
    const double omega = max_frequency_estimate(beam);
    const double cap = t_final / 2000.0;
    if (!(omega > 0.0)) return cap;
    return std::min(2.0 * std::numbers::pi / (20.0 * omega), cap);
}

BoundaryTraces resample_traces(const Trajectory& traj, std::span<const double> times) {
    if (traj.ux0.size() != traj.n_steps + 1 || traj.n_steps == 0)
        throw Error(ErrorCode::insufficient_data, "trajectory has no boundary traces");
    BoundaryTraces out;
    const double t_end = traj.t_final;
    for (double t : times) {
        if (!(t >= 0.0) || t > t_end * (1.0 + 1e-12))
            throw Error(ErrorCode::domain_error,
                        "time " + std::to_string(t) + " outside [0, " + std::to_string(t_end) + "]");
        const double s = std::min(t / traj.dt, static_cast<double>(traj.n_steps));
        auto i = static_cast<std::size_t>(std::floor(s));
        if (i >= traj.n_steps) i = traj.n_steps - 1;
        const double w = s - static_cast<double>(i);
        auto lerp = [&](const std::vector<double>& f) { return (1.0 - w) * f[i] + w * f[i + 1]; };
        out.times.push_back(t);
        out.ux0.push_back(lerp(traj.ux0));
        out.uxl.push_back(lerp(traj.uxl));
        out.uxt0.push_back(lerp(traj.uxt0));
        out.uxtl.push_back(lerp(traj.uxtl));
    }
    return out;
}

}  // namespace beamdecay
