#pragma once

/**
 * @file timestepper.hpp
 * @brief Newmark integration of M q'' + C q' + K q = 0.
 *
 * The default parameters (beta, gamma) = (1/4, 1/2) give the average
 * acceleration rule: second order, unconditionally stable and free of
 * algorithmic damping. The effective matrix M + gamma dt C + beta dt^2 K is
 * factored once per run.
 *
 * Dissipation is accumulated per step along the linear-in-time velocity the
 * scheme implies: the viscous part integrates v^T C_visc v exactly over the
 * step, the boundary dampers use the step-averaged end angular velocity.
 */

#include <Eigen/SparseCholesky>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "beamdecay/discretization.hpp"

namespace beamdecay {

struct IntegratorConfig {
    double dt = 0.0;       ///< s; may be negative only for NewmarkStepper
    double t_final = 0.0;  ///< s
    double beta = 0.25;
    double gamma = 0.5;
    int snapshot_stride = 1;
    /// Record the four boundary traces at every step.
    bool record_traces = true;

    /// Throws CONFIG_ERROR on dt <= 0, t_final <= 0, stride < 1 or
    /// parameters outside gamma >= 1/2, beta >= gamma / 2.
    void validate() const;
    /// Number of steps, round(t_final / dt).
    std::size_t steps() const;
};

/// One-step map for fixed (M, C, K, dt). A negative dt steps backwards.
class NewmarkStepper {
public:
    NewmarkStepper(const SparseMatrix& mass, const SparseMatrix& damping,
                   const SparseMatrix& stiffness, double dt, double beta = 0.25,
                   double gamma = 0.5);
    NewmarkStepper(const DiscreteBeam& beam, double dt, double beta = 0.25, double gamma = 0.5);

    /// Solves M a = -C v - K q.
    Vector initial_acceleration(const Vector& q, const Vector& v) const;

    /// Advances (q, v, a) by one step in place.
    void step(Vector& q, Vector& v, Vector& a) const;

    double dt() const { return dt_; }
    int size() const { return static_cast<int>(mass_.rows()); }

private:
    using Factor = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>>;

    SparseMatrix mass_, damping_, stiffness_;
    double dt_, beta_, gamma_;
    Factor effective_;
    Factor mass_factor_;
    mutable Vector q_pred_, v_pred_, rhs_;
};

struct StepView {
    std::size_t index;
    double t;
    const Vector& q;
    const Vector& v;
    const Vector& a;
    double diss_viscous;
    double diss_left;
    double diss_right;
};

using StepObserver = std::function<void(const StepView&)>;

struct Trajectory {
    double dt = 0.0;
    double t_final = 0.0;
    std::size_t n_steps = 0;

    // Snapshots (every snapshot_stride steps, plus the last step).
    std::vector<std::size_t> step_index;
    std::vector<double> times;
    std::vector<Vector> displacement;
    std::vector<Vector> velocity;
    std::vector<Vector> acceleration;
    std::vector<double> diss_viscous;  ///< J, int int mu u_t^2
    std::vector<double> diss_left;     ///< J, ka_left int u_xt(0)^2
    std::vector<double> diss_right;    ///< J, ka_right int u_xt(L)^2

    // Boundary traces at every step (empty unless record_traces).
    std::vector<double> ux0, uxl, uxt0, uxtl;

    std::size_t size() const { return times.size(); }
    double dissipation(std::size_t i) const {
        return diss_viscous[i] + diss_left[i] + diss_right[i];
    }
};

/// Integrates from (q0, v0). The observer, if given, sees every step
/// including step 0. Throws NUMERICAL_ERROR when the effective matrix is
/// not positive definite.
Trajectory integrate(const DiscreteBeam& beam, const Vector& q0, const Vector& v0,
                     const IntegratorConfig& cfg, const StepObserver& observer = {});

/// Power-iteration estimate of the largest sqrt(eigenvalue) of (K, M), rad/s.
double max_frequency_estimate(const DiscreteBeam& beam, int max_iterations = 5000,
                              double tolerance = 1e-10);

/// min(2 pi / (20 omega_max), t_final / 2000).
double default_time_step(const DiscreteBeam& beam, double t_final);

struct BoundaryTraces {
    std::vector<double> times, ux0, uxl, uxt0, uxtl;
};

/// Linear interpolation of the recorded traces. Throws DOMAIN_ERROR for a
/// time outside [0, t_final] and INSUFFICIENT_DATA without traces.
BoundaryTraces resample_traces(const Trajectory& traj, std::span<const double> times);

}  // namespace beamdecay
