#pragma once

/**
 * @file energy.hpp
 * @brief Energy functionals on discrete trajectories.
 *
 *     E = 1/2 v^T M v + 1/2 q^T K q
 *     J = v^T M q + 1/2 q^T C_visc q + 1/2 ka_left q_L^2 + 1/2 ka_right q_R^2
 *     L = E + lambda J
 *
 * Along exact solutions dE/dt = -v^T C v and dJ/dt = 2 v^T M v - 2 E.
 */

#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "beamdecay/discretization.hpp"
#include "beamdecay/stability.hpp"
#include "beamdecay/timestepper.hpp"

namespace beamdecay {

double energy(const DiscreteBeam& beam, const Vector& q, const Vector& v);
double kinetic_energy(const DiscreteBeam& beam, const Vector& v);
double auxiliary_j(const DiscreteBeam& beam, const Vector& q, const Vector& v);
inline double lyapunov_l(double e, double j, double lambda) { return e + lambda * j; }

/// -dE/dt at a state: v^T C v (viscous plus boundary dampers).
double dissipation_rate(const DiscreteBeam& beam, const Vector& v);

struct EnergyLedger {
    double lambda = 0.0;
    double e0 = 0.0;
    std::vector<double> times;
    std::vector<double> energy;
    std::vector<double> aux;       ///< J
    std::vector<double> lyapunov;  ///< L
    std::vector<double> residual;  ///< E + dissipation - E(0)

    std::size_t size() const { return times.size(); }
    double max_abs_residual() const;
};

EnergyLedger build_ledger(const DiscreteBeam& beam, const Trajectory& traj, double lambda = 0.0);

/// E(t) + dissipation(t) - E(0) per snapshot.
std::vector<double> energy_identity_residual(const DiscreteBeam& beam, const Trajectory& traj);

/// Numerical derivative (central differences in snapshot time) paired with
/// the closed-form right-hand side, at interior snapshots.
struct DerivativeCheck {
    std::vector<double> times;
    std::vector<double> numerical;
    std::vector<double> formula;

    double max_abs_difference() const;
};

/// Throws INSUFFICIENT_DATA with fewer than 3 snapshots.
DerivativeCheck de_dt_check(const DiscreteBeam& beam, const Trajectory& traj);
DerivativeCheck dj_dt_check(const DiscreteBeam& beam, const Trajectory& traj);

/// Relative slack on the certificate envelope.
inline constexpr double kCertificateSlack = 1e-6;

struct CertificateCheck {
    bool holds = true;
    /// min over snapshots of M exp(-sigma t) E(0) - E(t).
    double margin = 0.0;
    std::size_t worst_index = 0;
};

CertificateCheck certificate_check(const EnergyLedger& ledger, const DecayCertificate& cert);

/// Least-squares slope of -ln E over snapshots with t in [t_a, t_b].
/// Throws RATE_UNDEFINED when E vanishes in the window and
/// INSUFFICIENT_DATA with fewer than 2 points.
double measured_decay_rate(const std::vector<double>& times, const std::vector<double>& energies,
                           double t_a, double t_b);

/// Default window (0.1 t_final, 0.9 t_final).
double measured_decay_rate(const EnergyLedger& ledger,
                           std::optional<std::pair<double, double>> window = std::nullopt);

/// -ln(E(t) / E(0)) / t, zero at t = 0; NaN where E <= 0.
std::vector<double> running_decay_rate(const EnergyLedger& ledger);

/// Absolute slack, relative to E(0), on the sandwich inequalities.
inline constexpr double kSandwichSlack = 1e-9;

struct SandwichCheck {
    bool holds = true;
    double lower_margin = 0.0;  ///< min of L - (1 - beta0 lambda) E, relative to E(0)
    double upper_margin = 0.0;  ///< min of (1 + beta1 lambda) E - L, relative to E(0)
};

SandwichCheck sandwich_check(const EnergyLedger& ledger, const LyapunovBounds& bounds);

/// Relative tolerances for the dissipativity checks.
inline constexpr double kStepIncreaseTolerance = 1e-10;
inline constexpr double kEnergyBoundTolerance = 1e-8;

/// Tracks E at every step through a step observer.
class EnergyMonitor {
public:
    explicit EnergyMonitor(const DiscreteBeam& beam) : beam_(&beam) {}

    void operator()(const StepView& s);

    double initial() const { return e0_; }
    double last() const { return last_; }
    double max_energy() const { return max_; }
    double min_energy() const { return min_; }
    /// Largest E(t_{n+1}) - E(t_n) seen.
    double max_increase() const { return max_increase_; }
    std::size_t steps() const { return steps_; }

    bool non_increasing() const { return max_increase_ <= kStepIncreaseTolerance * e0_; }
    bool bounded_by_initial() const { return max_ <= e0_ * (1.0 + kEnergyBoundTolerance); }
    /// max |E - E(0)| / E(0).
    double relative_drift() const;

private:
    const DiscreteBeam* beam_;
    double e0_ = 0.0, last_ = 0.0, max_ = 0.0, min_ = 0.0;
    double max_increase_ = -std::numeric_limits<double>::infinity();
    std::size_t steps_ = 0;
};

}  // namespace beamdecay
