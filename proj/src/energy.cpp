#include "beamdecay/energy.hpp"

#include <algorithm>
#include <cmath>

#include "beamdecay/errors.hpp"

namespace beamdecay {

double kinetic_energy(const DiscreteBeam& beam, const Vector& v) {
    return 0.5 * v.dot(beam.mass * v);
}

double energy(const DiscreteBeam& beam, const Vector& q, const Vector& v) {
    return kinetic_energy(beam, v) + 0.5 * q.dot(beam.stiffness * q);
}

double auxiliary_j(const DiscreteBeam& beam, const Vector& q, const Vector& v) {
    const double ql = q(beam.left_rotation);
    const double qr = q(beam.right_rotation);
    return v.dot(beam.mass * q) + 0.5 * q.dot(beam.viscous_damping * q) +
           0.5 * beam.controls.ka_left * ql * ql + 0.5 * beam.controls.ka_right * qr * qr;
}

double dissipation_rate(const DiscreteBeam& beam, const Vector& v) {
    return v.dot(beam.damping * v);
}

double EnergyLedger::max_abs_residual() const {
    double m = 0.0;
    for (double r : residual) m = std::max(m, std::abs(r));
    return m;
}

std::vector<double> energy_identity_residual(const DiscreteBeam& beam, const Trajectory& traj) {
    std::vector<double> out(traj.size());
    if (traj.size() == 0) return out;
    const double e0 = energy(beam, traj.displacement[0], traj.velocity[0]);
    for (std::size_t i = 0; i < traj.size(); ++i)
        out[i] = energy(beam, traj.displacement[i], traj.velocity[i]) + traj.dissipation(i) - e0;
    out[0] = 0.0;
    return out;
}

EnergyLedger build_ledger(const DiscreteBeam& beam, const Trajectory& traj, double lambda) {
    EnergyLedger l;
    l.lambda = lambda;
    l.times = traj.times;
    const std::size_t n = traj.size();
    l.energy.resize(n);
    l.aux.resize(n);
    l.lyapunov.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        l.energy[i] = energy(beam, traj.displacement[i], traj.velocity[i]);
        l.aux[i] = auxiliary_j(beam, traj.displacement[i], traj.velocity[i]);
        l.lyapunov[i] = lyapunov_l(l.energy[i], l.aux[i], lambda);
    }
    l.e0 = n > 0 ? l.energy[0] : 0.0;
    l.residual.resize(n);
    for (std::size_t i = 0; i < n; ++i) l.residual[i] = l.energy[i] + traj.dissipation(i) - l.e0;
    if (n > 0) l.residual[0] = 0.0;
    return l;
}

double DerivativeCheck::max_abs_difference() const {
    double m = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        m = std::max(m, std::abs(numerical[i] - formula[i]));
    return m;
}

namespace {

template <class Value, class Rhs>
DerivativeCheck derivative_check(const Trajectory& traj, Value value, Rhs rhs) {
    const std::size_t n = traj.size();
    if (n < 3) throw Error(ErrorCode::insufficient_data, "derivative check needs 3 snapshots");
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = value(i);
    DerivativeCheck c;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        // Three-point derivative on a possibly nonuniform grid.
        const double h0 = traj.times[i] - traj.times[i - 1];
        const double h1 = traj.times[i + 1] - traj.times[i];
        const double d = (-h1 / (h0 * (h0 + h1))) * f[i - 1] + ((h1 - h0) / (h0 * h1)) * f[i] +
                         (h0 / (h1 * (h0 + h1))) * f[i + 1];
        c.times.push_back(traj.times[i]);
        c.numerical.push_back(d);
        c.formula.push_back(rhs(i));
    }
    return c;
}

}  // namespace

DerivativeCheck de_dt_check(const DiscreteBeam& beam, const Trajectory& traj) {
    return derivative_check(
        traj, [&](std::size_t i) { return energy(beam, traj.displacement[i], traj.velocity[i]); },
        [&](std::size_t i) { return -dissipation_rate(beam, traj.velocity[i]); });
}

DerivativeCheck dj_dt_check(const DiscreteBeam& beam, const Trajectory& traj) {
    return derivative_check(
        traj,
        [&](std::size_t i) { return auxiliary_j(beam, traj.displacement[i], traj.velocity[i]); },
        [&](std::size_t i) {
            const Vector& v = traj.velocity[i];
            return 4.0 * kinetic_energy(beam, v) -
                   2.0 * energy(beam, traj.displacement[i], v);
        });
}

CertificateCheck certificate_check(const EnergyLedger& ledger, const DecayCertificate& cert) {
    CertificateCheck c;
    c.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ledger.size(); ++i) {
        const double env = cert.overshoot * std::exp(-cert.rate * ledger.times[i]) * ledger.e0;
        const double margin = env - ledger.energy[i];
        if (margin < c.margin) {
            c.margin = margin;
            c.worst_index = i;
        }
        if (ledger.energy[i] > env * (1.0 + kCertificateSlack)) c.holds = false;
    }
    if (ledger.size() == 0) c.margin = 0.0;
    return c;
}

double measured_decay_rate(const std::vector<double>& times, const std::vector<double>& energies,
                           double t_a, double t_b) {
    if (times.size() != energies.size())
        throw Error(ErrorCode::domain_error, "times and energies differ in length");
    double peak = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] >= t_a && times[i] <= t_b) peak = std::max(peak, std::abs(energies[i]));
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        if (t < t_a || t > t_b) continue;
        const double e = energies[i];
        if (!(e > peak * std::numeric_limits<double>::epsilon()) || !(e > 0.0))
            throw Error(ErrorCode::rate_undefined, "energy vanishes inside the window");
        const double y = -std::log(e);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
        ++n;
    }
    if (n < 2) throw Error(ErrorCode::insufficient_data, "need at least 2 snapshots in the window");
    const double dn = static_cast<double>(n);
    const double den = dn * stt - st * st;
    if (!(den > 0.0)) throw Error(ErrorCode::insufficient_data, "degenerate time window");
    return (dn * sty - st * sy) / den;
}

double measured_decay_rate(const EnergyLedger& ledger,
                           std::optional<std::pair<double, double>> window) {
    if (ledger.size() == 0) throw Error(ErrorCode::insufficient_data, "empty ledger");
    const double t_end = ledger.times.back();
    const auto [a, b] = window.value_or(std::pair{0.1 * t_end, 0.9 * t_end});
    return measured_decay_rate(ledger.times, ledger.energy, a, b);
}

std::vector<double> running_decay_rate(const EnergyLedger& ledger) {
    std::vector<double> out(ledger.size(), 0.0);
    for (std::size_t i = 0; i < ledger.size(); ++i) {
        const double t = ledger.times[i];
        const double e = ledger.energy[i];
        if (!(e > 0.0) || !(ledger.e0 > 0.0))
            out[i] = std::numeric_limits<double>::quiet_NaN();
        else if (t > 0.0)
            out[i] = -std::log(e / ledger.e0) / t;
    }
    return out;
}

SandwichCheck sandwich_check(const EnergyLedger& ledger, const LyapunovBounds& bounds) {
    SandwichCheck c;
    c.lower_margin = std::numeric_limits<double>::infinity();
    c.upper_margin = std::numeric_limits<double>::infinity();
    const double lambda = ledger.lambda;
    const double scale = ledger.e0 > 0.0 ? ledger.e0 : 1.0;
    const double slack = kSandwichSlack * ledger.e0;
    for (std::size_t i = 0; i < ledger.size(); ++i) {
        const double e = ledger.energy[i];
        const double l = ledger.lyapunov[i];
        const double lo = l - (1.0 - bounds.beta0 * lambda) * e;
        const double hi = (1.0 + bounds.beta1 * lambda) * e - l;
        c.lower_margin = std::min(c.lower_margin, lo / scale);
        c.upper_margin = std::min(c.upper_margin, hi / scale);
        if (lo < -slack || hi < -slack) c.holds = false;
    }
    if (ledger.size() == 0) c.lower_margin = c.upper_margin = 0.0;
    return c;
}

void EnergyMonitor::operator()(const StepView& s) {
    const double e = energy(*beam_, s.q, s.v);
    if (steps_ == 0) {
        e0_ = max_ = min_ = e;
    } else {
        max_increase_ = std::max(max_increase_, e - last_);
        max_ = std::max(max_, e);
        min_ = std::min(min_, e);
    }
    last_ = e;
    ++steps_;
}

double EnergyMonitor::relative_drift() const {
    if (!(e0_ > 0.0)) return 0.0;
    return std::max(max_ - e0_, e0_ - min_) / e0_;
}

}  // namespace beamdecay
