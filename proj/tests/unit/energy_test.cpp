#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "beamdecay/energy.hpp"
#include "beamdecay/errors.hpp"

namespace beamdecay {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no beamdecay::Error thrown";
    return ErrorCode::config_error;
}

BeamSpec unit_beam(double gamma = 0.0) {
    return BeamSpec::proportional(1.0, CoefficientField::constant(1.0),
                                  CoefficientField::constant(1.0), gamma);
}

Vector cubic(const DiscreteBeam& b) {
    Vector q(b.size());
    for (int i = 0; i < b.size(); ++i) {
        const auto& d = b.dofs[static_cast<std::size_t>(i)];
        const double x = b.mesh.node(d.node);
        q(i) = d.kind == DofKind::deflection ? x * x * (1 - x) : 2 * x - 3 * x * x;
    }
    return q;
}

struct Run {
    DiscreteBeam beam;
    Trajectory traj;
};

Run run(double gamma, const BoundaryControls& bc, double dt, double t_final, int n = 8) {
    const auto mesh = uniform_mesh(1.0, n);
    Run r{assemble(unit_beam(gamma), bc, mesh), {}};
    const auto s = interpolate_initial({Profile::demo(1.0, 0.01), Profile::mode(1.0, 2, 0.01)}, mesh);
    r.traj = integrate(r.beam, s.displacement, s.velocity, {dt, t_final});
    return r;
}

EnergyLedger synthetic(const std::vector<double>& t, const std::function<double(double)>& e) {
    EnergyLedger l;
    for (double ti : t) {
        l.times.push_back(ti);
        l.energy.push_back(e(ti));
    }
    l.e0 = l.energy.front();
    return l;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return t;
}

TEST(FunctionalTest, CubicStateByHand) {
    const auto b = assemble(unit_beam(2.0), {0.0, 0.3, 0.0, 0.5}, uniform_mesh(1.0, 4));
    const Vector q = cubic(b), z = Vector::Zero(b.size());
    // int u''^2 = 4, int u^2 = 1/105, u'(0) = 0, u'(1) = -1
    EXPECT_NEAR(energy(b, q, z), 2.0, 1e-13);
    EXPECT_NEAR(kinetic_energy(b, q), 0.5 / 105, 1e-15);
    EXPECT_NEAR(energy(b, q, q), 2.0 + 0.5 / 105, 1e-13);
    EXPECT_NEAR(auxiliary_j(b, q, q), 1.0 / 105 + 0.5 * 2.0 / 105 + 0.5 * 0.5, 1e-14);
    EXPECT_NEAR(auxiliary_j(b, q, z), 1.0 / 105 + 0.25, 1e-14);
    EXPECT_NEAR(dissipation_rate(b, q), 2.0 / 105 + 0.5, 1e-14);
    EXPECT_DOUBLE_EQ(lyapunov_l(2.0, -1.0, 0.5), 1.5);
}

TEST(FunctionalTest, EnergyIsNonNegativeAndZeroOnlyAtRest) {
    const auto b = assemble(unit_beam(1.0), {}, uniform_mesh(1.0, 4));
    const Vector z = Vector::Zero(b.size());
    EXPECT_EQ(energy(b, z, z), 0.0);
    Vector e = z;
    for (int i = 0; i < b.size(); ++i) {
        e.setZero();
        e(i) = 1e-3;
        EXPECT_GT(energy(b, e, z), 0.0);
        EXPECT_GT(energy(b, z, e), 0.0);
    }
}

TEST(LedgerTest, ResidualStartsAtZeroAndIsSmall) {
    const auto r = run(0.5, {0.2, 0.05, 0.0, 0.03}, 1e-3, 1.0);
    const auto l = build_ledger(r.beam, r.traj, 0.1);
    ASSERT_EQ(l.size(), r.traj.size());
    EXPECT_EQ(l.residual[0], 0.0);
    EXPECT_LT(l.max_abs_residual(), 1e-3 * l.e0);
    for (std::size_t i = 0; i < l.size(); ++i)
        EXPECT_DOUBLE_EQ(l.lyapunov[i], l.energy[i] + 0.1 * l.aux[i]);
    EXPECT_EQ(energy_identity_residual(r.beam, r.traj), l.residual);
}

TEST(LedgerTest, ResidualIsSecondOrderInDt) {
    const BoundaryControls bc{0.2, 0.05, 0.0, 0.03};
    const auto coarse = run(0.5, bc, 2e-3, 1.0);
    const double r1 = build_ledger(coarse.beam, coarse.traj).max_abs_residual();
    const auto fine = run(0.5, bc, 1e-3, 1.0);
    const double r2 = build_ledger(fine.beam, fine.traj).max_abs_residual();
    EXPECT_GT(r1 / r2, 3.5);
    EXPECT_LT(r1 / r2, 4.5);
}

TEST(LedgerTest, ConservativeResidualIsRoundoff) {
    const auto r = run(0.0, {0.5, 0.0, 0.5, 0.0}, 1e-3, 1.0);
    const auto l = build_ledger(r.beam, r.traj);
    EXPECT_LT(l.max_abs_residual(), 1e-11 * l.e0);
}

// Central differences of E and J against the closed-form rates: the gap is
// second order in dt.
TEST(DerivativeTest, EnergyAndAuxiliaryRates) {
    const BoundaryControls bc{0.2, 0.05, 0.1, 0.03};
    const auto coarse = run(0.5, bc, 1e-4, 0.2);
    const auto fine = run(0.5, bc, 5e-5, 0.2);
    const auto de1 = de_dt_check(coarse.beam, coarse.traj), de2 = de_dt_check(fine.beam, fine.traj);
    const auto dj1 = dj_dt_check(coarse.beam, coarse.traj), dj2 = dj_dt_check(fine.beam, fine.traj);
    ASSERT_EQ(de1.times.size(), coarse.traj.size() - 2);
    double scale = 0.0;
    for (double f : de1.formula) scale = std::max(scale, std::abs(f));
    EXPECT_LT(de1.max_abs_difference(), 0.05 * scale);
    const double r_e = de1.max_abs_difference() / de2.max_abs_difference();
    EXPECT_GT(r_e, 3.5);
    EXPECT_LT(r_e, 4.5);
    EXPECT_GT(dj1.max_abs_difference() / dj2.max_abs_difference(), 2.0);
    for (double f : de1.formula) EXPECT_LE(f, 0.0);
}

TEST(DerivativeTest, TooFewSnapshots) {
    auto r = run(0.5, {}, 1e-3, 0.001);
    ASSERT_EQ(r.traj.size(), 2u);
    EXPECT_EQ(code_of([&] { de_dt_check(r.beam, r.traj); }), ErrorCode::insufficient_data);
    EXPECT_EQ(code_of([&] { dj_dt_check(r.beam, r.traj); }), ErrorCode::insufficient_data);
}

TEST(CertificateCheckTest, Synthetic) {
    const auto l = synthetic(linspace(0, 10, 101), [](double t) { return std::exp(-t); });
    DecayCertificate ok;
    ok.overshoot = 1.0;
    ok.rate = 0.5;
    const auto c = certificate_check(l, ok);
    EXPECT_TRUE(c.holds);
    EXPECT_GE(c.margin, 0.0);

    DecayCertificate bad = ok;
    bad.rate = 2.0;
    const auto d = certificate_check(l, bad);
    EXPECT_FALSE(d.holds);
    EXPECT_LT(d.margin, 0.0);
    EXPECT_GT(d.worst_index, 0u);
}

TEST(DecayRateTest, ExactExponential) {
    const auto t = linspace(0, 5, 501);
    const auto l = synthetic(t, [](double s) { return 3.0 * std::exp(-2.0 * s); });
    EXPECT_NEAR(measured_decay_rate(l.times, l.energy, 0.5, 4.5), 2.0, 1e-8);
    EXPECT_NEAR(measured_decay_rate(l), 2.0, 1e-8);
    const auto flat = synthetic(t, [](double) { return 1.0; });
    EXPECT_NEAR(measured_decay_rate(flat), 0.0, 1e-12);
}

TEST(DecayRateTest, Errors) {
    const auto t = linspace(0, 1, 11);
    const auto zero = synthetic(t, [](double s) { return s < 0.5 ? 1.0 : 0.0; });
    EXPECT_EQ(code_of([&] { measured_decay_rate(zero.times, zero.energy, 0.0, 1.0); }),
              ErrorCode::rate_undefined);
    const auto ok = synthetic(t, [](double s) { return std::exp(-s); });
    EXPECT_EQ(code_of([&] { measured_decay_rate(ok.times, ok.energy, 0.31, 0.39); }),
              ErrorCode::insufficient_data);
}

TEST(DecayRateTest, Running) {
    const auto l = synthetic(linspace(0, 2, 5), [](double s) { return std::exp(-0.7 * s); });
    const auto r = running_decay_rate(l);
    EXPECT_EQ(r[0], 0.0);
    for (std::size_t i = 1; i < r.size(); ++i) EXPECT_NEAR(r[i], 0.7, 1e-12);
}

TEST(SandwichTest, Synthetic) {
    EnergyLedger l = synthetic({0.0, 1.0}, [](double) { return 1.0; });
    l.lambda = 0.1;
    l.aux = {-2.0, 5.0};
    l.lyapunov = {1.0 - 0.2, 1.0 + 0.5};
    EXPECT_TRUE(sandwich_check(l, {2.0, 5.0}).holds);
    EXPECT_NEAR(sandwich_check(l, {2.0, 5.0}).lower_margin, 0.0, 1e-15);
    EXPECT_FALSE(sandwich_check(l, {1.5, 5.0}).holds);
    EXPECT_FALSE(sandwich_check(l, {2.0, 4.0}).holds);
}

TEST(SandwichTest, SimulatedRunWithinBounds) {
    const BoundaryControls bc{0.2, 0.05, 0.0, 0.03};
    const auto r = run(1.0, bc, 1e-3, 2.0, 16);
    const auto bounds = beta_bounds(unit_beam(1.0), bc);
    const auto cert = certify(unit_beam(1.0), bc);
    const auto l = build_ledger(r.beam, r.traj, cert.lambda);
    EXPECT_TRUE(sandwich_check(l, bounds).holds);
    EXPECT_TRUE(certificate_check(l, cert).holds);
}

TEST(MonitorTest, DissipativeRunIsMonotone) {
    const auto mesh = uniform_mesh(1.0, 8);
    const auto b = assemble(unit_beam(0.3), {0.1, 0.05, 0.0, 0.02}, mesh);
    const auto s = interpolate_initial({Profile::demo(1.0, 0.01), Profile::zero()}, mesh);
    EnergyMonitor mon(b);
    integrate(b, s.displacement, s.velocity, {1e-3, 2.0}, std::ref(mon));
    EXPECT_TRUE(mon.non_increasing());
    EXPECT_TRUE(mon.bounded_by_initial());
    EXPECT_LT(mon.last(), mon.initial());
    EXPECT_EQ(mon.max_energy(), mon.initial());
}

TEST(MonitorTest, MoreDampingLeavesLessEnergy) {
    double prev = INFINITY;
    for (double gamma : {0.0, 0.1, 0.5, 1.0, 2.0}) {
        const auto r = run(gamma, {}, 1e-3, 1.0);
        const auto l = build_ledger(r.beam, r.traj);
        EXPECT_LT(l.energy.back(), prev) << gamma;
        prev = l.energy.back();
    }
    prev = INFINITY;
    for (double ka : {0.0, 0.01, 0.05, 0.2}) {
        const auto r = run(0.1, {0.0, ka, 0.0, ka}, 1e-3, 1.0);
        const auto l = build_ledger(r.beam, r.traj);
        EXPECT_LT(l.energy.back(), prev) << ka;
        prev = l.energy.back();
    }
}

// dJ/dt = 2 v^T M v - 2 E follows from the equations of motion; check the
// two sides at random states.
TEST(IdentityTest, AuxiliaryRateFormula) {
    const BoundaryControls bc{0.3, 0.2, 0.1, 0.4};
    const auto b = assemble(unit_beam(0.7), bc, uniform_mesh(1.0, 6));
    const Eigen::MatrixXd m(b.mass), c(b.damping), k(b.stiffness), cv(b.viscous_damping);
    for (int trial = 0; trial < 5; ++trial) {
        const Vector q = Vector::Random(b.size()), v = Vector::Random(b.size());
        const Vector a = m.ldlt().solve(-c * v - k * q);
        // d/dt of v'Mq + q'Cv q / 2 + (ka_l q_l^2 + ka_r q_r^2) / 2
        const double lhs = a.dot(m * q) + v.dot(m * v) + q.dot(cv * v) +
                           bc.ka_left * q(b.left_rotation) * v(b.left_rotation) +
                           bc.ka_right * q(b.right_rotation) * v(b.right_rotation);
        const double rhs = 2 * v.dot(m * v) - 2 * energy(b, q, v);
        EXPECT_NEAR(lhs, rhs, 1e-10 * (std::abs(lhs) + 1.0));
    }
}

}  // namespace
}  // namespace beamdecay
