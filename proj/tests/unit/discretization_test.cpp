#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "beamdecay/discretization.hpp"
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

// Nodal vector of a smooth function with its derivative.
Vector nodal(const DiscreteBeam& beam, const std::function<double(double)>& u,
             const std::function<double(double)>& du) {
    Vector q(beam.size());
    for (int i = 0; i < beam.size(); ++i) {
        const auto& d = beam.dofs[static_cast<std::size_t>(i)];
        const double x = beam.mesh.node(d.node);
        q(i) = d.kind == DofKind::deflection ? u(x) : du(x);
    }
    return q;
}

Eigen::VectorXd generalized_eigenvalues(const DiscreteBeam& beam) {
    const Eigen::MatrixXd k(beam.stiffness), m(beam.mass);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k, m);
    return es.eigenvalues();
}

TEST(MeshTest, UniformNodes) {
    const auto m = uniform_mesh(2.0, 4);
    EXPECT_DOUBLE_EQ(m.spacing(), 0.5);
    const auto x = m.nodes();
    ASSERT_EQ(x.size(), 5u);
    EXPECT_EQ(x.front(), 0.0);
    EXPECT_EQ(x.back(), 2.0);
    EXPECT_EQ(code_of([] { uniform_mesh(1.0, 1); }), ErrorCode::domain_error);
}

TEST(AssembleTest, UnknownCountAndOrdering) {
    const auto b = assemble(unit_beam(), {}, uniform_mesh(1.0, 2));
    EXPECT_EQ(b.size(), 4);
    EXPECT_EQ(b.left_rotation, 0);
    EXPECT_EQ(b.right_rotation, 3);
    EXPECT_EQ(b.unknown(0, DofKind::deflection), -1);
    EXPECT_EQ(b.unknown(2, DofKind::deflection), -1);
    EXPECT_EQ(b.unknown(1, DofKind::deflection), 1);
    EXPECT_EQ(b.unknown(1, DofKind::rotation), 2);

    const auto b8 = assemble(unit_beam(), {}, uniform_mesh(1.0, 8));
    EXPECT_EQ(b8.size(), 16);
    EXPECT_EQ(b8.right_rotation, 15);
}

TEST(AssembleTest, SymmetricPositiveDefiniteAndBanded) {
    const BoundaryControls bc{0.3, 0.2, 0.0, 0.1};
    const auto b = assemble(unit_beam(0.7), bc, uniform_mesh(1.0, 12));
    for (const SparseMatrix* a : {&b.mass, &b.stiffness, &b.damping}) {
        const Eigen::MatrixXd d(*a);
        EXPECT_NEAR((d - d.transpose()).norm(), 0.0, 1e-12 * d.norm());
        for (int i = 0; i < d.rows(); ++i)
            for (int j = 0; j < d.cols(); ++j)
                if (std::abs(i - j) > 3) EXPECT_EQ(d(i, j), 0.0);
    }
    Eigen::LLT<Eigen::MatrixXd> m(Eigen::MatrixXd(b.mass)), k(Eigen::MatrixXd(b.stiffness));
    EXPECT_EQ(m.info(), Eigen::Success);
    // Hinged ends alone make the bending part positive definite.
    EXPECT_EQ(k.info(), Eigen::Success);
}

TEST(AssembleTest, BoundaryTermsAreRankOneOnEndRotations) {
    const auto mesh = uniform_mesh(1.0, 6);
    const auto bare = assemble(unit_beam(0.5), {}, mesh);
    const BoundaryControls bc{0.3, 0.2, 0.7, 0.1};
    const auto b = assemble(unit_beam(0.5), bc, mesh);
    Eigen::MatrixXd dk = Eigen::MatrixXd(b.stiffness) - Eigen::MatrixXd(bare.stiffness);
    Eigen::MatrixXd dc = Eigen::MatrixXd(b.damping) - Eigen::MatrixXd(bare.damping);
    EXPECT_NEAR(dk(0, 0), 0.3, 1e-13);
    EXPECT_NEAR(dk(11, 11), 0.7, 1e-13);
    EXPECT_NEAR(dc(0, 0), 0.2, 1e-13);
    EXPECT_NEAR(dc(11, 11), 0.1, 1e-13);
    dk(0, 0) = dk(11, 11) = dc(0, 0) = dc(11, 11) = 0.0;
    EXPECT_LT(dk.norm(), 1e-13);
    EXPECT_LT(dc.norm(), 1e-13);
    EXPECT_EQ((Eigen::MatrixXd(b.bending_stiffness) - Eigen::MatrixXd(bare.stiffness)).norm(), 0.0);
}

TEST(AssembleTest, ViscousDampingIsGammaTimesMass) {
    const auto b = assemble(unit_beam(2.5), {}, uniform_mesh(1.0, 5));
    const Eigen::MatrixXd diff = Eigen::MatrixXd(b.viscous_damping) - 2.5 * Eigen::MatrixXd(b.mass);
    EXPECT_LT(diff.norm(), 1e-14);
}

// u = x^2 (L - x) is cubic, so the Hermite interpolant is exact.
TEST(AssembleTest, CubicPatch) {
    for (double l : {1.0, 0.502}) {
        const auto b = assemble(BeamSpec::proportional(l, CoefficientField::constant(1.0),
                                                       CoefficientField::constant(1.0), 0.0),
                                {}, uniform_mesh(l, 5));
        const auto q = nodal(b, [l](double x) { return x * x * (l - x); },
                             [l](double x) { return 2 * x * l - 3 * x * x; });
        EXPECT_NEAR(q.dot(b.stiffness * q), 4 * std::pow(l, 3), 1e-12);
        EXPECT_NEAR(q.dot(b.mass * q), std::pow(l, 7) / 105.0, 1e-14);
        EXPECT_NEAR(q(b.left_rotation), 0.0, 1e-15);
        EXPECT_NEAR(q(b.right_rotation), -l * l, 1e-15);
    }
}

TEST(AssembleTest, BoundaryEnergyIdentity) {
    const double l = 1.0;
    const BoundaryControls bc{0.4, 0.0, 0.9, 0.0};
    const auto b = assemble(unit_beam(), bc, uniform_mesh(l, 4));
    const auto q = nodal(b, [](double x) { return x - x * x * x; },
                         [](double x) { return 1 - 3 * x * x; });
    const double bending = q.dot(b.bending_stiffness * q);
    const double total = q.dot(b.stiffness * q);
    const double s0 = q(b.left_rotation), sl = q(b.right_rotation);
    EXPECT_NEAR(total, bending + 0.4 * s0 * s0 + 0.9 * sl * sl, 1e-13);
}

TEST(AssembleTest, SampledLinearMass) {
    // m(x) = 1 + x sampled at the ends: int (1 + x) x^4 (1 - x)^2 = 1/105 + 1/168.
    const auto spec = BeamSpec::proportional(1.0, CoefficientField::sampled({1.0, 2.0}),
                                             CoefficientField::constant(1.0), 0.0);
    const auto b = assemble(spec, {}, uniform_mesh(1.0, 4));
    const auto q = nodal(b, [](double x) { return x * x * (1 - x); },
                         [](double x) { return 2 * x - 3 * x * x; });
    EXPECT_NEAR(q.dot(b.mass * q), 1.0 / 105 + 1.0 / 168, 1e-14);
}

TEST(AssembleTest, PiecewiseMatchesSplitConstants) {
    // r = 1 on [0, .5), 3 on [.5, 1]; u = x^2 (1 - x), u'' = 2 - 6x.
    const auto spec = BeamSpec::proportional(1.0, CoefficientField::constant(1.0),
                                             CoefficientField::piecewise({0.5}, {1.0, 3.0}), 0.0);
    const auto b = assemble(spec, {}, uniform_mesh(1.0, 4));
    const auto q = nodal(b, [](double x) { return x * x * (1 - x); },
                         [](double x) { return 2 * x - 3 * x * x; });
    // int_0^.5 (2 - 6x)^2 = 1/2, int_.5^1 (2 - 6x)^2 = 7/2
    EXPECT_NEAR(q.dot(b.stiffness * q), 0.5 + 3 * 3.5, 1e-12);
}

TEST(AssembleTest, BreakpointInsideElement) {
    const auto spec = BeamSpec::proportional(1.0, CoefficientField::piecewise({0.3}, {1.0, 2.0}),
                                             CoefficientField::constant(1.0), 0.0);
    EXPECT_EQ(code_of([&] { assemble(spec, {}, uniform_mesh(1.0, 4)); }), ErrorCode::mesh_incompatible);
    EXPECT_NO_THROW(assemble(spec, {}, uniform_mesh(1.0, 10)));
}

TEST(AssembleTest, MeshLengthMismatch) {
    EXPECT_EQ(code_of([] { assemble(unit_beam(), {}, uniform_mesh(2.0, 4)); }), ErrorCode::domain_error);
}

TEST(InterpolateTest, ClosedFormIsExactAtNodes) {
    const double l = 0.502;
    const auto mesh = uniform_mesh(l, 8);
    const InitialConditions ic{Profile::demo(l, 0.01), Profile::mode(l, 2, 0.5)};
    const auto s = interpolate_initial(ic, mesh);
    const auto b = assemble(BeamSpec::proportional(l, CoefficientField::constant(1.0),
                                                   CoefficientField::constant(1.0), 0.0),
                            {}, mesh);
    for (int i = 0; i < b.size(); ++i) {
        const auto& d = b.dofs[static_cast<std::size_t>(i)];
        const double x = mesh.node(d.node);
        if (d.kind == DofKind::deflection) {
            EXPECT_NEAR(s.displacement(i), ic.deflection.value(x, l), 1e-17);
            EXPECT_NEAR(s.velocity(i), ic.velocity.value(x, l), 1e-15);
        } else {
            EXPECT_NEAR(s.displacement(i), ic.deflection.slope(x, l), 1e-15);
        }
    }
}

TEST(InterpolateTest, SampledProfiles) {
    const auto mesh = uniform_mesh(1.0, 4);
    // Fine samples of x (1 - x); nodal deflections picked from samples.
    std::vector<double> s(9);
    for (int i = 0; i <= 8; ++i) s[static_cast<std::size_t>(i)] = (i / 8.0) * (1 - i / 8.0);
    const auto st = interpolate_initial({Profile::sampled(s), Profile::zero()}, mesh);
    EXPECT_NEAR(st.displacement(1), 0.25 * 0.75, 1e-15);  // w_1 at x = 1/4
    EXPECT_NEAR(st.displacement(0), 1.0, 1e-12);          // slope at 0
    EXPECT_EQ(st.velocity.norm(), 0.0);
}

TEST(InterpolateTest, CoarseSamplesRejected) {
    const std::vector<double> s{0.0, 0.1, 0.2, 0.1, 0.0};
    EXPECT_EQ(code_of([&] { interpolate_initial({Profile::sampled(s), Profile::zero()}, uniform_mesh(1.0, 8)); }),
              ErrorCode::resolution_error);
    EXPECT_NO_THROW(interpolate_initial({Profile::sampled(s), Profile::zero()}, uniform_mesh(1.0, 4)));
}

TEST(CoordinateTextTest, Format) {
    SparseMatrix a(2, 2);
    a.insert(0, 0) = 1.5;
    a.insert(1, 0) = -0.25;
    std::ostringstream os;
    write_coordinate_text(os, a);
    EXPECT_EQ(os.str(), "0 0 1.5\n1 0 -0.25\n");
}

TEST(ElementTest, RigidMotionsHaveNoStrainEnergy) {
    const auto k = element_stiffness(2.0, 0.3);
    const Eigen::Vector4d translation(1, 0, 1, 0), rotation(0, 1, 0.3, 1);
    EXPECT_LT((k * translation).norm(), 1e-12);
    EXPECT_LT((k * rotation).norm(), 1e-10);
    const auto m = element_mass(2.0, 0.3);
    EXPECT_NEAR(translation.dot(m * translation), 0.6, 1e-15);
}

// Hinged beam, EI = m = L = 1: omega_k = (k pi)^2. Frequency error is O(h^4).
TEST(ConvergenceTest, FirstFrequencyFourthOrder) {
    const double exact = M_PI * M_PI;
    double prev = 0.0;
    for (int n : {4, 8, 16}) {
        const auto b = assemble(unit_beam(), {}, uniform_mesh(1.0, n));
        const double err = std::sqrt(generalized_eigenvalues(b)(0)) - exact;
        EXPECT_GT(err, 0.0);  // consistent mass: upper bound
        if (prev > 0.0) {
            EXPECT_GT(prev / err, 12.0);
            EXPECT_LT(prev / err, 20.0);
        }
        prev = err;
    }
}

TEST(ConvergenceTest, HigherModes) {
    const auto b = assemble(unit_beam(), {}, uniform_mesh(1.0, 32));
    const auto ev = generalized_eigenvalues(b);
    for (int k = 1; k <= 4; ++k)
        EXPECT_NEAR(std::sqrt(ev(k - 1)), std::pow(k * M_PI, 2), 1e-4 * std::pow(k * M_PI, 2));
}

}  // namespace
}  // namespace beamdecay
