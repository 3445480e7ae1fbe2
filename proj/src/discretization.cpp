#include "beamdecay/discretization.hpp"

#include <array>
#include <cmath>
#include <ostream>

#include "beamdecay/errors.hpp"

namespace beamdecay {

std::vector<double> Mesh::nodes() const {
    std::vector<double> x(static_cast<std::size_t>(n_elements) + 1);
    for (int i = 0; i <= n_elements; ++i) x[static_cast<std::size_t>(i)] = node(i);
    return x;
}

Mesh uniform_mesh(double length, int n_elements) {
    if (!(length > 0.0)) throw Error(ErrorCode::domain_error, "mesh length must be positive");
    if (n_elements < 2) throw Error(ErrorCode::domain_error, "mesh needs at least 2 elements");
    return {n_elements, length};
}

int DiscreteBeam::unknown(int node, DofKind kind) const {
    const int n = mesh.n_elements;
    if (node < 0 || node > n) return -1;
    if (kind == DofKind::deflection) return (node == 0 || node == n) ? -1 : 2 * node - 1;
    return node == 0 ? 0 : (node == n ? 2 * n - 1 : 2 * node);
}

Eigen::Matrix4d element_stiffness(double rigidity, double h) {
    Eigen::Matrix4d k;
    const double h2 = h * h;
    k << 12.0, 6.0 * h, -12.0, 6.0 * h,
         6.0 * h, 4.0 * h2, -6.0 * h, 2.0 * h2,
         -12.0, -6.0 * h, 12.0, -6.0 * h,
         6.0 * h, 2.0 * h2, -6.0 * h, 4.0 * h2;
    return rigidity / (h2 * h) * k;
}

Eigen::Matrix4d element_mass(double mass, double h) {
    Eigen::Matrix4d m;
    const double h2 = h * h;
    m << 156.0, 22.0 * h, 54.0, -13.0 * h,
         22.0 * h, 4.0 * h2, 13.0 * h, -3.0 * h2,
         54.0, 13.0 * h, 156.0, -22.0 * h,
         -13.0 * h, -3.0 * h2, -22.0 * h, 4.0 * h2;
    return mass * h / 420.0 * m;
}

namespace {

// Hermite shape functions and their second x-derivatives at xi in [0, 1].
Eigen::Vector4d shape(double xi, double h) {
    const double xi2 = xi * xi, xi3 = xi2 * xi;
    return {1.0 - 3.0 * xi2 + 2.0 * xi3, h * (xi - 2.0 * xi2 + xi3), 3.0 * xi2 - 2.0 * xi3,
            h * (-xi2 + xi3)};
}

Eigen::Vector4d shape_curvature(double xi, double h) {
    const double h2 = h * h;
    return {(-6.0 + 12.0 * xi) / h2, (-4.0 + 6.0 * xi) / h, (6.0 - 12.0 * xi) / h2,
            (-2.0 + 6.0 * xi) / h};
}

// 4-point Gauss-Legendre on [0, 1]; exact up to degree 7.
constexpr std::array<double, 4> kGaussPoints = {
    0.5 - 0.5 * 0.8611363115940526, 0.5 - 0.5 * 0.3399810435848563,
    0.5 + 0.5 * 0.3399810435848563, 0.5 + 0.5 * 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {
    0.5 * 0.3478548451374538, 0.5 * 0.6521451548625461, 0.5 * 0.6521451548625461,
    0.5 * 0.3478548451374538};

// Checks that every piecewise breakpoint sits on a node.
void check_compatible(const CoefficientField& f, const Mesh& mesh, const char* name) {
    if (f.kind() != CoefficientField::Kind::piecewise_constant) return;
    const double h = mesh.spacing();
    for (double b : f.breakpoints()) {
        const double s = b / h;
        if (std::abs(s - std::round(s)) > 1e-9 * mesh.n_elements)
            throw Error(ErrorCode::mesh_incompatible,
                        std::string(name) + " breakpoint " + std::to_string(b) +
                            " is not on a mesh node; refine the mesh");
    }
}

struct ElementMatrices {
    Eigen::Matrix4d mass, viscous, bending;
};

ElementMatrices element_matrices(const BeamSpec& spec, const Mesh& mesh, int e) {
    const double h = mesh.spacing();
    const double a = mesh.node(e);
    const double l = spec.length;
    const bool sampled = spec.mass.kind() == CoefficientField::Kind::sampled ||
                         spec.damping.kind() == CoefficientField::Kind::sampled ||
                         spec.rigidity.kind() == CoefficientField::Kind::sampled;
    if (!sampled) {
        // Constant per element: evaluate at the midpoint.
        const double xm = a + 0.5 * h;
        return {element_mass(spec.mass.at(xm, l), h), element_mass(spec.damping.at(xm, l), h),
                element_stiffness(spec.rigidity.at(xm, l), h)};
    }
    ElementMatrices em{Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero()};
    for (std::size_t g = 0; g < kGaussPoints.size(); ++g) {
        const double xi = kGaussPoints[g];
        const double x = std::min(a + xi * h, l);
        const double w = kGaussWeights[g] * h;
        const Eigen::Vector4d n = shape(xi, h);
        const Eigen::Vector4d b = shape_curvature(xi, h);
        em.mass += w * spec.mass.at(x, l) * n * n.transpose();
        em.viscous += w * spec.damping.at(x, l) * n * n.transpose();
        em.bending += w * spec.rigidity.at(x, l) * b * b.transpose();
    }
    return em;
}

}  // namespace

DiscreteBeam assemble(const BeamSpec& spec, const BoundaryControls& bc, const Mesh& mesh) {
    if (mesh.n_elements < 2) throw Error(ErrorCode::domain_error, "mesh needs at least 2 elements");
    if (std::abs(mesh.length - spec.length) > 1e-12 * spec.length)
        throw Error(ErrorCode::domain_error, "mesh length differs from beam length");
    check_compatible(spec.mass, mesh, "m");
    check_compatible(spec.damping, mesh, "mu");
    check_compatible(spec.rigidity, mesh, "r");

    DiscreteBeam beam;
    beam.mesh = mesh;
    beam.controls = bc;
    const int n = mesh.n_elements;
    const int size = 2 * n;
    beam.dofs.resize(static_cast<std::size_t>(size));
    for (int node = 0; node <= n; ++node) {
        for (DofKind kind : {DofKind::deflection, DofKind::rotation}) {
            const int u = beam.unknown(node, kind);
            if (u >= 0) beam.dofs[static_cast<std::size_t>(u)] = {node, kind};
        }
    }
    beam.left_rotation = beam.unknown(0, DofKind::rotation);
    beam.right_rotation = beam.unknown(n, DofKind::rotation);

    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> tm, tc, tk;
    tm.reserve(16 * static_cast<std::size_t>(n));
    tc.reserve(16 * static_cast<std::size_t>(n));
    tk.reserve(16 * static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
        const auto em = element_matrices(spec, mesh, e);
        const std::array<int, 4> map = {
            beam.unknown(e, DofKind::deflection), beam.unknown(e, DofKind::rotation),
            beam.unknown(e + 1, DofKind::deflection), beam.unknown(e + 1, DofKind::rotation)};
        for (int i = 0; i < 4; ++i) {
            if (map[i] < 0) continue;
            for (int j = 0; j < 4; ++j) {
                if (map[j] < 0) continue;
                tm.emplace_back(map[i], map[j], em.mass(i, j));
                tc.emplace_back(map[i], map[j], em.viscous(i, j));
                tk.emplace_back(map[i], map[j], em.bending(i, j));
            }
        }
    }
    beam.mass.resize(size, size);
    beam.mass.setFromTriplets(tm.begin(), tm.end());
    beam.viscous_damping.resize(size, size);
    beam.viscous_damping.setFromTriplets(tc.begin(), tc.end());
    beam.bending_stiffness.resize(size, size);
    beam.bending_stiffness.setFromTriplets(tk.begin(), tk.end());

    beam.stiffness = beam.bending_stiffness;
    beam.stiffness.coeffRef(beam.left_rotation, beam.left_rotation) += bc.kr_left;
    beam.stiffness.coeffRef(beam.right_rotation, beam.right_rotation) += bc.kr_right;
    beam.damping = beam.viscous_damping;
    beam.damping.coeffRef(beam.left_rotation, beam.left_rotation) += bc.ka_left;
    beam.damping.coeffRef(beam.right_rotation, beam.right_rotation) += bc.ka_right;
    for (auto* a : {&beam.mass, &beam.damping, &beam.stiffness, &beam.viscous_damping,
                    &beam.bending_stiffness})
        a->makeCompressed();
    return beam;
}

DiscreteState interpolate_initial(const InitialConditions& ic, const Mesh& mesh) {
    const int n = mesh.n_elements;
    for (const Profile* p : {&ic.deflection, &ic.velocity}) {
        if (p->is_sampled() && static_cast<int>(p->samples().size()) - 1 < n)
            throw Error(ErrorCode::resolution_error,
                        "sampled initial profile is coarser than the mesh");
    }
    DiscreteState s{Vector::Zero(2 * n), Vector::Zero(2 * n)};
    auto fill = [&](const Profile& p, Vector& out) {
        for (int node = 0; node <= n; ++node) {
            const double x = mesh.node(node);
            if (node > 0 && node < n) out(2 * node - 1) = p.value(x, mesh.length);
            const int rot = node == 0 ? 0 : (node == n ? 2 * n - 1 : 2 * node);
            out(rot) = p.slope(x, mesh.length);
        }
    };
    fill(ic.deflection, s.displacement);
    fill(ic.velocity, s.velocity);
    return s;
}

void write_coordinate_text(std::ostream& os, const SparseMatrix& a) {
    const auto old = os.precision(17);
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it)
            os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    os.precision(old);
}

}  // namespace beamdecay
