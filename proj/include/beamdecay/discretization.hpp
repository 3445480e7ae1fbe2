#pragma once

/**
 * @file discretization.hpp
 * @brief Hermite cubic beam elements for the controlled beam.
 *
 * Each node carries a deflection w and a rotation theta = w_x. The end
 * deflections are eliminated (u(0) = u(L) = 0); the end rotations stay as
 * unknowns so the boundary springs and dampers enter as exact rank-one
 * additions on the diagonal:
 *
 *     K_h = K_bending + kr_left e_L e_L^T + kr_right e_R e_R^T
 *     C_h = C_viscous + ka_left e_L e_L^T + ka_right e_R e_R^T
 *
 * Unknown ordering: theta_0, (w_1, theta_1), ..., (w_{n-1}, theta_{n-1}),
 * theta_n, so the left rotation is unknown 0 and the right one is 2n - 1.
 */

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <iosfwd>
#include <utility>
#include <vector>

#include "beamdecay/model.hpp"

namespace beamdecay {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct Mesh {
    int n_elements = 0;
    double length = 0.0;

    double spacing() const { return length / n_elements; }
    double node(int i) const { return length * i / n_elements; }
    std::vector<double> nodes() const;
};

/// Uniform mesh; n_elements >= 2.
Mesh uniform_mesh(double length, int n_elements);

enum class DofKind { deflection, rotation };

struct DofRef {
    int node;
    DofKind kind;
};

struct DiscreteBeam {
    Mesh mesh;
    BoundaryControls controls;

    SparseMatrix mass;               ///< M_h, SPD
    SparseMatrix damping;            ///< C_h = viscous + boundary dampers
    SparseMatrix stiffness;          ///< K_h = bending + boundary springs
    SparseMatrix viscous_damping;    ///< mu-weighted mass matrix
    SparseMatrix bending_stiffness;  ///< r-weighted curvature matrix

    std::vector<DofRef> dofs;  ///< unknown index -> (node, kind)
    int left_rotation = 0;
    int right_rotation = 0;

    int size() const { return static_cast<int>(dofs.size()); }
    /// Unknown index for (node, kind), or -1 for an eliminated deflection.
    int unknown(int node, DofKind kind) const;
};

/// Element matrices come from closed-form integrals when the coefficients
/// are constant on each element (piecewise breakpoints must coincide with
/// nodes) and from 4-point Gauss quadrature for sampled coefficients.
/// Throws MESH_INCOMPATIBLE when a breakpoint falls inside an element.
DiscreteBeam assemble(const BeamSpec& spec, const BoundaryControls& bc, const Mesh& mesh);

struct DiscreteState {
    Vector displacement;
    Vector velocity;
};

/// Nodal deflections from point values and rotations from slopes (exact for
/// closed-form profiles, differenced samples otherwise). Throws
/// RESOLUTION_ERROR when a sampled profile is coarser than the mesh.
DiscreteState interpolate_initial(const InitialConditions& ic, const Mesh& mesh);

/// Coordinate text dump: one "row col value" triple per stored entry.
void write_coordinate_text(std::ostream& os, const SparseMatrix& a);

/// Exact element matrices for constant coefficients on an element of
/// length h, local order (w1, theta1, w2, theta2).
Eigen::Matrix4d element_stiffness(double rigidity, double h);
Eigen::Matrix4d element_mass(double mass, double h);

}  // namespace beamdecay
