#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "spls/mesh.hpp"
#include "spls/quadrature.hpp"
#include "spls/types.hpp"

namespace spls {

/// P1 space on a mesh: either the interior nodes (functions vanishing on the
/// boundary) or all nodes. The mesh must outlive the space.
class FemSpace {
 public:
  static FemSpace interior(const Mesh2D& mesh);
  static FemSpace all_nodes(const Mesh2D& mesh);
  static FemSpace interior(Mesh2D&&) = delete;
  static FemSpace all_nodes(Mesh2D&&) = delete;

  const Mesh2D& mesh() const { return *mesh_; }
  int size() const { return static_cast<int>(dof_nodes_.size()); }
  int node_of(int dof) const { return dof_nodes_[dof]; }
  /// -1 when the node carries no dof in this space.
  int dof_of(int node) const { return node_dofs_[node]; }
  const std::vector<int>& dof_nodes() const { return dof_nodes_; }

  /// Zero-extends dof values to all mesh nodes.
  Vector extend(const Vector& dof_values) const;
  /// Picks the dof entries out of an all-node vector.
  Vector restrict_to(const Vector& node_values) const;

 private:
  FemSpace(const Mesh2D& mesh, std::vector<bool> keep);

  const Mesh2D* mesh_;
  std::vector<int> dof_nodes_;
  std::vector<int> node_dofs_;
};

/// Data of -eps Lap u + c u = f: diffusion parameter, reaction coefficient with
/// its bounds, and the representative value c_star used by the multilevel
/// schedule and the layer-adapted mesh.
struct ProblemCoefficients {
  double eps = 1.0;
  ScalarField c;
  double c_min = 1.0;
  double c_max = 1.0;
  double c_star = 1.0;

  /// c = 2(1 + x^2 + y^2) on the unit square, c_star = c_min = 2.
  static ProblemCoefficients reaction_example(double eps);
  /// Constant coefficient c = value.
  static ProblemCoefficients constant(double eps, double value);

  /// Throws std::invalid_argument if the bounds are inconsistent.
  void validate() const;
};

/// Affine data of one P1 triangle.
struct ElementGeometry {
  std::array<Point2, 3> vertices;
  double area = 0.0;
  std::array<double, 3> grad_x{};  // constant gradients of the three vertex hats
  std::array<double, 3> grad_y{};

  Point2 map(const std::array<double, 3>& barycentric) const;
};

/// Throws std::runtime_error naming the triangle if its signed area is not
/// positive.
ElementGeometry element_geometry(const Mesh2D& mesh, int triangle);

/// (grad phi_j, grad phi_i), exact.
SparseOperator assemble_stiffness(const FemSpace& space);

/// (c phi_j, phi_i) by quadrature; rows from `test`, columns from `trial`.
SparseOperator assemble_weighted_mass(const FemSpace& test, const FemSpace& trial, const ScalarField& c,
                                      const TriangleRule& rule = degree6_rule());
SparseOperator assemble_weighted_mass(const FemSpace& space, const ScalarField& c,
                                      const TriangleRule& rule = degree6_rule());
/// Plain L2 mass matrix, exact.
SparseOperator assemble_mass(const FemSpace& space);

/// D_ii = (1, phi_i) = |support of phi_i| / 3.
Vector assemble_lumped_diag(const FemSpace& space);
/// D_ii = (w, phi_i) by quadrature.
Vector assemble_lumped_diag(const FemSpace& space, const ScalarField& weight,
                            const TriangleRule& rule = degree6_rule());

/// (f, phi_i) by quadrature. Throws std::runtime_error with the location if f
/// is not finite at a quadrature point.
Vector assemble_load(const FemSpace& space, const ScalarField& f, const TriangleRule& rule = degree6_rule());

/// G_ij = (d phi_i / d x_component, phi_j), rows from `test`, columns from
/// `trial`; component 0 is x, 1 is y. Exact.
SparseOperator assemble_gradient_coupling(const FemSpace& test, const FemSpace& trial, int component);

/// eps A + C on `space`, the operator of the optimal test norm.
SparseOperator optimal_norm_operator(const ProblemCoefficients& coeffs, const FemSpace& space,
                                     const TriangleRule& rule = degree6_rule());

/// Coordinate dump "row col value", one nonzero per line.
void write_matrix_coo(std::ostream& os, const SparseOperator& m);

}  // namespace spls
