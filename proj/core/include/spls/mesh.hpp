#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "spls/types.hpp"

namespace spls {

/// Ordered 1D partition of [0,1].
struct Partition1D {
  std::vector<double> points;  // points[0] = 0, points.back() = 1
  int n_intervals = 0;
  double lambda = 0.25;        // transition point; 1/4 for a uniform partition

  double interval_length(int i) const { return points[i + 1] - points[i]; }
};

Partition1D uniform_partition(int n_intervals);

/// Piecewise-uniform layer-adapted partition: N/4 intervals on [0,lambda],
/// N/2 on [lambda, 1-lambda], N/4 on [1-lambda, 1], with
/// lambda = min(1/4, 2 sqrt(eps/c_star) ln N).
/// Throws std::invalid_argument unless N is a positive multiple of 8 and
/// eps, c_star > 0.
Partition1D shishkin_partition(int n_intervals, double eps, double c_star);

/// The transition parameter alone.
double shishkin_lambda(int n_intervals, double eps, double c_star);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Tensor-product triangulation of the unit square.
///
/// Nodes are numbered lexicographically by (y, x): node (i, j) with column i
/// and row j has index j * (N + 1) + i. Every cell is split by the diagonal
/// running from its top-left corner to its bottom-right corner, giving the
/// counter-clockwise triangles (BL, BR, TL) and (BR, TR, TL).
struct Mesh2D {
  std::vector<Point2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> boundary_mask;
  int n_per_side = 0;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int node_index(int i, int j) const { return j * (n_per_side + 1) + i; }

  /// Signed area under the counter-clockwise convention.
  double signed_area(int t) const;
  double total_area() const;
};

Mesh2D tensor_triangulate(const Partition1D& px, const Partition1D& py);

/// Prolongation between two nested tensor meshes with N and 2N intervals per
/// side, over all nodes: column c holds the coarse hat function c expressed in
/// the fine nodal basis (1 at its own node, 1/2 at the edge midpoints around
/// it). Depends only on topology.
SparseOperator uniform_prolongation(int coarse_n_per_side);

struct RefinedMesh {
  Mesh2D mesh;
  SparseOperator prolongation;  // n_fine x n_coarse
};

/// Splits every triangle into four through its edge midpoints.
RefinedMesh refine_uniform(const Mesh2D& mesh);

enum class MeshFamily { Uniform, Shishkin };

/// Nested meshes k = 0..J with N_k = 2^(k+1) intervals per side.
///
/// For the Shishkin family every level is the image of the uniform N_k grid
/// under one piecewise-linear bijection of [0,1] (per direction) that carries
/// the uniform N_J partition onto the finest Shishkin partition. Transfer
/// operators are the uniform ones in both families.
struct MeshHierarchy {
  MeshFamily family = MeshFamily::Uniform;
  std::vector<Mesh2D> levels;
  /// level_prolongations[k] maps level k to level k+1 (all nodes), k < J.
  std::vector<SparseOperator> level_prolongations;
  /// prolongations[k] maps level k to the finest level J (all nodes).
  std::vector<SparseOperator> prolongations;
  Partition1D finest_partition;

  int finest_level() const { return static_cast<int>(levels.size()) - 1; }
  const Mesh2D& finest() const { return levels.back(); }
};

MeshHierarchy build_hierarchy(int finest_level, MeshFamily family, double eps = 1.0,
                              double c_star = 2.0);

/// Intervals per side at a hierarchy level.
constexpr int intervals_at_level(int level) { return 1 << (level + 1); }

/// Debug dump: "x y boundary_flag" per node, then "i j k" per triangle,
/// 17 significant digits.
void write_mesh(std::ostream& os, const Mesh2D& mesh);

}  // namespace spls
