#include "spls/mesh.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace spls {

namespace {

template <typename NodeFn>
Mesh2D make_tensor_mesh(int n, NodeFn&& node_at) {
  Mesh2D mesh;
  mesh.n_per_side = n;
  const int stride = n + 1;
  mesh.nodes.reserve(static_cast<std::size_t>(stride) * stride);
  mesh.boundary_mask.reserve(static_cast<std::size_t>(stride) * stride);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.nodes.push_back(node_at(i, j));
      mesh.boundary_mask.push_back(i == 0 || j == 0 || i == n || j == n);
    }
  }
  mesh.triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int bl = j * stride + i;
      const int br = bl + 1;
      const int tl = bl + stride;
      const int tr = tl + 1;
      mesh.triangles.push_back({bl, br, tl});
      mesh.triangles.push_back({br, tr, tl});
    }
  }
  return mesh;
}

void check_partition(const Partition1D& p) {
  if (p.n_intervals <= 0 || static_cast<int>(p.points.size()) != p.n_intervals + 1)
    throw std::invalid_argument("partition: point count does not match n_intervals");
  if (p.points.front() != 0.0 || p.points.back() != 1.0)
    throw std::invalid_argument("partition: must start at 0 and end at 1");
  for (int i = 0; i < p.n_intervals; ++i)
    if (!(p.points[i + 1] > p.points[i]))
      throw std::invalid_argument("partition: points must be strictly increasing");
}

}  // namespace

Partition1D uniform_partition(int n_intervals) {
  if (n_intervals <= 0) throw std::invalid_argument("uniform_partition: n_intervals must be positive");
  Partition1D p;
  p.n_intervals = n_intervals;
  p.lambda = 0.25;
  p.points.resize(n_intervals + 1);
  for (int i = 0; i <= n_intervals; ++i) p.points[i] = static_cast<double>(i) / n_intervals;
  return p;
}

double shishkin_lambda(int n_intervals, double eps, double c_star) {
  return std::min(0.25, 2.0 * std::sqrt(eps / c_star) * std::log(static_cast<double>(n_intervals)));
}

Partition1D shishkin_partition(int n_intervals, double eps, double c_star) {
  if (n_intervals < 8 || n_intervals % 8 != 0)
    throw std::invalid_argument("shishkin_partition: N must be a positive multiple of 8, got " +
                                std::to_string(n_intervals));
  if (!(eps > 0.0)) throw std::invalid_argument("shishkin_partition: eps must be positive");
  if (!(c_star > 0.0)) throw std::invalid_argument("shishkin_partition: c_star must be positive");

  const double lambda = shishkin_lambda(n_intervals, eps, c_star);
  const int quarter = n_intervals / 4;
  const int half = n_intervals / 2;

  Partition1D p;
  p.n_intervals = n_intervals;
  p.lambda = lambda;
  p.points.resize(n_intervals + 1);
  for (int i = 0; i <= quarter; ++i) p.points[i] = lambda * i / quarter;
  for (int i = 1; i <= half; ++i) p.points[quarter + i] = lambda + (1.0 - 2.0 * lambda) * i / half;
  for (int i = 1; i <= quarter; ++i) p.points[quarter + half + i] = (1.0 - lambda) + lambda * i / quarter;
  p.points[quarter] = lambda;
  p.points[quarter + half] = 1.0 - lambda;
  p.points.back() = 1.0;
  return p;
}

double Mesh2D::signed_area(int t) const {
  const auto& tri = triangles[t];
  const Point2& a = nodes[tri[0]];
  const Point2& b = nodes[tri[1]];
  const Point2& c = nodes[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh2D::total_area() const {
  double sum = 0.0;
  for (int t = 0; t < num_triangles(); ++t) sum += signed_area(t);
  return sum;
}

Mesh2D tensor_triangulate(const Partition1D& px, const Partition1D& py) {
  check_partition(px);
  check_partition(py);
  if (px.n_intervals != py.n_intervals)
    throw std::invalid_argument("tensor_triangulate: partitions must have the same number of intervals");
  return make_tensor_mesh(px.n_intervals, [&](int i, int j) { return Point2{px.points[i], py.points[j]}; });
}

SparseOperator uniform_prolongation(int coarse_n) {
  const int fine_n = 2 * coarse_n;
  const int cs = coarse_n + 1;
  const int fs = fine_n + 1;
  auto coarse = [cs](int i, int j) { return j * cs + i; };

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(fs) * fs * 2);
  for (int jf = 0; jf <= fine_n; ++jf) {
    for (int i_f = 0; i_f <= fine_n; ++i_f) {
      const int row = jf * fs + i_f;
      const int i = i_f / 2;
      const int j = jf / 2;
      const bool odd_x = i_f % 2 == 1;
      const bool odd_y = jf % 2 == 1;
      if (!odd_x && !odd_y) {
        entries.emplace_back(row, coarse(i, j), 1.0);
      } else if (odd_x && !odd_y) {
        entries.emplace_back(row, coarse(i, j), 0.5);
        entries.emplace_back(row, coarse(i + 1, j), 0.5);
      } else if (!odd_x && odd_y) {
        entries.emplace_back(row, coarse(i, j), 0.5);
        entries.emplace_back(row, coarse(i, j + 1), 0.5);
      } else {
        // midpoint of the cell diagonal from (i, j+1) to (i+1, j)
        entries.emplace_back(row, coarse(i, j + 1), 0.5);
        entries.emplace_back(row, coarse(i + 1, j), 0.5);
      }
    }
  }
  SparseOperator e(fs * fs, cs * cs);
  e.setFromTriplets(entries.begin(), entries.end());
  return e;
}

RefinedMesh refine_uniform(const Mesh2D& mesh) {
  const int n = mesh.n_per_side;
  if (n <= 0 || mesh.num_nodes() != (n + 1) * (n + 1))
    throw std::invalid_argument("refine_uniform: mesh is not a tensor triangulation");

  auto node = [&](int i, int j) { return mesh.nodes[mesh.node_index(i, j)]; };
  auto mid = [](Point2 a, Point2 b) { return Point2{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; };

  RefinedMesh out;
  out.mesh = make_tensor_mesh(2 * n, [&](int i_f, int jf) {
    const int i = i_f / 2;
    const int j = jf / 2;
    const bool odd_x = i_f % 2 == 1;
    const bool odd_y = jf % 2 == 1;
    if (!odd_x && !odd_y) return node(i, j);
    if (odd_x && !odd_y) return mid(node(i, j), node(i + 1, j));
    if (!odd_x && odd_y) return mid(node(i, j), node(i, j + 1));
    return mid(node(i, j + 1), node(i + 1, j));
  });
  out.prolongation = uniform_prolongation(n);
  return out;
}

MeshHierarchy build_hierarchy(int finest_level, MeshFamily family, double eps, double c_star) {
  if (finest_level < 0) throw std::invalid_argument("build_hierarchy: J must be non-negative");
  if (family == MeshFamily::Shishkin && finest_level < 2)
    throw std::invalid_argument("build_hierarchy: Shishkin hierarchies need J >= 2 (N_J multiple of 8)");

  const int n_finest = intervals_at_level(finest_level);
  MeshHierarchy h;
  h.family = family;
  h.finest_partition = family == MeshFamily::Shishkin ? shishkin_partition(n_finest, eps, c_star)
                                                      : uniform_partition(n_finest);

  // The bijection sends uniform node m / N_J to finest partition point m, so
  // level k keeps every 2^(J-k)-th finest point.
  for (int k = 0; k <= finest_level; ++k) {
    const int n = intervals_at_level(k);
    const int stride = 1 << (finest_level - k);
    Partition1D p;
    p.n_intervals = n;
    p.lambda = h.finest_partition.lambda;
    p.points.resize(n + 1);
    for (int i = 0; i <= n; ++i) p.points[i] = h.finest_partition.points[i * stride];
    if (family == MeshFamily::Uniform) p = uniform_partition(n);
    h.levels.push_back(tensor_triangulate(p, p));
  }

  for (int k = 0; k < finest_level; ++k) h.level_prolongations.push_back(uniform_prolongation(intervals_at_level(k)));

  h.prolongations.resize(finest_level + 1);
  const int n_nodes = h.finest().num_nodes();
  SparseOperator identity(n_nodes, n_nodes);
  identity.setIdentity();
  h.prolongations[finest_level] = identity;
  for (int k = finest_level - 1; k >= 0; --k) {
    SparseOperator product = h.prolongations[k + 1] * h.level_prolongations[k];
    h.prolongations[k] = product;
  }
  return h;
}

void write_mesh(std::ostream& os, const Mesh2D& mesh) {
  const auto old_precision = os.precision();
  os << std::setprecision(17);
  for (int i = 0; i < mesh.num_nodes(); ++i)
    os << mesh.nodes[i].x << ' ' << mesh.nodes[i].y << ' ' << (mesh.boundary_mask[i] ? 1 : 0) << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os.precision(old_precision);
}

}  // namespace spls
