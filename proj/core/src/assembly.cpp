#include "spls/assembly.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spls {

FemSpace::FemSpace(const Mesh2D& mesh, std::vector<bool> keep) : mesh_(&mesh) {
  node_dofs_.assign(mesh.num_nodes(), -1);
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    if (!keep[n]) continue;
    node_dofs_[n] = static_cast<int>(dof_nodes_.size());
    dof_nodes_.push_back(n);
  }
}

FemSpace FemSpace::interior(const Mesh2D& mesh) {
  std::vector<bool> keep(mesh.num_nodes());
  for (int n = 0; n < mesh.num_nodes(); ++n) keep[n] = !mesh.boundary_mask[n];
  return FemSpace(mesh, std::move(keep));
}

FemSpace FemSpace::all_nodes(const Mesh2D& mesh) {
  return FemSpace(mesh, std::vector<bool>(mesh.num_nodes(), true));
}

Vector FemSpace::extend(const Vector& dof_values) const {
  if (dof_values.size() != size()) throw std::invalid_argument("FemSpace::extend: size mismatch");
  Vector out = Vector::Zero(mesh_->num_nodes());
  for (int d = 0; d < size(); ++d) out[dof_nodes_[d]] = dof_values[d];
  return out;
}

Vector FemSpace::restrict_to(const Vector& node_values) const {
  if (node_values.size() != mesh_->num_nodes()) throw std::invalid_argument("FemSpace::restrict_to: size mismatch");
  Vector out(size());
  for (int d = 0; d < size(); ++d) out[d] = node_values[dof_nodes_[d]];
  return out;
}

ProblemCoefficients ProblemCoefficients::reaction_example(double eps) {
  ProblemCoefficients p;
  p.eps = eps;
  p.c = [](double x, double y) { return 2.0 * (1.0 + x * x + y * y); };
  p.c_min = 2.0;
  p.c_max = 6.0;
  p.c_star = 2.0;
  return p;
}

ProblemCoefficients ProblemCoefficients::constant(double eps, double value) {
  ProblemCoefficients p;
  p.eps = eps;
  p.c = [value](double, double) { return value; };
  p.c_min = p.c_max = p.c_star = value;
  return p;
}

void ProblemCoefficients::validate() const {
  if (!(eps >= 0.0)) throw std::invalid_argument("coefficients: eps must be non-negative");
  if (!c) throw std::invalid_argument("coefficients: reaction coefficient is empty");
  if (!(c_min > 0.0) || !(c_min <= c_max)) throw std::invalid_argument("coefficients: need 0 < c_min <= c_max");
  if (!(c_star > 0.0) || c_star < c_min || c_star > c_max)
    throw std::invalid_argument("coefficients: c_star must lie in [c_min, c_max]");
}

Point2 ElementGeometry::map(const std::array<double, 3>& l) const {
  return {l[0] * vertices[0].x + l[1] * vertices[1].x + l[2] * vertices[2].x,
          l[0] * vertices[0].y + l[1] * vertices[1].y + l[2] * vertices[2].y};
}

ElementGeometry element_geometry(const Mesh2D& mesh, int t) {
  ElementGeometry g;
  const auto& tri = mesh.triangles[t];
  for (int k = 0; k < 3; ++k) g.vertices[k] = mesh.nodes[tri[k]];
  const auto& [a, b, c] = g.vertices;
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  if (!(det > 0.0)) throw std::runtime_error("degenerate or inverted triangle " + std::to_string(t));
  g.area = 0.5 * det;
  // grad lambda_k = rot90(opposite edge) / (2 area)
  g.grad_x = {(b.y - c.y) / det, (c.y - a.y) / det, (a.y - b.y) / det};
  g.grad_y = {(c.x - b.x) / det, (a.x - c.x) / det, (b.x - a.x) / det};
  return g;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

template <typename ElementKernel>
SparseOperator assemble_pairwise(const FemSpace& test, const FemSpace& trial, ElementKernel&& kernel) {
  const Mesh2D& mesh = test.mesh();
  if (&mesh != &trial.mesh()) throw std::invalid_argument("assembly: spaces live on different meshes");
  Triplets entries;
  entries.reserve(static_cast<std::size_t>(mesh.num_triangles()) * 9);
  double local[3][3];
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    kernel(t, g, local);
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      const int row = test.dof_of(tri[a]);
      if (row < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int col = trial.dof_of(tri[b]);
        if (col < 0) continue;
        entries.emplace_back(row, col, local[a][b]);
      }
    }
  }
  SparseOperator m(test.size(), trial.size());
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

}  // namespace

SparseOperator assemble_stiffness(const FemSpace& space) {
  return assemble_pairwise(space, space, [](int, const ElementGeometry& g, double (&k)[3][3]) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) k[a][b] = g.area * (g.grad_x[a] * g.grad_x[b] + g.grad_y[a] * g.grad_y[b]);
  });
}

SparseOperator assemble_weighted_mass(const FemSpace& test, const FemSpace& trial, const ScalarField& c,
                                      const TriangleRule& rule) {
  return assemble_pairwise(test, trial, [&](int, const ElementGeometry& g, double (&k)[3][3]) {
    for (auto& row : k)
      for (double& v : row) v = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const auto& l = rule.barycentric[q];
      const Point2 x = g.map(l);
      const double w = rule.weights[q] * g.area * c(x.x, x.y);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) k[a][b] += w * l[a] * l[b];
    }
  });
}

SparseOperator assemble_weighted_mass(const FemSpace& space, const ScalarField& c, const TriangleRule& rule) {
  return assemble_weighted_mass(space, space, c, rule);
}

SparseOperator assemble_mass(const FemSpace& space) {
  return assemble_pairwise(space, space, [](int, const ElementGeometry& g, double (&k)[3][3]) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) k[a][b] = g.area / 12.0 * (a == b ? 2.0 : 1.0);
  });
}

Vector assemble_lumped_diag(const FemSpace& space) {
  const Mesh2D& mesh = space.mesh();
  Vector d = Vector::Zero(space.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    for (int node : mesh.triangles[t]) {
      const int dof = space.dof_of(node);
      if (dof >= 0) d[dof] += g.area / 3.0;
    }
  }
  return d;
}

Vector assemble_lumped_diag(const FemSpace& space, const ScalarField& weight, const TriangleRule& rule) {
  const Mesh2D& mesh = space.mesh();
  Vector d = Vector::Zero(space.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    for (int q = 0; q < rule.size(); ++q) {
      const auto& l = rule.barycentric[q];
      const Point2 x = g.map(l);
      const double w = rule.weights[q] * g.area * weight(x.x, x.y);
      for (int a = 0; a < 3; ++a) {
        const int dof = space.dof_of(tri[a]);
        if (dof >= 0) d[dof] += w * l[a];
      }
    }
  }
  return d;
}

Vector assemble_load(const FemSpace& space, const ScalarField& f, const TriangleRule& rule) {
  const Mesh2D& mesh = space.mesh();
  Vector load = Vector::Zero(space.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    for (int q = 0; q < rule.size(); ++q) {
      const auto& l = rule.barycentric[q];
      const Point2 x = g.map(l);
      const double value = f(x.x, x.y);
      if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << std::setprecision(17) << "load: non-finite source value at (" << x.x << ", " << x.y
            << ") in triangle " << t;
        throw std::runtime_error(msg.str());
      }
      const double w = rule.weights[q] * g.area * value;
      for (int a = 0; a < 3; ++a) {
        const int dof = space.dof_of(tri[a]);
        if (dof >= 0) load[dof] += w * l[a];
      }
    }
  }
  return load;
}

SparseOperator assemble_gradient_coupling(const FemSpace& test, const FemSpace& trial, int component) {
  if (component != 0 && component != 1) throw std::invalid_argument("gradient coupling: component must be 0 or 1");
  return assemble_pairwise(test, trial, [component](int, const ElementGeometry& g, double (&k)[3][3]) {
    const auto& grad = component == 0 ? g.grad_x : g.grad_y;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) k[a][b] = grad[a] * g.area / 3.0;
  });
}

SparseOperator optimal_norm_operator(const ProblemCoefficients& coeffs, const FemSpace& space,
                                     const TriangleRule& rule) {
  SparseOperator op = assemble_weighted_mass(space, coeffs.c, rule);
  if (coeffs.eps != 0.0) op += coeffs.eps * assemble_stiffness(space);
  return op;
}

void write_matrix_coo(std::ostream& os, const SparseOperator& m) {
  const auto old_precision = os.precision();
  os << std::setprecision(17);
  for (int r = 0; r < m.outerSize(); ++r)
    for (SparseOperator::InnerIterator it(m, r); it; ++it) os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  os.precision(old_precision);
}

}  // namespace spls
