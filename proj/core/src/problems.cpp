#include "spls/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace spls {

namespace {

struct Layer {
  double g;    // (1 - a)(1 - b)
  double dg;   // g'
  double eps_d2g;  // eps g'' = -(a + b), O(1) as eps -> 0
};

// a = e^{-t/s}, b = e^{(t-1)/s}; both exponents are <= 0 on [0,1].
Layer layer(double t, double s) {
  const double a = std::exp(-t / s);
  const double b = std::exp((t - 1.0) / s);
  const double ab = std::exp(-1.0 / s);
  return {1.0 - a - b + ab, (a - b) / s, -(a + b)};
}

}  // namespace

ExactValues evaluate_exact(double x, double y, double eps) {
  const double s = std::sqrt(eps);
  const Layer lx = layer(x, s);
  const Layer ly = layer(y, s);
  const double px = x * (1.0 - x);
  const double py = y * (1.0 - y);
  ExactValues v;
  v.u = px * ly.g + py * lx.g;
  v.du_dx = (1.0 - 2.0 * x) * ly.g + py * lx.dg;
  v.du_dy = (1.0 - 2.0 * y) * lx.g + px * ly.dg;
  const double eps_lap = -2.0 * eps * (ly.g + lx.g) + px * ly.eps_d2g + py * lx.eps_d2g;
  const double c = 2.0 * (1.0 + x * x + y * y);
  v.f = -eps_lap + c * v.u;
  return v;
}

ManufacturedProblem::ManufacturedProblem(double e) : eps(e), coeffs(ProblemCoefficients::reaction_example(e)) {
  if (!(e > 0.0)) throw std::invalid_argument("manufactured problem: eps must be positive");
}

ExactSampler ManufacturedProblem::sampler() const {
  const double e = eps;
  return [e](double x, double y) { return evaluate_exact(x, y, e); };
}

ScalarField ManufacturedProblem::u() const {
  const double e = eps;
  return [e](double x, double y) { return evaluate_exact(x, y, e).u; };
}

ScalarField ManufacturedProblem::f() const {
  const double e = eps;
  return [e](double x, double y) { return evaluate_exact(x, y, e).f; };
}

namespace {

struct SplitError {
  double scalar = 0.0;  // integral of w (u - q)^2
  double flux = 0.0;    // integral of |grad u - a|^2
};

SplitError integrate_errors(const Mesh2D& mesh, const ExactSampler& exact, const FluxPair& p, const ScalarField* c,
                            const TriangleRule& rule) {
  if (p.size() != mesh.num_nodes()) throw std::invalid_argument("error norm: solution does not match mesh");
  SplitError out;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    double scalar = 0.0, flux = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const auto& l = rule.barycentric[q];
      const Point2 x = g.map(l);
      double qh = 0.0, ax = 0.0, ay = 0.0;
      for (int k = 0; k < 3; ++k) {
        qh += l[k] * p.scalar[tri[k]];
        ax += l[k] * p.vec_x[tri[k]];
        ay += l[k] * p.vec_y[tri[k]];
      }
      const ExactValues e = exact(x.x, x.y);
      const double w = c ? (*c)(x.x, x.y) : 1.0;
      scalar += rule.weights[q] * w * (e.u - qh) * (e.u - qh);
      flux += rule.weights[q] * ((e.du_dx - ax) * (e.du_dx - ax) + (e.du_dy - ay) * (e.du_dy - ay));
    }
    out.scalar += g.area * scalar;
    out.flux += g.area * flux;
  }
  return out;
}

}  // namespace

double q_norm_error(const Mesh2D& mesh, const ExactSampler& exact, const FluxPair& p, double eps,
                    const ScalarField& c, const TriangleRule& rule) {
  const SplitError e = integrate_errors(mesh, exact, p, &c, rule);
  return std::sqrt(e.scalar + eps * e.flux);
}

double balanced_error(const Mesh2D& mesh, const ExactSampler& exact, const FluxPair& p, double eps,
                      const TriangleRule& rule) {
  const SplitError e = integrate_errors(mesh, exact, p, nullptr, rule);
  return std::sqrt(e.scalar + std::sqrt(eps) * e.flux);
}

std::vector<double> convergence_order(const std::vector<double>& errors, MeshFamily family, int first_level) {
  for (double e : errors)
    if (!(e > 0.0)) throw std::invalid_argument("convergence_order: errors must be positive");
  std::vector<double> orders;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    const double ratio = std::log(errors[k - 1] / errors[k]);
    if (family == MeshFamily::Uniform) {
      orders.push_back(ratio / std::log(2.0));
    } else {
      const double n0 = intervals_at_level(first_level + static_cast<int>(k) - 1);
      const double n1 = 2.0 * n0;
      orders.push_back(ratio / std::log((std::log(n0) / n0) / (std::log(n1) / n1)));
    }
  }
  return orders;
}

}  // namespace spls
