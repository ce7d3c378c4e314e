#include "spls/spls.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spls {

FluxPair FluxPair::zero(int n) { return {Vector::Zero(n), Vector::Zero(n), Vector::Zero(n)}; }

FluxPair& FluxPair::operator+=(const FluxPair& o) {
  scalar += o.scalar;
  vec_x += o.vec_x;
  vec_y += o.vec_y;
  return *this;
}

FluxPair& FluxPair::operator-=(const FluxPair& o) {
  scalar -= o.scalar;
  vec_x -= o.vec_x;
  vec_y -= o.vec_y;
  return *this;
}

FluxPair& FluxPair::operator*=(double a) {
  scalar *= a;
  vec_x *= a;
  vec_y *= a;
  return *this;
}

FluxPair operator+(FluxPair a, const FluxPair& b) { return a += b; }
FluxPair operator-(FluxPair a, const FluxPair& b) { return a -= b; }
FluxPair operator*(double a, FluxPair p) { return p *= a; }

double QInnerProduct::inner(const FluxPair& p, const FluxPair& r) const {
  return p.scalar.dot(c_mass * r.scalar) + eps * (p.vec_x.dot(mass * r.vec_x) + p.vec_y.dot(mass * r.vec_y));
}

double QInnerProduct::lumped_inner(const FluxPair& p, const FluxPair& r) const {
  return p.scalar.dot(c_mass * r.scalar) +
         eps * (p.vec_x.cwiseProduct(lumped).dot(r.vec_x) + p.vec_y.cwiseProduct(lumped).dot(r.vec_y));
}

double QInnerProduct::norm(const FluxPair& p) const { return std::sqrt(std::max(inner(p, p), 0.0)); }

SplsSystem::SplsSystem(const Mesh2D& mesh, const ProblemCoefficients& coeffs, const TriangleRule& rule)
    : mesh_(&mesh),
      coeffs_(coeffs),
      rule_(rule),
      test_(FemSpace::interior(mesh)),
      nodes_(FemSpace::all_nodes(mesh)) {
  coeffs_.validate();
  q_.eps = coeffs_.eps;
  q_.c_mass = assemble_weighted_mass(nodes_, coeffs_.c, rule_);
  q_.mass = assemble_mass(nodes_);
  q_.lumped = assemble_lumped_diag(nodes_);
  a_opt_ = optimal_norm_operator(coeffs_, test_, rule_);
  c_mixed_ = assemble_weighted_mass(test_, nodes_, coeffs_.c, rule_);
  kx_ = assemble_gradient_coupling(test_, nodes_, 0);
  ky_ = assemble_gradient_coupling(test_, nodes_, 1);
  c_solver_ = Cholesky(q_.c_mass);
  m_solver_ = Cholesky(q_.mass);
}

FluxPair SplsSystem::apply_B(const Vector& v) const {
  if (v.size() != test_.size()) throw std::invalid_argument("apply_B: size mismatch");
  return {c_mixed_.transpose() * v, kx_.transpose() * v, ky_.transpose() * v};
}

FluxPair SplsSystem::project_orth(const FluxPair& dual) const {
  return {c_solver_.solve(dual.scalar), m_solver_.solve(dual.vec_x), m_solver_.solve(dual.vec_y)};
}

FluxPair SplsSystem::project_lump(const FluxPair& dual) const {
  return {c_solver_.solve(dual.scalar), dual.vec_x.cwiseQuotient(q_.lumped), dual.vec_y.cwiseQuotient(q_.lumped)};
}

FluxPair SplsSystem::gram_apply(const FluxPair& p) const {
  return {q_.c_mass * p.scalar, q_.mass * p.vec_x, q_.mass * p.vec_y};
}

Vector SplsSystem::apply_Bstar(const FluxPair& p) const {
  if (p.size() != nodes_.size()) throw std::invalid_argument("apply_Bstar: size mismatch");
  return c_mixed_ * p.scalar + coeffs_.eps * (kx_ * p.vec_x + ky_ * p.vec_y);
}

double SplsSystem::b_form(const Vector& v, const FluxPair& p) const { return v.dot(apply_Bstar(p)); }

double SplsSystem::b_form_conforming(const Vector& v, const Vector& g) const { return v.dot(a_opt_ * g); }

double SplsSystem::conforming_q_norm_sq(const Vector& g) const {
  const Vector nodal = test_.extend(g);
  double sum = 0.0;
  for (int t = 0; t < mesh_->num_triangles(); ++t) {
    const ElementGeometry geo = element_geometry(*mesh_, t);
    const auto& tri = mesh_->triangles[t];
    double gx = 0.0, gy = 0.0;
    for (int a = 0; a < 3; ++a) {
      gx += nodal[tri[a]] * geo.grad_x[a];
      gy += nodal[tri[a]] * geo.grad_y[a];
    }
    double local = coeffs_.eps * (gx * gx + gy * gy);
    for (int q = 0; q < rule_.size(); ++q) {
      const auto& l = rule_.barycentric[q];
      const Point2 x = geo.map(l);
      const double value = l[0] * nodal[tri[0]] + l[1] * nodal[tri[1]] + l[2] * nodal[tri[2]];
      local += rule_.weights[q] * coeffs_.c(x.x, x.y) * value * value;
    }
    sum += geo.area * local;
  }
  return sum;
}

Vector SplsSystem::load(const ScalarField& f) const { return assemble_load(test_, f, rule_); }

namespace {

// Trial-space policies for the Uzawa loop. Each one supplies B_h, B^*, the
// trial inner product (.,.)_h and the true Q-norm.
struct ProjectedTrial {
  using Element = FluxPair;
  const SplsSystem& sys;
  bool lumped;

  Element zero() const { return FluxPair::zero(sys.node_space().size()); }
  Element bh(const Vector& u) const {
    const FluxPair dual = sys.apply_B(u);
    return lumped ? sys.project_lump(dual) : sys.project_orth(dual);
  }
  Vector bstar(const Element& p) const { return sys.apply_Bstar(p); }
  double inner(const Element& a, const Element& b) const {
    return lumped ? sys.q().lumped_inner(a, b) : sys.q().inner(a, b);
  }
  double q_norm(const Element& p) const { return sys.q().norm(p); }
};

struct ConformingTrial {
  using Element = Vector;
  const SplsSystem& sys;

  Element zero() const { return Vector::Zero(sys.test_space().size()); }
  Element bh(const Vector& u) const { return u; }
  Vector bstar(const Element& g) const { return sys.a_opt() * g; }
  double inner(const Element& a, const Element& b) const { return a.dot(sys.a_opt() * b); }
  double q_norm(const Element& g) const { return std::sqrt(std::max(inner(g, g), 0.0)); }
};

template <typename Trial>
typename Trial::Element uzawa(const Trial& trial, const Vector& rhs, const Preconditioner& precond,
                              const UzawaOptions& opts, Vector& w, SolveReport& report) {
  using Element = typename Trial::Element;
  report = SolveReport{};
  Element p = trial.zero();
  Vector u = precond.apply(rhs);
  Element q = trial.bh(u);
  Element d = q;
  double qq = trial.inner(q, q);
  const double q1 = trial.q_norm(q);
  report.residual_history.push_back(q1);

  while (report.residual_history.back() > opts.tol) {
    if (report.iterations >= opts.max_iter) throw SolverError("uzawa: no convergence within max_iter", report);
    const Vector h = -precond.apply(trial.bstar(d));
    const double bhq = h.dot(trial.bstar(q));
    // relative to (q,q)_h: near the 1e-16 tolerance both are O(1e-32)
    if (!(std::abs(bhq) >= 1e-30 * qq)) throw SolverError("uzawa: breakdown, b(h, q) vanished", report);
    const double alpha = -qq / bhq;
    p += alpha * d;
    u += alpha * h;
    q = trial.bh(u);
    const double qq_new = trial.inner(q, q);
    const double beta = qq_new / qq;
    d = q + beta * d;
    qq = qq_new;
    ++report.iterations;
    report.alphas.push_back(alpha);
    report.betas.push_back(beta);
    report.residual_history.push_back(trial.q_norm(q));

    if (opts.check_residual_identity && q1 > 0.0) {
      const Element fresh = trial.bh(precond.apply(rhs - trial.bstar(p)));
      const Element diff = fresh - q;
      report.residual_identity_error = std::max(report.residual_identity_error, trial.q_norm(diff) / q1);
    }
  }
  report.converged = true;
  w = std::move(u);
  return p;
}

}  // namespace

SplsSolution upcg_solve(const SplsSystem& sys, const Vector& rhs, TrialSpace trial, const Preconditioner& precond,
                        const UzawaOptions& opts) {
  if (rhs.size() != sys.test_space().size() || precond.size() != rhs.size())
    throw std::invalid_argument("upcg_solve: size mismatch");
  SplsSolution sol;
  sol.trial = trial;
  if (trial == TrialSpace::Conforming) {
    sol.generator = uzawa(ConformingTrial{sys}, rhs, precond, opts, sol.w, sol.report);
    sol.p = sys.project_orth(sys.apply_B(sol.generator));
  } else {
    sol.p = uzawa(ProjectedTrial{sys, trial == TrialSpace::Lump}, rhs, precond, opts, sol.w, sol.report);
  }
  return sol;
}

SplsSolution ucg_solve(const SplsSystem& sys, const Vector& rhs, TrialSpace trial, const UzawaOptions& opts) {
  const auto exact = make_exact_preconditioner(sys.a_opt());
  return upcg_solve(sys, rhs, trial, *exact, opts);
}

}  // namespace spls
