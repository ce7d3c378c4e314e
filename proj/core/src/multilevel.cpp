#include "spls/multilevel.hpp"

#include <cmath>
#include <stdexcept>

namespace spls {

GammaSchedule gamma_schedule(double eps, double c_star, const std::vector<double>& h) {
  if (!(eps >= 0.0)) throw std::invalid_argument("gamma_schedule: eps must be non-negative");
  if (!(c_star > 0.0)) throw std::invalid_argument("gamma_schedule: c_star must be positive");
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (!(h[j] > 0.0)) throw std::invalid_argument("gamma_schedule: mesh sizes must be positive");
    if (j > 0 && !(h[j] < h[j - 1])) throw std::invalid_argument("gamma_schedule: mesh sizes must decrease");
  }
  GammaSchedule s;
  s.eps = eps;
  s.c_star = c_star;
  s.h = h;
  for (double hj : h) s.gammas.push_back(1.0 / (eps / (hj * hj) + c_star));
  for (std::size_t j = 1; j < s.gammas.size(); ++j)
    if (!(s.gammas[j] <= s.gammas[j - 1] && s.gammas[j] > 0.0))
      throw std::logic_error("gamma_schedule: schedule is not non-increasing");
  return s;
}

std::vector<double> topological_mesh_sizes(int finest_level) {
  std::vector<double> h;
  for (int j = 0; j <= finest_level; ++j) h.push_back(1.0 / intervals_at_level(j));
  return h;
}

namespace {

SparseOperator restrict_to_interior(const SparseOperator& e, const FemSpace& fine, const FemSpace& coarse) {
  std::vector<Eigen::Triplet<double>> entries;
  for (int r = 0; r < e.outerSize(); ++r) {
    const int row = fine.dof_of(r);
    if (row < 0) continue;
    for (SparseOperator::InnerIterator it(e, r); it; ++it) {
      const int col = coarse.dof_of(static_cast<int>(it.col()));
      if (col >= 0) entries.emplace_back(row, col, it.value());
    }
  }
  SparseOperator out(fine.size(), coarse.size());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

}  // namespace

MultilevelContext::MultilevelContext(MeshHierarchy hierarchy, const ProblemCoefficients& coeffs, MassWeight weight)
    : hierarchy_(std::make_shared<const MeshHierarchy>(std::move(hierarchy))), coeffs_(coeffs), weight_(weight) {
  coeffs_.validate();
  const int J = hierarchy_->finest_level();
  for (int k = 0; k <= J; ++k) spaces_.push_back(FemSpace::interior(hierarchy_->levels[k]));
  for (int k = 0; k <= J; ++k) {
    if (weight_ == MassWeight::Reaction) {
      mass_.push_back(assemble_weighted_mass(spaces_[k], coeffs_.c));
      lumped_.push_back(assemble_lumped_diag(spaces_[k], coeffs_.c));
    } else {
      mass_.push_back(assemble_mass(spaces_[k]));
      lumped_.push_back(assemble_lumped_diag(spaces_[k]));
    }
    mass_solver_.emplace_back(mass_[k]);
    prolongation_.push_back(restrict_to_interior(hierarchy_->prolongations[k], spaces_[J], spaces_[k]));
    if (k < J)
      level_prolongation_.push_back(
          restrict_to_interior(hierarchy_->level_prolongations[k], spaces_[k + 1], spaces_[k]));
  }
  schedule_ = gamma_schedule(coeffs_.eps, coeffs_.c_star, topological_mesh_sizes(J));
}

namespace {

void check_input(const MultilevelContext& ctx, const Vector& f, const GammaSchedule& s) {
  if (f.size() != ctx.size(ctx.finest_level())) throw std::invalid_argument("preconditioner: dual vector size mismatch");
  if (static_cast<int>(s.gammas.size()) != ctx.finest_level() + 1)
    throw std::invalid_argument("preconditioner: schedule length does not match hierarchy");
}

template <typename CoarseSolve>
Vector multilevel_sum(const MultilevelContext& ctx, const Vector& f, const GammaSchedule& s, Vector finest,
                      CoarseSolve&& coarse_solve) {
  const int J = ctx.finest_level();
  Vector out = s.gammas[J] * finest;
  for (int j = 0; j < J; ++j) {
    const double weight = s.gammas[j] - s.gammas[j + 1];
    if (weight == 0.0) continue;
    const SparseOperator& e = ctx.prolongation(j);
    const Vector coarse = e.transpose() * f;
    out += weight * (e * coarse_solve(j, coarse));
  }
  return out;
}

}  // namespace

Vector apply_bvp(const MultilevelContext& ctx, const Vector& f) { return apply_bvp(ctx, f, ctx.schedule()); }

Vector apply_bvp(const MultilevelContext& ctx, const Vector& f, const GammaSchedule& s) {
  check_input(ctx, f, s);
  const int J = ctx.finest_level();
  return multilevel_sum(ctx, f, s, ctx.mass_solver(J).solve(f),
                        [&](int j, const Vector& g) { return ctx.mass_solver(j).solve(g); });
}

Vector apply_sbvp(const MultilevelContext& ctx, const Vector& f, SbvpVariant variant) {
  return apply_sbvp(ctx, f, variant, ctx.schedule());
}

Vector apply_sbvp(const MultilevelContext& ctx, const Vector& f, SbvpVariant variant, const GammaSchedule& s) {
  check_input(ctx, f, s);
  const int J = ctx.finest_level();
  Vector finest = variant == SbvpVariant::MassFinest ? ctx.mass_solver(J).solve(f)
                                                     : Vector(f.cwiseQuotient(ctx.lumped(J)));
  return multilevel_sum(ctx, f, s, std::move(finest),
                        [&](int j, const Vector& g) { return Vector(g.cwiseQuotient(ctx.lumped(j))); });
}

MultigridHierarchy::MultigridHierarchy(const MultilevelContext& ctx) {
  const int J = ctx.finest_level();
  for (int k = 0; k <= J; ++k) {
    ops_.push_back(optimal_norm_operator(ctx.coefficients(), ctx.space(k)));
    diag_.push_back(ops_[k].diagonal());
    if (k < J) transfer_.push_back(ctx.level_prolongation(k));
  }
  coarse_ = Cholesky(ops_[0]);
}

void MultigridHierarchy::forward_gs(int level, const Vector& f, Vector& x) const {
  const SparseOperator& a = ops_[level];
  for (int i = 0; i < a.outerSize(); ++i) {
    double sum = f[i];
    for (SparseOperator::InnerIterator it(a, i); it; ++it)
      if (it.col() != i) sum -= it.value() * x[it.col()];
    x[i] = sum / diag_[level][i];
  }
}

void MultigridHierarchy::backward_gs(int level, const Vector& f, Vector& x) const {
  const SparseOperator& a = ops_[level];
  for (int i = static_cast<int>(a.outerSize()) - 1; i >= 0; --i) {
    double sum = f[i];
    for (SparseOperator::InnerIterator it(a, i); it; ++it)
      if (it.col() != i) sum -= it.value() * x[it.col()];
    x[i] = sum / diag_[level][i];
  }
}

Vector MultigridHierarchy::cycle(int level, const Vector& f) const {
  if (level == 0) return coarse_.solve(f);
  Vector x = Vector::Zero(f.size());
  forward_gs(level, f, x);
  const SparseOperator& e = transfer_[level - 1];
  const Vector residual = f - ops_[level] * x;
  x += e * cycle(level - 1, e.transpose() * residual);
  backward_gs(level, f, x);
  return x;
}

Vector MultigridHierarchy::vcycle(const Vector& f) const {
  if (f.size() != ops_.back().rows()) throw std::invalid_argument("vcycle: dual vector size mismatch");
  return cycle(finest_level(), f);
}

Vector apply_mg_gs(const MultigridHierarchy& mg, const Vector& f) { return mg.vcycle(f); }

namespace {

class BvpPreconditioner final : public Preconditioner {
 public:
  explicit BvpPreconditioner(const MultilevelContext& ctx) : ctx_(ctx) {}
  PreconditionerKind kind() const override { return PreconditionerKind::BVP; }
  int size() const override { return ctx_.size(ctx_.finest_level()); }
  Vector apply(const Vector& f) const override { return apply_bvp(ctx_, f); }

 private:
  const MultilevelContext& ctx_;
};

class SbvpPreconditioner final : public Preconditioner {
 public:
  SbvpPreconditioner(const MultilevelContext& ctx, SbvpVariant variant) : ctx_(ctx), variant_(variant) {}
  PreconditionerKind kind() const override { return PreconditionerKind::sBVP; }
  int size() const override { return ctx_.size(ctx_.finest_level()); }
  Vector apply(const Vector& f) const override { return apply_sbvp(ctx_, f, variant_); }

 private:
  const MultilevelContext& ctx_;
  SbvpVariant variant_;
};

class MgPreconditioner final : public Preconditioner {
 public:
  explicit MgPreconditioner(const MultilevelContext& ctx) : mg_(ctx) {}
  PreconditionerKind kind() const override { return PreconditionerKind::MG_GS; }
  int size() const override { return static_cast<int>(mg_.op(mg_.finest_level()).rows()); }
  Vector apply(const Vector& f) const override { return mg_.vcycle(f); }

 private:
  MultigridHierarchy mg_;
};

class ExactPreconditioner final : public Preconditioner {
 public:
  explicit ExactPreconditioner(const SparseOperator& a) : solver_(a) {}
  PreconditionerKind kind() const override { return PreconditionerKind::Exact; }
  int size() const override { return solver_.size(); }
  Vector apply(const Vector& f) const override { return solver_.solve(f); }

 private:
  Cholesky solver_;
};

class IdentityPreconditioner final : public Preconditioner {
 public:
  explicit IdentityPreconditioner(int n) : n_(n) {}
  PreconditionerKind kind() const override { return PreconditionerKind::Identity; }
  int size() const override { return n_; }
  Vector apply(const Vector& f) const override {
    if (f.size() != n_) throw std::invalid_argument("identity preconditioner: size mismatch");
    return f;
  }

 private:
  int n_;
};

}  // namespace

std::unique_ptr<Preconditioner> make_exact_preconditioner(const SparseOperator& a_opt) {
  return std::make_unique<ExactPreconditioner>(a_opt);
}

std::unique_ptr<Preconditioner> make_preconditioner(PreconditionerKind kind, const MultilevelContext& ctx,
                                                    SbvpVariant variant) {
  const int J = ctx.finest_level();
  switch (kind) {
    case PreconditionerKind::BVP:
      return std::make_unique<BvpPreconditioner>(ctx);
    case PreconditionerKind::sBVP:
      return std::make_unique<SbvpPreconditioner>(ctx, variant);
    case PreconditionerKind::MG_GS:
      return std::make_unique<MgPreconditioner>(ctx);
    case PreconditionerKind::Exact:
      return make_exact_preconditioner(optimal_norm_operator(ctx.coefficients(), ctx.space(J)));
    case PreconditionerKind::Identity:
      return std::make_unique<IdentityPreconditioner>(ctx.size(J));
  }
  throw std::invalid_argument("make_preconditioner: unknown kind");
}

Vector pcg_standard(const SparseOperator& op, const Preconditioner& p, const Vector& rhs, double tol,
                    SolveReport& report, int max_iter) {
  if (op.rows() != rhs.size() || p.size() != rhs.size()) throw std::invalid_argument("pcg_standard: size mismatch");
  return pcg([&op](const Vector& x) { return Vector(op * x); }, p.as_map(), rhs, tol, report, max_iter);
}

}  // namespace spls
