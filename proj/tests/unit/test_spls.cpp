#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spls/multilevel.hpp"
#include "spls/problems.hpp"
#include "spls/spls.hpp"
#include "test_support.hpp"

using namespace spls;

namespace {

struct Fixture {
  MultilevelContext ctx;
  SplsSystem sys;
  ManufacturedProblem prob;

  Fixture(int level, double eps, MeshFamily fam = MeshFamily::Uniform)
      : ctx(build_hierarchy(level, fam, eps), ProblemCoefficients::reaction_example(eps)),
        sys(ctx.hierarchy().finest(), ProblemCoefficients::reaction_example(eps)),
        prob(eps) {}

  Vector rhs() const { return sys.load(prob.f()); }
};

FluxPair random_pair(int n, std::mt19937_64& rng) {
  return {support::random_vector(n, rng), support::random_vector(n, rng), support::random_vector(n, rng)};
}

double max_diff(const FluxPair& a, const FluxPair& b) {
  return std::max({(a.scalar - b.scalar).cwiseAbs().maxCoeff(), (a.vec_x - b.vec_x).cwiseAbs().maxCoeff(),
                   (a.vec_y - b.vec_y).cwiseAbs().maxCoeff()});
}

}  // namespace

TEST(ApplyB, ZeroInput) {
  const Fixture s(2, 1e-2);
  const FluxPair d = s.sys.apply_B(Vector::Zero(s.sys.test_space().size()));
  EXPECT_EQ(d.scalar.norm() + d.vec_x.norm() + d.vec_y.norm(), 0.0);
}

TEST(ApplyB, SingleHatDuals) {
  const double eps = 1e-4;
  const Fixture s(1, eps);
  const Mesh2D& m = s.ctx.hierarchy().finest();
  const FemSpace& v = s.sys.test_space();
  const int dof = 4;
  const int node = v.node_of(dof);
  const FluxPair d = s.sys.apply_B(Vector::Unit(v.size(), dof));
  // per-element oracle
  Vector sx = Vector::Zero(m.num_nodes()), sy = Vector::Zero(m.num_nodes());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    for (int a = 0; a < 3; ++a) {
      if (tri[a] != node) continue;
      const ElementGeometry g = element_geometry(m, t);
      for (int b = 0; b < 3; ++b) {
        sx[tri[b]] += g.grad_x[a] * g.area / 3.0;
        sy[tri[b]] += g.grad_y[a] * g.area / 3.0;
      }
    }
  }
  EXPECT_LT((d.vec_x - sx).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((d.vec_y - sy).cwiseAbs().maxCoeff(), 1e-15);
  const Vector c_col = s.sys.q().c_mass * Vector::Unit(m.num_nodes(), node);
  EXPECT_LT((d.scalar - c_col).cwiseAbs().maxCoeff(), 1e-15);
  // eps-independent vector duals
  const Fixture s2(1, 1e-12);
  const FluxPair d2 = s2.sys.apply_B(Vector::Unit(v.size(), dof));
  EXPECT_LT((d.vec_x - d2.vec_x).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ApplyB, OptimalNormIdentity) {
  std::mt19937_64 rng(21);
  for (int level : {1, 2, 3, 4})
    for (double eps : {1e-1, 1e-6}) {
      const Fixture s(level, eps);
      for (int k = 0; k < 20; ++k) {
        const Vector v = support::random_vector(s.sys.test_space().size(), rng);
        const double b = s.sys.b_form_conforming(v, v);
        const double q = s.sys.conforming_q_norm_sq(v);
        const double opt = v.dot(s.sys.a_opt() * v);
        EXPECT_NEAR(b, q, 1e-12 * q);
        EXPECT_NEAR(opt, q, 1e-12 * q);
      }
    }
}

TEST(Projection, OrthIsIdentityOnTrialSpace) {
  std::mt19937_64 rng(22);
  const Fixture s(3, 1e-8, MeshFamily::Shishkin);
  const FluxPair p = random_pair(s.sys.node_space().size(), rng);
  EXPECT_LT(max_diff(s.sys.project_orth(s.sys.gram_apply(p)), p), 1e-10);
}

TEST(Projection, ConstantsReproduced) {
  const Fixture s(3, 1e-3);
  const int n = s.sys.node_space().size();
  const FluxPair one_scalar{s.sys.q().c_mass * Vector::Ones(n), Vector::Zero(n), Vector::Zero(n)};
  const FluxPair p = s.sys.project_orth(one_scalar);
  EXPECT_LT((p.scalar - Vector::Ones(n)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(p.vec_x.norm() + p.vec_y.norm(), 1e-14);
  // constant vector field (1, 0): dual (1, phi_i) = D_ii
  const FluxPair field{Vector::Zero(n), s.sys.q().mass * Vector::Ones(n), Vector::Zero(n)};
  const FluxPair lumped = s.sys.project_lump(field);
  EXPECT_LT((lumped.vec_x - Vector::Ones(n)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Projection, GradientRecoveryResidual) {
  const Fixture s(2, 1e-2);
  const FemSpace& v = s.sys.test_space();
  const int center = v.dof_of(s.ctx.hierarchy().finest().node_index(4, 4));
  const FluxPair dual = s.sys.apply_B(Vector::Unit(v.size(), center));
  const FluxPair p = s.sys.project_orth(dual);
  EXPECT_LT((s.sys.q().mass * p.vec_x - dual.vec_x).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((s.sys.q().mass * p.vec_y - dual.vec_y).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Projection, LumpSharesScalarBlock) {
  std::mt19937_64 rng(23);
  const Fixture s(3, 1e-4);
  const FluxPair dual = s.sys.apply_B(support::random_vector(s.sys.test_space().size(), rng));
  EXPECT_EQ((s.sys.project_orth(dual).scalar - s.sys.project_lump(dual).scalar).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Projection, LumpAndOrthNormsEquivalent) {
  // ||R_lump B v|| vs ||R_orth B v|| in the Q-norm: for the vector blocks the
  // ratio is governed by the (M, D) equivalence, whose band on P1 is [1/4, 1]
  // for the Gram eigenvalues, so norms differ by at most a factor 4.
  std::mt19937_64 rng(24);
  const Fixture s(2, 1e-2);
  for (int k = 0; k < 10; ++k) {
    const FluxPair dual = s.sys.apply_B(support::random_vector(s.sys.test_space().size(), rng));
    const double no = s.sys.q().norm(s.sys.project_orth(dual));
    const double nl = s.sys.q().norm(s.sys.project_lump(dual));
    EXPECT_NE(no, nl);
    EXPECT_GT(nl / no, 0.25);
    EXPECT_LT(nl / no, 4.0);
  }
}

TEST(BForm, ZeroLinearAndProjectionIdentity) {
  std::mt19937_64 rng(25);
  const Fixture s(3, 1e-3);
  const int m = s.sys.test_space().size(), n = s.sys.node_space().size();
  const Vector v = support::random_vector(m, rng);
  EXPECT_EQ(s.sys.b_form(v, FluxPair::zero(n)), 0.0);
  const FluxPair p1 = random_pair(n, rng), p2 = random_pair(n, rng);
  EXPECT_NEAR(s.sys.b_form(v, p1 + 2.0 * p2), s.sys.b_form(v, p1) + 2.0 * s.sys.b_form(v, p2), 1e-13);
  // b(v, R_orth B v) = ||R_orth B v||_Q^2
  const FluxPair r = s.sys.project_orth(s.sys.apply_B(v));
  const double nr = s.sys.q().inner(r, r);
  EXPECT_NEAR(s.sys.b_form(v, r), nr, 1e-12 * nr);
}

TEST(Uzawa, ConformingExactConvergesInOneStep) {
  for (int level = 0; level <= 4; ++level) {
    const Fixture s(level, 1e-3);
    const SplsSolution sol = ucg_solve(s.sys, s.rhs(), TrialSpace::Conforming, {1e-10, 100, true});
    EXPECT_EQ(sol.report.iterations, 1) << level;
    // the generator solves the standard Galerkin system
    const Vector res = s.sys.a_opt() * sol.generator - s.rhs();
    EXPECT_LT(res.norm(), 1e-12 * s.rhs().norm());
    EXPECT_LT(sol.w.norm(), 1e-12);
  }
}

TEST(Uzawa, ZeroRhs) {
  const Fixture s(3, 1e-2);
  for (auto trial : {TrialSpace::Orth, TrialSpace::Lump, TrialSpace::Conforming}) {
    const SplsSolution sol = ucg_solve(s.sys, Vector::Zero(s.sys.test_space().size()), trial);
    EXPECT_EQ(sol.report.iterations, 0);
    EXPECT_EQ(sol.p.scalar.norm(), 0.0);
  }
}

TEST(Uzawa, UcgReproducesUniformError) {
  const Fixture s(3, 1e-1);
  const SplsSolution sol = ucg_solve(s.sys, s.rhs(), TrialSpace::Orth);
  const double err = q_norm_error(s.ctx.hierarchy().finest(), s.prob.sampler(), sol.p, 1e-1, s.prob.coeffs.c);
  EXPECT_NEAR(err, 0.0041, 0.05 * 0.0041);
}

TEST(Uzawa, ExactPreconditionerMatchesUcg) {
  const Fixture s(3, 1e-3);
  const auto exact = make_preconditioner(PreconditionerKind::Exact, s.ctx);
  for (auto trial : {TrialSpace::Orth, TrialSpace::Lump}) {
    const SplsSolution a = ucg_solve(s.sys, s.rhs(), trial);
    const SplsSolution b = upcg_solve(s.sys, s.rhs(), trial, *exact);
    ASSERT_EQ(a.report.iterations, b.report.iterations);
    for (std::size_t k = 0; k < a.report.residual_history.size(); ++k)
      EXPECT_NEAR(a.report.residual_history[k], b.report.residual_history[k], 1e-12);
    EXPECT_LT(max_diff(a.p, b.p), 1e-12);
  }
}

TEST(Uzawa, SolutionIndependentOfPreconditioner) {
  // The discrete solution solves (C + eps K G^-1 K^T) u = F whatever P is.
  const Fixture s(4, 1e-2);
  const auto sbvp = make_preconditioner(PreconditionerKind::sBVP, s.ctx);
  const auto mg = make_preconditioner(PreconditionerKind::MG_GS, s.ctx);
  const SplsSolution a = upcg_solve(s.sys, s.rhs(), TrialSpace::Orth, *sbvp, {1e-12});
  const SplsSolution b = upcg_solve(s.sys, s.rhs(), TrialSpace::Orth, *mg, {1e-12});
  EXPECT_LT(max_diff(a.p, b.p), 1e-9);
}

TEST(Uzawa, ResidualIdentityHolds) {
  for (auto fam : {MeshFamily::Uniform, MeshFamily::Shishkin})
    for (auto trial : {TrialSpace::Orth, TrialSpace::Lump}) {
      const double eps = fam == MeshFamily::Uniform ? 1e-2 : 1e-8;
      const Fixture s(4, eps, fam);
      const auto p = make_preconditioner(PreconditionerKind::sBVP, s.ctx);
      const SplsSolution sol = upcg_solve(s.sys, s.rhs(), trial, *p, {1e-10, 1000, true});
      EXPECT_TRUE(sol.report.converged);
      EXPECT_LT(sol.report.residual_identity_error, 1e-10);
    }
}

TEST(Uzawa, TableIterationCountsUniform) {
  // Uzawa PCG counts at eps = 1e-3 level 4 (sBVP, 12) and eps = 1e-1 level 5 (MG-GS, 81), +-25%.
  {
    const Fixture s(4, 1e-3);
    const auto p = make_preconditioner(PreconditionerKind::sBVP, s.ctx);
    const int it = upcg_solve(s.sys, s.rhs(), TrialSpace::Orth, *p, {1e-8}).report.iterations;
    EXPECT_LE(std::abs(it - 12), 0.25 * 12) << it;
  }
  {
    const Fixture s(5, 1e-1);
    const auto p = make_preconditioner(PreconditionerKind::MG_GS, s.ctx);
    const int it = upcg_solve(s.sys, s.rhs(), TrialSpace::Orth, *p, {1e-8}).report.iterations;
    EXPECT_LE(std::abs(it - 81), 0.25 * 81) << it;
  }
}

TEST(Uzawa, MaxIterationGuard) {
  const Fixture s(4, 1e-2);
  const auto p = make_preconditioner(PreconditionerKind::Identity, s.ctx);
  EXPECT_THROW(upcg_solve(s.sys, s.rhs(), TrialSpace::Orth, *p, {1e-14, 2}), SolverError);
}

namespace {

// c~^2 = min over v of ||R_h B v||_h^2 / ||B v||_Q^2, the smallest eigenvalue
// of A_opt^-1 (B^* R_h B), estimated by Lanczos.
std::vector<double> stability_constants(MeshFamily fam, TrialSpace trial) {
  std::vector<double> c;
  for (int level = 2; level <= 5; ++level) {
    const Fixture s(level, 1e-6, fam);
    const auto exact = make_exact_preconditioner(s.sys.a_opt());
    auto schur = [&](const Vector& v) {
      const FluxPair dual = s.sys.apply_B(v);
      const FluxPair r = trial == TrialSpace::Orth ? s.sys.project_orth(dual) : s.sys.project_lump(dual);
      return s.sys.apply_Bstar(r);
    };
    std::mt19937_64 rng(level);
    SolveReport rep;
    pcg(schur, exact->as_map(), support::random_vector(s.sys.test_space().size(), rng), 1e-13, rep);
    c.push_back(std::sqrt(lanczos_ritz_values(rep).front()));
  }
  return c;
}

void expect_level_stable(const std::vector<double>& c) {
  for (std::size_t k = 0; k < c.size(); ++k) {
    EXPECT_GT(c[k], 0.0);
    EXPECT_LT(std::abs(c[k] - c.back()) / c.back(), 0.15) << "level " << k + 2;
  }
}

}  // namespace

TEST(Uzawa, ProjectionStabilityUniform) {
  for (auto trial : {TrialSpace::Orth, TrialSpace::Lump}) expect_level_stable(stability_constants(MeshFamily::Uniform, trial));
}

// Anisotropic layer elements fall outside the quasi-uniform setting; this
// measures whether the constant still holds there.
TEST(Uzawa, ProjectionStabilityShishkin) {
  for (auto trial : {TrialSpace::Orth, TrialSpace::Lump}) expect_level_stable(stability_constants(MeshFamily::Shishkin, trial));
}

TEST(QInner, NormsPositive) {
  std::mt19937_64 rng(26);
  const Fixture s(2, 1e-14, MeshFamily::Shishkin);
  const FluxPair p = random_pair(s.sys.node_space().size(), rng);
  EXPECT_GT(s.sys.q().inner(p, p), 0.0);
  EXPECT_GT(s.sys.q().lumped_inner(p, p), 0.0);
}
