#pragma once

#include "spls/assembly.hpp"
#include "spls/linalg.hpp"
#include "spls/multilevel.hpp"

namespace spls {

/// Element (q, **q**) of the product trial space M_h x eps M_h^2. `scalar`
/// holds nodal coefficients of q; `vec_x`, `vec_y` hold coefficients against
/// the eps-scaled basis eps*Phi_j, i.e. nodal values of **q** / eps.
///
/// The same layout carries dual data (actions on the basis functions); for
/// the vector blocks those are the eps-free pairings (g, Phi_j).
struct FluxPair {
  Vector scalar;
  Vector vec_x;
  Vector vec_y;

  static FluxPair zero(int n_nodes);
  int size() const { return static_cast<int>(scalar.size()); }

  FluxPair& operator+=(const FluxPair& o);
  FluxPair& operator-=(const FluxPair& o);
  FluxPair& operator*=(double a);
};

FluxPair operator+(FluxPair a, const FluxPair& b);
FluxPair operator-(FluxPair a, const FluxPair& b);
FluxPair operator*(double a, FluxPair p);

/// Q-inner product ((c q, r) + eps^-1 (**q**, **r**)) on coefficient
/// representations, with eps cancelled: s^T C t + eps a^T M b. The lumped form
/// replaces M by the diagonal D.
struct QInnerProduct {
  double eps = 1.0;
  SparseOperator c_mass;  // all nodes, c-weighted
  SparseOperator mass;    // all nodes
  Vector lumped;          // (1, phi_i)

  double inner(const FluxPair& p, const FluxPair& r) const;
  double lumped_inner(const FluxPair& p, const FluxPair& r) const;
  double norm(const FluxPair& p) const;
};

enum class TrialSpace { Orth, Lump, Conforming };

/// Discrete SPLS operators on one mesh: V_h = interior P1, M_h = all-node P1.
/// The mesh must outlive the system.
class SplsSystem {
 public:
  SplsSystem(const Mesh2D& mesh, const ProblemCoefficients& coeffs, const TriangleRule& rule = degree6_rule());

  const FemSpace& test_space() const { return test_; }
  const FemSpace& node_space() const { return nodes_; }
  const ProblemCoefficients& coefficients() const { return coeffs_; }
  const QInnerProduct& q() const { return q_; }
  /// eps A + C on V_h.
  const SparseOperator& a_opt() const { return a_opt_; }
  /// (c phi_j, phi_i), i in V_h, j in M_h.
  const SparseOperator& c_mixed() const { return c_mixed_; }
  /// (d phi_i / dx, phi_j) and (d phi_i / dy, phi_j), i in V_h, j in M_h.
  const SparseOperator& kx() const { return kx_; }
  const SparseOperator& ky() const { return ky_; }

  /// Dual data of Bv = (v, eps grad v) against the M_h x eps M_h^2 basis.
  FluxPair apply_B(const Vector& v) const;
  /// Q-orthogonal projection of dual data onto the trial space.
  FluxPair project_orth(const FluxPair& dual) const;
  /// Scalar block as project_orth; vector blocks divided by (1, phi_i).
  FluxPair project_lump(const FluxPair& dual) const;
  /// Dual data of an element of M_h x eps M_h^2 (Gram matrix times coefficients).
  FluxPair gram_apply(const FluxPair& p) const;
  /// B^* p as a dual vector on V_h: entries b(phi_i, p).
  Vector apply_Bstar(const FluxPair& p) const;
  /// b(v, p) = (c q, v) + (**q**, grad v).
  double b_form(const Vector& v, const FluxPair& p) const;
  /// b(v, Bg) for the unprojected conforming element Bg.
  double b_form_conforming(const Vector& v, const Vector& g) const;
  /// ||Bg||_Q^2 = ||c^1/2 g||^2 + eps ||grad g||^2 by element-wise quadrature.
  double conforming_q_norm_sq(const Vector& g) const;

  /// (f, phi_i) on V_h.
  Vector load(const ScalarField& f) const;

 private:
  const Mesh2D* mesh_;
  ProblemCoefficients coeffs_;
  TriangleRule rule_;
  FemSpace test_;
  FemSpace nodes_;
  QInnerProduct q_;
  SparseOperator a_opt_;
  SparseOperator c_mixed_;
  SparseOperator kx_;
  SparseOperator ky_;
  Cholesky c_solver_;
  Cholesky m_solver_;
};

struct UzawaOptions {
  double tol = 1e-8;
  int max_iter = 10000;
  /// Recompute B_h P(F - B^* p_j) each iteration and record the largest
  /// deviation from the recursive residual q_j.
  bool check_residual_identity = false;
};

struct SplsSolution {
  TrialSpace trial = TrialSpace::Orth;
  /// Trial-space solution. For the conforming trial space this is the
  /// orthogonal projection of B g, kept for reporting only.
  FluxPair p;
  /// Generator g with p = B g (conforming trial space only).
  Vector generator;
  /// Final test-space iterate; tends to 0.
  Vector w;
  SolveReport report;
};

/// Uzawa conjugate gradients with exact inversion of eps A + C.
SplsSolution ucg_solve(const SplsSystem& sys, const Vector& rhs, TrialSpace trial, const UzawaOptions& opts = {});

/// Uzawa PCG with (eps A + C)^-1 replaced by `precond`. Stops when
/// ||q_j||_Q <= opts.tol. Throws SolverError on breakdown or after
/// opts.max_iter iterations.
SplsSolution upcg_solve(const SplsSystem& sys, const Vector& rhs, TrialSpace trial, const Preconditioner& precond,
                        const UzawaOptions& opts = {});

}  // namespace spls
