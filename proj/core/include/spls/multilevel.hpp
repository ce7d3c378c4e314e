#pragma once

#include <memory>
#include <vector>

#include "spls/assembly.hpp"
#include "spls/linalg.hpp"
#include "spls/mesh.hpp"

namespace spls {

struct GammaSchedule {
  std::vector<double> gammas;  // gamma_0 .. gamma_J
  std::vector<double> h;       // h_0 .. h_J
  double eps = 0.0;
  double c_star = 1.0;
};

/// gamma_j = (eps / h_j^2 + c_star)^-1. Throws std::invalid_argument on bad
/// input and std::logic_error if the result is not non-increasing.
GammaSchedule gamma_schedule(double eps, double c_star, const std::vector<double>& h);

/// h_j = 2^-(j+1), j = 0..J, used for both mesh families.
std::vector<double> topological_mesh_sizes(int finest_level);

/// Inner product used for the level mass matrices and lumped diagonals:
/// plain L2, or weighted by the reaction coefficient c.
enum class MassWeight { Plain, Reaction };

/// Per-level data of a hierarchy restricted to interior dofs.
class MultilevelContext {
 public:
  MultilevelContext(MeshHierarchy hierarchy, const ProblemCoefficients& coeffs,
                    MassWeight weight = MassWeight::Reaction);

  const MeshHierarchy& hierarchy() const { return *hierarchy_; }
  int finest_level() const { return hierarchy_->finest_level(); }
  int size(int level) const { return spaces_[level].size(); }
  const FemSpace& space(int level) const { return spaces_[level]; }
  const ProblemCoefficients& coefficients() const { return coeffs_; }
  MassWeight weight() const { return weight_; }

  /// M_k (weighted per `weight`), n_k x n_k.
  const SparseOperator& mass(int level) const { return mass_[level]; }
  /// D_k (weighted per `weight`).
  const Vector& lumped(int level) const { return lumped_[level]; }
  /// E_k: level k to the finest level, n_J x n_k.
  const SparseOperator& prolongation(int level) const { return prolongation_[level]; }
  /// Level k to level k+1 on interior dofs.
  const SparseOperator& level_prolongation(int level) const { return level_prolongation_[level]; }
  const Cholesky& mass_solver(int level) const { return mass_solver_[level]; }
  const GammaSchedule& schedule() const { return schedule_; }

 private:
  std::shared_ptr<const MeshHierarchy> hierarchy_;
  ProblemCoefficients coeffs_;
  MassWeight weight_;
  std::vector<FemSpace> spaces_;
  std::vector<SparseOperator> mass_;
  std::vector<Vector> lumped_;
  std::vector<SparseOperator> prolongation_;
  std::vector<SparseOperator> level_prolongation_;
  std::vector<Cholesky> mass_solver_;
  GammaSchedule schedule_;
};

enum class SbvpVariant { MassFinest, DiagFinest };

/// gamma_J M_J^-1 f + sum_{j<J} (gamma_j - gamma_{j+1}) E_j M_j^-1 E_j^T f.
Vector apply_bvp(const MultilevelContext& ctx, const Vector& f);
Vector apply_bvp(const MultilevelContext& ctx, const Vector& f, const GammaSchedule& schedule);

/// As apply_bvp with the coarse M_j^-1 replaced by D_j^-1; DiagFinest also
/// replaces the finest M_J^-1.
Vector apply_sbvp(const MultilevelContext& ctx, const Vector& f, SbvpVariant variant = SbvpVariant::MassFinest);
Vector apply_sbvp(const MultilevelContext& ctx, const Vector& f, SbvpVariant variant, const GammaSchedule& schedule);

/// Level operators eps A_k + C_k on interior dofs with Gauss-Seidel data and
/// an exact coarsest solve.
class MultigridHierarchy {
 public:
  explicit MultigridHierarchy(const MultilevelContext& ctx);

  int finest_level() const { return static_cast<int>(ops_.size()) - 1; }
  const SparseOperator& op(int level) const { return ops_[level]; }

  /// One V(1,1) cycle from a zero initial guess.
  Vector vcycle(const Vector& f) const;

 private:
  Vector cycle(int level, const Vector& f) const;
  void forward_gs(int level, const Vector& f, Vector& x) const;
  void backward_gs(int level, const Vector& f, Vector& x) const;

  std::vector<SparseOperator> ops_;
  std::vector<Vector> diag_;
  std::vector<SparseOperator> transfer_;  // level k -> k+1
  Cholesky coarse_;
};

Vector apply_mg_gs(const MultigridHierarchy& mg, const Vector& f);

enum class PreconditionerKind { BVP, sBVP, MG_GS, Exact, Identity };

/// SPD approximation of (eps A + C)^-1 on the finest interior dofs. Consumes
/// dual vectors, returns coefficient vectors.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual PreconditionerKind kind() const = 0;
  virtual int size() const = 0;
  virtual Vector apply(const Vector& f) const = 0;

  LinearMap as_map() const {
    return [this](const Vector& f) { return apply(f); };
  }
};

/// The context must outlive the returned object.
std::unique_ptr<Preconditioner> make_preconditioner(PreconditionerKind kind, const MultilevelContext& ctx,
                                                    SbvpVariant variant = SbvpVariant::MassFinest);

/// P = (eps A_J + C_J)^-1 by sparse Cholesky.
std::unique_ptr<Preconditioner> make_exact_preconditioner(const SparseOperator& a_opt);

/// Conjugate gradients on `op` with preconditioner `p`; stops on the
/// P-weighted residual.
Vector pcg_standard(const SparseOperator& op, const Preconditioner& p, const Vector& rhs, double tol,
                    SolveReport& report, int max_iter = 10000);

}  // namespace spls
