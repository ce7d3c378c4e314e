#pragma once

#include <functional>
#include <vector>

#include "spls/assembly.hpp"
#include "spls/mesh.hpp"
#include "spls/spls.hpp"

namespace spls {

struct ExactValues {
  double u = 0.0;
  double du_dx = 0.0;
  double du_dy = 0.0;
  double f = 0.0;
};

/// u = x(1-x) g(y) + y(1-y) g(x) with g(t) = (1 - e^{-t/sqrt eps})(1 - e^{(t-1)/sqrt eps}),
/// its gradient, and f = -eps Lap u + c u for c = 2(1 + x^2 + y^2).
ExactValues evaluate_exact(double x, double y, double eps);

/// Exact (u, grad u) sampled at a point.
using ExactSampler = std::function<ExactValues(double, double)>;

struct ManufacturedProblem {
  double eps = 1.0;
  ProblemCoefficients coeffs;

  explicit ManufacturedProblem(double eps);

  ExactSampler sampler() const;
  ScalarField u() const;
  ScalarField f() const;
};

/// ( ||c^1/2 (u - q)||^2 + eps ||grad u - a||^2 )^1/2 for p = (q, eps a),
/// which is the Q-norm distance from (u, eps grad u) with eps cancelled.
double q_norm_error(const Mesh2D& mesh, const ExactSampler& exact, const FluxPair& p, double eps,
                    const ScalarField& c, const TriangleRule& rule = degree6_rule());

/// ( ||u - q||^2 + eps^1/2 ||grad u - a||^2 )^1/2 for p = (q, eps a).
double balanced_error(const Mesh2D& mesh, const ExactSampler& exact, const FluxPair& p, double eps,
                      const TriangleRule& rule = degree6_rule());

/// Orders between consecutive levels first_level, first_level+1, ... with
/// N_k = 2^(k+1). Uniform: log2(e_{k-1}/e_k). Shishkin: rate in the variable
/// N^-1 ln N. Returns errors.size() - 1 values. Throws std::invalid_argument on
/// non-positive errors.
std::vector<double> convergence_order(const std::vector<double>& errors, MeshFamily family, int first_level = 0);

}  // namespace spls
