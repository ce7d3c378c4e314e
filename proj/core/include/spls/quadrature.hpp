#pragma once

#include <array>
#include <vector>

namespace spls {

/// Quadrature rule on the reference triangle in barycentric coordinates.
/// Weights sum to 1, so a rule integrates g over a triangle T as
/// |T| * sum_q w_q g(x_q).
struct TriangleRule {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Edge-midpoint rule, exact for degree 2.
TriangleRule midpoint_rule();

/// 12-point symmetric rule (Dunavant), exact for degree 6, positive weights.
/// Default for mass, load and error integrals.
TriangleRule degree6_rule();

/// Composite rule: splits the triangle `levels` times into 4 congruent
/// subtriangles and applies `base` on each piece.
TriangleRule subdivided(const TriangleRule& base, int levels);

}  // namespace spls
