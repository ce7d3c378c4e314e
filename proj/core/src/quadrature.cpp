#include "spls/quadrature.hpp"

#include <stdexcept>

namespace spls {

namespace {

void add_s21(TriangleRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.barycentric.push_back({a, a, b});
  r.barycentric.push_back({a, b, a});
  r.barycentric.push_back({b, a, a});
  for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

void add_s111(TriangleRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  r.barycentric.push_back({a, b, c});
  r.barycentric.push_back({a, c, b});
  r.barycentric.push_back({b, a, c});
  r.barycentric.push_back({b, c, a});
  r.barycentric.push_back({c, a, b});
  r.barycentric.push_back({c, b, a});
  for (int i = 0; i < 6; ++i) r.weights.push_back(w);
}

}  // namespace

TriangleRule midpoint_rule() {
  TriangleRule r;
  r.degree = 2;
  r.barycentric = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
  r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return r;
}

TriangleRule degree6_rule() {
  TriangleRule r;
  r.degree = 6;
  add_s21(r, 0.249286745170910, 0.116786275726379);
  add_s21(r, 0.063089014491502, 0.050844906370207);
  add_s111(r, 0.053145049844817, 0.310352451033784, 0.082851075618374);
  return r;
}

TriangleRule subdivided(const TriangleRule& base, int levels) {
  if (levels < 0) throw std::invalid_argument("subdivided: levels must be non-negative");
  using Bary = std::array<double, 3>;
  std::vector<std::array<Bary, 3>> pieces{{Bary{1, 0, 0}, Bary{0, 1, 0}, Bary{0, 0, 1}}};
  auto mid = [](const Bary& a, const Bary& b) {
    return Bary{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
  };
  for (int l = 0; l < levels; ++l) {
    std::vector<std::array<Bary, 3>> next;
    next.reserve(pieces.size() * 4);
    for (const auto& [a, b, c] : pieces) {
      const Bary ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      next.push_back({a, ab, ca});
      next.push_back({ab, b, bc});
      next.push_back({ca, bc, c});
      next.push_back({ab, bc, ca});
    }
    pieces = std::move(next);
  }

  TriangleRule r;
  r.degree = base.degree;
  const double scale = 1.0 / static_cast<double>(pieces.size());
  for (const auto& [a, b, c] : pieces) {
    for (int q = 0; q < base.size(); ++q) {
      const auto& l = base.barycentric[q];
      Bary p{};
      for (int k = 0; k < 3; ++k) p[k] = l[0] * a[k] + l[1] * b[k] + l[2] * c[k];
      r.barycentric.push_back(p);
      r.weights.push_back(base.weights[q] * scale);
    }
  }
  return r;
}

}  // namespace spls
