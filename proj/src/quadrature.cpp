#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fsidd/fem.hpp"

namespace fsidd {

namespace {

constexpr int kMaxDegree = 24;

std::vector<TriangleQuadPoint> radon7() {
  const double r15 = std::sqrt(15.0);
  const double a1 = (6.0 - r15) / 21.0;
  const double a2 = (6.0 + r15) / 21.0;
  const double w1 = (155.0 - r15) / 1200.0;
  const double w2 = (155.0 + r15) / 1200.0;
  // Weights are relative to the area; scale to the reference area 1/2.
  return {
      {1.0 / 3.0, 1.0 / 3.0, 0.5 * 9.0 / 40.0},
      {a1, a1, 0.5 * w1},
      {1.0 - 2.0 * a1, a1, 0.5 * w1},
      {a1, 1.0 - 2.0 * a1, 0.5 * w1},
      {a2, a2, 0.5 * w2},
      {1.0 - 2.0 * a2, a2, 0.5 * w2},
      {a2, 1.0 - 2.0 * a2, 0.5 * w2},
  };
}

// Collapsed tensor Gauss rule: xi = s, eta = t(1 - s), Jacobian (1 - s).
std::vector<TriangleQuadPoint> collapsed(int degree) {
  const int n = (degree + 3) / 2;
  const auto g = gauss_legendre(n);
  std::vector<TriangleQuadPoint> rule;
  rule.reserve(static_cast<std::size_t>(n * n));
  for (const auto& ps : g) {
    for (const auto& pt : g) {
      rule.push_back({ps.s, pt.s * (1.0 - ps.s), ps.weight * pt.weight * (1.0 - ps.s)});
    }
  }
  return rule;
}

std::vector<TriangleQuadPoint> make_triangle_rule(int degree) {
  if (degree <= 1) return {{1.0 / 3.0, 1.0 / 3.0, 0.5}};
  if (degree == 2) {
    return {{1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}};
  }
  if (degree <= 5) return radon7();
  return collapsed(degree);
}

}  // namespace

std::vector<LineQuadPoint> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  if (n == 1) return {{0.5, 1.0}};
  std::vector<LineQuadPoint> rule(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p_prev = 1.0, p = x;
      for (int k = 2; k <= n; ++k) {
        const double next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = next;
      }
      dp = n * (x * p - p_prev) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[i] = {0.5 * (1.0 - x), 0.5 * w};
    rule[n - 1 - i] = {0.5 * (1.0 + x), 0.5 * w};
  }
  return rule;
}

const std::vector<TriangleQuadPoint>& triangle_rule(int degree) {
  static const std::vector<std::vector<TriangleQuadPoint>> rules = [] {
    std::vector<std::vector<TriangleQuadPoint>> r;
    for (int d = 0; d <= kMaxDegree; ++d) r.push_back(make_triangle_rule(d));
    return r;
  }();
  if (degree < 0 || degree > kMaxDegree) {
    throw std::invalid_argument("triangle_rule: unsupported degree " + std::to_string(degree));
  }
  return rules[degree];
}

const std::vector<LineQuadPoint>& line_rule(int degree) {
  static const std::vector<std::vector<LineQuadPoint>> rules = [] {
    std::vector<std::vector<LineQuadPoint>> r;
    for (int d = 0; d <= kMaxDegree; ++d) r.push_back(gauss_legendre(d / 2 + 1));
    return r;
  }();
  if (degree < 0 || degree > kMaxDegree) {
    throw std::invalid_argument("line_rule: unsupported degree " + std::to_string(degree));
  }
  return rules[degree];
}

}  // namespace fsidd
