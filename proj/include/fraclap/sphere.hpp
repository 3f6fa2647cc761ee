#ifndef FRACLAP_SPHERE_HPP
#define FRACLAP_SPHERE_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fraclap/gauss.hpp"
#include "fraclap/geometry.hpp"
#include "fraclap/special.hpp"

namespace fraclap {

// Quadrature on the unit sphere S^{n-1}.  Weights sum to the surface area.
// Directions come in antipodal pairs: dirs[antipode(i)] == -dirs[i].
struct SphereRule {
  std::vector<Point> dirs;
  std::vector<double> w;
  int half = 0;  // dirs[i + half] == -dirs[i] for i < half

  int antipode(int i) const { return i < half ? i + half : i - half; }
  int size() const { return static_cast<int>(dirs.size()); }
};

// n == 2: equal-angle trapezoid (spectral for periodic integrands).
// n == 3: Gauss-Legendre in the polar cosine times equal-angle azimuth.
// n >= 4: seeded Monte Carlo directions.
inline SphereRule sphere_rule(int n, int angular_points, std::uint64_t seed = 0) {
  SphereRule rule;
  if (n == 2) {
    int a = std::max(8, angular_points);
    if (a % 2) ++a;
    rule.half = a / 2;
    const double w = 2.0 * M_PI / a;
    rule.dirs.reserve(a);
    for (int i = 0; i < a; ++i) {
      const double phi = 2.0 * M_PI * i / a;
      // First half covers [0, pi); second half appended as exact negations.
      if (i < rule.half) {
        rule.dirs.push_back(Point{std::cos(phi), std::sin(phi)});
      } else {
        const Point& d = rule.dirs[i - rule.half];
        rule.dirs.push_back(Point{-d[0], -d[1]});
      }
      rule.w.push_back(w);
    }
    return rule;
  }
  if (n == 3) {
    int a = std::max(8, angular_points);
    if (a % 2) ++a;
    const int m = std::max(4, a / 2);
    const GaussRule& g = gauss_legendre(m);
    const double wphi = 2.0 * M_PI / a;
    const int count = m * a;
    rule.half = count / 2;
    rule.dirs.resize(count, Point(3));
    rule.w.resize(count);
    // Pair (mu, phi) with (-mu, phi + pi) so antipodes are exact.
    int idx = 0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < a / 2; ++j) {
        const double mu = g.x[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        const double phi = 2.0 * M_PI * j / a;
        Point d{st * std::cos(phi), st * std::sin(phi), mu};
        rule.dirs[idx] = d;
        rule.w[idx] = g.w[i] * wphi;
        rule.dirs[rule.half + idx] = Point{-d[0], -d[1], -d[2]};
        rule.w[rule.half + idx] = g.w[i] * wphi;
        ++idx;
      }
    }
    return rule;
  }
  // Monte Carlo directions, antisymmetrized.
  const int target = std::max(128, angular_points * angular_points / 2);
  rule.half = target;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss01(0.0, 1.0);
  const double w = surface_area(n) / (2.0 * target);
  rule.dirs.reserve(2 * target);
  rule.w.assign(2 * target, w);
  for (int i = 0; i < target; ++i) {
    Point d(n);
    double nrm = 0.0;
    while (nrm < 1e-12) {
      for (int k = 0; k < n; ++k) d[k] = gauss01(rng);
      nrm = d.norm();
    }
    d *= 1.0 / nrm;
    rule.dirs.push_back(d);
  }
  for (int i = 0; i < target; ++i) rule.dirs.push_back(-1.0 * rule.dirs[i]);
  return rule;
}

}  // namespace fraclap

#endif  // FRACLAP_SPHERE_HPP
