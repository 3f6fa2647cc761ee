#ifndef FRACLAP_PROPERTIES_HPP
#define FRACLAP_PROPERTIES_HPP

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/field.hpp"
#include "fraclap/geometry.hpp"
#include "fraclap/kernels.hpp"
#include "fraclap/params.hpp"
#include "fraclap/potentials.hpp"
#include "fraclap/special.hpp"
#include "fraclap/weighted_norms.hpp"

namespace fraclap {

// One randomized or deterministic property check: the claim either holds on
// every sample or the first counterexample is dumped verbatim.
struct PropertyResult {
  std::string name;
  bool pass = false;
  long samples = 0;
  long violations = 0;
  double worst = 0.0;  // property-specific margin, documented per check
  std::string detail;
};

namespace detail {

inline Point random_in_ball(std::mt19937_64& rng, int n, double radius = 1.0) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Point p(n);
  for (;;) {
    double nn = 0.0;
    for (int i = 0; i < n; ++i) {
      p[i] = unif(rng);
      nn += p[i] * p[i];
    }
    if (nn < 1.0) {
      for (int i = 0; i < n; ++i) p[i] *= radius;
      return p;
    }
  }
}

inline std::string dump_pair(const Point& x, const Point& y) {
  std::ostringstream os;
  os << "x = (";
  for (int i = 0; i < x.dim(); ++i) os << (i ? ", " : "") << x[i];
  os << "), y = (";
  for (int i = 0; i < y.dim(); ++i) os << (i ? ", " : "") << y[i];
  os << ")";
  return os.str();
}

}  // namespace detail

// Gap-comparability estimate: min((gap(x) gap(y)/|x-y|^2)^beta, 1) stays
// below 4 (gap(y)/gap(x))^alpha whenever |alpha| <= beta.  `worst` is the
// largest lhs/rhs ratio seen (must stay <= 1).
inline PropertyResult check_gap_comparability(long samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  PropertyResult res;
  res.name = "gap-comparability";
  for (long k = 0; k < samples; ++k) {
    const int n = (k % 2 == 0) ? 2 : 3;
    const Point u = detail::random_in_ball(rng, n);
    const Point v = detail::random_in_ball(rng, n);
    const double d2 = distance_sq(u, v);
    if (d2 < 1e-30) continue;
    const double beta = 0.01 + 0.98 * unif(rng);
    const double alpha = beta * (2.0 * unif(rng) - 1.0);
    const double gx = 1.0 - u.norm(), gy = 1.0 - v.norm();
    const double lhs = std::min(std::pow(gx * gy / d2, beta), 1.0);
    const double rhs = 4.0 * std::pow(gy / gx, alpha);
    ++res.samples;
    res.worst = std::max(res.worst, lhs / rhs);
    if (lhs > rhs) {
      if (res.violations++ == 0)
        res.detail = detail::dump_pair(u, v) + ", beta = " + std::to_string(beta) +
                     ", alpha = " + std::to_string(alpha);
    }
  }
  res.pass = res.violations == 0;
  return res;
}

// Interior kernel upper bound with its assembled constant
// kappa max(4^s/s, B(s, n/2 - s)): zero violations expected.  `worst` is the
// largest kernel-to-bound ratio.
inline PropertyResult check_kernel_upper_bound(const ProblemParams& params, long samples,
                                               std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  PropertyResult res;
  res.name = "interior-kernel-upper-bound(n=" + std::to_string(params.n) +
             ",s=" + std::to_string(params.s) + ")";
  const double kappa = kernel_constants(params).green_norm;
  const double complete = beta_fn(params.s, 0.5 * params.n - params.s);
  const double upper = kappa * std::max(std::pow(4.0, params.s) / params.s, complete);
  for (long k = 0; k < samples; ++k) {
    const Point u = detail::random_in_ball(rng, params.n);
    const Point v = detail::random_in_ball(rng, params.n);
    const double d = distance(u, v);
    if (d < 1e-8) continue;
    const double m = (1.0 - u.norm()) * (1.0 - v.norm()) / (d * d);
    const double bound = upper * std::pow(d, 2.0 * params.s - params.n) *
                         std::min(std::pow(m, params.s), 1.0);
    const double g = green_function(u, v, params);
    ++res.samples;
    res.worst = std::max(res.worst, g / bound);
    if (g > bound) {
      if (res.violations++ == 0) res.detail = detail::dump_pair(u, v);
    }
  }
  res.pass = res.violations == 0;
  return res;
}

// Kernel gradient against central differences at nonsingular pairs.  `worst`
// is the largest relative component error; pass below `tol`.
inline PropertyResult check_gradient_consistency(const ProblemParams& params, long pairs,
                                                 std::uint64_t seed, double tol = 1e-4) {
  params.validate();
  std::mt19937_64 rng(seed);
  PropertyResult res;
  res.name = "kernel-gradient-vs-differences(n=" + std::to_string(params.n) +
             ",s=" + std::to_string(params.s) + ")";
  const double h = 1e-5;
  while (res.samples < pairs) {
    const Point u = detail::random_in_ball(rng, params.n, 0.9);
    const Point v = detail::random_in_ball(rng, params.n, 0.9);
    if (distance(u, v) < 0.05) continue;
    ++res.samples;
    const Point grad = green_gradient(u, v, params);
    bool bad = false;
    for (int i = 0; i < params.n; ++i) {
      Point up = u, dn = u;
      up[i] += h;
      dn[i] -= h;
      const double fd =
          (green_function(up, v, params) - green_function(dn, v, params)) / (2.0 * h);
      const double err =
          std::abs(grad[i] - fd) / std::max(std::abs(fd), 1e-9 / tol);
      res.worst = std::max(res.worst, err);
      bad = bad || err > tol;
    }
    if (bad && res.violations++ == 0) res.detail = detail::dump_pair(u, v);
  }
  res.pass = res.violations == 0;
  return res;
}

// Weighted gradient bound: gap(x)^r |grad_x G| <= C gap(y)^r |x-y|^{-(n-2s+1)}
// with the assembled constant.  `worst` is the largest lhs/rhs ratio.
inline PropertyResult check_weighted_gradient_bound(const ProblemParams& params, double r,
                                                    long samples, std::uint64_t seed) {
  params.validate();
  if (!(2.0 * params.s > 1.0))
    throw ParamError("weighted gradient bound needs order 2s > 1");
  std::mt19937_64 rng(seed);
  PropertyResult res;
  res.name = "weighted-gradient-bound(n=" + std::to_string(params.n) +
             ",s=" + std::to_string(params.s) + ",r=" + std::to_string(r) + ")";
  const double kappa = kernel_constants(params).green_norm;
  const double complete = beta_fn(params.s, 0.5 * params.n - params.s);
  const double c1 =
      4.0 * ((params.n - 2.0 * params.s) * std::max(1.0 / params.s, complete) + 2.0);
  const double c3 = kappa * (4.0 * c1 + 16.0 * 4.0);
  for (long k = 0; k < samples; ++k) {
    const Point u = detail::random_in_ball(rng, params.n);
    const Point v = detail::random_in_ball(rng, params.n);
    const double d = distance(u, v);
    if (d < 1e-8) continue;
    const double gx = 1.0 - u.norm(), gy = 1.0 - v.norm();
    const double lhs = green_gradient(u, v, params).norm() * std::pow(gx, r);
    const double rhs =
        c3 * std::pow(gy, r) * std::pow(d, -(params.n - 2.0 * params.s + 1.0));
    ++res.samples;
    res.worst = std::max(res.worst, lhs / rhs);
    if (lhs > rhs) {
      if (res.violations++ == 0) res.detail = detail::dump_pair(u, v);
    }
  }
  res.pass = res.violations == 0;
  return res;
}

// Kernel normalization cross-checks (constant boundary datum and the
// operator-inverts-potential identity).  `worst` is the larger deviation.
inline PropertyResult check_normalizations(const ProblemParams& params,
                                           const QuadratureSpec& spec) {
  PropertyResult res;
  res.name = "kernel-normalizations(n=" + std::to_string(params.n) +
             ",s=" + std::to_string(params.s) + ")";
  const NormalizationReport rep = verify_kernel_constants(params, spec);
  res.samples = 2;
  res.worst = std::max(rep.poisson_deviation, rep.dirichlet_deviation);
  res.pass = rep.poisson_ok && rep.dirichlet_ok;
  if (!res.pass) {
    res.violations = (rep.poisson_ok ? 0 : 1) + (rep.dirichlet_ok ? 0 : 1);
    res.detail = "poisson deviation " + std::to_string(rep.poisson_deviation) +
                 ", dirichlet deviation " + std::to_string(rep.dirichlet_deviation);
  }
  return res;
}

// Mollifier identities: constants reproduced to 1e-10, affine fields to
// 1e-8, supports fattened by exactly the bump radius.  `worst` is the
// largest reproduction error.
inline PropertyResult check_mollifier_identities(const ProblemParams& params) {
  PropertyResult res;
  res.name = "mollifier-identities(n=" + std::to_string(params.n) + ")";
  const int n = params.n;

  double worst_const = 0.0;
  for (double c : {1.0, -2.5, 0.3}) {
    const double got = mollify(constant_field(c, n), 0.3, params)(Point(n));
    worst_const = std::max(worst_const, std::abs(got - c));
  }

  ScalarField aff{[n](const Point& x) {
                    double v = 0.3;
                    for (int i = 0; i < n; ++i) v += (0.7 - 0.3 * i) * x[i];
                    return v;
                  },
                  n, Support::global, Smoothness::smooth};
  const ScalarField smoothed = mollify(aff, 0.25, params);
  double worst_aff = 0.0;
  for (double rho : {0.0, 0.45, -0.8}) {
    Point x(n);
    x[0] = rho;
    worst_aff = std::max(worst_aff, std::abs(smoothed(x) - aff(x)));
  }

  ScalarField ball{[](const Point& x) { return 1.0 - x.norm_sq(); }, n, Support::ball_only,
                   Smoothness::continuous};
  Point far(n), near(n);
  far[0] = 1.3;
  near[0] = 1.2;
  const ScalarField fat = mollify(ball, 0.25, params);
  const bool support_ok = fat(far) == 0.0 && fat(near) > 0.0;

  res.samples = 3 + 3 + 2;
  res.worst = std::max(worst_const, worst_aff);
  res.pass = worst_const <= 1e-10 && worst_aff <= 1e-8 && support_ok;
  if (!res.pass) {
    res.violations = 1;
    res.detail = "constant error " + std::to_string(worst_const) + ", affine error " +
                 std::to_string(worst_aff) + (support_ok ? "" : ", support leak");
  }
  return res;
}

// Standard suite at the given seed: the randomized inequality checks, the
// normalization cross-checks, and the mollifier identities.
inline std::vector<PropertyResult> run_property_suite(const QuadratureSpec& spec,
                                                      std::uint64_t seed,
                                                      long inequality_samples = 20000,
                                                      long bound_samples = 10000) {
  std::vector<PropertyResult> out;
  out.push_back(check_gap_comparability(inequality_samples, seed));
  const ProblemParams cases[] = {{.n = 2, .s = 0.75}, {.n = 3, .s = 0.6}, {.n = 2, .s = 0.4}};
  for (const auto& p : cases) out.push_back(check_kernel_upper_bound(p, bound_samples, seed + 1));
  out.push_back(check_gradient_consistency({.n = 2, .s = 0.75}, 100, seed + 2));
  out.push_back(check_weighted_gradient_bound({.n = 2, .s = 0.75}, 0.5, bound_samples, seed + 3));
  out.push_back(check_normalizations({.n = 2, .s = 0.75}, spec));
  out.push_back(check_mollifier_identities({.n = 2, .s = 0.75}));
  return out;
}

}  // namespace fraclap

#endif  // FRACLAP_PROPERTIES_HPP
