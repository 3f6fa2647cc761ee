#ifndef FRACLAP_KERNELS_HPP
#define FRACLAP_KERNELS_HPP

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

#include "fraclap/errors.hpp"
#include "fraclap/gauss.hpp"
#include "fraclap/geometry.hpp"
#include "fraclap/params.hpp"
#include "fraclap/special.hpp"
#include "fraclap/sphere.hpp"

namespace fraclap {

// Normalizations of the three ball kernels.  The checked flags stay false
// until verify_kernel_constants (potentials.hpp) has run the quadrature
// self-tests that pin them against each other.
struct KernelConstants {
  double pv_norm = 0.0;          // principal-value normalization of (-Delta)^s
  double poisson_norm = 0.0;     // boundary-to-interior kernel normalization
  double green_norm = 0.0;       // Green-function normalization
  double boundary_blowup = 0.0;  // scale of the boundary-singular homogeneous solution
  bool poisson_checked = false;
  bool dirichlet_checked = false;
};

namespace detail {

// 1e-12 times the diameter of the unit ball.
inline double coincide_tol() { return 2e-12; }

inline std::pair<int, std::uint64_t> ns_key(int n, double s) {
  std::uint64_t bits;
  std::memcpy(&bits, &s, sizeof bits);
  return {n, bits};
}

}  // namespace detail

// Ratio (1 - |x|^2)(1 - |y|^2) / |x - y|^2 steering the Green kernel profile.
inline double gap_ratio(const Point& x, const Point& y) {
  const double xs = x.norm_sq(), ys = y.norm_sq();
  if (xs >= 1.0 || ys >= 1.0)
    throw OutOfDomainError("gap_ratio requires both points strictly inside the unit ball");
  const double d2 = distance_sq(x, y);
  if (d2 < detail::coincide_tol() * detail::coincide_tol())
    throw CoincidentPointsError("gap_ratio at coincident points");
  return (1.0 - xs) * (1.0 - ys) / d2;
}

namespace detail {

// Reference evaluation of int_0^rho t^{s-1} (1+t)^{-n/2} dt.
// The substitution z = t^s removes the endpoint singularity; what remains of
// it in higher derivatives is absorbed by geometric panel grading.
inline double ikint_reference(double rho, int n, double s) {
  if (rho <= 0.0) return 0.0;
  const double nh = 0.5 * n;
  if (std::isinf(rho)) return beta_fn(s, nh - s);
  const double cap = std::min(rho, 2.0);
  auto head = [&](double z) { return std::pow(1.0 + std::pow(z, 1.0 / s), -nh); };
  GradedRule gr;
  gr.points = 24;
  gr.levels_lo = 40;
  gr.closure_lo = true;
  double val = integrate_graded(head, 0.0, std::pow(cap, s), gr).value / s;
  if (rho > 2.0) {
    // Log substitution: int_2^rho = int e^{s w} (1 + e^w)^{-n/2} dw.
    auto tailf = [&](double w) { return std::exp(s * w) * std::pow(1.0 + std::exp(w), -nh); };
    const double wl = std::log(2.0), wh = std::log(rho);
    const int panels = std::max(2, static_cast<int>(std::ceil(wh - wl)));
    const GaussRule& g = gauss_legendre(20);
    for (int j = 0; j < panels; ++j) {
      const double a = wl + (wh - wl) * j / panels;
      const double b = wl + (wh - wl) * (j + 1) / panels;
      val += panel_integral(tailf, a, b, g);
    }
  }
  return val;
}

inline const ChebyshevLogTable& ikint_table(int n, double s) {
  static std::map<std::pair<int, std::uint64_t>, ChebyshevLogTable> cache;
  static std::mutex mu;
  const auto key = ns_key(n, s);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, ChebyshevLogTable([n, s](double rho) { return ikint_reference(rho, n, s); },
                                              1e-6, 1e6, 32, 24))
             .first;
  }
  return it->second;
}

}  // namespace detail

// Incomplete radial profile of the Green kernel: int_0^rho t^{s-1}(1+t)^{-n/2} dt.
// Monotone in rho; rho = +inf gives the complete value Beta(s, n/2 - s).
// Series expansions cover the far ends, a cached log-Chebyshev table the middle.
inline double incomplete_kernel_integral(double rho_val, const ProblemParams& params) {
  const int n = params.n;
  const double s = params.s;
  if (std::isnan(rho_val)) throw NonFiniteError("incomplete_kernel_integral of NaN");
  if (rho_val < 0.0) throw OutOfDomainError("incomplete_kernel_integral requires rho >= 0");
  if (rho_val == 0.0) return 0.0;
  const double nh = 0.5 * n;
  if (rho_val < 1e-6) {
    return std::pow(rho_val, s) *
           (1.0 / s - nh * rho_val / (s + 1.0) + 0.5 * nh * (nh + 1.0) * rho_val * rho_val / (s + 2.0) -
            nh * (nh + 1.0) * (nh + 2.0) / 6.0 * rho_val * rho_val * rho_val / (s + 3.0));
  }
  if (rho_val > 1e6) {
    double tail = 0.0, ck = 1.0;
    for (int k = 0; k < 4; ++k) {
      tail += (k % 2 ? -ck : ck) * std::pow(rho_val, s - nh - k) / (nh + k - s);
      ck *= (nh + k) / (k + 1);
    }
    return beta_fn(s, nh - s) - tail;
  }
  return detail::ikint_table(n, s).eval(rho_val);
}

// Kernel normalizations, cached per (n, s).  The boundary blowup scale is the
// surface integral of |x - y|^{-n} over the unit sphere at x = 0, evaluated
// by quadrature rather than assumed.
inline const KernelConstants& kernel_constants(const ProblemParams& params) {
  static std::map<std::pair<int, std::uint64_t>, KernelConstants> cache;
  static std::mutex mu;
  const auto key = detail::ns_key(params.n, params.s);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  params.validate();
  const int n = params.n;
  const double s = params.s;
  KernelConstants k;
  const double pin = std::pow(M_PI, 0.5 * n);
  // |Gamma(-s)| = Gamma(1-s)/s for 0 < s < 1.
  k.pv_norm = std::pow(4.0, s) * std::tgamma(0.5 * n + s) * s / (pin * std::tgamma(1.0 - s));
  k.poisson_norm = std::tgamma(0.5 * n) * std::sin(M_PI * s) / (pin * M_PI);
  const double gs = std::tgamma(s);
  k.green_norm = std::tgamma(0.5 * n) / (pin * std::pow(4.0, s) * gs * gs);
  const SphereRule& sph = sphere_rule(n, 64);
  double surf = 0.0;
  for (std::size_t i = 0; i < sph.size(); ++i)
    surf += sph.w[i] * std::pow(sph.dirs[i].norm_sq(), -0.5 * n);
  k.boundary_blowup = k.poisson_norm * surf;
  return cache.emplace(key, k).first->second;
}

namespace detail {

// Write access for the normalization self-tests only.
inline KernelConstants& kernel_constants_mutable(const ProblemParams& params) {
  return const_cast<KernelConstants&>(kernel_constants(params));
}

}  // namespace detail

// Boundary-to-interior kernel for |x| < 1 < |y|.
inline double poisson_kernel(const Point& x, const Point& y, const ProblemParams& params) {
  const double xs = x.norm_sq(), ys = y.norm_sq();
  if (!(xs < 1.0 && ys > 1.0))
    throw OutOfDomainError("poisson_kernel requires |x| < 1 < |y|");
  const double d2 = distance_sq(x, y);
  const double c = kernel_constants(params).poisson_norm;
  return c * std::pow((1.0 - xs) / (ys - 1.0), params.s) * std::pow(d2, -0.5 * params.n);
}

/// Green function of the ball: kappa |x-y|^{2s-n} * incomplete profile at gap_ratio.
inline double green_function(const Point& x, const Point& y, const ProblemParams& params) {
  const double rho = gap_ratio(x, y);  // also validates the domain
  const double d2 = distance_sq(x, y);
  const double kappa = kernel_constants(params).green_norm;
  return kappa * std::pow(d2, 0.5 * (2.0 * params.s - params.n)) *
         incomplete_kernel_integral(rho, params);
}

// Gradient of the Green function in its first argument.  Composed of the
// derivative through |x - y| (factor I1, which includes the profile term)
// and the derivative through the (1 - |x|^2) factor of gap_ratio (factor I2).
inline Point green_gradient(const Point& x, const Point& y, const ProblemParams& params) {
  const double rho = gap_ratio(x, y);
  const int n = params.n;
  const double s = params.s;
  const double d2 = distance_sq(x, y);
  const double xs = x.norm_sq();
  const double kappa = kernel_constants(params).green_norm;
  const double profile = incomplete_kernel_integral(rho, params);
  const double edge = std::pow(rho, s) * std::pow(1.0 + rho, -0.5 * n);
  const double I1 = (n - 2.0 * s) * profile + 2.0 * edge;
  const double I2 = edge;
  const double c1 = kappa * std::pow(d2, -0.5 * (n - 2.0 * s + 2.0)) * I1;
  const double c2 = kappa * 2.0 / (1.0 - xs) * std::pow(d2, -0.5 * (n - 2.0 * s)) * I2;
  Point grad(x.dim());
  for (int i = 0; i < x.dim(); ++i) grad[i] = c1 * (y[i] - x[i]) - c2 * x[i];
  return grad;
}

}  // namespace fraclap

#endif  // FRACLAP_KERNELS_HPP
