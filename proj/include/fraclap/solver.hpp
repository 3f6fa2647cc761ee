#ifndef FRACLAP_SOLVER_HPP
#define FRACLAP_SOLVER_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/field.hpp"
#include "fraclap/gauss.hpp"
#include "fraclap/geometry.hpp"
#include "fraclap/params.hpp"
#include "fraclap/potentials.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/sphere.hpp"
#include "fraclap/weighted_norms.hpp"

namespace fraclap {

// Knobs of the fixed-point solver.  Node counts set the collocation grid
// (rings times directions plus the center); tol is measured in the discrete
// weighted node norm of one iteration's increment.
struct SolverSpec {
  int radial_levels = 8;
  int angular_points = 16;
  int max_picard_iters = 30;
  double tol = 1e-8;
  int tau_steps = 4;

  void validate() const {
    if (radial_levels < 2) throw ParamError("solver needs at least 2 collocation rings");
    if (angular_points < 4) throw ParamError("solver needs at least 4 directions per ring");
    if (max_picard_iters < 1) throw ParamError("max_picard_iters must be >= 1");
    if (!(tol > 0.0)) throw ParamError("solver tolerance must be positive");
    if (tau_steps < 1) throw ParamError("tau_steps must be >= 1");
  }
};

// Rings at radii sqrt(j/(R+1)) share one directional rule; spacing tightens
// toward the boundary while the outermost ring keeps enough clearance for
// the potential quadratures.
inline std::vector<Point> collocation_nodes(const ProblemParams& params, const SolverSpec& spec) {
  params.validate();
  spec.validate();
  const int n = params.n;
  std::vector<Point> nodes;
  nodes.emplace_back(n);
  const SphereRule sph = sphere_rule(n, spec.angular_points);
  for (int j = 1; j <= spec.radial_levels; ++j) {
    const double rho = std::sqrt(static_cast<double>(j) / (spec.radial_levels + 1));
    for (int d = 0; d < sph.size(); ++d) {
      Point p(n);
      for (int i = 0; i < n; ++i) p[i] = rho * sph.dirs[d][i];
      nodes.push_back(p);
    }
  }
  return nodes;
}

// Meshfree interpolant of node values: a cubic polyharmonic expansion with
// an affine tail fitted to the reduced values u_i / (1-|x_i|^2)^s, then
// multiplied back by (1-|x|^2)^s.  The mask bakes in both the zero exterior
// extension and the boundary profile class of solutions, so the interpolant
// is honest where the equation forces u to degenerate.
class NodeInterpolant {
 public:
  NodeInterpolant() = default;

  NodeInterpolant(std::vector<Point> nodes, const std::vector<double>& values,
                  const ProblemParams& params)
      : nodes_(std::move(nodes)), s_(params.s), n_(params.n) {
    params.validate();
    const int N = static_cast<int>(nodes_.size());
    if (N < n_ + 2) throw ParamError("interpolation needs more nodes than the affine tail");
    if (values.size() != nodes_.size())
      throw DimensionMismatchError("node and value counts disagree");
    const int M = N + 1 + n_;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(M);
    for (int i = 0; i < N; ++i) {
      const double g = 1.0 - nodes_[i].norm_sq();
      if (!(g > 0.0)) throw OutOfDomainError("collocation nodes must lie strictly inside");
      if (!std::isfinite(values[i])) throw NonFiniteError("node value is not finite");
      rhs(i) = values[i] * std::pow(g, -s_);
      for (int j = 0; j < N; ++j) {
        const double d = distance(nodes_[i], nodes_[j]);
        A(i, j) = d * d * d;
      }
      A(i, N) = 1.0;
      A(N, i) = 1.0;
      for (int k = 0; k < n_; ++k) {
        A(i, N + 1 + k) = nodes_[i][k];
        A(N + 1 + k, i) = nodes_[i][k];
      }
    }
    coef_ = Eigen::FullPivLU<Eigen::MatrixXd>(A).solve(rhs);
    if (!coef_.allFinite()) throw NonFiniteError("interpolation system is singular");
  }

  // The fitted reduced function (no boundary mask).
  double reduced(const Point& x) const {
    const int N = static_cast<int>(nodes_.size());
    double acc = coef_(N);
    for (int k = 0; k < n_; ++k) acc += coef_(N + 1 + k) * x[k];
    for (int i = 0; i < N; ++i) {
      const double d = distance(x, nodes_[i]);
      acc += coef_(i) * d * d * d;
    }
    return acc;
  }

  double operator()(const Point& x) const {
    const double g = 1.0 - x.norm_sq();
    if (!(g > 0.0)) return 0.0;
    return std::pow(g, s_) * reduced(x);
  }

  Point gradient(const Point& x) const {
    Point out(n_);
    const double g = 1.0 - x.norm_sq();
    if (!(g > 0.0)) return out;
    const int N = static_cast<int>(nodes_.size());
    Point dq(n_);
    for (int k = 0; k < n_; ++k) dq[k] = coef_(N + 1 + k);
    for (int i = 0; i < N; ++i) {
      const double d = distance(x, nodes_[i]);
      for (int k = 0; k < n_; ++k) dq[k] += coef_(i) * 3.0 * d * (x[k] - nodes_[i][k]);
    }
    const double gs = std::pow(g, s_);
    const double edge = s_ * std::pow(g, s_ - 1.0);
    const double q = reduced(x);
    for (int k = 0; k < n_; ++k) out[k] = gs * dq[k] - 2.0 * x[k] * edge * q;
    return out;
  }

  ScalarField field() const {
    return {[itp = *this](const Point& x) { return itp(x); }, n_, Support::ball_only,
            Smoothness::continuous};
  }

  int dim() const { return n_; }

 private:
  std::vector<Point> nodes_;
  Eigen::VectorXd coef_;
  double s_ = 0.5;
  int n_ = 0;
};

// Drift and zero-order coefficients with their reported size.  Lambda is the
// node supremum of |b| + |c|, filled in by the solver.
struct CoefficientBundle {
  VectorField b;
  ScalarField c;
  double Lambda = 0.0;
};

inline CoefficientBundle zero_coefficients(int dim) {
  return {zero_vector_field(dim), constant_field(0.0, dim), 0.0};
}

struct DiscreteSolution {
  std::vector<Point> nodes;
  std::vector<double> values;
  std::vector<Point> gradients;  // filled only when the order allows, 2s > 1
  ProblemParams params;
  SolverSpec spec_used;
  std::string f_desc, b_desc, c_desc;  // provenance, filled by config layers
  bool converged = false;
  int iterations_used = 0;
  std::vector<double> tau_path;
  double lambda_bound = 0.0;
  double final_increment = 0.0;
};

namespace detail {

// Discrete weighted node norm: mean-power over nodes of gap^r |v|, node max
// for the sup variant.
inline double node_norm(const std::vector<Point>& nodes, const std::vector<double>& v, double p,
                        double r) {
  const std::size_t N = nodes.size();
  if (std::isinf(p)) {
    double best = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      best = std::max(best, std::pow(boundary_gap(nodes[i]), r) * std::abs(v[i]));
    return best;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    acc += std::pow(std::pow(boundary_gap(nodes[i]), r) * std::abs(v[i]), p);
  return std::pow(acc / static_cast<double>(N), 1.0 / p);
}

inline bool has_drift(const CoefficientBundle& coeffs) {
  return !coeffs.b.identically_zero_hint;
}

// Right-hand side of the anchored fixed-point map: f - tau (b . grad u + c u)
// built from the interpolated current iterate.
inline ScalarField picard_rhs(const NodeInterpolant& itp, const ScalarField& f,
                              const CoefficientBundle& coeffs, double tau, int n) {
  const bool drift = has_drift(coeffs);
  return {[itp, f, coeffs, tau, drift](const Point& y) {
            double v = f(y);
            if (tau != 0.0) {
              double load = coeffs.c(y) * itp(y);
              if (drift) load += dot(coeffs.b(y), itp.gradient(y));
              v -= tau * load;
            }
            return v;
          },
          n, Support::ball_only, Smoothness::unknown};
}

}  // namespace detail

// One application of the anchored map T u = G * (f - tau (b . grad u + c u)).
// Fixed points solve the order-2s equation with coefficient loading tau.
// Gradients of the image are computed alongside when the order allows (and
// `with_gradients` is left on); the iteration itself only consumes values.
inline DiscreteSolution picard_step(const DiscreteSolution& cur, const ScalarField& f,
                                    const CoefficientBundle& coeffs, double tau,
                                    const ProblemParams& params, const QuadratureSpec& spec,
                                    bool with_gradients = true) {
  params.validate();
  spec.validate();
  const bool drift = detail::has_drift(coeffs);
  if (drift && tau != 0.0) params.validate_for_solver(true);
  if (!(tau >= 0.0) || tau > 1.0) throw ParamError("coefficient loading tau must be in [0, 1]");
  if (cur.nodes.empty() || cur.nodes.size() != cur.values.size())
    throw DimensionMismatchError("current iterate has no usable node values");

  const NodeInterpolant itp(cur.nodes, cur.values, params);
  const ScalarField rhs = detail::picard_rhs(itp, f, coeffs, tau, params.n);

  DiscreteSolution out;
  out.nodes = cur.nodes;
  out.params = params;
  out.spec_used = cur.spec_used;
  out.tau_path = cur.tau_path;
  out.values.resize(cur.nodes.size());
  for (std::size_t i = 0; i < cur.nodes.size(); ++i)
    out.values[i] = green_potential(rhs, cur.nodes[i], params, spec);
  if (with_gradients && 2.0 * params.s > 1.0) {
    out.gradients.resize(cur.nodes.size());
    for (std::size_t i = 0; i < cur.nodes.size(); ++i)
      out.gradients[i] = green_potential_gradient(rhs, cur.nodes[i], params, spec);
  }
  return out;
}

// Continuation in the coefficient loading: ramps tau from 0 to 1 in
// tau_steps increments, Picard-iterating to tolerance at each step and
// warm-starting from the previous one.  The anchor operator is always the
// pure order-2s inverse (the explicit volume potential); small loading
// increments keep each inner map contractive.
inline DiscreteSolution solve(const ScalarField& f, const CoefficientBundle& coeffs,
                              const ProblemParams& params, const QuadratureSpec& spec,
                              const SolverSpec& sspec = SolverSpec{}) {
  params.validate();
  spec.validate();
  sspec.validate();
  const bool drift = detail::has_drift(coeffs);
  params.validate_for_solver(drift);
  if (f.dim != params.n || coeffs.c.dim != params.n || coeffs.b.dim() != params.n)
    throw DimensionMismatchError("forcing or coefficient dimensions disagree");

  DiscreteSolution cur;
  cur.nodes = collocation_nodes(params, sspec);
  cur.values.assign(cur.nodes.size(), 0.0);
  cur.params = params;
  cur.spec_used = sspec;

  double lambda = 0.0;
  for (const Point& x : cur.nodes) {
    const double cv = coeffs.c(x);
    if (cv < 0.0)
      throw ParamError("zero-order coefficient must be nonnegative, found " + std::to_string(cv));
    lambda = std::max(lambda, coeffs.b(x).norm() + std::abs(cv));
  }
  cur.lambda_bound = lambda;

  int total_iters = 0;
  double last_inc = 0.0;
  for (int k = 1; k <= sspec.tau_steps; ++k) {
    const double tau = static_cast<double>(k) / sspec.tau_steps;
    double prev_inc = std::numeric_limits<double>::infinity();
    int stalls = 0;
    bool settled = false;
    for (int m = 1; m <= sspec.max_picard_iters; ++m) {
      DiscreteSolution next = picard_step(cur, f, coeffs, tau, params, spec, false);
      std::vector<double> delta(cur.values.size());
      for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = next.values[i] - cur.values[i];
      const double inc = detail::node_norm(cur.nodes, delta, params.p, params.r);
      cur.values = std::move(next.values);
      ++total_iters;
      last_inc = inc;
      if (inc <= sspec.tol) {
        settled = true;
        break;
      }
      if (inc >= prev_inc) {
        if (++stalls >= 5)
          throw NonContractiveError(
              "increment ratio " + std::to_string(inc / prev_inc) + " at loading " +
              std::to_string(tau) +
              " refused to decrease for 5 iterations; increase tau_steps (currently " +
              std::to_string(sspec.tau_steps) + ")");
      } else {
        stalls = 0;
      }
      prev_inc = inc;
    }
    if (!settled)
      throw MaxIterationsError("loading step " + std::to_string(tau) + " still at increment " +
                               std::to_string(last_inc) + " after " +
                               std::to_string(sspec.max_picard_iters) + " iterations");
    cur.tau_path.push_back(tau);
  }

  if (2.0 * params.s > 1.0) {
    const NodeInterpolant itp(cur.nodes, cur.values, params);
    const ScalarField rhs = detail::picard_rhs(itp, f, coeffs, 1.0, params.n);
    cur.gradients.resize(cur.nodes.size());
    for (std::size_t i = 0; i < cur.nodes.size(); ++i)
      cur.gradients[i] = green_potential_gradient(rhs, cur.nodes[i], params, spec);
  }
  cur.converged = true;
  cur.iterations_used = total_iters;
  cur.final_increment = last_inc;
  return cur;
}

inline NodeInterpolant interpolant(const DiscreteSolution& sol) {
  return NodeInterpolant(sol.nodes, sol.values, sol.params);
}

namespace detail {

struct ProbeRule {
  std::vector<Point> pts;
  std::vector<double> w;  // volume weights over {|x| <= 1 - collar}
};

inline ProbeRule interior_probe_rule(int n, double collar, int radial, int angular) {
  if (!(collar > 0.0) || collar >= 1.0) throw ParamError("probe collar must be in (0, 1)");
  ProbeRule rule;
  const GaussRule& gl = gauss_legendre(radial);
  const SphereRule sph = sphere_rule(n, angular);
  const double top = 1.0 - collar;
  for (int i = 0; i < radial; ++i) {
    const double rho = 0.5 * top * (gl.x[i] + 1.0);
    const double wr = 0.5 * top * gl.w[i] * std::pow(rho, n - 1);
    for (int d = 0; d < sph.size(); ++d) {
      Point p(n);
      for (int k = 0; k < n; ++k) p[k] = rho * sph.dirs[d][k];
      rule.pts.push_back(p);
      rule.w.push_back(wr * sph.w[d]);
    }
  }
  return rule;
}

inline double probe_norm_accumulate(const ProbeRule& rule, const std::vector<double>& vals,
                                    double p, double r) {
  if (std::isinf(p)) {
    double best = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i)
      best = std::max(best, std::pow(boundary_gap(rule.pts[i]), r) * std::abs(vals[i]));
    return best;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i)
    acc += rule.w[i] * std::pow(std::pow(boundary_gap(rule.pts[i]), r) * std::abs(vals[i]), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace detail

// Weighted norm of the strong-form defect (order-2s operator plus drift and
// zero-order terms minus forcing) of the interpolated solution, measured at
// interior probes by the principal-value quadrature.  This route never sees
// the volume-potential representation the solver iterates on, so agreement
// is evidence, not bookkeeping.  Probes the PV rule rejects as too close to
// the boundary are skipped and counted in `boundary_skipped`.
inline double residual_norm(const DiscreteSolution& sol, const ScalarField& f,
                            const CoefficientBundle& coeffs, const ProblemParams& params,
                            const QuadratureSpec& spec, double collar = 0.1,
                            int probe_radial = 8, int probe_angular = 12,
                            int* boundary_skipped = nullptr) {
  params.validate();
  spec.validate();
  const NodeInterpolant itp = interpolant(sol);
  const ScalarField u = itp.field();
  const detail::ProbeRule rule =
      detail::interior_probe_rule(params.n, collar, probe_radial, probe_angular);

  detail::ProbeRule kept;
  std::vector<double> defect;
  int skipped = 0;
  for (std::size_t i = 0; i < rule.pts.size(); ++i) {
    const Point& x = rule.pts[i];
    double pv = 0.0;
    try {
      pv = frac_laplacian_pv(u, x, params, spec);
    } catch (const TooCloseToBoundaryError&) {
      ++skipped;
      continue;
    }
    const double res = pv + dot(coeffs.b(x), itp.gradient(x)) + coeffs.c(x) * u(x) - f(x);
    kept.pts.push_back(x);
    kept.w.push_back(rule.w[i]);
    defect.push_back(res);
  }
  if (boundary_skipped) *boundary_skipped = skipped;
  if (kept.pts.empty())
    throw TooCloseToBoundaryError("probe collar leaves no points the PV rule accepts");
  return detail::probe_norm_accumulate(kept, defect, params.p, params.r);
}

// Stability ratio of the a priori estimate: the weighted probe norm of the
// order-2s operator of the interpolated solution over the weighted norm of
// the forcing.  Zero forcing with a vanishing numerator returns 0 by
// convention.
inline double apriori_ratio(const DiscreteSolution& sol, const ScalarField& f,
                            const ProblemParams& params, const QuadratureSpec& spec,
                            double collar = 0.1, int probe_radial = 8, int probe_angular = 12) {
  params.validate();
  spec.validate();
  const NodeInterpolant itp = interpolant(sol);
  const ScalarField u = itp.field();
  const detail::ProbeRule rule =
      detail::interior_probe_rule(params.n, collar, probe_radial, probe_angular);

  detail::ProbeRule kept;
  std::vector<double> pv_vals;
  for (std::size_t i = 0; i < rule.pts.size(); ++i) {
    try {
      pv_vals.push_back(frac_laplacian_pv(u, rule.pts[i], params, spec));
    } catch (const TooCloseToBoundaryError&) {
      continue;
    }
    kept.pts.push_back(rule.pts[i]);
    kept.w.push_back(rule.w[i]);
  }
  if (kept.pts.empty())
    throw TooCloseToBoundaryError("probe collar leaves no points the PV rule accepts");
  const double num = detail::probe_norm_accumulate(kept, pv_vals, params.p, params.r);
  const double den = weighted_lp_norm(f, params.p, params.r, params, spec);
  if (den == 0.0) {
    if (num <= 1e-10) return 0.0;
    throw ParamError("a priori ratio undefined: zero forcing against a nonzero operator norm");
  }
  return num / den;
}

struct MaxPrincipleReport {
  std::vector<double> min_values;  // per family member, over collocation nodes
  double tolerance = 1e-3;
  bool pass = false;
};

// Solves the equation for each nonnegative forcing and checks that node
// values never dip below -tolerance: the sign structure the operator's
// comparison argument predicts.
inline MaxPrincipleReport max_principle_check(const CoefficientBundle& coeffs,
                                              const std::vector<ScalarField>& f_family,
                                              const ProblemParams& params,
                                              const QuadratureSpec& spec,
                                              const SolverSpec& sspec = SolverSpec{},
                                              double tolerance = 1e-3) {
  if (f_family.empty()) throw ParamError("maximum-principle check needs at least one forcing");
  const std::vector<Point> nodes = collocation_nodes(params, sspec);
  MaxPrincipleReport rep;
  rep.tolerance = tolerance;
  for (const ScalarField& f : f_family) {
    for (const Point& x : nodes)
      if (f(x) < 0.0) throw ParamError("maximum-principle forcings must be nonnegative at nodes");
    const DiscreteSolution sol = solve(f, coeffs, params, spec, sspec);
    rep.min_values.push_back(*std::min_element(sol.values.begin(), sol.values.end()));
  }
  rep.pass = std::all_of(rep.min_values.begin(), rep.min_values.end(),
                         [&](double m) { return m >= -tolerance; });
  return rep;
}

}  // namespace fraclap

#endif  // FRACLAP_SOLVER_HPP
