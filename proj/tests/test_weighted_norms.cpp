#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "fraclap/fieldspec.hpp"
#include "fraclap/kernels.hpp"
#include "fraclap/potentials.hpp"
#include "fraclap/weighted_norms.hpp"
#include "oracles.hpp"

using namespace fraclap;

namespace {

const double kPi = std::numbers::pi;

ScalarField gap_power(double e) {
  return {[e](const Point& x) { return std::pow(std::max(0.0, 1.0 - x.norm()), e); }, 2,
          Support::ball_only, Smoothness::unknown};
}

std::vector<double> dyadic_schedule(int k_lo, int k_hi) {
  std::vector<double> s;
  for (int k = k_lo; k <= k_hi; ++k) s.push_back(std::exp2(-k));
  return s;
}

}  // namespace

TEST_CASE("weighted norm reproduces plain volume on the unit disk") {
  ProblemParams p;
  QuadratureSpec spec;
  CHECK_THAT(weighted_lp_norm(constant_field(1.0, 2), 1.0, 0.0, p, spec),
             Catch::Matchers::WithinRel(kPi, 1e-12));
}

TEST_CASE("weight and blow-up of matching exponents cancel exactly") {
  ProblemParams p;
  QuadratureSpec spec;
  CHECK_THAT(weighted_lp_norm(gap_power(-p.s), 1.0, p.s, p, spec),
             Catch::Matchers::WithinRel(kPi, 1e-12));
}

TEST_CASE("non-integrable boundary blow-up is reported, not returned") {
  ProblemParams p;
  QuadratureSpec spec;
  CHECK_THROWS_AS(weighted_lp_norm(gap_power(-1.0), 1.0, 0.0, p, spec), DivergentError);
}

TEST_CASE("sup norm is a node maximum and hence a lower bound") {
  ProblemParams p;
  QuadratureSpec spec;
  const double inf = std::numeric_limits<double>::infinity();

  CHECK(weighted_lp_norm(constant_field(3.0, 2), inf, 0.0, p, spec) == 3.0);

  // True sup of 1 - |x|^2 is 1 at the center, attained at no quadrature
  // node: the node maximum must stay below it, and not by much.
  ScalarField para{[](const Point& x) { return 1.0 - x.norm_sq(); }, 2, Support::ball_only,
                   Smoothness::smooth};
  const double m = weighted_lp_norm(para, inf, 0.0, p, spec);
  CHECK(m <= 1.0);
  CHECK(m >= 1.0 - 1e-5);

  CHECK_THAT(weighted_lp_norm(gap_power(-0.5), inf, 0.5, p, spec),
             Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("weighted norms are exactly homogeneous") {
  ProblemParams p;
  QuadratureSpec spec;
  ScalarField u{[](const Point& x) { return 1.0 + x[0] - 0.5 * x[1] * x[0]; }, 2,
                Support::ball_only, Smoothness::smooth};
  for (double pe : {1.0, 2.0}) {
    ScalarField u2{[&u](const Point& x) { return 2.0 * u(x); }, 2, Support::ball_only,
                   Smoothness::smooth};
    ScalarField u3{[&u](const Point& x) { return 3.0 * u(x); }, 2, Support::ball_only,
                   Smoothness::smooth};
    // Doubling commutes with power sums bit-for-bit for p = 1, 2.
    CHECK(weighted_lp_norm(u2, pe, 0.3, p, spec) == 2.0 * weighted_lp_norm(u, pe, 0.3, p, spec));
    CHECK_THAT(weighted_lp_norm(u3, pe, 0.3, p, spec),
               Catch::Matchers::WithinRel(3.0 * weighted_lp_norm(u, pe, 0.3, p, spec), 1e-15));
  }
}

TEST_CASE("weighted norms obey the triangle inequality") {
  ProblemParams p;
  QuadratureSpec spec;
  ScalarField u{[](const Point& x) { return 1.0 + x[0] * x[1]; }, 2, Support::ball_only,
                Smoothness::smooth};
  ScalarField v{[](const Point& x) { return x[1] - 0.5 * x.norm_sq(); }, 2, Support::ball_only,
                Smoothness::smooth};
  ScalarField w{[&](const Point& x) { return u(x) + v(x); }, 2, Support::ball_only,
                Smoothness::smooth};
  for (double pe : {1.0, 2.0, 3.5}) {
    const double slack = weighted_lp_norm(u, pe, 0.2, p, spec) +
                         weighted_lp_norm(v, pe, 0.2, p, spec) -
                         weighted_lp_norm(w, pe, 0.2, p, spec);
    CHECK(slack >= -1e-9);
  }
}

TEST_CASE("tail norm of a constant matches the radial oracle") {
  ProblemParams p;
  p.s = 0.5;
  QuadratureSpec spec;

  CHECK(l2s_norm(constant_field(0.0, 2), p, spec) == 0.0);

  // n = 2, s = 1/2: integrand is 1/(1+|y|^3), radially 2 pi r/(1+r^3).  Two
  // independent routes to the truth: adaptive quadrature with an analytic
  // tail beyond R = 1e3, and the closed form 4 pi^2 / (3 sqrt 3).
  const double oracle_value =
      2.0 * kPi *
      (oracle::integrate([](double t) { return t / (1.0 + t * t * t); }, 0.0, 1e3, 1e-13) + 1e-3 -
       0.25e-12);
  CHECK_THAT(oracle_value, Catch::Matchers::WithinRel(4.0 * kPi * kPi / (3.0 * std::sqrt(3.0)),
                                                      1e-12));
  CHECK_THAT(l2s_norm(constant_field(1.0, 2), p, spec),
             Catch::Matchers::WithinRel(oracle_value, 1e-6));
}

TEST_CASE("tail norm rejects growth at the critical rate") {
  ProblemParams p;
  QuadratureSpec spec;
  ScalarField grow{[&](const Point& y) { return std::pow(y.norm(), 2.0 * p.s); }, 2,
                   Support::global, Smoothness::unknown};
  CHECK_THROWS_AS(l2s_norm(grow, p, spec), SlowDecayError);
}

TEST_CASE("shell functional of a constant matches the annulus area") {
  ProblemParams p;
  p.s = 0.5;
  QuadratureSpec spec;
  const double eps = 0.01;
  const double exact = std::pow(eps, -p.s) * kPi * (1.0 - 0.99 * 0.99);
  CHECK_THAT(trace_functional(constant_field(1.0, 2), eps, p, spec),
             Catch::Matchers::WithinRel(exact, 1e-12));
}

TEST_CASE("shell functional is positively homogeneous in the field") {
  ProblemParams p;
  p.s = 0.5;
  QuadratureSpec spec;
  ScalarField u{[](const Point& x) { return 1.0 + x[0] * x[0]; }, 2, Support::ball_only,
                Smoothness::smooth};
  ScalarField cu{[&u](const Point& x) { return 2.5 * u(x); }, 2, Support::ball_only,
                 Smoothness::smooth};
  CHECK_THAT(trace_functional(cu, 0.05, p, spec),
             Catch::Matchers::WithinRel(2.5 * trace_functional(u, 0.05, p, spec), 1e-14));
}

TEST_CASE("shell width outside (0, 1/8] is rejected") {
  ProblemParams p;
  QuadratureSpec spec;
  const ScalarField one = constant_field(1.0, 2);
  CHECK_THROWS_AS(trace_functional(one, 0.0, p, spec), ParamError);
  CHECK_THROWS_AS(trace_functional(one, -0.01, p, spec), ParamError);
  CHECK_THROWS_AS(trace_functional(one, 0.2, p, spec), ParamError);
  CHECK_NOTHROW(trace_functional(one, 0.125, p, spec));
}

TEST_CASE("trace schedule validation") {
  ProblemParams p;
  QuadratureSpec spec;
  const ScalarField one = constant_field(1.0, 2);
  CHECK_THROWS_AS(trace_limit_estimate(one, {0.1, 0.05}, p, spec), ParamError);
  CHECK_THROWS_AS(trace_limit_estimate(one, {0.1, 0.05, 0.05}, p, spec), ParamError);
  CHECK_THROWS_AS(trace_limit_estimate(one, {0.05, 0.1, 0.01}, p, spec), ParamError);
  CHECK_THROWS_AS(trace_limit_estimate(one, {0.3, 0.1, 0.05}, p, spec), ParamError);
}

TEST_CASE("boundary-singular homogeneous solution has a positive trace limit") {
  ProblemParams p;  // n = 2, s = 3/4
  QuadratureSpec spec;
  const double scale = kernel_constants(p).boundary_blowup;
  const ScalarField u = nontrivial_solution_field(p);
  const auto sched = dyadic_schedule(3, 9);

  // Route one: each shell value against a 1-D radial oracle.  The gap
  // integrand ((2-t) t)^{s-1} (1-t) blows up at t = 0; substituting t = z^4
  // regularizes it for every s > 1/4.
  for (double eps : sched) {
    const double o = scale * 2.0 * kPi * std::pow(eps, -p.s) *
                     oracle::integrate(
                         [&](double z) {
                           const double t = z * z * z * z;
                           return 4.0 * std::pow(z, 4.0 * p.s - 1.0) *
                                  std::pow(2.0 - t, p.s - 1.0) * (1.0 - t);
                         },
                         0.0, std::pow(eps, 0.25), 1e-13);
    CHECK_THAT(trace_functional(u, eps, p, spec), Catch::Matchers::WithinRel(o, 1e-10));
  }

  // Route two: the extrapolated limit against the derived constant.
  const TraceReport rep = trace_limit_estimate(u, sched, p, spec);
  CHECK(rep.classification == TraceClass::positive);
  CHECK(std::abs(rep.fit_exponent) <= 0.1);
  const double limit = scale * 2.0 * kPi * std::pow(2.0, p.s - 1.0) / p.s;
  CHECK_THAT(rep.extrapolated_limit, Catch::Matchers::WithinRel(limit, 1e-5));
}

TEST_CASE("volume potential of a smooth density has vanishing trace") {
  ProblemParams p;  // n = 2, s = 3/4
  QuadratureSpec spec;
  ScalarField f{[](const Point& y) {
                  const double q = 1.0 - y.norm_sq();
                  return q > 0.0 ? q * q : 0.0;
                },
                2, Support::ball_only, Smoothness::continuous};
  const ScalarField u = tabulated_radial_field(
      [&](double rho) {
        Point x(2);
        x[0] = rho;
        return green_potential(f, x, p, spec);
      },
      2, 64, p.s, TabulationGrid::boundary_refined);

  // The surrogate must agree with the potential it tabulates, including
  // deep inside the boundary layer the trace shells sample.
  for (double rho : {0.0, 0.3, 0.7, 0.9, 0.99, 0.999}) {
    Point x(2);
    x[1] = rho;
    const double direct = green_potential(f, x, p, spec);
    CHECK_THAT(u(x), Catch::Matchers::WithinRel(direct, 1e-10));
  }

  const TraceReport rep = trace_limit_estimate(u, dyadic_schedule(3, 9), p, spec);
  CHECK(rep.classification == TraceClass::zero);
  CHECK(rep.fit_exponent > 0.9);
  CHECK(rep.values.back() < 0.02 * rep.values.front());
  CHECK(rep.extrapolated_limit == 0.0);
}

TEST_CASE("volume potential of a barely integrable density still has vanishing trace") {
  ProblemParams p;  // n = 2, s = 3/4
  QuadratureSpec spec;
  const ScalarField f = gap_power(-p.s + 0.01);
  const ScalarField u = tabulated_radial_field(
      [&](double rho) {
        Point x(2);
        x[0] = rho;
        return green_potential(f, x, p, spec);
      },
      2, 64, p.s, TabulationGrid::boundary_refined);

  const TraceReport rep = trace_limit_estimate(u, dyadic_schedule(3, 9), p, spec);
  for (std::size_t i = 1; i < rep.values.size(); ++i) CHECK(rep.values[i] < rep.values[i - 1]);
  CHECK(rep.classification == TraceClass::zero);
  // The reduced profile carries a logarithm, so decay toward zero is slower
  // than for smooth data and the fitted slope sits visibly below 1.
  CHECK(rep.fit_exponent > 0.5);
  CHECK(rep.fit_exponent < 0.95);
  CHECK(rep.values.back() < 0.05 * rep.values.front());
}

TEST_CASE("non-integrable blow-up classifies as divergent") {
  ProblemParams p;
  p.s = 0.5;
  QuadratureSpec spec;
  const TraceReport rep = trace_limit_estimate(gap_power(-1.0), dyadic_schedule(3, 9), p, spec);
  CHECK(rep.classification == TraceClass::divergent);
  CHECK(rep.fit_exponent < -0.2);
}

TEST_CASE("fields vanishing near the boundary classify as zero outright") {
  ProblemParams p;
  QuadratureSpec spec;
  ScalarField core{[](const Point& x) { return x.norm() < 0.5 ? 1.0 : 0.0; }, 2,
                   Support::ball_only, Smoothness::piecewise};
  const TraceReport rep = trace_limit_estimate(core, dyadic_schedule(3, 5), p, spec);
  CHECK(rep.classification == TraceClass::zero);
  CHECK(rep.extrapolated_limit == 0.0);
}

TEST_CASE("mollification preserves constants and affine fields") {
  ProblemParams p;
  CHECK_THAT(mollify(constant_field(2.5, 2), 0.3, p)(Point{0.4, -0.1}),
             Catch::Matchers::WithinAbs(2.5, 1e-12));

  ScalarField aff{[](const Point& x) { return 0.3 + 0.7 * x[0] - 0.2 * x[1]; }, 2,
                  Support::global, Smoothness::smooth};
  const ScalarField smoothed = mollify(aff, 0.25, p);
  for (const auto& x : {Point{0.0, 0.0}, Point{0.5, 0.2}, Point{-0.8, 0.4}})
    CHECK_THAT(smoothed(x), Catch::Matchers::WithinAbs(aff(x), 1e-10));
}

TEST_CASE("mollification fattens supports by exactly the bump radius") {
  ProblemParams p;
  ScalarField ball{[](const Point& x) { return 1.0 - x.norm_sq(); }, 2, Support::ball_only,
                   Smoothness::continuous};
  const ScalarField smoothed = mollify(ball, 0.25, p);
  CHECK(smoothed(Point{1.3, 0.0}) == 0.0);
  CHECK(smoothed(Point{0.0, -1.26}) == 0.0);
  CHECK(smoothed(Point{1.2, 0.0}) > 0.0);
}

TEST_CASE("mollification converges pointwise as the radius shrinks") {
  ProblemParams p;
  ScalarField sm{[](const Point& x) { return std::exp(-x.norm_sq()) * std::cos(x[0]); }, 2,
                 Support::global, Smoothness::smooth};
  const Point x0{0.3, -0.2};
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.25, 0.125, 0.0625, 0.03125}) {
    const double err = std::abs(mollify(sm, eps, p)(x0) - sm(x0));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 5e-4);
}

TEST_CASE("mollifier radius must be positive") {
  ProblemParams p;
  CHECK_THROWS_AS(mollify(constant_field(1.0, 2), 0.0, p), ParamError);
  CHECK_THROWS_AS(mollify(constant_field(1.0, 2), -0.1, p), ParamError);
}

TEST_CASE("quotient probe separates admissible from inadmissible boundary growth") {
  ProblemParams p;
  p.r = 0.5;
  // Gradient bound M gap^{-r} integrates to increments bounded by
  // |x - y|^{1-r}; one exponent notch below it does not.
  const ScalarField good = parse_field("delta^0.5", p);
  const ScalarField bad = parse_field("delta^0.3", p);

  CHECK(holder_quotient_probe(constant_field(1.0, 2), p.r, p, 1000) == 0.0);

  const double g_lo = holder_quotient_probe(good, p.r, p, 1000);
  const double g_hi = holder_quotient_probe(good, p.r, p, 64000);
  CHECK(g_lo <= 1.0);
  CHECK(g_hi <= 1.0);
  CHECK(g_hi >= 0.9);

  const double b_lo = holder_quotient_probe(bad, p.r, p, 1000);
  const double b_hi = holder_quotient_probe(bad, p.r, p, 64000);
  CHECK(b_lo >= 2.0 * g_lo);
  CHECK(b_hi >= 2.0 * b_lo);
}

TEST_CASE("norm routines check dimensions and exponents") {
  ProblemParams p;
  QuadratureSpec spec;
  const ScalarField one3 = constant_field(1.0, 3);
  CHECK_THROWS_AS(weighted_lp_norm(one3, 1.0, 0.0, p, spec), DimensionMismatchError);
  CHECK_THROWS_AS(l2s_norm(one3, p, spec), DimensionMismatchError);
  CHECK_THROWS_AS(trace_functional(one3, 0.1, p, spec), DimensionMismatchError);
  CHECK_THROWS_AS(mollify(one3, 0.1, p), DimensionMismatchError);
  CHECK_THROWS_AS(holder_quotient_probe(one3, 0.5, p, 100), DimensionMismatchError);
  CHECK_THROWS_AS(weighted_lp_norm(constant_field(1.0, 2), 0.5, 0.0, p, spec), ParamError);
}
