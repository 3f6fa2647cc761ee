// Walks through the nonuniqueness construction at n=2, s=0.75: builds the
// boundary-singular field, checks it is annihilated by the operator at a few
// interior points, and shows its boundary trace converging to a positive
// limit.  A genuinely trace-zero competitor is shown alongside for contrast.

#include <cmath>
#include <cstdio>
#include <vector>

#include <fraclap/fraclap.hpp>

int main() {
  using namespace fraclap;

  const ProblemParams params{.n = 2, .s = 0.75};
  const QuadratureSpec spec{};
  const double scale = kernel_constants(params).boundary_blowup;

  std::printf("nontrivial field u = %.6f * (1-|x|^2)^(s-1) inside the ball\n\n", scale);

  const ScalarField u = nontrivial_solution_field(params);
  std::printf("pointwise operator values (should vanish):\n");
  for (double rho : {0.0, 0.3, 0.6}) {
    Point x(params.n);
    x[0] = rho;
    const double pv = frac_laplacian_pv(u, x, params, spec);
    std::printf("  rho = %.1f   pv = %+.3e\n", rho, pv);
  }

  std::vector<double> schedule;
  for (int k = 0; k < 6; ++k) schedule.push_back(0.125 * std::pow(2.0, -k));

  const TraceReport rep = trace_limit_estimate(u, schedule, params, spec);
  std::printf("\nboundary trace along eps = 1/8, 1/16, ...:\n");
  for (std::size_t k = 0; k < rep.values.size(); ++k)
    std::printf("  eps = %-9.6f T = %.6f\n", rep.eps_schedule[k], rep.values[k]);
  std::printf("  classification: %s (limit %.6f)\n", to_string(rep.classification),
              rep.extrapolated_limit);

  // Contrast: the Green potential of a smooth bump has zero boundary trace.
  const ScalarField bump{[](const Point& p) { return std::exp(-p.norm_sq() / 0.18); },
                         params.n, Support::global, Smoothness::smooth};
  const ScalarField v = tabulated_radial_field(
      [&](double rho) {
        Point x(params.n);
        x[0] = rho;
        return green_potential(bump, x, params, spec);
      },
      params.n, 32, params.s, TabulationGrid::boundary_refined);
  const TraceReport zero = trace_limit_estimate(v, schedule, params, spec);
  std::printf("\nGreen potential of a smooth bump, same schedule:\n");
  std::printf("  classification: %s\n", to_string(zero.classification));

  return 0;
}
