#ifndef FRACLAP_EMBEDDING_HPP
#define FRACLAP_EMBEDDING_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/field.hpp"
#include "fraclap/params.hpp"
#include "fraclap/potentials.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/weighted_norms.hpp"

namespace fraclap {

// One member of the boundary-power source family f_t = gap^{t-s}.
struct EmbeddingRow {
  double t = 0.0;
  double source_norm = 0.0;     // weighted L^p norm of f_t
  double potential_norm = 0.0;  // weighted L^q norm of G * f_t
  double ratio = 0.0;           // potential_norm / source_norm
  double gradient_max = 0.0;    // node max of gap^r |grad (G * f_t)|, if tabulated
  double gradient_ratio = 0.0;  // gradient_max / source_norm
};

struct EmbeddingTable {
  ProblemParams params;
  double q = 0.0;
  bool gradient_column = false;
  std::vector<EmbeddingRow> rows;

  double max_ratio() const {
    double m = 0.0;
    for (const auto& row : rows) m = std::max(m, row.ratio);
    return m;
  }
  double max_gradient_ratio() const {
    double m = 0.0;
    for (const auto& row : rows) m = std::max(m, row.gradient_ratio);
    return m;
  }
};

// Largest relative change in the value-ratio column between two tables over
// the same t grid; the refinement-stability figure of merit.
inline double ratio_column_drift(const EmbeddingTable& a, const EmbeddingTable& b) {
  if (a.rows.size() != b.rows.size())
    throw ParamError("ratio_column_drift needs tables over the same family");
  double drift = 0.0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const double denom = std::max(std::abs(a.rows[i].ratio), 1e-300);
    drift = std::max(drift, std::abs(b.rows[i].ratio - a.rows[i].ratio) / denom);
  }
  return drift;
}

// Gradient estimates hold only above order one and need the weight inside
// the admissible window; the source integrability must also beat the scaling
// exponent strictly.
inline bool embedding_gradient_admissible(const ProblemParams& params) {
  return 2.0 * params.s > 1.0 && params.p > params.n / (2.0 * params.s - 1.0) &&
         params.r >= 1.0 - params.s && params.r <= params.s;
}

// Admissibility of the (p, q, r) exponent triple for the weighted-norm
// mapping bound.  The scaling window is open: q on the critical line is
// rejected, matching the failure of the endpoint estimate.
inline void validate_embedding_exponents(const ProblemParams& params, double q) {
  params.validate();
  if (!(q >= 1.0) || !std::isfinite(q)) throw ParamError("target exponent q must be >= 1");
  if (params.p < 1.0) throw ParamError("source exponent p must be >= 1");
  if (params.r < -params.s || params.r > params.s)
    throw ParamError("weight exponent r must lie in [-s, s]");
  const double critical = 2.0 * params.s * params.p;
  if (critical < params.n) {
    // subcritical source: 1/q > 1/p - 2s/n, strictly
    const double limit = 1.0 / params.p - 2.0 * params.s / params.n;
    if (1.0 / q <= limit)
      throw ParamError("target exponent q outside the open scaling window");
  }
}

// Ratio table for the family f_t = gap^{t-s}, t > 0: weighted L^q norm of
// the volume potential against the weighted L^p norm of the source.  The
// reduced potential profiles vary logarithmically at the boundary for small
// t, hence the boundary-refined surrogate grid.  Uniform boundedness of the
// ratio column as t -> 0 is the quantitative content of the mapping bound.
inline EmbeddingTable embedding_table(const ProblemParams& params, double q,
                                      const std::vector<double>& t_values,
                                      const QuadratureSpec& spec, int tab_samples = 48) {
  validate_embedding_exponents(params, q);
  spec.validate();
  if (t_values.empty()) throw ParamError("embedding table needs at least one t value");
  for (double t : t_values)
    if (!(t > 0.0) || !(t <= params.s))
      throw ParamError("family exponent t must lie in (0, s]");
  if (tab_samples < 2) throw ParamError("tabulation needs at least 2 samples");

  EmbeddingTable table;
  table.params = params;
  table.q = q;
  table.gradient_column = embedding_gradient_admissible(params);

  const int n = params.n;
  for (double t : t_values) {
    const double power = t - params.s;
    ScalarField f{[power](const Point& x) {
                    const double gap = 1.0 - x.norm();
                    return gap > 0.0 ? std::pow(gap, power) : 0.0;
                  },
                  n, Support::ball_only, Smoothness::piecewise};
    const ScalarField u = tabulated_radial_field(
        [&](double rho) {
          Point x(n);
          x[0] = rho;
          return green_potential(f, x, params, spec);
        },
        n, tab_samples, params.s, TabulationGrid::boundary_refined);

    EmbeddingRow row;
    row.t = t;
    row.source_norm = weighted_lp_norm(f, params.p, params.r, params, spec);
    row.potential_norm = weighted_lp_norm(u, q, params.r, params, spec);
    row.ratio = row.potential_norm / row.source_norm;

    if (table.gradient_column) {
      double worst = 0.0;
      for (int k = 1; k <= tab_samples / 2; ++k) {
        const double rho = 0.95 * k / (tab_samples / 2);
        Point x(n);
        x[0] = rho;
        const double g = green_potential_gradient(f, x, params, spec).norm();
        worst = std::max(worst, std::pow(1.0 - rho, params.r) * g);
      }
      row.gradient_max = worst;
      row.gradient_ratio = worst / row.source_norm;
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace fraclap

#endif  // FRACLAP_EMBEDDING_HPP
