#ifndef FRACLAP_PARAMS_HPP
#define FRACLAP_PARAMS_HPP

#include <cmath>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/geometry.hpp"

namespace fraclap {

// Problem data shared across the library:
//   n  spatial dimension (>= 2)
//   s  operator order parameter, the operator is (-Delta)^s with 0 < s < 1
//   r  boundary-weight exponent for the weighted Lebesgue norms, |r| < 1
//   p  integrability exponent of the data space
//   q  integrability exponent of the target space
struct ProblemParams {
  int n = 2;
  double s = 0.75;
  double r = 0.0;
  double p = 2.0;
  double q = 2.0;

  double order() const { return 2.0 * s; }

  void validate() const {
    if (n < 2 || n > Point::kMaxDim)
      throw ParamError("dimension n must be in [2, " + std::to_string(Point::kMaxDim) +
                       "], got " + std::to_string(n));
    if (!(s > 0.0 && s < 1.0))
      throw ParamError("order parameter s must satisfy 0 < s < 1, got " + std::to_string(s));
    if (!(r > -1.0 && r < 1.0))
      throw ParamError("weight exponent r must satisfy -1 < r < 1, got " + std::to_string(r));
    if (!(p >= 1.0) || !(q >= 1.0))
      throw ParamError("exponents p, q must be >= 1 (use INFINITY for sup norms)");
  }

  // Extra hypotheses required by the drift solver: zero-order coefficient
  // nonnegative, s above 1/2 whenever a gradient term is present, and the
  // weight pinned to 1-s <= r <= s.
  void validate_for_solver(bool has_drift) const {
    validate();
    if (has_drift && !(s > 0.5))
      throw ParamError("drift term requires s > 1/2, got s = " + std::to_string(s));
    if (!(r >= 1.0 - s && r <= s))
      throw ParamError("solver requires 1 - s <= r <= s, got r = " + std::to_string(r));
  }
};

}  // namespace fraclap

#endif  // FRACLAP_PARAMS_HPP
