#ifndef FRACLAP_FIELD_HPP
#define FRACLAP_FIELD_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/geometry.hpp"

namespace fraclap {

enum class Support { global, ball_only };

// Advisory only; consumers may use it to pick quadrature depth.
enum class Smoothness { unknown, piecewise, continuous, smooth };

// A scalar function on R^n with value semantics.  Ball-only fields evaluate
// to exactly 0 outside the closed unit ball without calling the payload, so
// that support claims hold bit-exactly.
struct ScalarField {
  std::function<double(const Point&)> eval;
  int dim = 0;
  Support support = Support::global;
  Smoothness smoothness = Smoothness::unknown;

  double operator()(const Point& x) const {
    if (x.dim() != dim)
      throw DimensionMismatchError("field of dimension " + std::to_string(dim) +
                                   " evaluated at a point of dimension " + std::to_string(x.dim()));
    if (support == Support::ball_only && x.norm_sq() > 1.0) return 0.0;
    return eval(x);
  }
};

inline ScalarField constant_field(double value, int dim) {
  return {[value](const Point&) { return value; }, dim, Support::global, Smoothness::smooth};
}

struct VectorField {
  std::vector<ScalarField> components;

  int dim() const { return static_cast<int>(components.size()); }

  Point operator()(const Point& x) const {
    if (x.dim() != dim())
      throw DimensionMismatchError("vector field arity " + std::to_string(dim()) +
                                   " evaluated at a point of dimension " + std::to_string(x.dim()));
    Point v(x.dim());
    for (int i = 0; i < x.dim(); ++i) v[i] = components[i](x);
    return v;
  }

  bool identically_zero_hint = false;
};

inline VectorField zero_vector_field(int dim) {
  VectorField v;
  for (int i = 0; i < dim; ++i) v.components.push_back(constant_field(0.0, dim));
  v.identically_zero_hint = true;
  return v;
}

}  // namespace fraclap

#endif  // FRACLAP_FIELD_HPP
