#ifndef FRACLAP_GEOMETRY_HPP
#define FRACLAP_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <initializer_list>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

// Fixed-capacity point in R^n. Keeps hot loops allocation-free; dimensions
// above kMaxDim are rejected at construction.
class Point {
 public:
  static constexpr int kMaxDim = 8;

  Point() = default;

  explicit Point(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim)
      throw DimensionMismatchError("point dimension " + std::to_string(dim) +
                                   " outside [1, " + std::to_string(kMaxDim) + "]");
  }

  Point(std::initializer_list<double> coords) : Point(static_cast<int>(coords.size())) {
    int i = 0;
    for (double v : coords) c_[i++] = v;
  }

  static Point zero(int dim) { return Point(dim); }

  int dim() const { return dim_; }

  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

  double norm_sq() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
    return s;
  }

  double norm() const { return std::sqrt(norm_sq()); }

  Point& operator+=(const Point& o) {
    require_same_dim(o);
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }

  Point& operator-=(const Point& o) {
    require_same_dim(o);
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }

  Point& operator*=(double a) {
    for (int i = 0; i < dim_; ++i) c_[i] *= a;
    return *this;
  }

  void require_same_dim(const Point& o) const {
    if (dim_ != o.dim_)
      throw DimensionMismatchError("point dimensions differ: " + std::to_string(dim_) +
                                   " vs " + std::to_string(o.dim_));
  }

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

inline Point operator+(Point a, const Point& b) { return a += b; }
inline Point operator-(Point a, const Point& b) { return a -= b; }
inline Point operator*(double a, Point p) { return p *= a; }

inline double dot(const Point& a, const Point& b) {
  a.require_same_dim(b);
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double distance_sq(const Point& a, const Point& b) {
  a.require_same_dim(b);
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double distance(const Point& a, const Point& b) { return std::sqrt(distance_sq(a, b)); }

// Distance to the unit-sphere boundary, clamped at zero outside the ball.
inline double boundary_gap(const Point& x) { return std::max(0.0, 1.0 - x.norm()); }

}  // namespace fraclap

#endif  // FRACLAP_GEOMETRY_HPP
