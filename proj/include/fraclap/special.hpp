#ifndef FRACLAP_SPECIAL_HPP
#define FRACLAP_SPECIAL_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "fraclap/errors.hpp"

namespace fraclap {

inline double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

inline double surface_area(int n) {
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

inline double ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// Chebyshev interpolant of f on [a, b] from samples at the interior
// Chebyshev nodes (endpoints are never evaluated).
class ChebyshevInterp {
 public:
  ChebyshevInterp() = default;

  ChebyshevInterp(const std::function<double(double)>& f, double a, double b, int degree)
      : a_(a), b_(b), degree_(degree), coeffs_(degree) {
    std::vector<double> vals(degree);
    for (int k = 0; k < degree; ++k) {
      const double theta = M_PI * (k + 0.5) / degree;
      vals[k] = f(0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta));
    }
    for (int j = 0; j < degree; ++j) {
      double c = 0.0;
      for (int k = 0; k < degree; ++k) c += vals[k] * std::cos(j * M_PI * (k + 0.5) / degree);
      coeffs_[j] = c * 2.0 / degree;
    }
  }

  double eval(double x) const {
    const double u = 2.0 * (x - a_) / (b_ - a_) - 1.0;
    double b1 = 0.0, b2 = 0.0;
    for (int j = degree_ - 1; j >= 1; --j) {
      const double b0 = 2.0 * u * b1 - b2 + coeffs_[j];
      b2 = b1;
      b1 = b0;
    }
    return u * b1 - b2 + 0.5 * coeffs_[0];
  }

 private:
  double a_ = -1.0, b_ = 1.0;
  int degree_ = 1;
  std::vector<double> coeffs_;
};

// Piecewise Chebyshev interpolant of f on [x_lo, x_hi], panels equispaced in
// log x.  Intended for smooth positive-argument profiles that vary over many
// decades; evaluation is a panel lookup plus Clenshaw recurrence.
class ChebyshevLogTable {
 public:
  ChebyshevLogTable() = default;

  ChebyshevLogTable(const std::function<double(double)>& f, double x_lo, double x_hi,
                    int panels, int degree)
      : t_lo_(std::log(x_lo)), t_hi_(std::log(x_hi)), panels_(panels), degree_(degree) {
    coeffs_.resize(static_cast<std::size_t>(panels) * degree);
    const double dt = (t_hi_ - t_lo_) / panels;
    std::vector<double> vals(degree);
    for (int p = 0; p < panels; ++p) {
      const double a = t_lo_ + p * dt;
      const double b = a + dt;
      for (int k = 0; k < degree; ++k) {
        const double theta = M_PI * (k + 0.5) / degree;
        const double t = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta);
        vals[k] = f(std::exp(t));
      }
      for (int j = 0; j < degree; ++j) {
        double c = 0.0;
        for (int k = 0; k < degree; ++k)
          c += vals[k] * std::cos(j * M_PI * (k + 0.5) / degree);
        coeffs_[static_cast<std::size_t>(p) * degree + j] = c * 2.0 / degree;
      }
    }
  }

  double x_lo() const { return std::exp(t_lo_); }
  double x_hi() const { return std::exp(t_hi_); }

  double eval(double x) const {
    const double t = std::log(x);
    const double dt = (t_hi_ - t_lo_) / panels_;
    int p = static_cast<int>((t - t_lo_) / dt);
    if (p < 0) p = 0;
    if (p >= panels_) p = panels_ - 1;
    const double a = t_lo_ + p * dt;
    const double u = 2.0 * (t - a) / dt - 1.0;  // [-1, 1] on the panel
    const double* c = &coeffs_[static_cast<std::size_t>(p) * degree_];
    double b1 = 0.0, b2 = 0.0;
    for (int j = degree_ - 1; j >= 1; --j) {
      const double b0 = 2.0 * u * b1 - b2 + c[j];
      b2 = b1;
      b1 = b0;
    }
    return u * b1 - b2 + 0.5 * c[0];
  }

 private:
  double t_lo_ = 0.0, t_hi_ = 1.0;
  int panels_ = 1, degree_ = 1;
  std::vector<double> coeffs_;
};

}  // namespace fraclap

#endif  // FRACLAP_SPECIAL_HPP
