#pragma once

// One-dimensional closed convex functions with analytic conjugate, prox and
// subdifferential oracles. Separable potentials are assembled from these.

#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sben/extended_real.hpp"

namespace sben {

/// Closed interval [lower, upper]; endpoints may be ±inf.
struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  static Interval point(double x) { return {x, x}; }
  static Interval real_line() { return {}; }

  bool contains(double x, double tol = 0.0) const { return x >= lower - tol && x <= upper + tol; }
  bool is_point() const { return lower == upper; }
  bool is_bounded() const;
  double clamp(double x) const;
  /// Element of smallest magnitude.
  double min_norm_element() const { return clamp(0.0); }
  /// Distance from x to the interval (0 inside).
  double distance(double x) const;
};

Interval operator+(Interval a, Interval b);
Interval operator+(Interval a, double s);
Interval operator-(Interval a);

/// f ≡ 0.
struct ZeroFunction {};

/// f(x) = (c/2) x², c > 0.
struct QuadraticFunction {
  double c = 1.0;
};

/// f(x) = k |x|, k > 0.
struct AbsoluteFunction {
  double k = 1.0;
};

/// Piecewise-linear interpolant of convex samples (xᵢ, yᵢ), extended linearly
/// beyond the end samples with the end slopes.
class PiecewiseLinearFunction {
 public:
  /// Validates: ≥ 2 samples, strictly increasing x, finite values and
  /// nondecreasing slopes (second differences ≥ −1e−12, scaled).
  PiecewiseLinearFunction(std::vector<double> x, std::vector<double> y);

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  const std::vector<double>& slopes() const { return slopes_; }

  double value(double x) const;
  /// max_i w xᵢ − yᵢ if w lies in the slope range, +∞ otherwise.
  ExtendedReal conjugate(double w) const;
  double prox(double x, double lambda) const;
  Interval subdifferential(double x) const;
  Interval conjugate_domain() const { return {slopes_.front(), slopes_.back()}; }
  Interval conjugate_subdifferential(double w) const;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slopes_;
};

/// Reads a two-column `x,value` CSV (header optional) into a validated
/// piecewise-linear function.
PiecewiseLinearFunction load_grid_potential_csv(const std::string& path);

/// max over samples of w·xᵢ − yᵢ. Exact for the grid restriction of the
/// function (no extension beyond the sampled range). Requires strictly
/// increasing x with at least two finite samples.
double numeric_conjugate_1d(std::span<const double> x, std::span<const double> y, double w);

/// f(x − center) for one of the shapes above.
class ScalarConvex {
 public:
  using Shape = std::variant<ZeroFunction, QuadraticFunction, AbsoluteFunction, PiecewiseLinearFunction>;

  ScalarConvex() = default;
  explicit ScalarConvex(Shape shape, double center = 0.0);

  static ScalarConvex zero() { return ScalarConvex(ZeroFunction{}); }
  static ScalarConvex quadratic(double c, double center = 0.0);
  static ScalarConvex absolute(double k, double center = 0.0);

  const Shape& shape() const { return shape_; }
  double center() const { return center_; }
  ScalarConvex translated(double shift) const { return ScalarConvex(shape_, center_ + shift); }

  bool is_zero() const { return std::holds_alternative<ZeroFunction>(shape_); }

  ExtendedReal value(double x) const;
  ExtendedReal conjugate(double w) const;
  /// argmin_y λ f(y) + ½ (y − x)².
  double prox(double x, double lambda) const;
  Interval subdifferential(double x) const;
  Interval conjugate_domain() const;
  /// ∂f*(w) = argmax_x {w x − f(x)}; empty-domain queries are the caller's
  /// responsibility (w must lie in conjugate_domain()).
  Interval conjugate_subdifferential(double w) const;

  std::string describe() const;

 private:
  Shape shape_ = ZeroFunction{};
  double center_ = 0.0;
};

}  // namespace sben
