#include "sben/scalar_convex.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "sben/errors.hpp"

namespace sben {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Indicator constraints are accepted up to this absolute slack so that
// velocities reconstructed as differences of oracle outputs do not fall off
// thin domains through roundoff.
constexpr double kDomainTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

}  // namespace

bool Interval::is_bounded() const { return std::isfinite(lower) && std::isfinite(upper); }

double Interval::clamp(double x) const { return std::min(std::max(x, lower), upper); }

double Interval::distance(double x) const {
  if (x < lower) return lower - x;
  if (x > upper) return x - upper;
  return 0.0;
}

Interval operator+(Interval a, Interval b) { return {a.lower + b.lower, a.upper + b.upper}; }
Interval operator+(Interval a, double s) { return {a.lower + s, a.upper + s}; }
Interval operator-(Interval a) { return {-a.upper, -a.lower}; }

// ---------------------------------------------------------------------------
// PiecewiseLinearFunction

PiecewiseLinearFunction::PiecewiseLinearFunction(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) throw std::invalid_argument("grid potential: x and value columns differ in length");
  if (x_.size() < 2) throw std::invalid_argument("grid potential: need at least two samples");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]))
      throw std::invalid_argument(fmt::format("grid potential: non-finite sample at row {}", i));
    if (i > 0 && !(x_[i] > x_[i - 1]))
      throw std::invalid_argument(fmt::format("grid potential: x not strictly increasing at row {}", i));
  }
  slopes_.resize(x_.size() - 1);
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) slopes_[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  for (std::size_t i = 0; i + 1 < slopes_.size(); ++i) {
    const double scale = std::max(1.0, std::abs(slopes_[i]));
    if (slopes_[i + 1] - slopes_[i] < -1e-12 * scale)
      throw std::invalid_argument(fmt::format("grid potential: not convex at sample {}", i + 1));
  }
}

double PiecewiseLinearFunction::value(double x) const {
  if (x <= x_.front()) return y_.front() + slopes_.front() * (x - x_.front());
  if (x >= x_.back()) return y_.back() + slopes_.back() * (x - x_.back());
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const auto i = static_cast<std::size_t>(it - x_.begin()) - 1;
  return y_[i] + slopes_[i] * (x - x_[i]);
}

ExtendedReal PiecewiseLinearFunction::conjugate(double w) const {
  const double tol = kDomainTolerance * (1.0 + std::max(std::abs(slopes_.front()), std::abs(slopes_.back())));
  if (w < slopes_.front() - tol || w > slopes_.back() + tol) return ExtendedReal::infinity();
  const auto i = static_cast<std::size_t>(std::lower_bound(slopes_.begin(), slopes_.end(), w) - slopes_.begin());
  const std::size_t vertex = std::min(i, x_.size() - 1);
  return w * x_[vertex] - y_[vertex];
}

double PiecewiseLinearFunction::prox(double x, double lambda) const {
  const std::size_t n = x_.size();
  auto right_slope = [&](std::size_t i) { return slopes_[std::min(i, n - 2)]; };
  auto left_slope = [&](std::size_t i) { return i == 0 ? slopes_.front() : slopes_[i - 1]; };
  // a_i = x_i + λ s_i^+ is strictly increasing; locate the first a_i ≥ x.
  std::size_t lo = 0, hi = n;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (x_[mid] + lambda * right_slope(mid) >= x) hi = mid;
    else lo = mid + 1;
  }
  if (lo == n) return x - lambda * slopes_.back();
  if (x >= x_[lo] + lambda * left_slope(lo)) return x_[lo];
  if (lo == 0) return x - lambda * slopes_.front();
  return x - lambda * slopes_[lo - 1];
}

Interval PiecewiseLinearFunction::subdifferential(double x) const {
  if (x < x_.front()) return Interval::point(slopes_.front());
  if (x > x_.back()) return Interval::point(slopes_.back());
  const auto it = std::lower_bound(x_.begin(), x_.end(), x);
  const auto i = static_cast<std::size_t>(it - x_.begin());
  if (*it == x) {
    const double left = i == 0 ? slopes_.front() : slopes_[i - 1];
    const double right = i + 1 == x_.size() ? slopes_.back() : slopes_[i];
    return {left, right};
  }
  return Interval::point(slopes_[i - 1]);
}

Interval PiecewiseLinearFunction::conjugate_subdifferential(double w) const {
  const auto lo = static_cast<std::size_t>(std::lower_bound(slopes_.begin(), slopes_.end(), w) - slopes_.begin());
  const auto hi = static_cast<std::size_t>(std::upper_bound(slopes_.begin(), slopes_.end(), w) - slopes_.begin());
  if (lo == hi) {
    const double v = x_[std::min(lo, x_.size() - 1)];
    return Interval::point(v);
  }
  return {lo == 0 ? -kInf : x_[lo], hi == slopes_.size() ? kInf : x_[hi]};
}

PiecewiseLinearFunction load_grid_potential_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open grid potential file '" + path + "'");
  std::vector<double> xs, ys;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ConfigError("", fmt::format("{}:{}: expected two columns 'x,value'", path, row));
    const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
    double xv = 0.0, yv = 0.0;
    try {
      std::size_t used_a = 0, used_b = 0;
      xv = std::stod(a, &used_a);
      yv = std::stod(b, &used_b);
    } catch (const std::exception&) {
      if (xs.empty() && row == 1) continue;  // header
      throw ConfigError("", fmt::format("{}:{}: non-numeric entry", path, row));
    }
    xs.push_back(xv);
    ys.push_back(yv);
  }
  try {
    return PiecewiseLinearFunction(std::move(xs), std::move(ys));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", path + ": " + e.what());
  }
}

double numeric_conjugate_1d(std::span<const double> x, std::span<const double> y, double w) {
  if (x.size() != y.size()) throw std::invalid_argument("numeric_conjugate_1d: column length mismatch");
  if (x.size() < 2) throw std::invalid_argument("numeric_conjugate_1d: need at least two samples");
  double best = -kInf;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0 && !(x[i] > x[i - 1])) throw std::invalid_argument("numeric_conjugate_1d: grid not strictly increasing");
    if (!std::isfinite(y[i])) throw std::invalid_argument("numeric_conjugate_1d: non-finite value");
    best = std::max(best, w * x[i] - y[i]);
  }
  return best;
}

// ---------------------------------------------------------------------------
// ScalarConvex

ScalarConvex::ScalarConvex(Shape shape, double center) : shape_(std::move(shape)), center_(center) {
  if (!std::isfinite(center_)) throw std::invalid_argument("ScalarConvex: non-finite center");
  std::visit(Overloaded{
                 [](const ZeroFunction&) {},
                 [](const QuadraticFunction& f) {
                   if (!(f.c > 0.0) || !std::isfinite(f.c))
                     throw std::invalid_argument("quadratic dissipation requires c > 0");
                 },
                 [](const AbsoluteFunction& f) {
                   if (!(f.k > 0.0) || !std::isfinite(f.k))
                     throw std::invalid_argument("dry friction requires k > 0");
                 },
                 [](const PiecewiseLinearFunction&) {},
             },
             shape_);
}

ScalarConvex ScalarConvex::quadratic(double c, double center) { return ScalarConvex(QuadraticFunction{c}, center); }

ScalarConvex ScalarConvex::absolute(double k, double center) { return ScalarConvex(AbsoluteFunction{k}, center); }

ExtendedReal ScalarConvex::value(double x) const {
  const double u = x - center_;
  return std::visit(Overloaded{
                        [](const ZeroFunction&) { return 0.0; },
                        [u](const QuadraticFunction& f) { return 0.5 * f.c * u * u; },
                        [u](const AbsoluteFunction& f) { return f.k * std::abs(u); },
                        [u](const PiecewiseLinearFunction& f) { return f.value(u); },
                    },
                    shape_);
}

ExtendedReal ScalarConvex::conjugate(double w) const {
  const ExtendedReal base = std::visit(
      Overloaded{
          [w](const ZeroFunction&) {
            return std::abs(w) <= kDomainTolerance ? ExtendedReal(0.0) : ExtendedReal::infinity();
          },
          [w](const QuadraticFunction& f) { return ExtendedReal(w * w / (2.0 * f.c)); },
          [w](const AbsoluteFunction& f) {
            return std::abs(w) <= f.k + kDomainTolerance * (1.0 + f.k) ? ExtendedReal(0.0)
                                                                      : ExtendedReal::infinity();
          },
          [w](const PiecewiseLinearFunction& f) { return f.conjugate(w); },
      },
      shape_);
  if (base.is_infinite()) return base;
  return base.raw() + w * center_;
}

double ScalarConvex::prox(double x, double lambda) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("prox: step must be positive");
  const double u = x - center_;
  const double y = std::visit(Overloaded{
                                  [u](const ZeroFunction&) { return u; },
                                  [u, lambda](const QuadraticFunction& f) { return u / (1.0 + lambda * f.c); },
                                  [u, lambda](const AbsoluteFunction& f) { return soft_threshold(u, lambda * f.k); },
                                  [u, lambda](const PiecewiseLinearFunction& f) { return f.prox(u, lambda); },
                              },
                              shape_);
  return center_ + y;
}

Interval ScalarConvex::subdifferential(double x) const {
  const double u = x - center_;
  return std::visit(Overloaded{
                        [](const ZeroFunction&) { return Interval::point(0.0); },
                        [u](const QuadraticFunction& f) { return Interval::point(f.c * u); },
                        [u](const AbsoluteFunction& f) {
                          if (u > 0.0) return Interval::point(f.k);
                          if (u < 0.0) return Interval::point(-f.k);
                          return Interval{-f.k, f.k};
                        },
                        [u](const PiecewiseLinearFunction& f) { return f.subdifferential(u); },
                    },
                    shape_);
}

Interval ScalarConvex::conjugate_domain() const {
  return std::visit(Overloaded{
                        [](const ZeroFunction&) { return Interval::point(0.0); },
                        [](const QuadraticFunction&) { return Interval::real_line(); },
                        [](const AbsoluteFunction& f) { return Interval{-f.k, f.k}; },
                        [](const PiecewiseLinearFunction& f) { return f.conjugate_domain(); },
                    },
                    shape_);
}

Interval ScalarConvex::conjugate_subdifferential(double w) const {
  const Interval base = std::visit(Overloaded{
                                       [](const ZeroFunction&) { return Interval::real_line(); },
                                       [w](const QuadraticFunction& f) { return Interval::point(w / f.c); },
                                       [w](const AbsoluteFunction& f) {
                                         if (w >= f.k) return Interval{0.0, kInf};
                                         if (w <= -f.k) return Interval{-kInf, 0.0};
                                         return Interval::point(0.0);
                                       },
                                       [w](const PiecewiseLinearFunction& f) { return f.conjugate_subdifferential(w); },
                                   },
                                   shape_);
  return base + center_;
}

std::string ScalarConvex::describe() const {
  std::string body = std::visit(Overloaded{
                                    [](const ZeroFunction&) { return std::string("zero"); },
                                    [](const QuadraticFunction& f) { return fmt::format("quadratic(c={})", f.c); },
                                    [](const AbsoluteFunction& f) { return fmt::format("absolute(k={})", f.k); },
                                    [](const PiecewiseLinearFunction& f) {
                                      return fmt::format("grid({} samples)", f.x().size());
                                    },
                                },
                                shape_);
  if (center_ != 0.0) body += fmt::format("@{}", center_);
  return body;
}

}  // namespace sben
