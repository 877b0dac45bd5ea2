#include "sben/convex_potential.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "sben/errors.hpp"

namespace sben {

void PhaseBox::validate() const {
  sben::validate(lower);
  sben::validate(upper);
  if (lower.dimension() != upper.dimension()) throw DimensionError("PhaseBox: corner dimensions differ");
  if (!((upper.q - lower.q).minCoeff() > 0.0) || !((upper.p - lower.p).minCoeff() > 0.0))
    throw std::invalid_argument("PhaseBox: degenerate box (every side needs positive length)");
}

double PhaseBox::volume() const { return (upper.q - lower.q).prod() * (upper.p - lower.p).prod(); }

bool PhaseBox::contains(const PhasePoint& z) const {
  for (int i = 0; i < dimension(); ++i) {
    if (z.q[i] < lower.q[i] || z.q[i] > upper.q[i]) return false;
    if (z.p[i] < lower.p[i] || z.p[i] > upper.p[i]) return false;
  }
  return true;
}

bool CoordinateBox::contains(const PhasePoint& z, double tol) const {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!q[i].contains(z.q[static_cast<Eigen::Index>(i)], tol)) return false;
    if (!p[i].contains(z.p[static_cast<Eigen::Index>(i)], tol)) return false;
  }
  return true;
}

int CoordinateBox::free_dimension() const {
  int count = 0;
  for (const auto& i : q) count += i.is_point() ? 0 : 1;
  for (const auto& i : p) count += i.is_point() ? 0 : 1;
  return count;
}

ConvexPotential::ConvexPotential(std::vector<ScalarConvex> q_parts, std::vector<ScalarConvex> p_parts,
                                 std::string tag)
    : q_parts_(std::move(q_parts)), p_parts_(std::move(p_parts)), tag_(std::move(tag)) {
  if (q_parts_.size() != p_parts_.size()) throw DimensionError("ConvexPotential: q and p parts differ in count");
  if (q_parts_.empty() || q_parts_.size() > static_cast<std::size_t>(kMaxDimension))
    throw DimensionError("ConvexPotential: dimension out of range");
}

ConvexPotential ConvexPotential::zero(int n) {
  return {std::vector<ScalarConvex>(static_cast<std::size_t>(n)), std::vector<ScalarConvex>(static_cast<std::size_t>(n)),
          "zero"};
}

ConvexPotential ConvexPotential::quadratic_velocity(int n, double c) {
  return {std::vector<ScalarConvex>(static_cast<std::size_t>(n), ScalarConvex::quadratic(c)),
          std::vector<ScalarConvex>(static_cast<std::size_t>(n)), "quadratic_velocity"};
}

ConvexPotential ConvexPotential::dry_friction(int n, double k) {
  return {std::vector<ScalarConvex>(static_cast<std::size_t>(n), ScalarConvex::absolute(k)),
          std::vector<ScalarConvex>(static_cast<std::size_t>(n)), "dry_friction"};
}

ConvexPotential ConvexPotential::grid_velocity(int n, const PiecewiseLinearFunction& grid) {
  return {std::vector<ScalarConvex>(static_cast<std::size_t>(n), ScalarConvex(grid)),
          std::vector<ScalarConvex>(static_cast<std::size_t>(n)), "grid"};
}

ConvexPotential ConvexPotential::phase_quadratic(int n, double c, double b) {
  return {std::vector<ScalarConvex>(static_cast<std::size_t>(n), ScalarConvex::quadratic(c)),
          std::vector<ScalarConvex>(static_cast<std::size_t>(n), ScalarConvex::quadratic(b)), "phase_quadratic"};
}

ConvexPotential ConvexPotential::translated(const PhasePoint& shift) const {
  if (shift.dimension() != dimension()) throw DimensionError("ConvexPotential::translated: dimension mismatch");
  auto q = q_parts_;
  auto p = p_parts_;
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = q[i].translated(shift.q[static_cast<Eigen::Index>(i)]);
    p[i] = p[i].translated(shift.p[static_cast<Eigen::Index>(i)]);
  }
  return {std::move(q), std::move(p), tag_ + "+shift"};
}

bool ConvexPotential::is_velocity_only() const {
  for (const auto& g : p_parts_)
    if (!g.is_zero()) return false;
  return true;
}

ExtendedReal ConvexPotential::evaluate(const PhasePoint& z) const {
  if (z.dimension() != dimension()) throw DimensionError("ConvexPotential::evaluate: dimension mismatch");
  ExtendedReal total = 0.0;
  for (int i = 0; i < dimension(); ++i) {
    total += q_parts_[static_cast<std::size_t>(i)].value(z.q[i]);
    total += p_parts_[static_cast<std::size_t>(i)].value(z.p[i]);
  }
  return total;
}

ExtendedReal ConvexPotential::conjugate(const CotangentPoint& a) const {
  if (a.dimension() != dimension()) throw DimensionError("ConvexPotential::conjugate: dimension mismatch");
  ExtendedReal total = 0.0;
  for (int i = 0; i < dimension(); ++i) {
    // a.p pairs with q, a.q pairs with p.
    total += q_parts_[static_cast<std::size_t>(i)].conjugate(a.p[i]);
    if (total.is_infinite()) return total;
    total += p_parts_[static_cast<std::size_t>(i)].conjugate(a.q[i]);
    if (total.is_infinite()) return total;
  }
  return total;
}

PhasePoint ConvexPotential::prox(const PhasePoint& z, double lambda) const {
  if (z.dimension() != dimension()) throw DimensionError("ConvexPotential::prox: dimension mismatch");
  PhasePoint out = z;
  for (int i = 0; i < dimension(); ++i) {
    out.q[i] = q_parts_[static_cast<std::size_t>(i)].prox(z.q[i], lambda);
    out.p[i] = p_parts_[static_cast<std::size_t>(i)].prox(z.p[i], lambda);
  }
  return out;
}

CoordinateBox ConvexPotential::subdifferential(const PhasePoint& z) const {
  if (z.dimension() != dimension()) throw DimensionError("ConvexPotential::subdifferential: dimension mismatch");
  CoordinateBox box;
  for (int i = 0; i < dimension(); ++i) {
    box.p.push_back(q_parts_[static_cast<std::size_t>(i)].subdifferential(z.q[i]));
    box.q.push_back(p_parts_[static_cast<std::size_t>(i)].subdifferential(z.p[i]));
  }
  return box;
}

CoordinateBox ConvexPotential::domain() const {
  CoordinateBox box;
  box.q.assign(q_parts_.size(), Interval::real_line());
  box.p.assign(p_parts_.size(), Interval::real_line());
  return box;
}

CoordinateBox ConvexPotential::symplectic_conjugate_domain() const {
  CoordinateBox box;
  for (std::size_t i = 0; i < q_parts_.size(); ++i) {
    box.q.push_back(p_parts_[i].conjugate_domain());
    box.p.push_back(-q_parts_[i].conjugate_domain());
  }
  return box;
}

std::string ConvexPotential::describe() const {
  std::string out = tag_ + "[";
  for (std::size_t i = 0; i < q_parts_.size(); ++i) {
    if (i) out += "; ";
    out += fmt::format("q{}:{} p{}:{}", i, q_parts_[i].describe(), i, p_parts_[i].describe());
  }
  return out + "]";
}

ExtendedReal symplectic_conjugate(const ConvexPotential& phi, const PhasePoint& z_prime) {
  return phi.conjugate(to_cotangent(z_prime));
}

bool symplectic_subdifferential_check(const ConvexPotential& phi, const PhasePoint& z, const PhasePoint& z_prime,
                                      double tol) {
  const ExtendedReal value = phi.evaluate(z);
  if (value.is_infinite()) throw std::invalid_argument("symplectic_subdifferential_check: phi(z) = +inf");
  const ExtendedReal residual = value + symplectic_conjugate(phi, z_prime) - omega(z_prime, z);
  return residual.is_finite() && residual.raw() <= tol;
}

ExtendedReal sben_gap(const ConvexPotential& phi, const PhasePoint& xh, const PhasePoint& v) {
  const int n = phi.dimension();
  if (xh.dimension() != n || v.dimension() != n) throw DimensionError("sben_gap: dimension mismatch");
  // Separable sum, coordinate by coordinate: with d = v − xh,
  // fᵢ(v_q) + gᵢ(v_p) + fᵢ*(−d_p) + gᵢ*(d_q) − (d_q v_p − v_q d_p).
  ExtendedReal total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double dq = v.q[i] - xh.q[i];
    const double dp = v.p[i] - xh.p[i];
    total += phi.p_parts()[k].conjugate(dq);
    if (total.is_infinite()) return total;
    total += phi.q_parts()[k].conjugate(-dp);
    if (total.is_infinite()) return total;
    total += phi.q_parts()[k].value(v.q[i]);
    total += phi.p_parts()[k].value(v.p[i]);
    total -= dq * v.p[i] - v.q[i] * dp;
  }
  return total;
}

ExtendedReal dissipation_bracket(const ConvexPotential& phi, const PhasePoint& xh, const PhasePoint& v_dissipative) {
  return phi.evaluate(v_dissipative + xh) + symplectic_conjugate(phi, v_dissipative) + omega(xh, v_dissipative);
}

HypothesisDReport hypothesis_d_check(const ConvexPotential& phi, int samples, const PhaseBox& box,
                                     std::uint64_t seed, double tol) {
  box.validate();
  if (box.dimension() != phi.dimension()) throw DimensionError("hypothesis_d_check: box dimension mismatch");
  const int n = phi.dimension();
  const CoordinateBox dom = phi.symplectic_conjugate_domain();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto draw_in = [&](const Interval& domain, double lo, double hi) {
    const double a = std::max(lo, domain.lower), b = std::min(hi, domain.upper);
    if (a > b) return domain.clamp(0.5 * (lo + hi));
    return a == b ? a : draw(a, b);
  };

  HypothesisDReport report;
  report.samples = samples;
  report.min_value = std::numeric_limits<double>::infinity();
  report.argmin_z = PhasePoint::zero(n);
  report.argmin_z_prime = PhasePoint::zero(n);
  for (int s = 0; s < samples; ++s) {
    PhasePoint z = PhasePoint::zero(n), zp = PhasePoint::zero(n);
    for (int i = 0; i < n; ++i) {
      z.q[i] = draw(box.lower.q[i], box.upper.q[i]);
      z.p[i] = draw(box.lower.p[i], box.upper.p[i]);
      zp.q[i] = draw_in(dom.q[static_cast<std::size_t>(i)], box.lower.q[i], box.upper.q[i]);
      zp.p[i] = draw_in(dom.p[static_cast<std::size_t>(i)], box.lower.p[i], box.upper.p[i]);
    }
    const ExtendedReal total = phi.evaluate(z) + symplectic_conjugate(phi, zp);
    if (total.is_infinite()) continue;
    ++report.finite_pairs;
    if (total.raw() < report.min_value) {
      report.min_value = total.raw();
      report.argmin_z = z;
      report.argmin_z_prime = zp;
    }
  }

  const CoordinateBox at_zero = phi.subdifferential(PhasePoint::zero(n));
  for (const auto& interval : at_zero.q) report.zero_is_minimizer &= interval.contains(0.0, 1e-12);
  for (const auto& interval : at_zero.p) report.zero_is_minimizer &= interval.contains(0.0, 1e-12);

  report.violated = (report.finite_pairs > 0 && report.min_value < -tol) || !report.zero_is_minimizer;
  return report;
}

}  // namespace sben
