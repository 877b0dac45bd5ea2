#include "sben/symplectic.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "sben/errors.hpp"

namespace sben {

namespace {

void require_same(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

void validate_pair(const Vector& a, const Vector& b, const char* what) {
  require_same(a.size(), b.size(), what);
  if (a.size() < 1 || a.size() > kMaxDimension) {
    throw DimensionError(std::string(what) + ": dimension must be in [1, " +
                         std::to_string(kMaxDimension) + "]");
  }
  if (!a.allFinite() || !b.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite component");
  }
}

}  // namespace

PhasePoint PhasePoint::zero(int n) { return {Vector::Zero(n), Vector::Zero(n)}; }

CotangentPoint CotangentPoint::zero(int n) { return {Vector::Zero(n), Vector::Zero(n)}; }

PhasePoint& PhasePoint::operator+=(const PhasePoint& o) {
  require_same(q.size(), o.q.size(), "PhasePoint +");
  q += o.q;
  p += o.p;
  return *this;
}

PhasePoint& PhasePoint::operator-=(const PhasePoint& o) {
  require_same(q.size(), o.q.size(), "PhasePoint -");
  q -= o.q;
  p -= o.p;
  return *this;
}

PhasePoint& PhasePoint::operator*=(double s) {
  q *= s;
  p *= s;
  return *this;
}

PhasePoint operator+(PhasePoint a, const PhasePoint& b) { return a += b; }
PhasePoint operator-(PhasePoint a, const PhasePoint& b) { return a -= b; }
PhasePoint operator*(double s, PhasePoint a) { return a *= s; }
PhasePoint operator-(PhasePoint a) { return a *= -1.0; }

bool operator==(const PhasePoint& a, const PhasePoint& b) {
  return a.q.size() == b.q.size() && a.q == b.q && a.p == b.p;
}

bool operator==(const CotangentPoint& a, const CotangentPoint& b) {
  return a.p.size() == b.p.size() && a.p == b.p && a.q == b.q;
}

double norm(const PhasePoint& z) { return std::sqrt(z.q.squaredNorm() + z.p.squaredNorm()); }

double max_abs(const PhasePoint& z) {
  return std::max(z.q.cwiseAbs().maxCoeff(), z.p.cwiseAbs().maxCoeff());
}

void validate(const PhasePoint& z) { validate_pair(z.q, z.p, "PhasePoint"); }
void validate(const CotangentPoint& a) { validate_pair(a.p, a.q, "CotangentPoint"); }

double pairing(const Vector& q, const Vector& p) {
  require_same(q.size(), p.size(), "pairing");
  return q.dot(p);
}

double double_pairing(const CotangentPoint& a, const PhasePoint& z) {
  require_same(a.p.size(), z.q.size(), "double_pairing");
  return a.q.dot(z.p) + z.q.dot(a.p);
}

CotangentPoint to_cotangent(const PhasePoint& z) { return {-z.p, z.q}; }

PhasePoint to_phase(const CotangentPoint& a) { return {-a.q, a.p}; }

double omega(const PhasePoint& z1, const PhasePoint& z2) {
  require_same(z1.q.size(), z2.q.size(), "omega");
  return z1.q.dot(z2.p) - z2.q.dot(z1.p);
}

PhasePoint symplectic_gradient(const CotangentPoint& dh) { return -to_phase(dh); }

std::ostream& operator<<(std::ostream& os, const PhasePoint& z) {
  os << "(q=[";
  for (Eigen::Index i = 0; i < z.q.size(); ++i) os << (i ? ", " : "") << z.q[i];
  os << "], p=[";
  for (Eigen::Index i = 0; i < z.p.size(); ++i) os << (i ? ", " : "") << z.p[i];
  return os << "])";
}

}  // namespace sben
