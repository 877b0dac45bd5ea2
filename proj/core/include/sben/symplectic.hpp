#pragma once

// Finite-dimensional symplectic linear algebra on N = X × Y with X = Y = R^n
// and the dot-product duality.

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>

namespace sben {

/// Largest supported configuration dimension n. Vectors live on the stack.
inline constexpr int kMaxDimension = 8;

using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDimension, 1>;

/// z = (q, p) ∈ N = X × Y.
struct PhasePoint {
  Vector q;
  Vector p;

  static PhasePoint zero(int n);

  int dimension() const { return static_cast<int>(q.size()); }

  PhasePoint& operator+=(const PhasePoint& o);
  PhasePoint& operator-=(const PhasePoint& o);
  PhasePoint& operator*=(double s);
};

/// An element of N* = Y × X. Slot `p` lives in Y and pairs with the q-slot of
/// a PhasePoint; slot `q` lives in X and pairs with the p-slot. DH(z) stores
/// D_qH in `p` and D_pH in `q`.
struct CotangentPoint {
  Vector p;
  Vector q;

  static CotangentPoint zero(int n);

  int dimension() const { return static_cast<int>(p.size()); }
};

PhasePoint operator+(PhasePoint a, const PhasePoint& b);
PhasePoint operator-(PhasePoint a, const PhasePoint& b);
PhasePoint operator*(double s, PhasePoint a);
PhasePoint operator-(PhasePoint a);
bool operator==(const PhasePoint& a, const PhasePoint& b);
bool operator==(const CotangentPoint& a, const CotangentPoint& b);

/// Euclidean norm of (q, p) in R^{2n}.
double norm(const PhasePoint& z);
double max_abs(const PhasePoint& z);

/// Throws DimensionError / std::invalid_argument unless q and p share a
/// dimension 1 ≤ n ≤ kMaxDimension and every component is finite.
void validate(const PhasePoint& z);
void validate(const CotangentPoint& a);

/// ⟨q, p⟩.
double pairing(const Vector& q, const Vector& p);

/// ⟨⟨(p₁, q₁), (q₂, p₂)⟩⟩ = ⟨q₁, p₂⟩ + ⟨q₂, p₁⟩.
double double_pairing(const CotangentPoint& a, const PhasePoint& z);

/// J(q, p) = (−p, q).
CotangentPoint to_cotangent(const PhasePoint& z);

/// J*(p, q) = (−q, p).
PhasePoint to_phase(const CotangentPoint& a);

/// ω(z₁, z₂) = ⟨q₁, p₂⟩ − ⟨q₂, p₁⟩.
double omega(const PhasePoint& z1, const PhasePoint& z2);

/// XH = −J* DH, i.e. (D_pH, −D_qH).
PhasePoint symplectic_gradient(const CotangentPoint& dh);

std::ostream& operator<<(std::ostream& os, const PhasePoint& z);

}  // namespace sben
