#pragma once

#include <compare>
#include <iosfwd>
#include <limits>

namespace sben {

/// A value in R ∪ {+∞}.
///
/// Convex potentials and their conjugates are proper, so −∞ never arises
/// legitimately. Operations that would produce it, or the undefined ∞ − ∞,
/// throw std::domain_error.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit from finite reals

  static constexpr ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  constexpr bool is_finite() const { return value_ < std::numeric_limits<double>::infinity(); }
  constexpr bool is_infinite() const { return !is_finite(); }

  /// Throws std::domain_error when the value is +∞.
  double value() const;

  /// The underlying double (+inf for +∞).
  constexpr double raw() const { return value_; }

  ExtendedReal& operator+=(ExtendedReal rhs);
  ExtendedReal& operator-=(ExtendedReal rhs);

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) { return a += b; }
  friend ExtendedReal operator-(ExtendedReal a, ExtendedReal b) { return a -= b; }
  /// Scaling by a nonnegative factor; 0 · ∞ is rejected.
  friend ExtendedReal operator*(double s, ExtendedReal a);

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) { return a.value_ == b.value_; }
  friend constexpr auto operator<=>(ExtendedReal a, ExtendedReal b) { return a.value_ <=> b.value_; }

 private:
  double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, ExtendedReal x);

}  // namespace sben
