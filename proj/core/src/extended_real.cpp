#include "sben/extended_real.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace sben {

double ExtendedReal::value() const {
  if (is_infinite()) throw std::domain_error("ExtendedReal: value() of +inf");
  return value_;
}

ExtendedReal& ExtendedReal::operator+=(ExtendedReal rhs) {
  if (std::isnan(rhs.value_) || rhs.value_ == -std::numeric_limits<double>::infinity())
    throw std::domain_error("ExtendedReal: operand is not in R u {+inf}");
  value_ += rhs.value_;
  return *this;
}

ExtendedReal& ExtendedReal::operator-=(ExtendedReal rhs) {
  if (rhs.is_infinite()) {
    throw std::domain_error(is_infinite() ? "ExtendedReal: inf - inf is undefined"
                                          : "ExtendedReal: finite - inf leaves R u {+inf}");
  }
  value_ -= rhs.value_;
  return *this;
}

ExtendedReal operator*(double s, ExtendedReal a) {
  if (s < 0.0) throw std::domain_error("ExtendedReal: negative scaling");
  if (a.is_infinite()) {
    if (s == 0.0) throw std::domain_error("ExtendedReal: 0 * inf is undefined");
    return a;
  }
  return ExtendedReal(s * a.value_);
}

std::ostream& operator<<(std::ostream& os, ExtendedReal x) {
  if (x.is_infinite()) return os << "+inf";
  return os << x.raw();
}

}  // namespace sben
