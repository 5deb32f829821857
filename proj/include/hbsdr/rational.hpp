#pragma once

#include <cstdint>
#include <compare>
#include <iosfwd>
#include <string>

namespace hbsdr {

// Exact rational number on int64 with __int128 intermediates.
// Throws std::overflow_error when a reduced result no longer fits in 64 bits;
// all quantities handled here (dyadic knots, spline refinement weights,
// incidence coefficients) stay far below that in practice.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational reduced(__int128 n, __int128 d);
  std::int64_t num_;
  std::int64_t den_;  // > 0 always
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace hbsdr
