#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace qlevy {

/// Reduced fraction with a positive denominator. Arithmetic is carried out in
/// 128-bit intermediates and throws InvalidArgument on overflow of the
/// reduced 64-bit result.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const noexcept { return den_ == 1; }
  bool is_zero() const noexcept { return num_ == 0; }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;
  Rational abs() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational operator*(std::int64_t k, const Rational& r);

/// Largest c >= 0 with a, b in cZ. gcd(0, 0) = 0.
Rational gcd(const Rational& a, const Rational& b);

/// True when `value` is an integer multiple of `generator` (generator 0 only
/// divides 0).
bool divides(const Rational& generator, const Rational& value);

}  // namespace qlevy
