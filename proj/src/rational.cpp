#include "qlevy/rational.hpp"

#include <limits>
#include <numeric>

#include "qlevy/errors.hpp"

namespace qlevy {
namespace {

__extension__ using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make_reduced(i128 num, i128 den) {
  if (den == 0) throw Error(Errc::InvalidArgument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr i128 lo = std::numeric_limits<std::int64_t>::min();
  constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi)
    throw Error(Errc::InvalidArgument, "rational arithmetic overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(Errc::InvalidArgument, "rational with zero denominator");
  if (den < 0) {
    if (num == std::numeric_limits<std::int64_t>::min() ||
        den == std::numeric_limits<std::int64_t>::min())
      throw Error(Errc::InvalidArgument, "rational arithmetic overflow");
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make_reduced(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(Errc::InvalidArgument, "rational division by zero");
  return make_reduced(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

Rational Rational::operator-() const { return make_reduced(-i128(num_), den_); }

Rational Rational::abs() const { return num_ < 0 ? -*this : *this; }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
}

Rational operator*(std::int64_t k, const Rational& r) { return Rational(k) * r; }

Rational gcd(const Rational& a, const Rational& b) {
  // gcd(p/q, r/s) = gcd(p*s, r*q) / (q*s), then reduced.
  const i128 num = gcd128(i128(a.num()) * b.den(), i128(b.num()) * a.den());
  return make_reduced(num, i128(a.den()) * b.den());
}

bool divides(const Rational& generator, const Rational& value) {
  if (generator.is_zero()) return value.is_zero();
  return (value / generator).is_integer();
}

}  // namespace qlevy
