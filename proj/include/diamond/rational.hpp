#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace diamond {

// Exact fraction over 64-bit integers. Intermediate products use 128-bit
// arithmetic; results that do not fit back into 64 bits throw
// std::overflow_error instead of wrapping.
class Rational {
 public:
  using Int = std::int64_t;

  constexpr Rational() = default;
  constexpr Rational(Int value) : num_(value), den_(1) {}  // NOLINT(implicit)
  Rational(Int num, Int den) { assign(num, den); }

  constexpr Int num() const { return num_; }
  constexpr Int den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Parses "a", "-a" or "a/b".
  static Rational parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    using W = __int128;
    return from_wide(W(a.num_) * b.den_ + W(b.num_) * a.den_, W(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    using W = __int128;
    return from_wide(W(a.num_) * b.den_ - W(b.num_) * a.den_, W(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    using W = __int128;
    return from_wide(W(a.num_) * b.num_, W(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    using W = __int128;
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(W(a.num_) * b.den_, W(a.den_) * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    using W = __int128;
    const W lhs = W(a.num_) * b.den_;
    const W rhs = W(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend Rational abs(const Rational& r) { return r.num_ < 0 ? -r : r; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  void assign(Int num, Int den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const Int g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  static Rational from_wide(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
      const __int128 r = a % b;
      a = b;
      b = r;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    constexpr __int128 lo = INT64_MIN;
    constexpr __int128 hi = INT64_MAX;
    if (num < lo || num > hi || den > hi) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<Int>(num);
    r.den_ = static_cast<Int>(den);
    return r;
  }

  Int num_ = 0;
  Int den_ = 1;
};

}  // namespace diamond
