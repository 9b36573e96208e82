#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace banach {

/// Exact rational with 64-bit numerator and denominator.
///
/// Always normalized: den > 0 and gcd(num, den) = 1. Arithmetic goes through
/// 128-bit intermediates and throws std::overflow_error if the reduced result
/// does not fit back into 64 bits.
class Rational {
 public:
  constexpr Rational() noexcept = default;
  constexpr Rational(std::int64_t value) noexcept : num_(value) {}  // NOLINT
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }

  /// Largest integer not exceeding the value.
  std::int64_t floor() const noexcept;

  std::string to_string() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Compare a/b with c/d for nonnegative integers and positive b, d.
inline std::strong_ordering compare_fractions(std::int64_t a, std::int64_t b,
                                              std::int64_t c, std::int64_t d) noexcept {
  return static_cast<__int128>(a) * d <=> static_cast<__int128>(c) * b;
}

}  // namespace banach
