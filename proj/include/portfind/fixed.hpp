#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace portfind {

// Signed fixed-point decimal with 12 fractional digits stored in an int64.
// All balances, rates and scores in this project use this representation:
// results are bit-identical across platforms, unlike binary floating point.
//
// Multiplication and division truncate toward zero. Truncation keeps the
// score arithmetic scale invariant: for integer lam > 0,
// (lam*a)/(lam*b) == a/b exactly, because floor(lam*x / lam*y) == floor(x/y).
//
// Arithmetic is range checked; anything that leaves the representable range
// throws std::overflow_error.
class Fixed {
 public:
  static constexpr int64_t kScale = 1'000'000'000'000;  // 10^12
  static constexpr int kFracDigits = 12;

  constexpr Fixed() = default;

  static constexpr Fixed from_raw(int64_t raw) {
    Fixed f;
    f.raw_ = raw;
    return f;
  }
  static Fixed from_int(int64_t units);
  // Nearest representable value; rejects non-finite input and values
  // outside the fixed-point range.
  static Fixed from_double(double v);
  // Parses "[-]digits[.digits]" with at most 12 fraction digits.
  // Throws std::invalid_argument on anything else.
  static Fixed parse(std::string_view text);

  constexpr int64_t raw() const { return raw_; }
  constexpr bool is_zero() const { return raw_ == 0; }
  double to_double() const { return static_cast<double>(raw_) / kScale; }

  // Minimal decimal form: no trailing fraction zeros, no '.' for integers.
  std::string str() const;

  Fixed operator+(Fixed o) const;
  Fixed operator-(Fixed o) const;
  Fixed operator-() const;
  Fixed operator*(Fixed o) const;  // truncates toward zero
  Fixed operator/(Fixed o) const;  // truncates toward zero
  Fixed& operator+=(Fixed o) { return *this = *this + o; }
  Fixed& operator-=(Fixed o) { return *this = *this - o; }

  // a*b/c with a single truncation at the end (128-bit intermediate).
  static Fixed mul_div(Fixed a, Fixed b, Fixed c);
  // As mul_div, but reports overflow as nullopt instead of throwing.
  static std::optional<Fixed> try_mul_div(Fixed a, Fixed b, Fixed c);

  Fixed abs() const;
  // Largest integer <= value (floor toward negative infinity).
  int64_t floor_units() const;

  friend constexpr auto operator<=>(Fixed a, Fixed b) = default;

 private:
  int64_t raw_ = 0;
};

}  // namespace portfind
