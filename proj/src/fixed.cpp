#include "portfind/fixed.hpp"

#include <cmath>
#include <stdexcept>

namespace portfind {

namespace {

using int128 = __int128;

constexpr int64_t kMaxRaw = INT64_MAX;
constexpr int64_t kMinRaw = INT64_MIN;

Fixed from_checked(int128 raw) {
  if (raw > kMaxRaw || raw < kMinRaw) {
    throw std::overflow_error("fixed-point overflow");
  }
  return Fixed::from_raw(static_cast<int64_t>(raw));
}

}  // namespace

Fixed Fixed::from_int(int64_t units) {
  return from_checked(static_cast<int128>(units) * kScale);
}

Fixed Fixed::from_double(double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("fixed-point value must be finite");
  }
  double scaled = std::nearbyint(v * static_cast<double>(kScale));
  if (scaled >= 9.3e18 || scaled <= -9.3e18) {
    throw std::overflow_error("fixed-point overflow");
  }
  return from_raw(static_cast<int64_t>(scaled));
}

Fixed Fixed::parse(std::string_view text) {
  const auto fail = [&] {
    throw std::invalid_argument("bad decimal literal: '" + std::string(text) + "'");
  };
  size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && text[pos] == '-') {
    negative = true;
    ++pos;
  }
  int128 units = 0;
  size_t int_digits = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    units = units * 10 + (text[pos] - '0');
    if (units > kMaxRaw) fail();  // far past the representable range already
    ++pos;
    ++int_digits;
  }
  int64_t frac = 0;
  size_t frac_digits = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (frac_digits == kFracDigits) fail();
      frac = frac * 10 + (text[pos] - '0');
      ++pos;
      ++frac_digits;
    }
    if (frac_digits == 0) fail();
  }
  if (pos != text.size() || (int_digits == 0 && frac_digits == 0)) fail();
  for (size_t i = frac_digits; i < kFracDigits; ++i) frac *= 10;
  int128 raw = units * kScale + frac;
  return from_checked(negative ? -raw : raw);
}

std::string Fixed::str() const {
  uint64_t mag = raw_ < 0 ? 0ull - static_cast<uint64_t>(raw_) : static_cast<uint64_t>(raw_);
  uint64_t units = mag / kScale;
  uint64_t frac = mag % kScale;
  std::string out;
  if (raw_ < 0) out += '-';
  out += std::to_string(units);
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, kFracDigits - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

Fixed Fixed::operator+(Fixed o) const {
  int64_t out;
  if (__builtin_add_overflow(raw_, o.raw_, &out)) {
    throw std::overflow_error("fixed-point overflow");
  }
  return from_raw(out);
}

Fixed Fixed::operator-(Fixed o) const {
  int64_t out;
  if (__builtin_sub_overflow(raw_, o.raw_, &out)) {
    throw std::overflow_error("fixed-point overflow");
  }
  return from_raw(out);
}

Fixed Fixed::operator-() const {
  if (raw_ == kMinRaw) throw std::overflow_error("fixed-point overflow");
  return from_raw(-raw_);
}

Fixed Fixed::operator*(Fixed o) const {
  return from_checked(static_cast<int128>(raw_) * o.raw_ / kScale);
}

Fixed Fixed::operator/(Fixed o) const {
  if (o.raw_ == 0) throw std::domain_error("fixed-point division by zero");
  return from_checked(static_cast<int128>(raw_) * kScale / o.raw_);
}

Fixed Fixed::mul_div(Fixed a, Fixed b, Fixed c) {
  if (c.raw_ == 0) throw std::domain_error("fixed-point division by zero");
  return from_checked(static_cast<int128>(a.raw_) * b.raw_ / c.raw_);
}

std::optional<Fixed> Fixed::try_mul_div(Fixed a, Fixed b, Fixed c) {
  if (c.raw_ == 0) return std::nullopt;
  int128 raw = static_cast<int128>(a.raw_) * b.raw_ / c.raw_;
  if (raw > kMaxRaw || raw < kMinRaw) return std::nullopt;
  return from_raw(static_cast<int64_t>(raw));
}

Fixed Fixed::abs() const {
  if (raw_ == kMinRaw) throw std::overflow_error("fixed-point overflow");
  return from_raw(raw_ < 0 ? -raw_ : raw_);
}

int64_t Fixed::floor_units() const {
  int64_t q = raw_ / kScale;
  if (raw_ < 0 && raw_ % kScale != 0) --q;
  return q;
}

}  // namespace portfind
