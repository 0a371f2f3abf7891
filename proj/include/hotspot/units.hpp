#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace hotspot {

/// Integer-valued physical quantity. All simulation arithmetic is exact:
/// time in microseconds, power in milliwatts, energy in nanojoules
/// (1 mW x 1 us = 1 nJ), rates in bits per second.
template <class Tag>
class Quantity {
 public:
  using rep = std::int64_t;

  constexpr Quantity() = default;
  constexpr explicit Quantity(rep value) : value_(value) {}

  constexpr rep count() const { return value_; }

  constexpr auto operator<=>(const Quantity&) const = default;

  constexpr Quantity operator+(Quantity other) const { return Quantity{value_ + other.value_}; }
  constexpr Quantity operator-(Quantity other) const { return Quantity{value_ - other.value_}; }
  constexpr Quantity operator-() const { return Quantity{-value_}; }
  constexpr Quantity operator*(rep k) const { return Quantity{value_ * k}; }
  constexpr Quantity& operator+=(Quantity other) {
    value_ += other.value_;
    return *this;
  }
  constexpr Quantity& operator-=(Quantity other) {
    value_ -= other.value_;
    return *this;
  }

  static constexpr Quantity max() { return Quantity{std::numeric_limits<rep>::max()}; }

 private:
  rep value_ = 0;
};

using Micros = Quantity<struct MicrosTag>;
using Milliwatts = Quantity<struct MilliwattsTag>;
using Nanojoules = Quantity<struct NanojoulesTag>;
using BitRate = Quantity<struct BitRateTag>;

constexpr Nanojoules operator*(Milliwatts p, Micros t) { return Nanojoules{p.count() * t.count()}; }
constexpr Nanojoules operator*(Micros t, Milliwatts p) { return p * t; }

constexpr Micros microseconds(std::int64_t n) { return Micros{n}; }
constexpr Micros milliseconds(std::int64_t n) { return Micros{n * 1'000}; }
constexpr Micros seconds(std::int64_t n) { return Micros{n * 1'000'000}; }
constexpr Nanojoules millijoules(std::int64_t n) { return Nanojoules{n * 1'000'000}; }
constexpr BitRate kbps(std::int64_t n) { return BitRate{n * 1'000}; }
constexpr BitRate mbps(std::int64_t n) { return BitRate{n * 1'000'000}; }

namespace literals {
constexpr Micros operator""_us(unsigned long long n) { return Micros{static_cast<std::int64_t>(n)}; }
constexpr Micros operator""_ms(unsigned long long n) { return milliseconds(static_cast<std::int64_t>(n)); }
constexpr Micros operator""_s(unsigned long long n) { return seconds(static_cast<std::int64_t>(n)); }
constexpr Milliwatts operator""_mW(unsigned long long n) { return Milliwatts{static_cast<std::int64_t>(n)}; }
constexpr Nanojoules operator""_mJ(unsigned long long n) { return millijoules(static_cast<std::int64_t>(n)); }
constexpr BitRate operator""_bps(unsigned long long n) { return BitRate{static_cast<std::int64_t>(n)}; }
}  // namespace literals

/// Parses a plain decimal ("12", "-0.25", "2.500") into an integer scaled by
/// 10^scale_digits. Fractional digits beyond the scale must be zero, so the
/// conversion is exact or it throws ParseError.
std::int64_t parse_fixed(std::string_view text, int scale_digits);

/// Formats value / 10^scale_digits as a decimal with exactly scale_digits
/// fractional digits. No exponent notation.
std::string format_fixed(std::int64_t value, int scale_digits);

/// Rounds numerator / denominator (denominator > 0) to the nearest integer,
/// halves away from zero. Uses 128-bit intermediates.
std::int64_t round_div(__int128 numerator, __int128 denominator);

/// Ceil of numerator / denominator for numerator >= 0, denominator > 0.
std::int64_t ceil_div(__int128 numerator, __int128 denominator);

}  // namespace hotspot
