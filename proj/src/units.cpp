#include "hotspot/units.hpp"

#include <cctype>

#include "hotspot/error.hpp"

namespace hotspot {

namespace {

constexpr std::int64_t kPow10[] = {1,
                                   10,
                                   100,
                                   1'000,
                                   10'000,
                                   100'000,
                                   1'000'000,
                                   10'000'000,
                                   100'000'000,
                                   1'000'000'000,
                                   10'000'000'000,
                                   100'000'000'000,
                                   1'000'000'000'000};

}  // namespace

std::int64_t parse_fixed(std::string_view text, int scale_digits) {
  if (scale_digits < 0 || scale_digits > 12) {
    throw ParseError("unsupported decimal scale");
  }
  const std::string original(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) {
    throw ParseError("expected a decimal number, got '" + original + "'");
  }

  __int128 integer_part = 0;
  __int128 fraction = 0;
  int fraction_digits = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_point) {
        throw ParseError("expected a decimal number, got '" + original + "'");
      }
      seen_point = true;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) == 0) {
      throw ParseError("expected a decimal number, got '" + original + "'");
    }
    seen_digit = true;
    const int digit = c - '0';
    if (!seen_point) {
      integer_part = integer_part * 10 + digit;
      if (integer_part > std::numeric_limits<std::int64_t>::max()) {
        throw ParseError("number out of range: '" + original + "'");
      }
    } else if (fraction_digits < scale_digits) {
      fraction = fraction * 10 + digit;
      ++fraction_digits;
    } else if (digit != 0) {
      throw ParseError("'" + original + "' has more than " + std::to_string(scale_digits) +
                       " fractional digits");
    }
  }
  if (!seen_digit) {
    throw ParseError("expected a decimal number, got '" + original + "'");
  }
  while (fraction_digits < scale_digits) {
    fraction *= 10;
    ++fraction_digits;
  }
  const __int128 value = integer_part * kPow10[scale_digits] + fraction;
  if (value > std::numeric_limits<std::int64_t>::max()) {
    throw ParseError("number out of range: '" + original + "'");
  }
  return static_cast<std::int64_t>(negative ? -value : value);
}

std::string format_fixed(std::int64_t value, int scale_digits) {
  const bool negative = value < 0;
  // Widen before negating so INT64_MIN is safe.
  __int128 magnitude = value;
  if (negative) magnitude = -magnitude;
  const __int128 scale = kPow10[scale_digits];
  const auto whole = static_cast<std::uint64_t>(magnitude / scale);
  const auto frac = static_cast<std::uint64_t>(magnitude % scale);

  std::string out = negative ? "-" : "";
  out += std::to_string(whole);
  if (scale_digits > 0) {
    std::string digits = std::to_string(frac);
    out += '.';
    out.append(static_cast<std::size_t>(scale_digits) - digits.size(), '0');
    out += digits;
  }
  return out;
}

std::int64_t round_div(__int128 numerator, __int128 denominator) {
  const bool negative = numerator < 0;
  const __int128 magnitude = negative ? -numerator : numerator;
  const __int128 q = (magnitude + denominator / 2) / denominator;
  return static_cast<std::int64_t>(negative ? -q : q);
}

std::int64_t ceil_div(__int128 numerator, __int128 denominator) {
  return static_cast<std::int64_t>((numerator + denominator - 1) / denominator);
}

}  // namespace hotspot
