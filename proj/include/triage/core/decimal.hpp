#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace triage {

// Exact reduced fraction. Used where a price ratio must be computed without
// float drift, so that equal ratios always map to the same double.
struct Ratio {
  __int128 num = 0;
  __int128 den = 1;

  double to_double() const;
  // Compares num/den against 1.
  bool at_least_one() const { return num >= den; }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

// Fixed-point decimal: value = mantissa * 10^-scale. The scale is part of the
// canonical text form ("80.00" stays "80.00") but equality and ordering are by
// numeric value.
class Decimal {
 public:
  static constexpr int kMaxScale = 12;

  constexpr Decimal() = default;

  static Decimal from_units(std::int64_t mantissa, int scale);
  static std::optional<Decimal> parse(std::string_view text);
  // Throws Error(kParseError) on malformed input.
  static Decimal from_string(std::string_view text);
  // Shortest round-trip text of the double, parsed back as a decimal.
  static Decimal from_double(double value);

  std::int64_t mantissa() const { return mantissa_; }
  int scale() const { return scale_; }

  bool is_positive() const { return mantissa_ > 0; }
  bool is_zero() const { return mantissa_ == 0; }

  std::string to_string() const;
  double to_double() const;

  Decimal operator+(const Decimal& other) const;
  Decimal operator-(const Decimal& other) const;
  Decimal operator*(const Decimal& other) const;

  // Exact quotient at the smallest scale >= dividend scale that represents it,
  // otherwise rounded half-to-even at max_scale.
  static Decimal divide(const Decimal& dividend, const Decimal& divisor,
                        int max_scale = 8);

  // Exact a / b as a reduced fraction. b must be nonzero.
  static Ratio ratio(const Decimal& a, const Decimal& b);

  friend bool operator==(const Decimal& a, const Decimal& b);
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

 private:
  constexpr Decimal(std::int64_t mantissa, int scale)
      : mantissa_(mantissa), scale_(scale) {}

  std::int64_t mantissa_ = 0;
  int scale_ = 0;
};

}  // namespace triage
