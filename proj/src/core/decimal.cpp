#include "triage/core/decimal.hpp"

#include <charconv>
#include <cstdlib>
#include <limits>

#include "triage/core/error.hpp"

namespace triage {
namespace {

using i128 = __int128;

i128 pow10(int n) {
  i128 r = 1;
  for (int i = 0; i < n; ++i) r *= 10;
  return r;
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorCode::kInvalidArgument, "decimal overflow");
  }
  return static_cast<std::int64_t>(v);
}

// Drops trailing zeros until the scale fits kMaxScale.
void fit_scale(i128& m, int& scale) {
  while (scale > Decimal::kMaxScale) {
    if (m % 10 != 0) {
      throw Error(ErrorCode::kInvalidArgument, "decimal precision exceeded");
    }
    m /= 10;
    --scale;
  }
}

}  // namespace

double Ratio::to_double() const {
  return static_cast<double>(static_cast<long double>(num) /
                             static_cast<long double>(den));
}

Decimal Decimal::from_units(std::int64_t mantissa, int scale) {
  if (scale < 0 || scale > kMaxScale) {
    throw Error(ErrorCode::kInvalidArgument, "decimal scale out of range");
  }
  return Decimal(mantissa, scale);
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  if (text.empty()) return std::nullopt;

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  i128 m = 0;
  int scale = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    seen_digit = true;
    m = m * 10 + (c - '0');
    if (seen_point) ++scale;
    if (m > std::numeric_limits<std::int64_t>::max()) return std::nullopt;
  }
  if (!seen_digit || scale > kMaxScale) return std::nullopt;
  return Decimal(static_cast<std::int64_t>(negative ? -m : m), scale);
}

Decimal Decimal::from_string(std::string_view text) {
  auto d = parse(text);
  if (!d) {
    throw Error(ErrorCode::kParseError,
                "malformed decimal '" + std::string(text) + "'");
  }
  return *d;
}

Decimal Decimal::from_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::fixed);
  if (ec != std::errc()) {
    throw Error(ErrorCode::kInvalidArgument, "unrepresentable decimal");
  }
  return from_string(std::string_view(buf, static_cast<std::size_t>(end - buf)));
}

std::string Decimal::to_string() const {
  i128 m = mantissa_;
  bool negative = m < 0;
  if (negative) m = -m;
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(m % 10)));
    m /= 10;
  } while (m != 0);
  while (static_cast<int>(digits.size()) <= scale_) digits.insert(digits.begin(), '0');
  if (scale_ > 0) digits.insert(digits.end() - scale_, '.');
  if (negative) digits.insert(digits.begin(), '-');
  return digits;
}

double Decimal::to_double() const {
  return std::strtod(to_string().c_str(), nullptr);
}

Decimal Decimal::operator+(const Decimal& other) const {
  int s = std::max(scale_, other.scale_);
  i128 a = static_cast<i128>(mantissa_) * pow10(s - scale_);
  i128 b = static_cast<i128>(other.mantissa_) * pow10(s - other.scale_);
  return Decimal(narrow(a + b), s);
}

Decimal Decimal::operator-(const Decimal& other) const {
  return *this + Decimal(-other.mantissa_, other.scale_);
}

Decimal Decimal::operator*(const Decimal& other) const {
  i128 m = static_cast<i128>(mantissa_) * other.mantissa_;
  int s = scale_ + other.scale_;
  fit_scale(m, s);
  return Decimal(narrow(m), s);
}

Decimal Decimal::divide(const Decimal& dividend, const Decimal& divisor,
                        int max_scale) {
  if (divisor.is_zero()) {
    throw Error(ErrorCode::kInvalidArgument, "decimal division by zero");
  }
  max_scale = std::min(max_scale, kMaxScale);
  // dividend / divisor at scale s:
  //   q = dividend.m * 10^(divisor.scale + s) / (divisor.m * 10^dividend.scale)
  i128 den = static_cast<i128>(divisor.mantissa_) * pow10(dividend.scale_);
  for (int s = std::min(dividend.scale_, max_scale); s <= max_scale; ++s) {
    i128 num = static_cast<i128>(dividend.mantissa_) * pow10(divisor.scale_ + s);
    if (num % den == 0) return Decimal(narrow(num / den), s);
  }
  i128 num = static_cast<i128>(dividend.mantissa_) * pow10(divisor.scale_ + max_scale);
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 q = num / den;
  i128 r = num % den;
  i128 twice = abs128(r) * 2;
  if (twice > den || (twice == den && (q % 2 != 0))) q += (num < 0 ? -1 : 1);
  return Decimal(narrow(q), max_scale);
}

Ratio Decimal::ratio(const Decimal& a, const Decimal& b) {
  if (b.is_zero()) {
    throw Error(ErrorCode::kInvalidArgument, "ratio with zero denominator");
  }
  i128 num = static_cast<i128>(a.mantissa_) * pow10(b.scale_);
  i128 den = static_cast<i128>(b.mantissa_) * pow10(a.scale_);
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Ratio{num, den};
}

bool operator==(const Decimal& a, const Decimal& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
  int s = std::max(a.scale_, b.scale_);
  i128 x = static_cast<i128>(a.mantissa_) * pow10(s - a.scale_);
  i128 y = static_cast<i128>(b.mantissa_) * pow10(s - b.scale_);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace triage
