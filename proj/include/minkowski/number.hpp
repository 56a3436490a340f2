#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/rational.hpp>

namespace minkowski {

using Rational = boost::rational<std::int64_t>;

/// Absolute tolerance used for comparisons when a value has no exact form.
inline constexpr double kFloatTolerance = 1e-12;

/// A real parameter that may also carry an exact rational value.
///
/// Model files give ratios and offsets either as `[p, q]` pairs or as plain
/// reals. Comparisons are exact when both sides are rational and fall back
/// to a 1e-12 tolerance otherwise.
class Number {
 public:
  Number() = default;
  Number(double value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Number(Rational exact)                   // NOLINT(google-explicit-constructor)
      : value_(boost::rational_cast<double>(exact)), exact_(exact) {}
  Number(std::int64_t num, std::int64_t den) : Number(Rational(num, den)) {}

  double value() const { return value_; }
  const std::optional<Rational>& exact() const { return exact_; }
  bool is_exact() const { return exact_.has_value(); }

  friend Number operator+(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) return Number(*a.exact_ + *b.exact_);
    return Number(a.value_ + b.value_);
  }
  friend Number operator-(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) return Number(*a.exact_ - *b.exact_);
    return Number(a.value_ - b.value_);
  }
  friend Number operator*(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) return Number(*a.exact_ * *b.exact_);
    return Number(a.value_ * b.value_);
  }

  /// -1, 0 or +1; zero means equal (exactly, or within tolerance).
  friend int compare(const Number& a, const Number& b) {
    if (a.exact_ && b.exact_) {
      if (*a.exact_ < *b.exact_) return -1;
      if (*b.exact_ < *a.exact_) return 1;
      return 0;
    }
    if (a.value_ < b.value_ - kFloatTolerance) return -1;
    if (a.value_ > b.value_ + kFloatTolerance) return 1;
    return 0;
  }

  friend bool operator==(const Number& a, const Number& b) { return compare(a, b) == 0; }
  friend bool operator<(const Number& a, const Number& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Number& a, const Number& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Number& a, const Number& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Number& a, const Number& b) { return compare(a, b) >= 0; }

  std::string to_string() const;

 private:
  double value_ = 0.0;
  std::optional<Rational> exact_;
};

}  // namespace minkowski
