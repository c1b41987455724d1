// Exact rational arithmetic for efficiency comparisons and compensated
// summation for long probability sums.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <system_error>

#include <boost/multiprecision/cpp_int.hpp>

namespace thermocollide {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// The rational with the shortest decimal representation that round-trips to
/// x. Configuration values such as 0.01 become exactly 1/100.
inline Rational exact_decimal(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("exact_decimal: non-finite value");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
  if (res.ec != std::errc()) throw std::runtime_error("exact_decimal: formatting failed");
  const std::string s(buf, res.ptr);
  const auto e_pos = s.find('e');
  std::string mantissa = s.substr(0, e_pos);
  long exponent = std::stol(s.substr(e_pos + 1));
  bool negative = false;
  if (!mantissa.empty() && mantissa[0] == '-') {
    negative = true;
    mantissa.erase(0, 1);
  }
  if (const auto dot = mantissa.find('.'); dot != std::string::npos) {
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
    mantissa.erase(dot, 1);
  }
  BigInt digits(mantissa);
  if (negative) digits = -digits;
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
  return exponent >= 0 ? Rational(digits * scale) : Rational(digits, scale);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void add(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace thermocollide
