#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace truncmom {

// Thrown when an argument is outside the mathematical domain of an operation
// (Gamma poles, inadmissible exponents, wrong symmetry class for a query).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Thrown when a parameter fails basic validation (sizes, ranges, enum values).
class invalid_parameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Pairwise (cascade) summation. Error grows like O(log n) instead of O(n),
// which matters for Gamma-product logs with up to ~10^6 terms.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_sum(std::span<const double>(xs));
}

// Neumaier compensated accumulator for sums with heavy cancellation
// (alternating-sign hypergeometric terms).
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// A real number carried as (sign, log|value|). sign == 0 encodes exact zero.
// Used wherever products of Pochhammer factors overflow a plain double.
struct LogSigned {
  double log_abs = 0.0;
  int sign = 1;

  static LogSigned zero() { return {0.0, 0}; }
  static LogSigned one() { return {0.0, 1}; }
  static LogSigned from_value(double v) {
    if (v == 0.0) return zero();
    return {std::log(std::abs(v)), v > 0 ? 1 : -1};
  }

  bool is_zero() const { return sign == 0; }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  LogSigned& operator*=(const LogSigned& o) {
    if (sign == 0 || o.sign == 0) {
      *this = zero();
    } else {
      log_abs += o.log_abs;
      sign *= o.sign;
    }
    return *this;
  }
  friend LogSigned operator*(LogSigned a, const LogSigned& b) { return a *= b; }
  LogSigned& operator/=(const LogSigned& o) {
    if (sign == 0) return *this;
    log_abs -= o.log_abs;
    sign *= o.sign;
    return *this;
  }
};

}  // namespace truncmom
