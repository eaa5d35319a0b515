#ifndef HOLESCOPE_DETAIL_NUMERIC_HPP
#define HOLESCOPE_DETAIL_NUMERIC_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace holescope {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

namespace detail {

// Neumaier-compensated accumulator; exact enough that summation order is
// never the accuracy bottleneck.
class KahanSum {
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

// Streaming log-sum-exp: value() = log(sum of exp(v_i)).
class LogSumExp {
 public:
  void add(double v) {
    if (v == kNegInf) return;
    if (empty_) {
      max_ = v;
      sum_.add(1.0);
      empty_ = false;
      return;
    }
    if (v <= max_) {
      sum_.add(std::exp(v - max_));
    } else {
      // rescale: sum * e^{max-v} + 1
      const double scaled = sum_.value() * std::exp(max_ - v);
      sum_ = KahanSum();
      sum_.add(scaled);
      sum_.add(1.0);
      max_ = v;
    }
  }
  // add exp(v) scaled by a plain positive factor (tail corrections)
  void add_scaled(double v, double factor) {
    if (factor <= 0.0 || v == kNegInf) return;
    add(v + std::log(factor));
  }
  bool empty() const { return empty_; }
  double value() const {
    if (empty_) return kNegInf;
    return max_ + std::log(sum_.value());
  }

 private:
  bool empty_ = true;
  double max_ = 0.0;
  KahanSum sum_;
};

// log(1 - e^{-x}) for x > 0 (Maechler's two-branch form).
inline double log1mexp(double x) {
  if (!(x > 0.0)) throw std::domain_error("log1mexp: x must be positive");
  if (x <= 0.6931471805599453) return std::log(-std::expm1(-x));
  return std::log1p(-std::exp(-x));
}

// log(1 - e^{-x}) where only log(x) may be representable (x can underflow).
inline double log1mexp_from_log(double log_x) {
  if (log_x < -36.0) return log_x;  // 1-e^{-x} = x to below double precision
  return log1mexp(std::exp(log_x));
}

inline bool nearly_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

}  // namespace detail
}  // namespace holescope

#endif  // HOLESCOPE_DETAIL_NUMERIC_HPP
