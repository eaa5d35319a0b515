#ifndef HOLESCOPE_COEFFS_HPP
#define HOLESCOPE_COEFFS_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "holescope/detail/numeric.hpp"

namespace holescope {

// Coefficient profiles a_n, handled entirely through log a_n. a_n r^n is
// never exponentiated: mu(r) passes e^100 at quite small radii already.
enum class Family { gef, mittag_leffler, gaussian_decay, exp_exp, table };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::gef: return "gef";
    case Family::mittag_leffler: return "mittag_leffler";
    case Family::gaussian_decay: return "gaussian_decay";
    case Family::exp_exp: return "exp_exp";
    case Family::table: return "table";
  }
  return "?";
}

struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& msg, std::int64_t idx = -1)
      : std::invalid_argument(msg), index(idx) {}
  std::int64_t index;
};

struct SupportExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConcavityReport {
  bool pass = true;
  std::int64_t first_violation = -1;
  double second_difference = 0.0;
};

class CoefficientModel {
 public:
  static CoefficientModel gef() { return CoefficientModel(Family::gef, 0, 0, {}); }

  static CoefficientModel mittag_leffler(double alpha) {
    if (!(alpha > 0.0)) throw ValidationError("mittag_leffler: alpha must be > 0");
    return CoefficientModel(Family::mittag_leffler, alpha, 0, {});
  }

  static CoefficientModel gaussian_decay(double c) {
    if (!(c > 0.0)) throw ValidationError("gaussian_decay: c must be > 0");
    return CoefficientModel(Family::gaussian_decay, 0, c, {});
  }

  // a(t) = exp(1 - exp(t)): the exp(-exp(t)) profile rescaled by the constant
  // e so that a_0 = 1. Constant factors do not move zeros and keep every
  // functional within the a_0 = 1 normalization used throughout.
  static CoefficientModel exp_exp() { return CoefficientModel(Family::exp_exp, 0, 0, {}); }

  static CoefficientModel table(std::vector<double> log_values) {
    if (log_values.empty()) throw ValidationError("table: empty");
    if (log_values.front() != 0.0)
      throw ValidationError("table: log a_0 must be 0", 0);
    for (std::size_t i = 0; i < log_values.size(); ++i) {
      if (!std::isfinite(log_values[i]))
        throw ValidationError("table: non-finite entry",
                              static_cast<std::int64_t>(i));
    }
    // a violation is reported at the newest entry of the offending triple
    for (std::size_t n = 2; n < log_values.size(); ++n) {
      const double d2 =
          log_values[n] - 2.0 * log_values[n - 1] + log_values[n - 2];
      if (d2 > kConcavityTol) {
        std::ostringstream os;
        os << "table: not log-concave at n=" << n
           << " (second difference " << d2 << ")";
        throw ValidationError(os.str(), static_cast<std::int64_t>(n));
      }
    }
    return CoefficientModel(Family::table, 0, 0, std::move(log_values));
  }

  // Two-column text format: "n log_a_n" with n = 0,1,2,... contiguous.
  static CoefficientModel from_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("table file: cannot open " + path);
    std::vector<double> values;
    std::string line;
    std::int64_t expected = 0;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream ls(line);
      std::int64_t n = 0;
      double v = 0.0;
      if (!(ls >> n >> v))
        throw ValidationError("table file: bad line: " + line);
      if (n != expected)
        throw ValidationError("table file: indices must be 0,1,2,... (got " +
                                  std::to_string(n) + " expecting " +
                                  std::to_string(expected) + ")",
                              n);
      values.push_back(v);
      ++expected;
    }
    return table(std::move(values));
  }

  Family family() const { return family_; }
  double alpha() const { return alpha_; }
  double decay_c() const { return c_; }

  // log a_n; -inf past the support of a finite table (a_n = 0 there).
  double log_coeff(std::int64_t n) const {
    const double t = static_cast<double>(n);
    switch (family_) {
      case Family::gef:
        return -0.5 * std::lgamma(t + 1.0);
      case Family::mittag_leffler:
        return -std::lgamma(alpha_ * t + 1.0);
      case Family::gaussian_decay:
        return -c_ * t * t;
      case Family::exp_exp:
        return 1.0 - std::exp(t);
      case Family::table:
        return n < static_cast<std::int64_t>(table_.size()) ? table_[n]
                                                            : kNegInf;
    }
    return kNegInf;
  }

  // log a_n - log a_{n+1}, in closed form where a cancellation-free one
  // exists. This is what keeps the step-function integral of nu(t)/t exact
  // to ~1e-11 even when nu(r) ~ 3e4 and |log a_n| ~ 1e5.
  double log_ratio(std::int64_t n) const {
    const double t = static_cast<double>(n);
    switch (family_) {
      case Family::gef:
        return 0.5 * std::log1p(t);
      case Family::mittag_leffler: {
        const double k = std::round(alpha_);
        if (k == alpha_ && k >= 1.0 && k <= 64.0) {
          double sum = 0.0;
          for (double j = 1.0; j <= k; j += 1.0)
            sum += std::log(alpha_ * t + j);
          return sum;
        }
        return std::lgamma(alpha_ * (t + 1.0) + 1.0) -
               std::lgamma(alpha_ * t + 1.0);
      }
      case Family::gaussian_decay:
        return c_ * (2.0 * t + 1.0);
      case Family::exp_exp:
        return std::exp(t) * 1.7182818284590452354;  // e^n (e - 1)
      case Family::table:
        return log_coeff(n) - log_coeff(n + 1);
    }
    return kPosInf;
  }

  // First index outside the support (a_n = 0 from here on, or the value is
  // no longer representable).
  std::int64_t support_limit() const {
    switch (family_) {
      case Family::gef:
      case Family::mittag_leffler:
      case Family::gaussian_decay:
        return std::int64_t{1} << 52;
      case Family::exp_exp:
        return 710;  // exp(710) overflows double
      case Family::table:
        return static_cast<std::int64_t>(table_.size());
    }
    return 0;
  }

  std::string describe() const {
    switch (family_) {
      case Family::gef: return "gef";
      case Family::mittag_leffler:
        return "mittag_leffler(" + std::to_string(alpha_) + ")";
      case Family::gaussian_decay:
        return "gaussian_decay(" + std::to_string(c_) + ")";
      case Family::exp_exp: return "exp_exp";
      case Family::table:
        return "table[" + std::to_string(table_.size()) + "]";
    }
    return "?";
  }

  static constexpr double kConcavityTol = 1e-12;

 private:
  CoefficientModel(Family f, double alpha, double c, std::vector<double> tab)
      : family_(f), alpha_(alpha), c_(c), table_(std::move(tab)) {}

  Family family_;
  double alpha_;
  double c_;
  std::vector<double> table_;
};

struct LogTerm {
  std::int64_t n;
  double value;  // h(n) = log a_n + n log r
};

inline double log_term_value(const CoefficientModel& model, double r,
                             std::int64_t n) {
  if (!(r > 0.0)) throw ValidationError("log_term: r must be > 0");
  if (n < 0) throw ValidationError("log_term: n must be >= 0");
  return model.log_coeff(n) + static_cast<double>(n) * std::log(r);
}

inline LogTerm log_term(const CoefficientModel& model, double r,
                        std::int64_t n) {
  return {n, log_term_value(model, r, n)};
}

// Scan the second differences of log a_n over [1, n_max-1]; reports the
// first index where concavity fails beyond tolerance.
inline ConcavityReport check_log_concavity(const CoefficientModel& model,
                                           std::int64_t n_max) {
  if (n_max < 2) throw ValidationError("check_log_concavity: n_max must be >= 2");
  ConcavityReport rep;
  const std::int64_t hi = std::min(n_max, model.support_limit() - 1);
  double prev = model.log_coeff(0);
  double cur = model.log_coeff(1);
  for (std::int64_t n = 2; n <= hi; ++n) {
    const double next = model.log_coeff(n);
    const double d2 = next - 2.0 * cur + prev;
    if (d2 > CoefficientModel::kConcavityTol) {
      rep.pass = false;
      rep.first_violation = n;  // newest entry of the offending triple
      rep.second_difference = d2;
      return rep;
    }
    prev = cur;
    cur = next;
  }
  return rep;
}

}  // namespace holescope

#endif  // HOLESCOPE_COEFFS_HPP
