#ifndef HOLESCOPE_GROWTH_HPP
#define HOLESCOPE_GROWTH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "holescope/coeffs.hpp"
#include "holescope/detail/numeric.hpp"

namespace holescope {

// Raised where the band partition of the tail is undefined (log mu(r) = 0:
// the thresholds (1-m) log mu collapse onto each other).
struct DegenerateProfileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MaxTerm {
  std::int64_t nu;    // largest maximizing index
  double log_mu;
};

struct N1Result {
  std::int64_t n1;    // #{n : h(n) >= 0}
  double n1_prime;    // root of the linear interpolant of h
};

struct Band {
  std::int64_t m;      // band index: h in [-m log mu, (1-m) log mu)
  std::int64_t count;  // N_{m,m+1}(r)
};

struct GrowthProfile {
  double r = 0.0;
  double log_mu = 0.0;
  std::int64_t nu = 0;
  std::int64_t n1 = 0;
  double n1_prime = 0.0;
  double s = 0.0;
  std::vector<Band> bands;
};

namespace detail {

// h(n) is concave in n, so the increment h(n+1) - h(n) is non-increasing;
// every search below is a gallop + binary search on a monotone predicate.
class Profile {
 public:
  Profile(const CoefficientModel& model, double r)
      : model_(model), log_r_(std::log(r)), r_(r) {
    if (!(r > 0.0)) throw ValidationError("growth: r must be > 0");
  }

  double h(std::int64_t n) const {
    return model_.log_coeff(n) + static_cast<double>(n) * log_r_;
  }

  double r() const { return r_; }
  double log_r() const { return log_r_; }
  const CoefficientModel& model() const { return model_; }

  // Largest maximizer of h: the first n with h(n+1) < h(n). Ties propagate
  // upward, matching the "(maximal) index" convention.
  MaxTerm max_term() const {
    const std::int64_t limit = model_.support_limit();
    auto decreasing_at = [&](std::int64_t n) { return h(n + 1) < h(n); };
    if (decreasing_at(0)) return {0, h(0)};
    // gallop for an upper bracket
    std::int64_t lo = 0, hi = 1;
    while (!decreasing_at(hi)) {
      lo = hi;
      hi *= 2;
      if (hi >= limit - 1) {
        if (!decreasing_at(limit - 2)) {
          // a finite table peaks at its last finite entry
          if (model_.family() == Family::table) return {limit - 1, h(limit - 1)};
          throw SupportExhausted("max_term: support exhausted before bracket");
        }
        hi = limit - 2;
        break;
      }
    }
    // smallest n in (lo, hi] with h(n+1) < h(n)
    while (lo + 1 < hi) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (decreasing_at(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return {hi, h(hi)};
  }

  // Smallest n > from with h(n) < threshold (h non-increasing right of nu).
  std::int64_t first_below(std::int64_t from, double threshold) const {
    const std::int64_t limit = model_.support_limit();
    if (h(from) < threshold) return from;
    std::int64_t lo = from, step = 1;
    std::int64_t hi = from + step;
    while (hi < limit && h(hi) >= threshold) {
      lo = hi;
      step *= 2;
      hi = from + step;
    }
    if (hi >= limit) hi = limit;  // h(limit) = -inf < threshold
    while (lo + 1 < hi) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (h(mid) < threshold) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }

  // Largest n (>= nu) with h(n) >= threshold, assuming h(nu) >= threshold.
  std::int64_t last_at_or_above(std::int64_t nu, double threshold) const {
    return first_below(nu, threshold) - 1;
  }

  // Smallest n in [0, nu] with h(n) >= threshold (h non-decreasing there),
  // assuming h(nu) >= threshold.
  std::int64_t first_at_or_above(std::int64_t nu, double threshold) const {
    if (h(0) >= threshold) return 0;
    std::int64_t lo = 0, hi = nu;  // h(lo) < thr <= h(hi)
    while (lo + 1 < hi) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (h(mid) >= threshold) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }

 private:
  const CoefficientModel& model_;
  double log_r_;
  double r_;
};

}  // namespace detail

inline MaxTerm max_term(const CoefficientModel& model, double r) {
  return detail::Profile(model, r).max_term();
}

inline N1Result n1_count(const CoefficientModel& model, double r) {
  detail::Profile p(model, r);
  const MaxTerm mt = p.max_term();
  // h(0) = 0, so the significant set {0,...,n1-1} is never empty.
  const std::int64_t n1 = p.first_below(mt.nu, 0.0);
  const double ha = p.h(n1 - 1);  // >= 0
  const double hb = p.h(n1);      // < 0, possibly -inf at a table boundary
  double n1p;
  if (ha == 0.0) {
    n1p = static_cast<double>(n1 - 1);
  } else if (hb == kNegInf) {
    n1p = static_cast<double>(n1 - 1);
  } else {
    n1p = static_cast<double>(n1 - 1) + ha / (ha - hb);
  }
  return {n1, n1p};
}

// S(r) = 2 sum of h(n) over the significant indices {0,...,N1-1}.
inline double s_value(const CoefficientModel& model, double r) {
  detail::Profile p(model, r);
  const MaxTerm mt = p.max_term();
  const std::int64_t n1 = p.first_below(mt.nu, 0.0);
  detail::KahanSum sum;
  for (std::int64_t n = 0; n < n1; ++n) sum.add(p.h(n));
  return 2.0 * sum.value();
}

// #{n : h(n) >= (1-x) log mu(r)} for x >= 0.
inline std::int64_t n_x(const CoefficientModel& model, double r, double x) {
  if (!(x >= 0.0)) throw ValidationError("n_x: x must be >= 0");
  detail::Profile p(model, r);
  const MaxTerm mt = p.max_term();
  const double threshold = (1.0 - x) * mt.log_mu;
  if (mt.log_mu < threshold) return 0;  // only possible when x < 1
  const std::int64_t left = p.first_at_or_above(mt.nu, threshold);
  const std::int64_t right = p.last_at_or_above(mt.nu, threshold);
  return right - left + 1;
}

inline std::int64_t band_count(const CoefficientModel& model, double r,
                               std::int64_t m) {
  if (m < 1) throw ValidationError("band_count: m must be >= 1");
  const MaxTerm mt = max_term(model, r);
  if (mt.log_mu <= 0.0)
    throw DegenerateProfileError(
        "band_count: log mu(r) = 0, tail partition undefined");
  return n_x(model, r, static_cast<double>(m + 1)) -
         n_x(model, r, static_cast<double>(m));
}

// Nonempty bands in increasing m until the band's largest h falls below
// -50 max(1, log mu); the remainder is always bounded analytically by the
// consumers (certificate, truncation).
inline std::vector<Band> enumerate_bands(const CoefficientModel& model,
                                         double r) {
  detail::Profile p(model, r);
  const MaxTerm mt = p.max_term();
  if (mt.log_mu <= 0.0)
    throw DegenerateProfileError(
        "enumerate_bands: log mu(r) = 0, tail partition undefined");
  const double cutoff = -50.0 * std::max(1.0, mt.log_mu);
  const std::int64_t n1 = p.first_below(mt.nu, 0.0);
  std::vector<Band> bands;
  std::int64_t n = n1;
  const std::int64_t limit = model.support_limit();
  while (n < limit) {
    const double hn = p.h(n);
    if (hn < cutoff) break;
    const auto m = static_cast<std::int64_t>(std::ceil(-hn / mt.log_mu));
    if (!bands.empty() && bands.back().m == m) {
      ++bands.back().count;
    } else {
      bands.push_back({m, 1});
    }
    ++n;
  }
  return bands;
}

// log mu(r) - log mu(1) - integral_1^r nu(t)/t dt, the integral evaluated
// exactly as the step-function sum over the jump radii of nu. The jump from
// n to n+1 sits at log t = log a_n - log a_{n+1}, non-decreasing in n by
// log-concavity.
inline double verify_integral_relation(const CoefficientModel& model,
                                       double r) {
  if (!(r >= 1.0)) throw ValidationError("verify_integral_relation: r >= 1");
  const MaxTerm at1 = max_term(model, 1.0);
  const MaxTerm atr = max_term(model, r);
  const double log_r = std::log(r);
  detail::KahanSum integral;
  double lo = 0.0;  // current interval start in log t
  for (std::int64_t n = at1.nu; n <= atr.nu; ++n) {
    const double jump = (n == atr.nu) ? log_r : model.log_ratio(n);
    const double hi = std::min(jump, log_r);
    if (hi > lo) {
      integral.add(static_cast<double>(n) * (hi - lo));
      lo = hi;
    }
    if (hi >= log_r) break;
  }
  return atr.log_mu - at1.log_mu - integral.value();
}

// log M(r) = log sum_n a_n r^n by max-shifted log-sum-exp with analytic
// geometric bounds for both discarded tails.
inline double log_max_modulus(const CoefficientModel& model, double r) {
  detail::Profile p(model, r);
  const MaxTerm mt = p.max_term();
  const double cut = mt.log_mu - 50.0;  // e^{-50} relative per term
  const std::int64_t limit = model.support_limit();
  std::int64_t left = 0;
  if (p.h(0) < cut) left = p.first_at_or_above(mt.nu, cut);
  const std::int64_t right =
      std::min<std::int64_t>(p.last_at_or_above(mt.nu, cut), limit - 1);
  detail::LogSumExp lse;
  for (std::int64_t n = left; n <= right; ++n) lse.add(p.h(n));
  // right tail: terms decay at least geometrically from h(right+1)
  if (right + 1 < limit) {
    const double h0 = p.h(right + 1);
    if (h0 != kNegInf) {
      const double q = p.h(right + 2) - h0;  // log of the first ratio, < 0
      const double tail_log =
          q < 0.0 ? h0 - detail::log1mexp(-q)
                  : h0 + std::log(static_cast<double>(limit - right - 1));
      lse.add(tail_log);
    }
  }
  // left tail: same bound mirrored
  if (left > 0) {
    const double h0 = p.h(left - 1);
    if (h0 != kNegInf) {
      const double q = (left >= 2) ? p.h(left - 2) - h0 : kNegInf;
      const double tail_log = q < 0.0
                                  ? h0 - detail::log1mexp(-q)
                                  : h0 + std::log(static_cast<double>(left));
      lse.add(tail_log);
    }
  }
  return lse.value();
}

struct NormalityReport {
  double c_emp = kPosInf;        // min over k != 0 of (log mu - h) b(|k|+nu)/k^2
  double nu_ratio = kNaN;        // nu / (log mu log_2^2 mu)
  double log_m_over_log_mu = kNaN;
  std::int64_t window_hi = 0;    // last index scanned
};

// Empirical constants for the Wiman-Valiron statements. Recorded, never
// asserted: the paper's c, C are unspecified and hold only off exceptional
// sets of finite logarithmic measure.
inline NormalityReport normality_diagnostics(const CoefficientModel& model,
                                             double r) {
  detail::Profile p(model, r);
  const MaxTerm mt = p.max_term();
  if (!(mt.log_mu > 0.0))
    throw ValidationError("normality_diagnostics: needs log mu(r) > 0");
  NormalityReport rep;
  const double cutoff = -50.0 * std::max(1.0, mt.log_mu);
  const std::int64_t hi =
      std::min(p.first_below(mt.nu, cutoff), model.support_limit() - 1);
  rep.window_hi = hi;
  for (std::int64_t n = 0; n <= hi; ++n) {
    const std::int64_t k = n - mt.nu;
    if (k == 0) continue;
    const double m = static_cast<double>(std::llabs(k) + mt.nu);
    if (m < 2.0) continue;  // b(m) = 1/(m log^2 m) undefined below 2
    const double b = 1.0 / (m * std::log(m) * std::log(m));
    const double gap = mt.log_mu - p.h(n);
    const double cand = gap * b / (static_cast<double>(k) * static_cast<double>(k));
    rep.c_emp = std::min(rep.c_emp, cand);
  }
  if (mt.log_mu > 1.0) {
    const double log2mu = std::log(mt.log_mu);  // iterated log
    rep.nu_ratio = static_cast<double>(mt.nu) / (mt.log_mu * log2mu * log2mu);
  }
  rep.log_m_over_log_mu = log_max_modulus(model, r) / mt.log_mu;
  return rep;
}

inline GrowthProfile analyze_radius(const CoefficientModel& model, double r) {
  detail::Profile p(model, r);
  GrowthProfile g;
  g.r = r;
  const MaxTerm mt = p.max_term();
  g.nu = mt.nu;
  g.log_mu = mt.log_mu;
  const N1Result n1 = n1_count(model, r);
  g.n1 = n1.n1;
  g.n1_prime = n1.n1_prime;
  g.s = s_value(model, r);
  if (g.log_mu > 0.0) g.bands = enumerate_bands(model, r);
  return g;
}

}  // namespace holescope

#endif  // HOLESCOPE_GROWTH_HPP
