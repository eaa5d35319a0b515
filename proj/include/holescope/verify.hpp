#ifndef HOLESCOPE_VERIFY_HPP
#define HOLESCOPE_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "holescope/detail/numeric.hpp"
#include "holescope/detail/philox.hpp"
#include "holescope/growth.hpp"
#include "holescope/sampling.hpp"
#include "holescope/zerocount.hpp"

namespace holescope {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Equispaced points z_j = kappa r exp(2 pi i j / N) on the kappa r circle.
struct CirclePointSet {
  std::int64_t n_points = 1;
  double radius = 1.0;  // kappa * r

  std::complex<double> point(std::int64_t j) const {
    const double a = kTwoPi * static_cast<double>(j) /
                     static_cast<double>(n_points);
    return {radius * std::cos(a), radius * std::sin(a)};
  }
};

// log det of Sigma_ij = sum_k a_k^2 (z_i conj(z_j))^k for the equispaced
// configuration. Sigma is circulant there, with eigenvalues
// N * sum_{k = m mod N} a_k^2 (kappa r)^{2k}; each residue-class sum is a
// log-sum-exp, so the determinant is computable at any scale.
inline double log_det_covariance(const CoefficientModel& model,
                                 const CirclePointSet& ps) {
  const std::int64_t n = ps.n_points;
  if (n < 1) throw ValidationError("log_det_covariance: n_points >= 1");
  detail::Profile p(model, ps.radius);
  const MaxTerm mt = p.max_term();
  const double log_n = std::log(static_cast<double>(n));
  const std::int64_t limit = model.support_limit();
  detail::KahanSum logdet;
  for (std::int64_t m = 0; m < n; ++m) {
    detail::LogSumExp cls;
    double best = kNegInf;
    for (std::int64_t k = m; k < limit; k += n) {
      const double v = 2.0 * p.h(k);
      if (v == kNegInf) {
        if (k > mt.nu) break;
        continue;
      }
      best = std::max(best, v);
      cls.add(v);
      if (k > mt.nu && v < best - 120.0) break;
    }
    if (cls.empty())
      throw SupportExhausted("log_det_covariance: empty residue class");
    logdet.add(log_n + cls.value());
  }
  return logdet.value();
}

// Independent dense route: scale Sigma by its (constant) diagonal
// g = sum_k a_k^2 (kappa r)^{2k}, then a complex Cholesky factorization of
// the unit-diagonal matrix. Feasible for small N; cross-checks the
// circulant path.
inline double log_det_covariance_dense(const CoefficientModel& model,
                                       const CirclePointSet& ps) {
  const std::int64_t n = ps.n_points;
  if (n < 1 || n > 64)
    throw ValidationError("log_det_covariance_dense: need 1 <= N <= 64");
  detail::Profile p(model, ps.radius);
  const MaxTerm mt = p.max_term();

  // log g and the per-k relative weights e^{2h(k)} / g
  detail::LogSumExp g_lse;
  std::vector<std::pair<std::int64_t, double>> terms;
  const std::int64_t limit = model.support_limit();
  for (std::int64_t k = 0; k < limit; ++k) {
    const double v = 2.0 * p.h(k);
    if (v == kNegInf) break;
    g_lse.add(v);
    if (k > mt.nu && v < 2.0 * mt.log_mu - 120.0) break;
  }
  const double log_g = g_lse.value();
  for (std::int64_t k = 0; k < limit; ++k) {
    const double v = 2.0 * p.h(k);
    if (v == kNegInf) break;
    const double w = std::exp(v - log_g);
    if (w > 0.0) terms.emplace_back(k, w);
    if (k > mt.nu && v < log_g - 120.0) break;
  }

  const auto nn = static_cast<std::size_t>(n);
  std::vector<std::complex<double>> a(nn * nn);
  for (std::size_t i = 0; i < nn; ++i) {
    for (std::size_t j = 0; j < nn; ++j) {
      // z_i conj(z_j) / (kappa r)^2 = exp(2 pi i (i - j)/N)
      const double ang = kTwoPi *
                         static_cast<double>(static_cast<std::int64_t>(i) -
                                             static_cast<std::int64_t>(j)) /
                         static_cast<double>(n);
      std::complex<double> sum(0.0, 0.0);
      for (const auto& [k, w] : terms)
        sum += w * std::complex<double>(std::cos(ang * static_cast<double>(k)),
                                        std::sin(ang * static_cast<double>(k)));
      a[i * nn + j] = sum;
    }
  }
  // in-place complex Cholesky, accumulating log of the diagonal
  detail::KahanSum logdet;
  for (std::size_t j = 0; j < nn; ++j) {
    double d = a[j * nn + j].real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(a[j * nn + k]);
    if (!(d > 0.0))
      throw std::runtime_error("log_det_covariance_dense: not positive definite");
    const double l = std::sqrt(d);
    logdet.add(2.0 * std::log(l));
    for (std::size_t i = j + 1; i < nn; ++i) {
      std::complex<double> v = a[i * nn + j];
      for (std::size_t k = 0; k < j; ++k)
        v -= a[i * nn + k] * std::conj(a[j * nn + k]);
      a[i * nn + j] = v / l;
    }
  }
  return static_cast<double>(n) * log_g + logdet.value();
}

struct VandermondeResult {
  double direct = 0.0;       // sum_{i != j} log|z_i - z_j|
  double closed_form = 0.0;  // N log N + N(N-1) log(kappa r)
};

inline VandermondeResult vandermonde_log_product(const CirclePointSet& ps) {
  const std::int64_t n = ps.n_points;
  VandermondeResult res;
  detail::KahanSum direct;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::complex<double> zi = ps.point(i);
    for (std::int64_t j = i + 1; j < n; ++j) {
      direct.add(2.0 * std::log(std::abs(zi - ps.point(j))));
    }
  }
  res.direct = direct.value();
  res.closed_form = static_cast<double>(n) * std::log(static_cast<double>(n)) +
                    static_cast<double>(n) * static_cast<double>(n - 1) *
                        std::log(ps.radius);
  return res;
}

// Poisson kernel for the disk of radius r, normalized to unit circle mean.
inline double poisson_kernel(double r, std::complex<double> z,
                             std::complex<double> a) {
  if (!(std::abs(a) < r))
    throw ValidationError("poisson_kernel: need |a| < r");
  return (r * r - std::norm(a)) / std::norm(z - a);
}

struct PoissonBoundsReport {
  bool pass = true;
  double min_kernel = kPosInf;
  double max_kernel = 0.0;
  double lower_bound = 0.0;  // delta / 2
  double upper_bound = 0.0;  // 2 / delta
};

// delta/2 <= P(z, a) <= 2/delta over a full (z, a) grid with |a| = (1-delta)r.
inline PoissonBoundsReport poisson_bounds_check(double r, double delta,
                                                std::int64_t grid) {
  if (!(delta > 0.0 && delta < 1.0))
    throw ValidationError("poisson_bounds_check: delta in (0,1)");
  PoissonBoundsReport rep;
  rep.lower_bound = delta / 2.0;
  rep.upper_bound = 2.0 / delta;
  const double ka = (1.0 - delta) * r;
  for (std::int64_t i = 0; i < grid; ++i) {
    const double ti = kTwoPi * static_cast<double>(i) / static_cast<double>(grid);
    const std::complex<double> z(r * std::cos(ti), r * std::sin(ti));
    for (std::int64_t j = 0; j < grid; ++j) {
      const double tj =
          kTwoPi * static_cast<double>(j) / static_cast<double>(grid);
      const std::complex<double> a(ka * std::cos(tj), ka * std::sin(tj));
      const double v = poisson_kernel(r, z, a);
      rep.min_kernel = std::min(rep.min_kernel, v);
      rep.max_kernel = std::max(rep.max_kernel, v);
    }
  }
  rep.pass = rep.min_kernel >= rep.lower_bound && rep.max_kernel <= rep.upper_bound;
  return rep;
}

struct DiscretizationReport {
  double lhs = 0.0;          // mean of log|f(z_j)| over the kappa r circle
  double rhs = 0.0;          // circle-average of log|f| on the r circle
  double error = 0.0;        // |lhs - rhs|
  double bound_form = 0.0;   // log mu(r) / (delta^4 N)
  double empirical_c = kNaN; // error * delta^4 N / log mu(r)
  std::int64_t n_points = 0;
  std::int64_t quadrature_points = 0;
};

// Discretized vs. integrated logarithmic integral for one zero-free sample.
// Returns nothing if the sample cannot be certified hole at radius r.
inline std::optional<DiscretizationReport> discretization_diagnostic(
    const CoefficientModel& model, const SeriesSample& sample, double r,
    double delta, std::int64_t n_points) {
  if (!(delta > 0.0 && delta < 1.0))
    throw ValidationError("discretization_diagnostic: delta in (0,1)");
  if (n_points < 1)
    throw ValidationError("discretization_diagnostic: N >= 1");
  if (has_hole(model, sample, r) != HoleStatus::hole) return std::nullopt;

  const double kr = (1.0 - delta) * r;
  const CircleEvaluator inner(model, sample, kr);
  DiscretizationReport rep;
  rep.n_points = n_points;
  detail::KahanSum lhs;
  for (std::int64_t j = 0; j < n_points; ++j) {
    const double theta = kTwoPi * static_cast<double>(j) /
                         static_cast<double>(n_points);
    lhs.add(std::log(std::abs(inner(theta))) + inner.log_mu());
  }
  rep.lhs = lhs.value() / static_cast<double>(n_points);

  // doubling trapezoid (= periodic rectangle rule) to 1e-8
  const CircleEvaluator outer(model, sample, r);
  auto average = [&](std::int64_t m) {
    detail::KahanSum acc;
    for (std::int64_t j = 0; j < m; ++j) {
      const double theta = kTwoPi * static_cast<double>(j) /
                           static_cast<double>(m);
      acc.add(std::log(std::abs(outer(theta))) + outer.log_mu());
    }
    return acc.value() / static_cast<double>(m);
  };
  std::int64_t m = 64;
  double prev = average(m);
  for (;;) {
    m *= 2;
    const double cur = average(m);
    if (std::abs(cur - prev) < 1e-8 || m >= (1 << 20)) {
      rep.rhs = cur;
      rep.quadrature_points = m;
      break;
    }
    prev = cur;
  }
  rep.error = std::abs(rep.lhs - rep.rhs);
  const double log_mu_r = max_term(model, r).log_mu;
  const double d4n = delta * delta * delta * delta *
                     static_cast<double>(n_points);
  rep.bound_form = log_mu_r > 0.0 ? log_mu_r / d4n : 0.0;
  rep.empirical_c = log_mu_r > 0.0 ? rep.error * d4n / log_mu_r : kNaN;
  return rep;
}

struct VolumeResult {
  double exact = 0.0;
  double bound = 0.0;
  bool bound_applicable = false;  // requires log(t^N/s) >= N
};

// vol{0 <= r_j <= t, prod r_j <= s} in R^N: s * sum_{k<N} log^k(t^N/s)/k!
// when s < t^N (else the full cube); the lemma's bound is
// s log^N(t^N/s)/(N-1)!.
inline VolumeResult volume_cn(std::int64_t n, double t, double s) {
  if (n < 1 || !(t > 0.0) || !(s > 0.0))
    throw ValidationError("volume_cn: need N >= 1, t > 0, s > 0");
  VolumeResult res;
  const double big_l = static_cast<double>(n) * std::log(t) - std::log(s);
  if (big_l <= 0.0) {
    res.exact = std::pow(t, static_cast<double>(n));
    res.bound_applicable = false;
    res.bound = kNaN;
    return res;
  }
  detail::KahanSum sum;
  double term = 1.0;
  sum.add(term);
  for (std::int64_t k = 1; k < n; ++k) {
    term *= big_l / static_cast<double>(k);
    sum.add(term);
  }
  res.exact = s * sum.value();
  res.bound_applicable = big_l >= static_cast<double>(n);
  res.bound = s * std::pow(big_l, static_cast<double>(n)) /
              std::tgamma(static_cast<double>(n));
  return res;
}

struct SShiftReport {
  bool applicable = false;  // needs N1(r) >= 32 so that delta < 1/2
  std::int64_t n1 = 0;
  double delta = kNaN;
  double s_r = kNaN;
  double s_shifted = kNaN;
  double difference = kNaN;   // S(r) - S((1-delta) r) >= 0
  double bound = kNaN;        // 8 N1^{9/5}
  bool pass = true;
};

inline SShiftReport s_shift_check(const CoefficientModel& model, double r) {
  SShiftReport rep;
  rep.n1 = n1_count(model, r).n1;
  if (rep.n1 < 32) return rep;
  rep.applicable = true;
  rep.delta = std::pow(static_cast<double>(rep.n1), -0.2);
  rep.s_r = s_value(model, r);
  rep.s_shifted = s_value(model, (1.0 - rep.delta) * r);
  rep.difference = rep.s_r - rep.s_shifted;
  rep.bound = 8.0 * std::pow(static_cast<double>(rep.n1), 1.8);
  rep.pass = rep.difference <= rep.bound && rep.difference >= 0.0;
  return rep;
}

struct DevBoundsReport {
  std::int64_t n_samples = 0;
  double sigma = 0.5;
  double freq_large = 0.0;   // frac{ max log|f| >= (1+sigma) log M(r) }  (recorded)
  double freq_small = 0.0;   // frac{ max log|f| <= 0 }
  double small_bound = 0.0;  // exp(-S(r)) + 3 binomial se
  bool small_pass = true;
  double s = 0.0;
  double log_m = 0.0;
};

// Monte Carlo spot checks of the two deviation lemmas for log max|f|. Only
// the second event carries an explicit constant-free bound; the first is
// recorded next to mu(r).
inline DevBoundsReport dev_bounds_spotcheck(const CoefficientModel& model,
                                            double r, std::int64_t n_samples,
                                            std::uint64_t seed,
                                            double sigma = 0.5,
                                            std::int64_t grid = 128) {
  DevBoundsReport rep;
  rep.n_samples = n_samples;
  rep.sigma = sigma;
  rep.s = s_value(model, r);
  rep.log_m = log_max_modulus(model, r);
  const std::int64_t n_trunc = choose_truncation(model, r, -46.0);
  detail::Profile p(model, r);
  const double log_mu = p.max_term().log_mu;
  std::vector<double> scale(static_cast<std::size_t>(n_trunc) + 1);
  for (std::int64_t n = 0; n <= n_trunc; ++n)
    scale[static_cast<std::size_t>(n)] = std::exp(p.h(n) - log_mu);
  std::int64_t count_large = 0, count_small = 0;
  std::vector<std::complex<double>> coeffs(scale.size());
  for (std::int64_t s = 0; s < n_samples; ++s) {
    for (std::size_t n = 0; n < coeffs.size(); ++n)
      coeffs[n] = scale[n] * coefficient_draw(seed, static_cast<std::uint64_t>(s),
                                              static_cast<std::int64_t>(n));
    double max_mod = 0.0;
    for (std::int64_t j = 0; j < grid; ++j) {
      const double theta = kTwoPi * static_cast<double>(j) /
                           static_cast<double>(grid);
      const std::complex<double> z(std::cos(theta), std::sin(theta));
      std::complex<double> acc(0.0, 0.0);
      for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
      max_mod = std::max(max_mod, std::abs(acc));
    }
    const double log_max = std::log(max_mod) + log_mu;
    if (log_max >= (1.0 + sigma) * rep.log_m) ++count_large;
    if (log_max <= 0.0) ++count_small;
  }
  rep.freq_large = static_cast<double>(count_large) /
                   static_cast<double>(n_samples);
  rep.freq_small = static_cast<double>(count_small) /
                   static_cast<double>(n_samples);
  const double p0 = std::exp(-rep.s);
  const double se = std::sqrt(std::max(p0 * (1.0 - p0), 0.0) /
                              static_cast<double>(n_samples));
  rep.small_bound = p0 + 3.0 * se;
  rep.small_pass = rep.freq_small <= rep.small_bound;
  return rep;
}

}  // namespace holescope

#endif  // HOLESCOPE_VERIFY_HPP
