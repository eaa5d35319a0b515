#ifndef HOLESCOPE_HOLEPROB_HPP
#define HOLESCOPE_HOLEPROB_HPP

#include <boost/math/distributions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "holescope/detail/numeric.hpp"
#include "holescope/detail/philox.hpp"
#include "holescope/growth.hpp"
#include "holescope/sampling.hpp"
#include "holescope/zerocount.hpp"

namespace holescope {

enum class Method { direct, importance, certificate };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::direct: return "direct";
    case Method::importance: return "importance";
    case Method::certificate: return "certificate";
  }
  return "?";
}

struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EstimateResult {
  Method method = Method::direct;
  double log_p = kNaN;
  double log_ci_low = kNaN;
  double log_ci_high = kNaN;
  std::int64_t n_samples = 0;
  std::int64_t n_hole = 0;
  std::int64_t n_uncertain = 0;
  double ess = kNaN;       // (sum w)^2 / sum w^2 over all weights
  double ess_hole = kNaN;  // same over the indicator-weighted terms
  bool degenerate = false;      // no point estimate (zero certified holes)
  bool ess_unreliable = false;  // importance CI flagged when ess < 50
  // certificate breakdown
  double log_p_i = kNaN;
  double log_p_ii = kNaN;
  double log_p_iii = kNaN;
  std::int64_t bands_used = 0;
};

struct EstimatorOptions {
  double log_eps = -46.0;  // truncation target, ~1e-20 relative tail rms
  std::int64_t initial_grid = 32;
  int max_depth = 18;
  int workers = 0;  // 0: hardware concurrency capped by HOLESCOPE_THREADS
};

inline double clopper_pearson_lower(std::int64_t k, std::int64_t n,
                                    double alpha = 0.05) {
  if (k <= 0) return 0.0;
  if (k >= n) return std::pow(alpha / 2.0, 1.0 / static_cast<double>(n));
  boost::math::beta_distribution<double> d(static_cast<double>(k),
                                           static_cast<double>(n - k + 1));
  return boost::math::quantile(d, alpha / 2.0);
}

inline double clopper_pearson_upper(std::int64_t k, std::int64_t n,
                                    double alpha = 0.05) {
  if (k >= n) return 1.0;
  if (k <= 0) return 1.0 - std::pow(alpha / 2.0, 1.0 / static_cast<double>(n));
  boost::math::beta_distribution<double> d(static_cast<double>(k + 1),
                                           static_cast<double>(n - k));
  return boost::math::quantile(d, 1.0 - alpha / 2.0);
}

namespace detail {

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("HOLESCOPE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return static_cast<int>(hw);
}

// Disjoint stream ranges; results land in per-stream slots, so the ordered
// reduction afterwards is independent of the worker count.
template <class Fn>
void parallel_streams(std::int64_t n, int workers, Fn&& fn) {
  workers = resolve_workers(workers);
  if (workers <= 1 || n < 2048) {
    fn(std::int64_t{0}, n);
    return;
  }
  const std::int64_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t b = static_cast<std::int64_t>(w) * chunk;
    const std::int64_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([b, e, &fn] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

// Per-(model, r) context shared across samples: scaled term magnitudes,
// truncation floor, significance data.
struct HoleContext {
  std::vector<double> scale;  // e^{h(n) - log mu}
  double log_mu = 0.0;
  double tail_floor = 0.0;  // truncation tail bound relative to mu
  std::int64_t n_trunc = 0;
  std::int64_t n1 = 0;

  HoleContext(const CoefficientModel& model, double r, double log_eps) {
    n_trunc = choose_truncation(model, r, log_eps);
    Profile p(model, r);
    log_mu = p.max_term().log_mu;
    n1 = p.first_below(p.max_term().nu, 0.0);
    scale.resize(static_cast<std::size_t>(n_trunc) + 1);
    for (std::int64_t n = 0; n <= n_trunc; ++n)
      scale[static_cast<std::size_t>(n)] = std::exp(p.h(n) - log_mu);
    const double tl = truncation_tail_log_bound(model, n_trunc, r) - log_mu;
    tail_floor = tl == kNegInf ? 0.0 : std::exp(tl);
  }

  HoleStatus classify(std::span<const std::complex<double>> draws,
                      const EstimatorOptions& opt) const {
    std::vector<std::complex<double>> coeffs(draws.size());
    double lipschitz = 0.0;
    for (std::size_t n = 0; n < draws.size(); ++n) {
      coeffs[n] = draws[n] * scale[n];
      lipschitz += static_cast<double>(n) * std::abs(coeffs[n]);
    }
    WindingOptions wopt;
    wopt.initial_grid = opt.initial_grid;
    wopt.max_depth = opt.max_depth;
    wopt.certification_floor = tail_floor;
    wopt.lipschitz_per_theta = lipschitz;
    const auto res = winding_number(
        [&coeffs](double theta) {
          const std::complex<double> z(std::cos(theta), std::sin(theta));
          std::complex<double> acc(0.0, 0.0);
          for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
          return acc;
        },
        wopt);
    if (res.status == CountStatus::uncertain) return HoleStatus::uncertain;
    return res.count == 0 ? HoleStatus::hole : HoleStatus::no_hole;
  }
};

}  // namespace detail

// Plain Monte Carlo with Clopper-Pearson interval; uncertain samples widen
// the interval to cover both of their resolutions.
inline EstimateResult estimate_direct(const CoefficientModel& model, double r,
                                      std::int64_t n_samples, std::uint64_t seed,
                                      const EstimatorOptions& opt = {}) {
  if (n_samples < 100)
    throw ValidationError("estimate_direct: n_samples must be >= 100");
  const detail::HoleContext ctx(model, r, opt.log_eps);
  std::vector<std::uint8_t> status(static_cast<std::size_t>(n_samples));
  detail::parallel_streams(n_samples, opt.workers,
                           [&](std::int64_t b, std::int64_t e) {
    std::vector<std::complex<double>> draws(
        static_cast<std::size_t>(ctx.n_trunc) + 1);
    for (std::int64_t s = b; s < e; ++s) {
      for (std::int64_t k = 0; k <= ctx.n_trunc; ++k)
        draws[static_cast<std::size_t>(k)] =
            coefficient_draw(seed, static_cast<std::uint64_t>(s), k);
      status[static_cast<std::size_t>(s)] =
          static_cast<std::uint8_t>(ctx.classify(draws, opt));
    }
  });
  EstimateResult res;
  res.method = Method::direct;
  res.n_samples = n_samples;
  for (const auto st : status) {
    if (st == static_cast<std::uint8_t>(HoleStatus::hole)) ++res.n_hole;
    if (st == static_cast<std::uint8_t>(HoleStatus::uncertain)) ++res.n_uncertain;
  }
  const double lo = clopper_pearson_lower(res.n_hole, n_samples);
  const double hi =
      clopper_pearson_upper(res.n_hole + res.n_uncertain, n_samples);
  res.log_ci_low = lo > 0.0 ? std::log(lo) : kNegInf;
  res.log_ci_high = std::min(0.0, std::log(hi));
  if (res.n_hole > 0) {
    res.log_p = std::log(static_cast<double>(res.n_hole) /
                         static_cast<double>(n_samples));
  } else {
    // no point estimate; report the interval midpoint, flagged
    res.log_p = res.log_ci_high - 0.6931471805599453;
    res.degenerate = true;
  }
  return res;
}

// Exact log-probability of the section-3 certificate event Omega_r: constant
// term dominant, significant terms capped at (a_n r^n)^{-1}/sqrt(N1), band
// terms capped at mu^{m-1}/(N_{m,m+1} m^2). Uses exact Gaussian tail
// probabilities rather than the paper's bracketing bounds, so the result is
// a rigorous lower bound for log P_H(r).
inline EstimateResult certificate_log_prob(const CoefficientModel& model,
                                           double r) {
  detail::Profile p(model, r);
  const MaxTerm mt = p.max_term();
  const std::int64_t n1 = p.first_below(mt.nu, 0.0);
  // with no tail indices at all there is nothing to partition into bands,
  // and the certificate reduces to the (i) and (ii) events
  const bool has_tail = n1 < model.support_limit();
  if (!(mt.log_mu > 0.0) && has_tail)
    throw DegenerateProfileError(
        "certificate_log_prob: log mu(r) = 0, band thresholds collapse");
  const double log_n1 = std::log(static_cast<double>(n1));

  EstimateResult res;
  res.method = Method::certificate;
  const double lambda0 = std::sqrt(static_cast<double>(n1)) + 3.0;
  res.log_p_i = -lambda0 * lambda0;

  detail::KahanSum sum_ii;
  for (std::int64_t n = 1; n < n1; ++n) {
    // lambda_n^2 = e^{-2h(n)} / N1, may underflow; keep its log
    const double log_x = -2.0 * p.h(n) - log_n1;
    sum_ii.add(detail::log1mexp_from_log(log_x));
  }
  res.log_p_ii = sum_ii.value();

  // Bands: m is enumerated until the analytic remainder (count x exp(-A^2),
  // with count <= m N1 and A >= mu^{m-1}/(N1 m^3)) is provably < 1e-18.
  if (has_tail) {
    auto remainder_log_a = [&](std::int64_t m) {
      return static_cast<double>(m - 1) * mt.log_mu - log_n1 -
             3.0 * std::log(static_cast<double>(m));
    };
    std::int64_t m_safe = 1;
    {
      constexpr std::int64_t kCap = 10'000'000;
      while (m_safe < kCap && remainder_log_a(m_safe + 1) < 2.2) ++m_safe;
      if (m_safe >= kCap)
        throw DegenerateProfileError(
            "certificate_log_prob: band remainder does not converge");
    }
    detail::KahanSum sum_iii;
    std::int64_t prev_nx = n1;  // N_x at x = m
    for (std::int64_t m = 1; m <= m_safe; ++m) {
      const std::int64_t nx = n_x(model, r, static_cast<double>(m + 1));
      const std::int64_t count = nx - prev_nx;
      prev_nx = nx;
      if (count == 0) continue;
      ++res.bands_used;
      const double log_a = static_cast<double>(m - 1) * mt.log_mu -
                           std::log(static_cast<double>(count)) -
                           2.0 * std::log(static_cast<double>(m));
      sum_iii.add(static_cast<double>(count) *
                  detail::log1mexp_from_log(2.0 * log_a));
    }
    // rigorous lower-bound correction for everything past m_safe
    double remainder = 0.0;
    for (std::int64_t m = m_safe + 1;; ++m) {
      const double log_a = remainder_log_a(m);
      if (log_a > 10.0) break;  // e^{-A^2} with A > e^10: identically 0
      const double a2 = std::exp(2.0 * log_a);
      const double term = 2.0 * static_cast<double>(m) *
                          static_cast<double>(n1) * std::exp(-a2);
      remainder += term;
      if (term < 1e-34) break;
    }
    res.log_p_iii = sum_iii.value() - remainder;
  } else {
    res.log_p_iii = 0.0;
  }

  res.log_p = res.log_p_i + res.log_p_ii + res.log_p_iii;
  res.log_ci_low = res.log_p;
  res.log_ci_high = res.log_p;
  return res;
}

// Proposal for the importance sampler: phi_0 mean-shifted along the real
// axis, phi_n scaled. Default scales mirror the Omega_r thresholds on the
// significant indices and leave the tail untouched; the default mean shift
// is zero (a positive shift adds 2 b^2 of log-weight variance and, at
// sampling scale, starves every direction of phi_0 except the shifted one).
struct ProposalSpec {
  double mean_shift_0 = 0.0;
  std::vector<double> scales;  // scales[n] = sigma_n; index 0 unused (= 1)

  double sigma(std::int64_t n) const {
    if (n < 1 || n >= static_cast<std::int64_t>(scales.size())) return 1.0;
    return scales[static_cast<std::size_t>(n)];
  }

  void validate() const {
    if (!(mean_shift_0 >= 0.0))
      throw ValidationError("proposal: mean_shift_0 must be >= 0");
    for (std::size_t n = 1; n < scales.size(); ++n)
      if (!(scales[n] > 0.0) || scales[n] > 1.0)
        throw ValidationError("proposal: scales must be in (0, 1]",
                              static_cast<std::int64_t>(n));
  }

  static ProposalSpec defaults(const CoefficientModel& model, double r,
                               std::int64_t n_trunc) {
    detail::Profile p(model, r);
    const std::int64_t n1 = p.first_below(p.max_term().nu, 0.0);
    ProposalSpec spec;
    spec.scales.assign(static_cast<std::size_t>(n_trunc) + 1, 1.0);
    const double inv_sqrt_n1 = 1.0 / std::sqrt(static_cast<double>(n1));
    for (std::int64_t n = 1; n < std::min(n1, n_trunc + 1); ++n)
      spec.scales[static_cast<std::size_t>(n)] =
          std::min(1.0, std::exp(-p.h(n)) * inv_sqrt_n1);
    return spec;
  }
};

namespace detail {

// log of (target density / proposal density) for one draw vector.
inline double importance_log_weight(std::span<const std::complex<double>> draws,
                                    const ProposalSpec& prop) {
  const double b = prop.mean_shift_0;
  double lw = b * b - 2.0 * b * draws[0].real();
  for (std::size_t n = 1; n < draws.size(); ++n) {
    const double s = prop.sigma(static_cast<std::int64_t>(n));
    if (s == 1.0) continue;
    const double m2 = std::norm(draws[n]);
    lw += 2.0 * std::log(s) - m2 * (1.0 - 1.0 / (s * s));
  }
  return lw;
}

inline void draw_from_proposal(std::uint64_t seed, std::uint64_t stream,
                               const ProposalSpec& prop,
                               std::vector<std::complex<double>>& draws) {
  for (std::size_t n = 0; n < draws.size(); ++n) {
    std::complex<double> g = standard_complex_gaussian(
        seed, stream, static_cast<std::uint64_t>(n));
    if (n == 0) {
      draws[0] = g + prop.mean_shift_0;
    } else {
      draws[n] = g * prop.sigma(static_cast<std::int64_t>(n));
    }
  }
}

struct WeightedTallies {
  double sum_w = 0.0, sum_w2 = 0.0;
  double sum_x = 0.0, sum_x2 = 0.0;        // x = w * 1{hole}
  double sum_hi = 0.0, sum_hi2 = 0.0;      // w * 1{hole or uncertain}
  std::int64_t n_hole = 0, n_uncertain = 0;
};

// Ordered (stream-index) reduction keeps results bit-identical across
// worker counts.
inline WeightedTallies reduce_weighted(std::span<const double> logw,
                                       std::span<const std::uint8_t> status) {
  KahanSum w_s, w2_s, x_s, x2_s, hi_s, hi2_s;
  WeightedTallies t;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    const double w = std::exp(logw[i]);
    w_s.add(w);
    w2_s.add(w * w);
    const auto st = static_cast<HoleStatus>(status[i]);
    if (st == HoleStatus::hole) {
      ++t.n_hole;
      x_s.add(w);
      x2_s.add(w * w);
      hi_s.add(w);
      hi2_s.add(w * w);
    } else if (st == HoleStatus::uncertain) {
      ++t.n_uncertain;
      hi_s.add(w);
      hi2_s.add(w * w);
    }
  }
  t.sum_w = w_s.value();
  t.sum_w2 = w2_s.value();
  t.sum_x = x_s.value();
  t.sum_x2 = x2_s.value();
  t.sum_hi = hi_s.value();
  t.sum_hi2 = hi2_s.value();
  return t;
}

inline EstimateResult finish_importance(const WeightedTallies& t,
                                        std::int64_t n) {
  EstimateResult res;
  res.method = Method::importance;
  res.n_samples = n;
  res.n_hole = t.n_hole;
  res.n_uncertain = t.n_uncertain;
  const double dn = static_cast<double>(n);
  res.ess = t.sum_w2 > 0.0 ? t.sum_w * t.sum_w / t.sum_w2 : 0.0;
  res.ess_hole = t.sum_x2 > 0.0 ? t.sum_x * t.sum_x / t.sum_x2 : 0.0;
  res.ess_unreliable = res.ess < 50.0;
  if (t.sum_x <= 0.0 && t.sum_hi <= 0.0)
    throw EstimationError(
        "estimate_importance: all indicator-weight products are zero");
  const double mean_x = t.sum_x / dn;
  const double var_x = std::max(0.0, t.sum_x2 / dn - mean_x * mean_x);
  const double se_x = std::sqrt(var_x / dn);
  const double mean_hi = t.sum_hi / dn;
  const double var_hi = std::max(0.0, t.sum_hi2 / dn - mean_hi * mean_hi);
  const double se_hi = std::sqrt(var_hi / dn);
  const double lo = std::max(0.0, mean_x - 1.96 * se_x);
  const double hi = std::min(1.0, mean_hi + 1.96 * se_hi);
  res.log_ci_low = lo > 0.0 ? std::log(lo) : kNegInf;
  res.log_ci_high = hi > 0.0 ? std::log(hi) : kNegInf;
  if (mean_x > 0.0) {
    res.log_p = std::log(mean_x);
  } else {
    res.log_p = res.log_ci_high - 0.6931471805599453;
    res.degenerate = true;
  }
  return res;
}

}  // namespace detail

// Certificate-shaped exponential tilt; unbiased for P_H(r) whatever the
// proposal, the proposal only moves the variance.
inline EstimateResult estimate_importance(const CoefficientModel& model,
                                          double r, std::int64_t n_samples,
                                          const ProposalSpec& proposal,
                                          std::uint64_t seed,
                                          const EstimatorOptions& opt = {}) {
  if (n_samples < 1000)
    throw ValidationError("estimate_importance: n_samples must be >= 1000");
  proposal.validate();
  const detail::HoleContext ctx(model, r, opt.log_eps);
  std::vector<double> logw(static_cast<std::size_t>(n_samples));
  std::vector<std::uint8_t> status(static_cast<std::size_t>(n_samples));
  detail::parallel_streams(n_samples, opt.workers,
                           [&](std::int64_t b, std::int64_t e) {
    std::vector<std::complex<double>> draws(
        static_cast<std::size_t>(ctx.n_trunc) + 1);
    for (std::int64_t s = b; s < e; ++s) {
      detail::draw_from_proposal(seed, static_cast<std::uint64_t>(s), proposal,
                                 draws);
      logw[static_cast<std::size_t>(s)] =
          detail::importance_log_weight(draws, proposal);
      status[static_cast<std::size_t>(s)] =
          static_cast<std::uint8_t>(ctx.classify(draws, opt));
    }
  });
  return detail::finish_importance(detail::reduce_weighted(logw, status),
                                   n_samples);
}

inline EstimateResult estimate_importance(const CoefficientModel& model,
                                          double r, std::int64_t n_samples,
                                          std::uint64_t seed,
                                          const EstimatorOptions& opt = {}) {
  const std::int64_t n_trunc = choose_truncation(model, r, opt.log_eps);
  return estimate_importance(model, r, n_samples,
                             ProposalSpec::defaults(model, r, n_trunc), seed,
                             opt);
}

// Same tilt-and-weight machinery against an arbitrary event on the draw
// vector; this is how the weight algebra is validated against events with
// closed-form probabilities.
template <class EventFn>
EstimateResult estimate_event_importance(EventFn&& event,
                                         std::int64_t n_terms,
                                         const ProposalSpec& proposal,
                                         std::int64_t n_samples,
                                         std::uint64_t seed, int workers = 0) {
  proposal.validate();
  std::vector<double> logw(static_cast<std::size_t>(n_samples));
  std::vector<std::uint8_t> status(static_cast<std::size_t>(n_samples));
  detail::parallel_streams(n_samples, workers,
                           [&](std::int64_t b, std::int64_t e) {
    std::vector<std::complex<double>> draws(static_cast<std::size_t>(n_terms) +
                                            1);
    for (std::int64_t s = b; s < e; ++s) {
      detail::draw_from_proposal(seed, static_cast<std::uint64_t>(s), proposal,
                                 draws);
      logw[static_cast<std::size_t>(s)] =
          detail::importance_log_weight(draws, proposal);
      status[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(
          event(std::span<const std::complex<double>>(draws))
              ? HoleStatus::hole
              : HoleStatus::no_hole);
    }
  });
  return detail::finish_importance(detail::reduce_weighted(logw, status),
                                   n_samples);
}

struct CompareConfig {
  Method method = Method::importance;
  std::int64_t n_samples = 10000;
  std::uint64_t seed = 1;
  std::optional<ProposalSpec> proposal;
  EstimatorOptions options;
};

struct CompareRow {
  double r = 0.0;
  double s = 0.0;
  double neg_log_p = kNaN;
  double neg_certificate = kNaN;  // NaN where the certificate is degenerate
  double n1_log_n1 = 0.0;
  double ratio = kNaN;  // (-log p-hat)/S, NaN when S = 0
  double ess = kNaN;
};

inline std::vector<CompareRow> compare_vs_s(const CoefficientModel& model,
                                            std::span<const double> r_grid,
                                            const CompareConfig& cfg = {}) {
  std::vector<CompareRow> rows;
  rows.reserve(r_grid.size());
  for (const double r : r_grid) {
    CompareRow row;
    row.r = r;
    row.s = s_value(model, r);
    const std::int64_t n1 = n1_count(model, r).n1;
    row.n1_log_n1 = static_cast<double>(n1) * std::log(static_cast<double>(n1));
    EstimateResult est;
    if (cfg.method == Method::direct) {
      est = estimate_direct(model, r, cfg.n_samples, cfg.seed, cfg.options);
    } else if (cfg.proposal) {
      est = estimate_importance(model, r, cfg.n_samples, *cfg.proposal,
                                cfg.seed, cfg.options);
    } else {
      est = estimate_importance(model, r, cfg.n_samples, cfg.seed, cfg.options);
    }
    row.neg_log_p = -est.log_p;
    row.ess = est.ess;
    try {
      row.neg_certificate = -certificate_log_prob(model, r).log_p;
    } catch (const DegenerateProfileError&) {
      row.neg_certificate = kNaN;
    }
    if (row.s > 0.0) row.ratio = row.neg_log_p / row.s;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace holescope

#endif  // HOLESCOPE_HOLEPROB_HPP
