#ifndef HOLESCOPE_SAMPLING_HPP
#define HOLESCOPE_SAMPLING_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "holescope/coeffs.hpp"
#include "holescope/detail/numeric.hpp"
#include "holescope/detail/philox.hpp"
#include "holescope/growth.hpp"

namespace holescope {

// One realization of the random series. Draws are a pure function of
// (seed, stream_index, n): regeneration is bit-for-bit.
struct SeriesSample {
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
  std::int64_t n_trunc = 0;
  std::vector<std::complex<double>> draws;  // phi_0 ... phi_{n_trunc}
  double r_max = 0.0;                       // largest radius the truncation certifies
};

// Upper bound for (1/2) log sum_{n>N} a_n^2 r^{2n}: log-concavity dominates
// the tail by the geometric series starting at h(N+1).
inline double truncation_tail_log_bound(const CoefficientModel& model,
                                        std::int64_t n_trunc, double r) {
  const double log_r = std::log(r);
  auto h = [&](std::int64_t n) {
    return model.log_coeff(n) + static_cast<double>(n) * log_r;
  };
  const double h1 = h(n_trunc + 1);
  if (h1 == kNegInf) return kNegInf;  // empty tail (finite table)
  const double g = h(n_trunc) - h1;
  if (!(g > 0.0))
    throw ValidationError("truncation_tail_log_bound: h not decreasing at n_trunc");
  // sum_{n>N} e^{2h(n)} <= e^{2h(N+1)} / (1 - e^{-2g})
  return h1 - 0.5 * detail::log1mexp(2.0 * g);
}

// Minimal N with tail-rms bound <= e^{log_eps} mu(r).
inline std::int64_t choose_truncation(const CoefficientModel& model, double r,
                                      double log_eps) {
  if (!(log_eps < 0.0)) throw ValidationError("choose_truncation: log_eps < 0");
  detail::Profile p(model, r);
  const MaxTerm mt = p.max_term();
  const double target = mt.log_mu + log_eps;
  const std::int64_t limit = model.support_limit();
  auto bound_ok = [&](std::int64_t n) {
    const double h1 = p.h(n + 1);
    if (h1 == kNegInf) return true;
    const double g = p.h(n) - h1;
    if (!(g > 0.0)) return false;  // still on the plateau
    return h1 - 0.5 * detail::log1mexp(2.0 * g) <= target;
  };
  // bound is non-increasing once h strictly decreases; gallop + bisect
  std::int64_t lo = mt.nu;  // any N < first ok index fails
  if (bound_ok(lo)) return lo;
  std::int64_t step = 1, hi = lo + step;
  while (hi < limit - 1 && !bound_ok(hi)) {
    lo = hi;
    step *= 2;
    hi = lo + step;
  }
  if (hi >= limit - 1) {
    if (!bound_ok(limit - 1))
      throw SupportExhausted("choose_truncation: support exhausted");
    hi = limit - 1;
  }
  while (lo + 1 < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (bound_ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Counter-based draws: any cell addressable, no sequential dependence.
inline std::complex<double> coefficient_draw(std::uint64_t seed,
                                             std::uint64_t stream_index,
                                             std::int64_t n) {
  return detail::standard_complex_gaussian(seed, stream_index,
                                           static_cast<std::uint64_t>(n));
}

inline SeriesSample sample_coefficients(std::uint64_t seed,
                                        std::uint64_t stream_index,
                                        std::int64_t n_trunc) {
  SeriesSample s;
  s.seed = seed;
  s.stream_index = stream_index;
  s.n_trunc = n_trunc;
  s.r_max = kPosInf;  // caller manages truncation adequacy
  s.draws.resize(static_cast<std::size_t>(n_trunc) + 1);
  for (std::int64_t n = 0; n <= n_trunc; ++n)
    s.draws[static_cast<std::size_t>(n)] = coefficient_draw(seed, stream_index, n);
  return s;
}

// Sample with truncation certified for radius r at relative tail e^{log_eps}.
inline SeriesSample make_sample(const CoefficientModel& model, double r,
                                double log_eps, std::uint64_t seed,
                                std::uint64_t stream_index) {
  SeriesSample s =
      sample_coefficients(seed, stream_index, choose_truncation(model, r, log_eps));
  s.r_max = r;
  return s;
}

// f(r e^{i theta}) / mu(r) as a polynomial in e^{i theta} with coefficients
// phi_n e^{h(n) - log mu}; every scaled magnitude is <= |phi_n|, so the
// Horner evaluation cannot overflow.
class CircleEvaluator {
 public:
  CircleEvaluator(const CoefficientModel& model, const SeriesSample& sample,
                  double r) {
    if (!(r <= sample.r_max))
      throw ValidationError("CircleEvaluator: r exceeds sample.r_max");
    detail::Profile p(model, r);
    log_mu_ = p.max_term().log_mu;
    coeffs_.resize(sample.draws.size());
    detail::KahanSum deriv;
    for (std::size_t n = 0; n < sample.draws.size(); ++n) {
      const double w = std::exp(p.h(static_cast<std::int64_t>(n)) - log_mu_);
      coeffs_[n] = sample.draws[n] * w;
      deriv.add(static_cast<double>(n) * std::abs(coeffs_[n]));
    }
    derivative_bound_ = deriv.value();
  }

  std::complex<double> operator()(double theta) const {
    const std::complex<double> z(std::cos(theta), std::sin(theta));
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * z + coeffs_[k];
    return acc;
  }

  // |d/dtheta (f/mu)| <= sum n |phi_n| e^{h(n)-log mu}
  double derivative_bound() const { return derivative_bound_; }
  double log_mu() const { return log_mu_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<std::complex<double>>& coefficients() const { return coeffs_; }

 private:
  std::vector<std::complex<double>> coeffs_;
  double derivative_bound_ = 0.0;
  double log_mu_ = 0.0;
};

inline std::vector<std::complex<double>> evaluate_on_circle(
    const CoefficientModel& model, const SeriesSample& sample, double r,
    std::span<const double> thetas) {
  const CircleEvaluator ev(model, sample, r);
  std::vector<std::complex<double>> out;
  out.reserve(thetas.size());
  for (const double t : thetas) out.push_back(ev(t));
  return out;
}

}  // namespace holescope

#endif  // HOLESCOPE_SAMPLING_HPP
