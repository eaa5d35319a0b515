#ifndef HOLESCOPE_ZEROCOUNT_HPP
#define HOLESCOPE_ZEROCOUNT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "holescope/detail/numeric.hpp"
#include "holescope/sampling.hpp"

namespace holescope {

enum class CountStatus { certified, uncertain };
enum class HoleStatus { hole, no_hole, uncertain };

struct RefinementStep {
  std::int64_t grid = 0;
  double min_modulus = 0.0;
  double max_phase_step = 0.0;
};

struct ZeroCountResult {
  std::int64_t count = 0;
  double min_log_modulus = kNegInf;  // min over refined grid of log|f/mu|
  int refinement_depth = 0;
  CountStatus status = CountStatus::uncertain;
  std::vector<RefinementStep> trace;  // filled when requested
};

struct WindingOptions {
  std::int64_t initial_grid = 32;  // power of two, >= 16
  int max_depth = 18;              // allowed grid doublings
  double certification_floor = 0.0;   // modulus floor on the same scale as f
  double lipschitz_per_theta = 0.0;   // bound on |df/dtheta|; guards grid gaps
  bool collect_trace = false;
};

// Total phase change / 2pi over |z|=const, with grid doubling until every
// consecutive phase increment is < pi/2 in magnitude and the sampled minimum
// modulus clears the floor plus the between-grid-points Lipschitz slack.
template <class F>
ZeroCountResult winding_number(F&& f, const WindingOptions& opt = {}) {
  ZeroCountResult res;
  std::int64_t grid = std::max<std::int64_t>(opt.initial_grid, 16);
  // round up to a power of two
  while (grid & (grid - 1)) ++grid;

  constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::vector<std::complex<double>> vals(static_cast<std::size_t>(grid));
  for (std::int64_t j = 0; j < grid; ++j)
    vals[static_cast<std::size_t>(j)] = f(kTwoPi * static_cast<double>(j) /
                                          static_cast<double>(grid));

  for (int depth = 0;; ++depth) {
    double min_mod = kPosInf;
    double max_step = 0.0;
    detail::KahanSum phase_sum;
    bool degenerate = false;
    for (std::size_t j = 0; j < vals.size(); ++j) {
      const std::complex<double>& a = vals[j];
      const std::complex<double>& b = vals[(j + 1) % vals.size()];
      const double am = std::abs(a);
      min_mod = std::min(min_mod, am);
      if (am == 0.0 || std::abs(b) == 0.0) {
        degenerate = true;
        break;
      }
      const double step = std::arg(b / a);
      max_step = std::max(max_step, std::abs(step));
      phase_sum.add(step);
    }
    res.refinement_depth = depth;
    if (opt.collect_trace) res.trace.push_back({grid, min_mod, max_step});

    const double spacing = kTwoPi / static_cast<double>(grid);
    const double floor =
        opt.certification_floor + 0.5 * spacing * opt.lipschitz_per_theta;
    if (!degenerate && max_step < 1.5707963267948966 && min_mod > floor) {
      const double turns = phase_sum.value() / kTwoPi;
      const auto count = static_cast<std::int64_t>(std::llround(turns));
      if (std::abs(turns - static_cast<double>(count)) < 0.25 && count >= 0) {
        res.count = count;
        res.min_log_modulus = std::log(min_mod);
        res.status = CountStatus::certified;
        return res;
      }
    }
    if (depth >= opt.max_depth) {
      const double turns = phase_sum.value() / kTwoPi;
      res.count = std::max<std::int64_t>(
          0, static_cast<std::int64_t>(std::llround(turns)));
      res.min_log_modulus = min_mod > 0.0 ? std::log(min_mod) : kNegInf;
      res.status = CountStatus::uncertain;
      return res;
    }
    // double the grid, evaluating only the new midpoints
    std::vector<std::complex<double>> next(vals.size() * 2);
    for (std::size_t j = 0; j < vals.size(); ++j) {
      next[2 * j] = vals[j];
      next[2 * j + 1] = f(kTwoPi * (2.0 * static_cast<double>(j) + 1.0) /
                          static_cast<double>(2 * grid));
    }
    vals.swap(next);
    grid *= 2;
  }
}

struct DiskCountOptions {
  std::int64_t initial_grid = 32;
  int max_depth = 18;
  // Override for the truncation tail bound, as log of the modulus relative
  // to mu(r); -inf means the truncated series is the exact function.
  std::optional<double> log_tail_rel_override;
  bool collect_trace = false;
};

// Zeros of the sampled series in the open disk |z| < r. Certification floor:
// the analytic truncation tail bound (Rouche margin for the full series)
// plus the angular-derivative Lipschitz slack handled inside winding_number.
inline ZeroCountResult count_zeros_in_disk(const CoefficientModel& model,
                                           const SeriesSample& sample, double r,
                                           const DiskCountOptions& opt = {}) {
  const CircleEvaluator ev(model, sample, r);
  double log_tail_rel;
  if (opt.log_tail_rel_override) {
    log_tail_rel = *opt.log_tail_rel_override;
  } else {
    log_tail_rel =
        truncation_tail_log_bound(model, sample.n_trunc, r) - ev.log_mu();
  }
  WindingOptions wopt;
  wopt.initial_grid = opt.initial_grid;
  wopt.max_depth = opt.max_depth;
  wopt.certification_floor =
      log_tail_rel == kNegInf ? 0.0 : std::exp(log_tail_rel);
  wopt.lipschitz_per_theta = ev.derivative_bound();
  wopt.collect_trace = opt.collect_trace;
  return winding_number([&ev](double theta) { return ev(theta); }, wopt);
}

inline HoleStatus has_hole(const CoefficientModel& model,
                           const SeriesSample& sample, double r,
                           const DiskCountOptions& opt = {}) {
  const ZeroCountResult res = count_zeros_in_disk(model, sample, r, opt);
  if (res.status == CountStatus::uncertain) return HoleStatus::uncertain;
  return res.count == 0 ? HoleStatus::hole : HoleStatus::no_hole;
}

}  // namespace holescope

#endif  // HOLESCOPE_ZEROCOUNT_HPP
