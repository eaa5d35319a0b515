#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "holescope/sampling.hpp"

using namespace holescope;

TEST_CASE("draws are reproducible bit for bit") {
  const auto a = coefficient_draw(7, 3, 11);
  const auto b = coefficient_draw(7, 3, 11);
  CHECK(a.real() == b.real());
  CHECK(a.imag() == b.imag());
  // distinct cells decorrelate
  CHECK(coefficient_draw(7, 3, 12) != a);
  CHECK(coefficient_draw(7, 4, 11) != a);
  CHECK(coefficient_draw(8, 3, 11) != a);

  const auto s1 = sample_coefficients(42, 5, 30);
  const auto s2 = sample_coefficients(42, 5, 30);
  REQUIRE(s1.draws.size() == 31);
  for (std::size_t i = 0; i < s1.draws.size(); ++i)
    CHECK(s1.draws[i] == s2.draws[i]);
}

TEST_CASE("complex Gaussian convention: E|phi|^2 = 1, P(|phi|>=t)=e^{-t^2}") {
  constexpr std::int64_t n = 1000000;
  detail::KahanSum sum2;
  std::int64_t tail2 = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto phi = coefficient_draw(2024, 0, i);
    const double m2 = std::norm(phi);
    sum2.add(m2);
    if (m2 >= 4.0) ++tail2;
  }
  const double mean2 = sum2.value() / n;
  CHECK_THAT(mean2, Catch::Matchers::WithinAbs(1.0, 0.004));

  const double p2 = static_cast<double>(tail2) / n;
  const double expect = std::exp(-4.0);
  const double sigma = std::sqrt(expect * (1.0 - expect) / n);
  CHECK_THAT(p2, Catch::Matchers::WithinAbs(expect, 3.0 * sigma));
}

TEST_CASE("Kolmogorov-Smirnov: |phi|^2 against Exp(1)") {
  constexpr std::int64_t n = 100000;
  std::vector<double> xs(n);
  for (std::int64_t i = 0; i < n; ++i)
    xs[static_cast<std::size_t>(i)] = std::norm(coefficient_draw(99, 1, i));
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double f = -std::expm1(-xs[static_cast<std::size_t>(i)]);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  // alpha = 1e-3: c(alpha) = sqrt(-ln(alpha/2)/2) = 1.9495
  const double crit = 1.9495 / std::sqrt(static_cast<double>(n));
  INFO("KS statistic " << d << " critical " << crit);
  CHECK(d < crit);
}

TEST_CASE("choose_truncation hand cases") {
  const auto steep = CoefficientModel::table({0.0, -100.0, -200.0, -300.0});
  CHECK(choose_truncation(steep, 1.0, -30.0) == 0);

  // frozen from the direct-summation oracle (the analytic bound coincides)
  const auto gef = CoefficientModel::gef();
  CHECK(choose_truncation(gef, 2.0, -69.0) == 70);
}

TEST_CASE("choose_truncation satisfies its post-condition") {
  const auto models = {CoefficientModel::gef(),
                       CoefficientModel::mittag_leffler(1.0),
                       CoefficientModel::gaussian_decay(1.0)};
  for (const auto& m : models) {
    for (const double r : {1.0, 2.0, 5.0}) {
      for (const double log_eps : {-1.0, -20.0, -46.0}) {
        const auto n_trunc = choose_truncation(m, r, log_eps);
        const double target = max_term(m, r).log_mu + log_eps;
        INFO(m.describe() << " r=" << r << " log_eps=" << log_eps
                          << " n_trunc=" << n_trunc);
        // sufficiency against the true tail (direct summation oracle)
        detail::LogSumExp tail;
        const double log_r = std::log(r);
        for (std::int64_t n = n_trunc + 1; n <= n_trunc + 3000; ++n) {
          if (n >= m.support_limit()) break;
          tail.add(2.0 * (m.log_coeff(n) + static_cast<double>(n) * log_r));
        }
        if (!tail.empty()) CHECK(0.5 * tail.value() <= target);
        // minimality with respect to the analytic bound
        CHECK(truncation_tail_log_bound(m, n_trunc, r) <= target);
        if (n_trunc > 0) {
          double prev;
          try {
            prev = truncation_tail_log_bound(m, n_trunc - 1, r);
          } catch (const ValidationError&) {
            prev = kPosInf;  // still on the plateau: bound undefined/infinite
          }
          CHECK(prev > target);
        }
      }
    }
  }
}

TEST_CASE("truncation certificate: explicit next-200-terms tail is small") {
  const auto gef = CoefficientModel::gef();
  for (const double r : {2.0, 5.0}) {
    const double log_eps = -20.0;
    const auto n_trunc = choose_truncation(gef, r, log_eps);
    const double log_mu = max_term(gef, r).log_mu;
    const double budget = 10.0 * std::exp(log_eps);  // x mu, relative scale
    const double log_r = std::log(r);
    for (std::uint64_t stream = 0; stream < 100; ++stream) {
      detail::KahanSum tail;
      for (std::int64_t n = n_trunc + 1; n <= n_trunc + 200; ++n) {
        const double h = gef.log_coeff(n) + static_cast<double>(n) * log_r;
        tail.add(std::abs(coefficient_draw(31337, stream, n)) *
                 std::exp(h - log_mu));
      }
      CHECK(tail.value() <= budget);
    }
  }
}

TEST_CASE("evaluate_on_circle: single-term sample is constant") {
  const auto gef = CoefficientModel::gef();
  SeriesSample s;
  s.n_trunc = 4;
  s.r_max = 2.0;
  s.draws = {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  const double log_mu = max_term(gef, 2.0).log_mu;
  const std::vector<double> thetas = {0.0, 1.0, 2.5, 6.0};
  const auto vals = evaluate_on_circle(gef, s, 2.0, thetas);
  for (const auto& v : vals) {
    CHECK_THAT(v.real(), Catch::Matchers::WithinRel(std::exp(-log_mu), 1e-14));
    CHECK_THAT(v.imag(), Catch::Matchers::WithinAbs(0.0, 1e-16));
  }
}

TEST_CASE("evaluate_on_circle agrees with naive per-point summation") {
  const auto gef = CoefficientModel::gef();
  const double r = 2.0;
  auto s = make_sample(gef, r, -30.0, 5150, 77);
  const std::int64_t grid = 64;  // 2^6 grid
  std::vector<double> thetas(grid);
  for (std::int64_t j = 0; j < grid; ++j)
    thetas[static_cast<std::size_t>(j)] =
        2.0 * M_PI * static_cast<double>(j) / static_cast<double>(grid);
  const auto vals = evaluate_on_circle(gef, s, r, thetas);
  const double log_mu = max_term(gef, r).log_mu;
  const double log_r = std::log(r);
  for (std::int64_t j = 0; j < grid; ++j) {
    std::complex<double> naive(0.0, 0.0);
    for (std::int64_t n = 0; n <= s.n_trunc; ++n) {
      const double h = gef.log_coeff(n) + static_cast<double>(n) * log_r;
      const double ang = static_cast<double>(n) * thetas[static_cast<std::size_t>(j)];
      naive += s.draws[static_cast<std::size_t>(n)] * std::exp(h - log_mu) *
               std::complex<double>(std::cos(ang), std::sin(ang));
    }
    CHECK_THAT(std::abs(vals[static_cast<std::size_t>(j)] - naive),
               Catch::Matchers::WithinAbs(0.0, 1e-10));
  }
}

TEST_CASE("conjugating the draws conjugates the values at -theta") {
  const auto gef = CoefficientModel::gef();
  const double r = 1.5;
  auto s = make_sample(gef, r, -30.0, 8, 3);
  auto s_conj = s;
  for (auto& phi : s_conj.draws) phi = std::conj(phi);
  const std::vector<double> thetas = {0.3, 1.2, 4.4};
  std::vector<double> neg;
  for (const double t : thetas) neg.push_back(-t);
  const auto a = evaluate_on_circle(gef, s, r, thetas);
  const auto b = evaluate_on_circle(gef, s_conj, r, neg);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK_THAT(a[i].real(), Catch::Matchers::WithinAbs(b[i].real(), 1e-15));
    CHECK_THAT(a[i].imag(), Catch::Matchers::WithinAbs(-b[i].imag(), 1e-15));
  }
}

TEST_CASE("evaluate_on_circle enforces the certified radius") {
  const auto gef = CoefficientModel::gef();
  auto s = make_sample(gef, 2.0, -30.0, 1, 1);
  CHECK(s.r_max == 2.0);
  const std::vector<double> thetas = {0.0};
  CHECK_THROWS_AS(evaluate_on_circle(gef, s, 2.5, thetas), ValidationError);
  CHECK_NOTHROW(evaluate_on_circle(gef, s, 1.0, thetas));
}

TEST_CASE("stream partitioning is worker-independent by construction") {
  // the same (seed, stream, n) cells, queried in a scrambled order,
  // reproduce the in-order draw set exactly
  std::vector<std::complex<double>> in_order;
  for (std::uint64_t s = 0; s < 64; ++s) in_order.push_back(coefficient_draw(1, s, 9));
  for (std::uint64_t s = 64; s-- > 0;) {
    CHECK(coefficient_draw(1, s, 9) == in_order[static_cast<std::size_t>(s)]);
  }
}
