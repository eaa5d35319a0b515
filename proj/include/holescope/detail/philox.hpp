#ifndef HOLESCOPE_DETAIL_PHILOX_HPP
#define HOLESCOPE_DETAIL_PHILOX_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace holescope {
namespace detail {

// Philox-4x32-10 counter-based generator (Salmon et al., SC'11 constants).
// Stateless: any (key, counter) cell is addressable in O(1), which is what
// makes per-(seed, stream, index) draws reproducible under any worker layout.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                            std::uint64_t ctr_lo,
                                            std::uint64_t ctr_hi) {
    std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
    std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
    std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return {c0, c1, c2, c3};
  }
};

// 53-bit uniform in (0, 1]: never returns 0, so -log(u) is always finite.
inline double to_unit_open_closed(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// 53-bit uniform in [0, 1).
inline double to_unit_closed_open(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Standard complex Gaussian with E|phi|^2 = 1, i.e. P(|phi| >= t) = e^{-t^2}:
// |phi|^2 is exactly Exp(1), the phase uniform. Components are N(0, 1/2).
inline std::complex<double> standard_complex_gaussian(std::uint64_t seed,
                                                      std::uint64_t stream,
                                                      std::uint64_t index) {
  const auto w = Philox4x32::block(seed, index, stream);
  const std::uint64_t a =
      (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
  const std::uint64_t b =
      (static_cast<std::uint64_t>(w[2]) << 32) | w[3];
  const double radius = std::sqrt(-std::log(to_unit_open_closed(a)));
  const double angle = 6.283185307179586476925286766559 * to_unit_closed_open(b);
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

// Uniform double in [0,1) from an addressed cell; used by test oracles and
// the Monte Carlo volume check.
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t index) {
  const auto w = Philox4x32::block(seed, index, stream);
  const std::uint64_t a = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
  return to_unit_closed_open(a);
}

}  // namespace detail
}  // namespace holescope

#endif  // HOLESCOPE_DETAIL_PHILOX_HPP
