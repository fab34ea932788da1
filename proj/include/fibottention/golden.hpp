#pragma once

#include <cstdint>
#include <stdexcept>

namespace fibottention {

// Golden ratio phi and its conjugate psi, the two roots of x^2 - x - 1 = 0.
// Long-double copies carry the extra mantissa bits used by the closed-form
// sequence evaluation.
inline constexpr double kPhi = 1.6180339887498948482;
inline constexpr double kPsi = -0.6180339887498948482;
inline constexpr double kSqrt5 = 2.2360679774997896964;

inline constexpr long double kPhiL = 1.61803398874989484820458683436563811772L;
inline constexpr long double kPsiL = -0.61803398874989484820458683436563811772L;
inline constexpr long double kSqrt5L = 2.23606797749978969640917366873127623544L;

struct GoldenConstants {
  double phi = kPhi;
  double psi = kPsi;
};

// Exact integer square root, floor(sqrt(x)), for any uint64 input.
inline std::uint64_t isqrt_u64(std::uint64_t x) {
  if (x == 0) return 0;
  auto sq = [](std::uint64_t v) {
    return static_cast<unsigned __int128>(v) * v;
  };
  std::uint64_t y = static_cast<std::uint64_t>(__builtin_sqrtl(static_cast<long double>(x)));
  while (y > 0 && sq(y) > x) --y;
  while (sq(y + 1) <= x) ++y;
  return y;
}

// Exact Beatty value floor(n * phi), computed in integers.
//
// n*phi = (n + sqrt(5 n^2)) / 2 and 5 n^2 is never a perfect square for
// n >= 1, so with s = floor(sqrt(5 n^2)) we get floor(n*phi) =
// floor((n + s) / 2). Floating-point floors misround near integer
// boundaries; the Wythoff disjointness and coverage guarantees require the
// exact value.
inline std::uint64_t beatty_phi(std::uint64_t n) {
  if (n > (1ULL << 30)) {
    throw std::overflow_error("beatty_phi: 5*n^2 exceeds the exact integer range");
  }
  const std::uint64_t s = isqrt_u64(5ULL * n * n);
  return (n + s) / 2;
}

}  // namespace fibottention
