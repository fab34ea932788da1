#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibottention/golden.hpp"

namespace fibottention {

// Initial pair (f1, f2) of a generalized Fibonacci sequence.
struct FibPair {
  std::int64_t a = 0;
  std::int64_t b = 0;

  friend bool operator==(const FibPair&, const FibPair&) = default;
};

// A finite integer dilation sequence in generation order. Duplicates are
// kept (Fib(1,1) yields 1 twice); deduplication is set semantics and
// happens only when a support set is formed.
struct DilationSequence {
  std::vector<std::int64_t> elements;
  std::string rule;
  std::int64_t cap = 0;  // window bound used at generation
};

// Raised by the sequence families when no element fits below the window.
struct EmptySequenceError : std::domain_error {
  using std::domain_error::domain_error;
};

// Generalized Fibonacci elements of Fib(a, b): start [a, b], append
// next = last + second-last while next <= w. The initial elements are kept
// even when they exceed w; window filtering is the mask builder's job.
inline DilationSequence generalized_fibonacci(std::int64_t a, std::int64_t b, std::int64_t w) {
  if (a < 0 || b < 0) throw std::invalid_argument("generalized_fibonacci: negative initial element");
  if (w < 1) throw std::invalid_argument("generalized_fibonacci: window must be >= 1");
  DilationSequence seq;
  seq.rule = "fib(" + std::to_string(a) + "," + std::to_string(b) + ")";
  seq.cap = w;
  seq.elements = {a, b};
  if (a == 0 && b == 0) return seq;  // next would be 0 <= w forever
  while (true) {
    const __int128 next = static_cast<__int128>(seq.elements[seq.elements.size() - 1]) +
                          static_cast<__int128>(seq.elements[seq.elements.size() - 2]);
    if (next > w) break;
    seq.elements.push_back(static_cast<std::int64_t>(next));
  }
  return seq;
}

// Initial pair of row i of the Wythoff array:
//   a_i = floor(floor(i*phi) * phi),  b_i = floor(floor(i*phi) * phi^2).
// phi^2 = phi + 1 gives b_i = a_i + floor(i*phi), so both floors reduce to
// exact Beatty evaluations.
inline FibPair wythoff_pair(std::uint64_t i) {
  if (i < 1) throw std::invalid_argument("wythoff_pair: row index must be >= 1");
  const std::uint64_t m = beatty_phi(i);
  const std::uint64_t a = beatty_phi(m);
  return {static_cast<std::int64_t>(a), static_cast<std::int64_t>(a + m)};
}

// Row i extended two recurrence steps backwards:
//   b_m = b - a = floor(i*phi),  a_m = a - b_m.
// Applying the recurrence twice to (a_m, b_m) reproduces (a, b).
inline FibPair modified_wythoff_pair(std::uint64_t i) {
  if (i < 1) throw std::invalid_argument("modified_wythoff_pair: row index must be >= 1");
  const std::uint64_t m = beatty_phi(i);
  const std::uint64_t a = beatty_phi(m);
  return {static_cast<std::int64_t>(a - m), static_cast<std::int64_t>(m)};
}

// n-th element of Fib(a, b) by exact integer recurrence (f1 = a, f2 = b).
inline std::int64_t fib_element(std::int64_t a, std::int64_t b, int n) {
  if (a < 0 || b < 0) throw std::invalid_argument("fib_element: negative initial element");
  if (n < 1) throw std::invalid_argument("fib_element: n must be >= 1");
  if (n == 1) return a;
  std::int64_t prev = a, cur = b;
  for (int k = 3; k <= n; ++k) {
    std::int64_t next = 0;
    if (__builtin_add_overflow(prev, cur, &next)) {
      throw std::overflow_error("fib_element: value exceeds the exact integer range");
    }
    prev = cur;
    cur = next;
  }
  return cur;
}

// Closed-form value of the n-th element of Fib(a, b),
//   f_n = ((b - a*psi)/sqrt5) * phi^(n-1) + ((a*phi - b)/sqrt5) * psi^(n-1),
// valid for n >= 1. Evaluated in long double so that the nearest integer
// equals the recurrence value for all f_n < 2^52.
inline double binet(std::int64_t a, std::int64_t b, int n) {
  if (a < 0 || b < 0) throw std::invalid_argument("binet: negative initial element");
  if (n < 1) throw std::invalid_argument("binet: n must be >= 1");
  const long double al = static_cast<long double>(a);
  const long double bl = static_cast<long double>(b);
  const long double c1 = (bl - al * kPsiL) / kSqrt5L;
  const long double c2 = (al * kPhiL - bl) / kSqrt5L;
  const long double value = c1 * powl(kPhiL, n - 1) + c2 * powl(kPsiL, n - 1);
  if (value > static_cast<long double>(std::numeric_limits<std::int64_t>::max())) {
    throw std::overflow_error("binet: f_n exceeds the exactly representable integer range");
  }
  return static_cast<double>(value);
}

// The companion closed form with powers running to n instead of n - 1:
//   f_n = ((a - (b-a)*psi)/sqrt5) * phi^n + (((b-a)*phi - a)/sqrt5) * psi^n.
inline double binet_power_n(std::int64_t a, std::int64_t b, int n) {
  if (a < 0 || b < 0) throw std::invalid_argument("binet_power_n: negative initial element");
  if (n < 1) throw std::invalid_argument("binet_power_n: n must be >= 1");
  const long double al = static_cast<long double>(a);
  const long double bl = static_cast<long double>(b);
  const long double c1 = (al - (bl - al) * kPsiL) / kSqrt5L;
  const long double c2 = ((bl - al) * kPhiL - al) / kSqrt5L;
  const long double value = c1 * powl(kPhiL, n) + c2 * powl(kPsiL, n);
  if (value > static_cast<long double>(std::numeric_limits<std::int64_t>::max())) {
    throw std::overflow_error("binet_power_n: f_n exceeds the exactly representable integer range");
  }
  return static_cast<double>(value);
}

// (c, 2c, 3c, ...) up to w.
inline DilationSequence linear_sequence(std::int64_t c, std::int64_t w) {
  if (c < 1) throw std::invalid_argument("linear_sequence: factor must be >= 1");
  if (w < 1) throw std::invalid_argument("linear_sequence: window must be >= 1");
  DilationSequence seq;
  seq.rule = "linear(" + std::to_string(c) + ")";
  seq.cap = w;
  for (std::int64_t v = c; v <= w; v += c) seq.elements.push_back(v);
  if (seq.elements.empty()) throw EmptySequenceError("linear_sequence: no element <= window");
  return seq;
}

// (c + shift, 2c + shift, ...) up to w; head-shifted variant of linear.
inline DilationSequence linear_shifted_sequence(std::int64_t c, std::int64_t shift, std::int64_t w) {
  if (c < 1) throw std::invalid_argument("linear_shifted_sequence: factor must be >= 1");
  if (shift < 0) throw std::invalid_argument("linear_shifted_sequence: shift must be >= 0");
  if (w < 1) throw std::invalid_argument("linear_shifted_sequence: window must be >= 1");
  DilationSequence seq;
  seq.rule = "linear-shifted(" + std::to_string(c) + "," + std::to_string(shift) + ")";
  seq.cap = w;
  for (std::int64_t v = c + shift; v <= w; v += c) seq.elements.push_back(v);
  if (seq.elements.empty()) throw EmptySequenceError("linear_shifted_sequence: no element <= window");
  return seq;
}

// (base^1, base^2, ...) up to w.
inline DilationSequence power_sequence(std::int64_t base, std::int64_t w) {
  if (base < 2) throw std::invalid_argument("power_sequence: base must be >= 2");
  if (w < 1) throw std::invalid_argument("power_sequence: window must be >= 1");
  DilationSequence seq;
  seq.rule = "power(" + std::to_string(base) + ")";
  seq.cap = w;
  for (__int128 v = base; v <= w; v *= base) seq.elements.push_back(static_cast<std::int64_t>(v));
  if (seq.elements.empty()) throw EmptySequenceError("power_sequence: no element <= window");
  return seq;
}

// (1^e, 2^e, 3^e, ...) up to w, with e in {2, 3}.
inline DilationSequence poly_sequence(int exponent, std::int64_t w) {
  if (exponent != 2 && exponent != 3) throw std::invalid_argument("poly_sequence: exponent must be 2 or 3");
  if (w < 1) throw std::invalid_argument("poly_sequence: window must be >= 1");
  DilationSequence seq;
  seq.rule = "poly(" + std::to_string(exponent) + ")";
  seq.cap = w;
  for (std::int64_t n = 1;; ++n) {
    __int128 v = n;
    for (int k = 1; k < exponent; ++k) v *= n;
    if (v > w) break;
    seq.elements.push_back(static_cast<std::int64_t>(v));
  }
  if (seq.elements.empty()) throw EmptySequenceError("poly_sequence: no element <= window");
  return seq;
}

}  // namespace fibottention
