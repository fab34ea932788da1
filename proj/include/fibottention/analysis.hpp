#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fibottention/golden.hpp"
#include "fibottention/maskgen.hpp"
#include "fibottention/matrix.hpp"

namespace fibottention {

// Upper bound on the support size of one Fib(a, b) head under window w over
// N patches:
//   |Omega| <= 2N * ((log(sqrt5*w + |a*phi - b|) - log(b - a*psi)) / log(phi) + 1),
// natural logarithm. Hypotheses: 1 <= a < b <= w <= N.
inline double support_size_bound(std::int64_t a, std::int64_t b, int w, int n_patches) {
  if (!(1 <= a && a < b && b <= w && w <= n_patches)) {
    throw std::domain_error("support_size_bound: requires 1 <= a < b <= w <= N");
  }
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  const double num = std::log(kSqrt5 * w + std::abs(ad * kPhi - bd)) - std::log(bd - ad * kPsi);
  return 2.0 * n_patches * (num / std::log(kPhi) + 1.0);
}

struct ComplexityBound {
  double tight = 0.0;       // 2Nd (2.08 log((sqrt5+1) w_max) - 1)
  double simplified = 0.0;  // 4.16 N d log(3.3 N)
};

// Bound on the total query-key dot-product count of a Wythoff head family,
// weighted by d/h per dot product. Natural logarithm throughout.
inline ComplexityBound total_dot_product_bound(std::int64_t n_patches, std::int64_t d, std::int64_t w_max) {
  if (n_patches < 1 || d < 1) throw std::domain_error("total_dot_product_bound: N and d must be >= 1");
  if (w_max < 1 || w_max > n_patches) {
    throw std::domain_error("total_dot_product_bound: requires 1 <= w_max <= N");
  }
  ComplexityBound cb;
  const double nd = static_cast<double>(n_patches) * static_cast<double>(d);
  cb.tight = 2.0 * nd * (2.08 * std::log((kSqrt5 + 1.0) * static_cast<double>(w_max)) - 1.0);
  cb.simplified = 4.16 * nd * std::log(3.3 * static_cast<double>(n_patches));
  return cb;
}

struct HeadBoundRow {
  int head = 0;          // 1-based
  std::int64_t a = 0, b = 0;
  int window = 0;
  std::int64_t measured_pairs = 0;
  bool bound_applies = false;  // hypotheses 1 <= a < b <= w hold
  double support_bound = 0.0;  // valid only when bound_applies
  bool pass = true;            // measured <= bound, or vacuous
};

struct BoundReport {
  HeadMaskConfig cfg;
  int d = 0;
  std::vector<HeadBoundRow> heads;
  std::int64_t total_pairs = 0;
  double measured_dot_products = 0.0;  // (d/h) * sum_i |Omega_i|
  double tight_bound = 0.0;
  double simplified_bound = 0.0;
  bool totals_pass = false;
  bool all_pass = false;
};

// Measures every head of a configuration against the per-head support bound
// and the two total-complexity forms. Heads whose pair violates the
// per-head hypotheses (modified rows can have a = 0 or b > w) are annotated
// and skipped rather than scored.
inline BoundReport verify_bounds(const HeadMaskConfig& cfg, int d) {
  cfg.validate();
  if (d < 1) throw std::invalid_argument("verify_bounds: d must be >= 1");
  BoundReport report;
  report.cfg = cfg;
  report.d = d;
  const std::vector<int> windows = head_window_sizes(cfg.heads, cfg.w_min, cfg.w_max);
  const std::vector<SupportSet> base = fibottention_head_masks(cfg);
  bool rows_pass = true;
  for (int i = 1; i <= cfg.heads; ++i) {
    HeadBoundRow row;
    row.head = i;
    const FibPair pair = cfg.variant == WythoffVariant::kWythoff
                             ? wythoff_pair(static_cast<std::uint64_t>(i))
                             : modified_wythoff_pair(static_cast<std::uint64_t>(i));
    row.a = pair.a;
    row.b = pair.b;
    row.window = windows[static_cast<std::size_t>(i - 1)];
    row.measured_pairs = base[static_cast<std::size_t>(i - 1)].patch_pair_count();
    row.bound_applies = 1 <= pair.a && pair.a < pair.b && pair.b <= row.window &&
                        row.window <= cfg.n_patches;
    if (row.bound_applies) {
      row.support_bound = support_size_bound(pair.a, pair.b, row.window, cfg.n_patches);
      row.pass = static_cast<double>(row.measured_pairs) <= row.support_bound;
      rows_pass = rows_pass && row.pass;
    }
    report.total_pairs += row.measured_pairs;
    report.heads.push_back(row);
  }
  report.measured_dot_products =
      static_cast<double>(d) / cfg.heads * static_cast<double>(report.total_pairs);
  const ComplexityBound cb = total_dot_product_bound(cfg.n_patches, d, cfg.w_max);
  report.tight_bound = cb.tight;
  report.simplified_bound = cb.simplified;
  report.totals_pass = report.measured_dot_products <= report.tight_bound &&
                       report.tight_bound <= report.simplified_bound;
  report.all_pass = rows_pass && report.totals_pass;
  return report;
}

// Mean over head pairs of the normalized Frobenius distance
//   ||Y_i - Y_j||_F / (||Y_i||_F + ||Y_j||_F),
// in [0, 1]. Pairs with both norms zero contribute 0.
inline double head_diversity(const std::vector<Matrix>& ys) {
  const int h = static_cast<int>(ys.size());
  if (h < 2) throw std::invalid_argument("head_diversity: needs at least two heads");
  for (const Matrix& y : ys) {
    if (!y.same_shape(ys.front())) throw std::invalid_argument("head_diversity: shapes disagree");
  }
  double sum = 0.0;
  for (int i = 0; i < h; ++i) {
    for (int j = i + 1; j < h; ++j) {
      const double denom = frobenius_norm(ys[static_cast<std::size_t>(i)]) +
                           frobenius_norm(ys[static_cast<std::size_t>(j)]);
      if (denom == 0.0) continue;
      double diff = 0.0;
      const auto& ai = ys[static_cast<std::size_t>(i)].data();
      const auto& aj = ys[static_cast<std::size_t>(j)].data();
      for (std::size_t e = 0; e < ai.size(); ++e) {
        const double delta = ai[e] - aj[e];
        diff += delta * delta;
      }
      sum += std::sqrt(diff) / denom;
    }
  }
  return 2.0 * sum / (static_cast<double>(h) * (h - 1));
}

struct DiversityStats {
  std::vector<double> samples;
  double min = 0.0, max = 0.0, median = 0.0, q1 = 0.0, q3 = 0.0;
};

// Five-number summary; quartiles by linear interpolation between order
// statistics (position q * (n - 1)).
inline DiversityStats diversity_stats(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("diversity_stats: empty sample list");
  DiversityStats st;
  st.samples = values;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= n) return values[n - 1];
    return values[lo] + (values[lo + 1] - values[lo]) * frac;
  };
  st.min = values.front();
  st.max = values.back();
  st.q1 = quantile(0.25);
  st.median = quantile(0.5);
  st.q3 = quantile(0.75);
  return st;
}

// One resolution row of the attention dot-product projection. Dense cost is
// N^2 * d multiply-accumulates per layer; the sparse column weighs each
// admissible patch pair by d/h. Class-token dot products are tracked in
// their own column and stay out of the ratio, which is the kept fraction of
// the N^2 patch grid.
struct FlopRow {
  int image_side = 0;
  int patch_size = 0;
  int n = 0;
  int w_min = 0;
  int w_max = 0;
  double dense_dots = 0.0;
  double sparse_dots = 0.0;
  double class_token_dots = 0.0;
  double ratio = 0.0;
};

struct FlopReport {
  int d = 0;
  int heads = 0;
  std::vector<FlopRow> rows;
};

inline FlopRow flop_row_from_masks(int image_side, int patch_size, int d, int h,
                                   const std::vector<SupportSet>& masks, int w_min, int w_max) {
  if (masks.empty()) throw std::invalid_argument("flop_row_from_masks: empty mask list");
  FlopRow row;
  row.image_side = image_side;
  row.patch_size = patch_size;
  row.n = masks.front().n_patches;
  row.w_min = w_min;
  row.w_max = w_max;
  std::int64_t total_pairs = 0;
  for (const SupportSet& m : masks) total_pairs += m.patch_pair_count();
  const double n2 = static_cast<double>(row.n) * static_cast<double>(row.n);
  row.dense_dots = n2 * static_cast<double>(d);
  row.sparse_dots = static_cast<double>(d) / h * static_cast<double>(total_pairs);
  row.class_token_dots = static_cast<double>(d) * (2.0 * row.n + 1.0);
  row.ratio = static_cast<double>(total_pairs) / (static_cast<double>(masks.size()) * n2);
  return row;
}

// Window rule for resolution sweeps: w_max scales linearly with N (clamped
// to N), w_min stays fixed unless the scaled w_max undercuts it.
struct WindowRule {
  int w_min = 5;
  std::int64_t wmax_num = 65;
  std::int64_t wmax_den = 196;

  int w_max_for(int n) const {
    const std::int64_t w = std::min<std::int64_t>(wmax_num * n / wmax_den, n);
    return static_cast<int>(std::max<std::int64_t>(1, w));
  }
  int w_min_for(int n) const { return std::min(w_min, w_max_for(n)); }
};

inline FlopReport flop_projection(const std::vector<std::pair<int, int>>& resolutions, int d, int h,
                                  const WindowRule& rule, WythoffVariant variant) {
  if (d < 1 || h < 1) throw std::invalid_argument("flop_projection: d and h must be >= 1");
  FlopReport report;
  report.d = d;
  report.heads = h;
  for (const auto& [side, patch] : resolutions) {
    if (patch < 1 || side < 1 || side % patch != 0) {
      throw std::invalid_argument("flop_projection: patch size must divide the image side");
    }
    const int grid = side / patch;
    const int n = grid * grid;
    HeadMaskConfig cfg;
    cfg.heads = h;
    cfg.n_patches = n;
    cfg.w_min = rule.w_min_for(n);
    cfg.w_max = rule.w_max_for(n);
    cfg.variant = variant;
    cfg.layers = 1;
    const std::vector<SupportSet> masks = fibottention_head_masks(cfg);
    report.rows.push_back(flop_row_from_masks(side, patch, d, h, masks, cfg.w_min, cfg.w_max));
  }
  return report;
}

}  // namespace fibottention
