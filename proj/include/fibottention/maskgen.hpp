#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fibottention/prng.hpp"
#include "fibottention/sequence.hpp"
#include "fibottention/support.hpp"

namespace fibottention {

enum class WythoffVariant { kWythoff, kModified };

inline const char* to_string(WythoffVariant v) {
  return v == WythoffVariant::kWythoff ? "wythoff" : "modified";
}

inline WythoffVariant variant_from_string(const std::string& s) {
  if (s == "wythoff") return WythoffVariant::kWythoff;
  if (s == "modified") return WythoffVariant::kModified;
  throw std::invalid_argument("unknown variant: " + s);
}

// Per-layer, per-head mask configuration.
struct HeadMaskConfig {
  int heads = 12;
  int w_min = 5;
  int w_max = 65;
  WythoffVariant variant = WythoffVariant::kWythoff;
  int n_patches = 196;
  int layers = 1;
  std::uint64_t seed = 42;

  void validate() const {
    if (heads < 1) throw std::invalid_argument("config: heads must be >= 1");
    if (n_patches < 2) throw std::invalid_argument("config: n_patches must be >= 2");
    if (w_min < 1 || w_min > w_max) throw std::invalid_argument("config: need 1 <= w_min <= w_max");
    if (w_max > n_patches) throw std::invalid_argument("config: w_max must be <= n_patches");
    if (layers < 1) throw std::invalid_argument("config: layers must be >= 1");
  }
};

// Layer x head masks after the per-layer shuffle, plus the permutations that
// produced them. masks[l][j] is base mask perm[l][j].
struct MaskStack {
  int n_patches = 0;
  int heads = 0;
  int layers = 0;
  std::vector<std::vector<SupportSet>> masks;
  std::vector<std::vector<int>> permutations;  // 0-based head indices
};

// Head windows interpolate linearly between w_min and w_max:
//   w_i = w_min + floor((w_max - w_min) * (i - 1) / (h - 1)),
// with the single-head case pinned to w_min.
inline std::vector<int> head_window_sizes(int h, int w_min, int w_max) {
  if (h < 1) throw std::invalid_argument("head_window_sizes: heads must be >= 1");
  if (w_min < 1 || w_min > w_max) throw std::invalid_argument("head_window_sizes: need 1 <= w_min <= w_max");
  std::vector<int> w(static_cast<std::size_t>(h));
  for (int i = 1; i <= h; ++i) {
    w[static_cast<std::size_t>(i - 1)] =
        h == 1 ? w_min
               : w_min + static_cast<int>((static_cast<std::int64_t>(w_max - w_min) * (i - 1)) / (h - 1));
  }
  return w;
}

// Support of a dilation sequence under window w over N patches:
// offsets are the deduplicated sequence elements in [1, min(w, N-1)].
// Elements <= 0 and elements beyond the window are dropped here, not at
// generation time.
inline SupportSet support_from_sequence(const DilationSequence& seq, int w, int n_patches,
                                        bool include_class_token) {
  if (n_patches < 2) throw std::invalid_argument("support_from_sequence: n_patches must be >= 2");
  if (w < 1) throw std::invalid_argument("support_from_sequence: window must be >= 1");
  const std::int64_t cap = std::min<std::int64_t>(w, n_patches - 1);
  std::vector<int> offsets;
  for (const std::int64_t e : seq.elements) {
    if (e >= 1 && e <= cap) offsets.push_back(static_cast<int>(e));
  }
  return make_support(n_patches, std::move(offsets), /*include_diagonal=*/false, include_class_token);
}

// Base (pre-shuffle) masks: head i uses the Wythoff (or modified Wythoff)
// pair of row i, dilated up to its interpolated window, with dense
// class-token connections.
inline std::vector<SupportSet> fibottention_head_masks(const HeadMaskConfig& cfg) {
  cfg.validate();
  const std::vector<int> windows = head_window_sizes(cfg.heads, cfg.w_min, cfg.w_max);
  std::vector<SupportSet> base;
  base.reserve(static_cast<std::size_t>(cfg.heads));
  for (int i = 1; i <= cfg.heads; ++i) {
    const FibPair pair = cfg.variant == WythoffVariant::kWythoff
                             ? wythoff_pair(static_cast<std::uint64_t>(i))
                             : modified_wythoff_pair(static_cast<std::uint64_t>(i));
    const int w = windows[static_cast<std::size_t>(i - 1)];
    const DilationSequence seq = generalized_fibonacci(pair.a, pair.b, w);
    base.push_back(support_from_sequence(seq, w, cfg.n_patches, /*include_class_token=*/true));
  }
  return base;
}

// Full mask stack: base masks shuffled independently per layer with a
// Fisher-Yates permutation from the splitmix64 stream seeded seed ^ layer.
// Identical configs produce bit-identical stacks.
inline MaskStack fibottention_masks(const HeadMaskConfig& cfg) {
  const std::vector<SupportSet> base = fibottention_head_masks(cfg);
  MaskStack stack;
  stack.n_patches = cfg.n_patches;
  stack.heads = cfg.heads;
  stack.layers = cfg.layers;
  stack.masks.resize(static_cast<std::size_t>(cfg.layers));
  stack.permutations.resize(static_cast<std::size_t>(cfg.layers));
  for (int l = 0; l < cfg.layers; ++l) {
    Splitmix64 rng(layer_seed(cfg.seed, static_cast<std::uint64_t>(l)));
    std::vector<int> perm = random_permutation(cfg.heads, rng);
    auto& layer = stack.masks[static_cast<std::size_t>(l)];
    layer.reserve(static_cast<std::size_t>(cfg.heads));
    for (int j = 0; j < cfg.heads; ++j) {
      layer.push_back(base[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]);
    }
    stack.permutations[static_cast<std::size_t>(l)] = std::move(perm);
  }
  return stack;
}

// Fixed local window: offsets 1..w, optionally with the main diagonal.
inline SupportSet local_window_mask(int n_patches, int w, bool include_diagonal) {
  if (n_patches < 1) throw std::invalid_argument("local_window_mask: n_patches must be >= 1");
  if (w < 0 || w > n_patches - 1) throw std::invalid_argument("local_window_mask: need 0 <= w <= N-1");
  std::vector<int> offsets(static_cast<std::size_t>(w));
  for (int o = 1; o <= w; ++o) offsets[static_cast<std::size_t>(o - 1)] = o;
  return make_support(n_patches, std::move(offsets), include_diagonal, /*include_class_token=*/false);
}

// Exactly round(keep_fraction * N^2) distinct patch pairs, sampled uniformly
// without replacement (Floyd's algorithm). The main diagonal is eligible.
inline SupportSet random_mask(int n_patches, double keep_fraction, bool force_class_token,
                              std::uint64_t seed) {
  if (n_patches < 1) throw std::invalid_argument("random_mask: n_patches must be >= 1");
  if (!(keep_fraction >= 0.0 && keep_fraction <= 1.0)) {
    throw std::invalid_argument("random_mask: keep_fraction must be in [0, 1]");
  }
  const std::int64_t total = static_cast<std::int64_t>(n_patches) * n_patches;
  const std::int64_t k = std::llround(keep_fraction * static_cast<double>(total));
  Splitmix64 rng(seed);
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k) * 2 + 1);
  for (std::int64_t j = total - k; j < total; ++j) {
    const std::int64_t t = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(j) + 1));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(chosen.size());
  for (const std::int64_t id : chosen) {
    pairs.emplace_back(static_cast<int>(id / n_patches) + 1, static_cast<int>(id % n_patches) + 1);
  }
  return make_support(n_patches, {}, /*include_diagonal=*/false, force_class_token, std::move(pairs));
}

// BigBird-style union of a local window (offsets 1..w plus the main
// diagonal), g global tokens, and r random pairs outside that union.
//
// The first global token is the class token (the standard ITC-style choice
// for ViTs; it reproduces the reference mask ratios, whereas a dense patch
// row/column does not). Additional global tokens make patch rows/cols
// 1..g-1 dense.
inline SupportSet bigbird_mask(int n_patches, int w, int g, int r, std::uint64_t seed) {
  if (n_patches < 1) throw std::invalid_argument("bigbird_mask: n_patches must be >= 1");
  if (w < 0 || g < 0 || r < 0) throw std::invalid_argument("bigbird_mask: w, g, r must be >= 0");
  if (g > n_patches) throw std::invalid_argument("bigbird_mask: too many global tokens");
  const int n = n_patches;
  std::vector<int> offsets;
  for (int o = 1; o <= std::min(w, n - 1); ++o) offsets.push_back(o);

  std::vector<std::pair<int, int>> globals;
  for (int p = 1; p <= g - 1; ++p) {
    for (int k = 1; k <= n; ++k) {
      globals.emplace_back(p, k);
      globals.emplace_back(k, p);
    }
  }
  SupportSet base = make_support(n, offsets, /*include_diagonal=*/true,
                                 /*include_class_token=*/g >= 1, std::move(globals));

  const std::int64_t total = static_cast<std::int64_t>(n) * n;
  if (base.patch_pair_count() + r > total) {
    throw std::invalid_argument("bigbird_mask: not enough pairs outside the union");
  }
  Splitmix64 rng(seed);
  std::vector<std::pair<int, int>> random_pairs;
  std::unordered_set<std::int64_t> taken;
  random_pairs.reserve(static_cast<std::size_t>(r));
  while (static_cast<int>(random_pairs.size()) < r) {
    const std::int64_t id = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(total)));
    const int row = static_cast<int>(id / n) + 1;
    const int col = static_cast<int>(id % n) + 1;
    if (base.patch_admissible(row, col)) continue;
    if (!taken.insert(id).second) continue;
    random_pairs.emplace_back(row, col);
  }
  std::vector<std::pair<int, int>> pairs = base.explicit_pairs;
  pairs.insert(pairs.end(), random_pairs.begin(), random_pairs.end());
  return make_support(n, base.offsets, /*include_diagonal=*/true, base.include_class_token,
                      std::move(pairs));
}

// Strided pattern: (j, k) admissible when |j - k| <= local or
// (j - k) mod stride = 0. Both branches admit the main diagonal.
inline SupportSet strided_mask(int n_patches, int stride, int local) {
  if (n_patches < 1) throw std::invalid_argument("strided_mask: n_patches must be >= 1");
  if (stride < 1) throw std::invalid_argument("strided_mask: stride must be >= 1");
  if (local < 0) throw std::invalid_argument("strided_mask: local width must be >= 0");
  std::vector<int> offsets;
  for (int o = 1; o <= n_patches - 1; ++o) {
    if (o <= local || o % stride == 0) offsets.push_back(o);
  }
  return make_support(n_patches, std::move(offsets), /*include_diagonal=*/true,
                      /*include_class_token=*/false);
}

// Constant-dilation masks (c, 2c, ...) per head; the variable configuration
// shifts head i's offsets by i - 1 so the patterns differ across heads.
inline std::vector<SupportSet> dilated_heads_masks(int n_patches, int h, int c, bool variable,
                                                   const std::vector<int>& windows) {
  if (h < 1) throw std::invalid_argument("dilated_heads_masks: heads must be >= 1");
  if (c < 1) throw std::invalid_argument("dilated_heads_masks: factor must be >= 1");
  if (static_cast<int>(windows.size()) != h) {
    throw std::invalid_argument("dilated_heads_masks: windows length must equal heads");
  }
  std::vector<SupportSet> masks;
  masks.reserve(static_cast<std::size_t>(h));
  for (int i = 1; i <= h; ++i) {
    const int w = windows[static_cast<std::size_t>(i - 1)];
    if (w < 1) throw std::invalid_argument("dilated_heads_masks: window must be >= 1");
    const int shift = variable ? i - 1 : 0;
    const int cap = std::min(w, n_patches - 1);
    std::vector<int> offsets;
    for (int v = c + shift; v <= cap; v += c) offsets.push_back(v);
    masks.push_back(make_support(n_patches, std::move(offsets), false, false));
  }
  return masks;
}

// Head i uses Fib(i + delta, i + delta) truncated at its window.
inline std::vector<SupportSet> offset_family_masks(int n_patches, int h, int delta,
                                                   const std::vector<int>& windows) {
  if (h < 1) throw std::invalid_argument("offset_family_masks: heads must be >= 1");
  if (delta < 0) throw std::invalid_argument("offset_family_masks: delta must be >= 0");
  if (static_cast<int>(windows.size()) != h) {
    throw std::invalid_argument("offset_family_masks: windows length must equal heads");
  }
  std::vector<SupportSet> masks;
  masks.reserve(static_cast<std::size_t>(h));
  for (int i = 1; i <= h; ++i) {
    const int w = windows[static_cast<std::size_t>(i - 1)];
    const DilationSequence seq = generalized_fibonacci(i + delta, i + delta, w);
    masks.push_back(support_from_sequence(seq, w, n_patches, /*include_class_token=*/false));
  }
  return masks;
}

// Percentage of the N^2 patch-pair grid excluded from score computation,
// averaged over heads. The class-token row/column never enters either the
// numerator or the denominator.
inline double pruning_ratio(const std::vector<SupportSet>& masks) {
  if (masks.empty()) throw std::invalid_argument("pruning_ratio: empty mask list");
  const int n = masks.front().n_patches;
  double mean = 0.0;
  for (const SupportSet& m : masks) {
    if (m.n_patches != n) throw std::invalid_argument("pruning_ratio: masks disagree on n_patches");
    mean += static_cast<double>(m.patch_pair_count());
  }
  mean /= static_cast<double>(masks.size());
  const double total = static_cast<double>(n) * static_cast<double>(n);
  return 100.0 * (1.0 - mean / total);
}

// offset -> number of heads whose support contains it.
inline std::map<int, int> overlap_histogram(const std::vector<SupportSet>& masks) {
  if (masks.empty()) return {};
  const int n = masks.front().n_patches;
  std::map<int, int> hist;
  for (const SupportSet& m : masks) {
    if (m.n_patches != n) throw std::invalid_argument("overlap_histogram: masks disagree on n_patches");
    for (const int o : m.offsets) ++hist[o];
  }
  return hist;
}

}  // namespace fibottention
