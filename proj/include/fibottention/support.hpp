#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fibottention {

// Sparse attention support over a grid of N patch tokens (1-based patch
// indices 1..N) plus an optional class token at token index 0.
//
// Admissible patch pairs (j, k) are the union of
//   - symmetric diagonals: |j - k| in offsets (each offset o in [1, N-1]),
//   - the main diagonal j == k when include_diagonal is set,
//   - explicit_pairs, for patterns that are not unions of diagonals.
// With include_class_token, token row 0 and column 0 are fully admissible.
struct SupportSet {
  int n_patches = 0;
  std::vector<int> offsets;  // sorted, unique, each in [1, N-1]
  bool include_diagonal = false;
  bool include_class_token = false;
  // Sorted unique 1-based patch pairs not already implied by offsets or the
  // diagonal flag (normalized at construction).
  std::vector<std::pair<int, int>> explicit_pairs;

  int tokens() const { return n_patches + 1; }

  bool has_offset(int o) const {
    return std::binary_search(offsets.begin(), offsets.end(), o);
  }

  // 1-based patch indices.
  bool patch_admissible(int j, int k) const {
    if (j < 1 || j > n_patches || k < 1 || k > n_patches) return false;
    if (j == k && include_diagonal) return true;
    if (j != k && has_offset(j > k ? j - k : k - j)) return true;
    return std::binary_search(explicit_pairs.begin(), explicit_pairs.end(), std::make_pair(j, k));
  }

  // 0-based token indices over the (N+1)-token grid; 0 is the class token.
  bool token_admissible(int r, int c) const {
    if (r == 0 || c == 0) return include_class_token;
    return patch_admissible(r, c);
  }

  // Number of admissible pairs over the N x N patch grid: the class-token
  // border is excluded by definition.
  std::int64_t patch_pair_count() const {
    std::int64_t count = 0;
    for (const int o : offsets) count += 2LL * (n_patches - o);
    if (include_diagonal) count += n_patches;
    count += static_cast<std::int64_t>(explicit_pairs.size());
    return count;
  }

  // Admissible pairs over the full (N+1) x (N+1) token grid.
  std::int64_t token_pair_count() const {
    std::int64_t count = patch_pair_count();
    if (include_class_token) count += 2LL * tokens() - 1;
    return count;
  }

  // Visits every admissible token pair exactly once.
  template <class F>
  void for_each_token_pair(F&& f) const {
    const int n = n_patches;
    if (include_class_token) {
      for (int c = 0; c <= n; ++c) f(0, c);
      for (int r = 1; r <= n; ++r) f(r, 0);
    }
    if (include_diagonal) {
      for (int j = 1; j <= n; ++j) f(j, j);
    }
    for (const int o : offsets) {
      for (int j = 1; j + o <= n; ++j) {
        f(j, j + o);
        f(j + o, j);
      }
    }
    for (const auto& [r, c] : explicit_pairs) f(r, c);
  }

  // Dense 0/1 materialization of the token grid, row-major (N+1)^2.
  std::vector<std::uint8_t> dense_token_mask() const {
    const int t = tokens();
    std::vector<std::uint8_t> m(static_cast<std::size_t>(t) * t, 0);
    for_each_token_pair([&](int r, int c) {
      m[static_cast<std::size_t>(r) * t + c] = 1;
    });
    return m;
  }
};

// Validating constructor; normalizes offsets and explicit pairs so that the
// count and enumeration above are union-exact.
inline SupportSet make_support(int n_patches, std::vector<int> offsets, bool include_diagonal,
                               bool include_class_token,
                               std::vector<std::pair<int, int>> explicit_pairs = {}) {
  if (n_patches < 1) throw std::invalid_argument("make_support: n_patches must be >= 1");
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  for (const int o : offsets) {
    if (o < 1 || o > n_patches - 1) throw std::invalid_argument("make_support: offset out of [1, N-1]");
  }
  SupportSet s;
  s.n_patches = n_patches;
  s.offsets = std::move(offsets);
  s.include_diagonal = include_diagonal;
  s.include_class_token = include_class_token;
  std::sort(explicit_pairs.begin(), explicit_pairs.end());
  explicit_pairs.erase(std::unique(explicit_pairs.begin(), explicit_pairs.end()), explicit_pairs.end());
  for (const auto& [r, c] : explicit_pairs) {
    if (r < 1 || r > n_patches || c < 1 || c > n_patches) {
      throw std::invalid_argument("make_support: explicit pair out of the patch grid");
    }
    if (r == c && s.include_diagonal) continue;
    if (r != c && s.has_offset(r > c ? r - c : c - r)) continue;
    s.explicit_pairs.emplace_back(r, c);
  }
  return s;
}

}  // namespace fibottention
