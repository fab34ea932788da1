#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "fibottention/maskgen.hpp"
#include "oracles.hpp"

using namespace fibottention;

namespace {

HeadMaskConfig default_config() {
  HeadMaskConfig cfg;
  cfg.heads = 12;
  cfg.w_min = 5;
  cfg.w_max = 65;
  cfg.n_patches = 196;
  cfg.layers = 1;
  cfg.seed = 42;
  cfg.variant = WythoffVariant::kWythoff;
  return cfg;
}

}  // namespace

TEST_CASE("head_window_sizes") {
  CHECK(head_window_sizes(12, 5, 65) ==
        std::vector<int>{5, 10, 15, 21, 26, 32, 37, 43, 48, 54, 59, 65});
  CHECK(head_window_sizes(1, 7, 99) == std::vector<int>{7});
  CHECK(head_window_sizes(2, 3, 9) == std::vector<int>{3, 9});
  CHECK_THROWS_AS(head_window_sizes(4, 9, 3), std::invalid_argument);
  CHECK_THROWS_AS(head_window_sizes(0, 1, 5), std::invalid_argument);
  const auto w = head_window_sizes(7, 2, 31);
  CHECK(std::is_sorted(w.begin(), w.end()));
  CHECK(w.front() == 2);
  CHECK(w.back() == 31);
}

TEST_CASE("support_from_sequence") {
  const SupportSet s1 = support_from_sequence(generalized_fibonacci(1, 2, 5), 5, 196, false);
  CHECK(s1.patch_pair_count() == 1546);
  CHECK(s1.patch_pair_count() == oracles::brute_force_support_count({1, 2, 3, 5}, 5, 196));

  DilationSequence dup;  // duplicate 1 deduplicated, 0 skipped
  dup.elements = {0, 1, 1};
  const SupportSet s2 = support_from_sequence(dup, 2, 4, false);
  CHECK(s2.offsets == std::vector<int>{1});
  std::vector<std::pair<int, int>> pairs;
  s2.for_each_token_pair([&](int r, int c) { pairs.emplace_back(r, c); });
  std::sort(pairs.begin(), pairs.end());
  CHECK(pairs == std::vector<std::pair<int, int>>{{1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 4}, {4, 3}});

  DilationSequence big;
  big.elements = {12, 20};
  const SupportSet s3 = support_from_sequence(big, 5, 196, false);
  CHECK(s3.offsets.empty());
  CHECK(s3.patch_pair_count() == 0);
}

TEST_CASE("support set equals the double-loop predicate") {
  Splitmix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(63));
    const auto a = static_cast<std::int64_t>(rng.next_below(8));
    const auto b = static_cast<std::int64_t>(rng.next_below(12)) + 1;
    const int w = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    if (a == 0 && b == 0) continue;
    const DilationSequence seq = generalized_fibonacci(a, b, w);
    const SupportSet s = support_from_sequence(seq, w, n, false);
    CHECK(s.patch_pair_count() ==
          oracles::brute_force_support_count(seq.elements, w, n));
    CHECK(s.patch_pair_count() == oracles::brute_force_pair_count(s));
    // count formula over deduplicated offsets
    std::int64_t formula = 0;
    for (const int o : s.offsets) formula += 2LL * (n - o);
    CHECK(s.patch_pair_count() == formula);
  }
}

TEST_CASE("default configuration per-head counts and pruning ratio") {
  const MaskStack stack = fibottention_masks(default_config());
  REQUIRE(stack.masks.size() == 1);
  const std::vector<std::int64_t> expected = {1546, 762, 752, 736, 720, 710,
                                              694,  684, 668, 652, 642, 626};
  std::vector<std::int64_t> counts;
  for (const SupportSet& m : stack.masks[0]) counts.push_back(m.patch_pair_count());
  std::sort(counts.begin(), counts.end(), std::greater<>());
  CHECK(counts == expected);
  const double ratio = pruning_ratio(stack.masks[0]);
  CHECK(ratio == Catch::Approx(98.01).margin(0.05));
}

TEST_CASE("single-head configuration keeps the first wythoff row") {
  HeadMaskConfig cfg = default_config();
  cfg.heads = 1;
  cfg.w_min = cfg.w_max = 5;
  cfg.n_patches = 10;
  const MaskStack stack = fibottention_masks(cfg);
  CHECK(stack.masks[0][0].offsets == std::vector<int>{1, 2, 3, 5});
  CHECK(stack.masks[0][0].include_class_token);
}

TEST_CASE("masks are symmetric including the class-token border") {
  HeadMaskConfig cfg = default_config();
  cfg.n_patches = 24;
  cfg.w_max = 20;
  cfg.heads = 4;
  const MaskStack stack = fibottention_masks(cfg);
  for (const SupportSet& m : stack.masks[0]) {
    const auto dense = m.dense_token_mask();
    const int t = m.tokens();
    for (int r = 0; r < t; ++r) {
      CHECK(dense[static_cast<std::size_t>(r) * t] == 1);
      CHECK(dense[static_cast<std::size_t>(r)] == 1);
      for (int c = 0; c < t; ++c) {
        CHECK(dense[static_cast<std::size_t>(r) * t + c] ==
              dense[static_cast<std::size_t>(c) * t + r]);
      }
    }
  }
}

TEST_CASE("every row of a class-token mask has an admissible entry") {
  HeadMaskConfig cfg = default_config();
  cfg.n_patches = 31;
  cfg.w_min = cfg.w_max = 4;
  cfg.heads = 3;
  const MaskStack stack = fibottention_masks(cfg);
  for (const SupportSet& m : stack.masks[0]) {
    const auto dense = m.dense_token_mask();
    const int t = m.tokens();
    for (int r = 0; r < t; ++r) {
      bool any = false;
      for (int c = 0; c < t; ++c) any = any || dense[static_cast<std::size_t>(r) * t + c] != 0;
      CHECK(any);
    }
  }
}

TEST_CASE("layer shuffle permutes and preserves the multiset") {
  HeadMaskConfig cfg = default_config();
  cfg.layers = 6;
  const MaskStack stack = fibottention_masks(cfg);
  const std::vector<SupportSet> base = fibottention_head_masks(cfg);
  std::vector<std::int64_t> base_counts;
  for (const SupportSet& m : base) base_counts.push_back(m.patch_pair_count());
  std::sort(base_counts.begin(), base_counts.end());
  for (int l = 0; l < cfg.layers; ++l) {
    std::vector<std::int64_t> layer_counts;
    for (const SupportSet& m : stack.masks[static_cast<std::size_t>(l)]) {
      layer_counts.push_back(m.patch_pair_count());
    }
    std::sort(layer_counts.begin(), layer_counts.end());
    CHECK(layer_counts == base_counts);
    // the recorded permutation reproduces the layer
    for (int j = 0; j < cfg.heads; ++j) {
      const int src = stack.permutations[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
      CHECK(stack.masks[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)].offsets ==
            base[static_cast<std::size_t>(src)].offsets);
    }
  }
}

TEST_CASE("mask stacks are seed-deterministic") {
  HeadMaskConfig cfg = default_config();
  cfg.layers = 4;
  const MaskStack s1 = fibottention_masks(cfg);
  const MaskStack s2 = fibottention_masks(cfg);
  CHECK(s1.permutations == s2.permutations);
  for (int l = 0; l < cfg.layers; ++l) {
    for (int h = 0; h < cfg.heads; ++h) {
      CHECK(s1.masks[static_cast<std::size_t>(l)][static_cast<std::size_t>(h)].offsets ==
            s2.masks[static_cast<std::size_t>(l)][static_cast<std::size_t>(h)].offsets);
    }
  }
  cfg.seed = 43;
  const MaskStack s3 = fibottention_masks(cfg);
  CHECK(s1.permutations != s3.permutations);
}

TEST_CASE("local window pruning table values") {
  CHECK(pruning_ratio({local_window_mask(196, 2, true)}) == Catch::Approx(97.46).margin(0.005));
  CHECK(pruning_ratio({local_window_mask(196, 2, false)}) == Catch::Approx(97.97).margin(0.005));
  CHECK(pruning_ratio({local_window_mask(196, 40, false)}) == Catch::Approx(63.45).margin(0.005));
  CHECK_THROWS_AS(local_window_mask(196, 196, false), std::invalid_argument);
}

TEST_CASE("random_mask sampling contract") {
  const SupportSet empty = random_mask(196, 0.0, false, 1);
  CHECK(empty.patch_pair_count() == 0);
  CHECK(pruning_ratio({empty}) == Catch::Approx(100.0));

  const SupportSet full = random_mask(14, 1.0, false, 9);
  CHECK(full.patch_pair_count() == 196);
  CHECK(pruning_ratio({full}) == Catch::Approx(0.0));

  const SupportSet s = random_mask(196, 0.2, false, 1);
  CHECK(s.patch_pair_count() == 7683);
  CHECK(oracles::brute_force_pair_count(s) == 7683);

  const SupportSet again = random_mask(196, 0.2, false, 1);
  CHECK(s.explicit_pairs == again.explicit_pairs);
  const SupportSet other = random_mask(196, 0.2, false, 2);
  CHECK(s.explicit_pairs != other.explicit_pairs);

  CHECK(random_mask(8, 0.5, true, 3).include_class_token);
  CHECK_THROWS_AS(random_mask(8, 1.5, false, 3), std::invalid_argument);
}

TEST_CASE("bigbird mask composition") {
  // w=2, g=1 (class token), r=N: the patch grid holds the local window,
  // the diagonal and exactly r extra pairs.
  const SupportSet s = bigbird_mask(196, 2, 1, 196, 7);
  CHECK(s.include_class_token);
  CHECK(s.include_diagonal);
  CHECK(s.offsets == std::vector<int>{1, 2});
  CHECK(s.patch_pair_count() == 196 + 2 * (195 + 194) + 196);
  CHECK(pruning_ratio({s}) == Catch::Approx(96.97).margin(0.05));
  for (const auto& [r, c] : s.explicit_pairs) {
    CHECK(r != c);
    CHECK(std::abs(r - c) > 2);
  }

  CHECK(pruning_ratio({bigbird_mask(196, 2, 1, 392, 7)}) == Catch::Approx(96.47).margin(0.05));

  const SupportSet diag_only = bigbird_mask(4, 0, 0, 0, 1);
  CHECK(diag_only.patch_pair_count() == 4);
  CHECK(diag_only.offsets.empty());
  CHECK_FALSE(diag_only.include_class_token);

  // deterministic per seed
  CHECK(bigbird_mask(64, 2, 1, 32, 5).explicit_pairs == bigbird_mask(64, 2, 1, 32, 5).explicit_pairs);
  // g > 1 globals densify leading patch rows/cols
  const SupportSet g2 = bigbird_mask(32, 1, 2, 0, 5);
  CHECK(g2.patch_admissible(1, 30));
  CHECK(g2.patch_admissible(30, 1));
  CHECK_FALSE(g2.patch_admissible(2, 30));
}

TEST_CASE("strided mask rule") {
  const SupportSet s1 = strided_mask(6, 2, 1);
  std::vector<int> row3;
  for (int k = 1; k <= 6; ++k) {
    if (s1.patch_admissible(3, k)) row3.push_back(k);
  }
  CHECK(row3 == std::vector<int>{1, 2, 3, 4, 5});

  const SupportSet full = strided_mask(32, 1, 0);
  CHECK(pruning_ratio({full}) == Catch::Approx(0.0));

  const SupportSet s3 = strided_mask(9, 3, 0);
  std::vector<int> row4;
  for (int k = 1; k <= 9; ++k) {
    if (s3.patch_admissible(4, k)) row4.push_back(k);
  }
  CHECK(row4 == std::vector<int>{1, 4, 7});
}

TEST_CASE("dilated head masks, fixed and variable") {
  const auto fixed = dilated_heads_masks(32, 2, 3, false, {9, 9});
  CHECK(fixed[0].offsets == std::vector<int>{3, 6, 9});
  CHECK(fixed[1].offsets == std::vector<int>{3, 6, 9});
  const auto variable = dilated_heads_masks(32, 2, 3, true, {9, 9});
  CHECK(variable[0].offsets == std::vector<int>{3, 6, 9});
  CHECK(variable[1].offsets == std::vector<int>{4, 7});
  const auto one = dilated_heads_masks(16, 1, 1, false, {4});
  CHECK(one[0].offsets == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("offset family masks") {
  const auto one = offset_family_masks(64, 1, 0, {10});
  CHECK(one[0].offsets == std::vector<int>{1, 2, 3, 5, 8});
  const auto two = offset_family_masks(64, 2, 1, {10, 10});
  CHECK(two[0].offsets == std::vector<int>{2, 4, 6, 10});
  CHECK(two[1].offsets == std::vector<int>{3, 6, 9});
  const auto tiny = offset_family_masks(64, 1, 0, {1});
  CHECK(tiny[0].offsets == std::vector<int>{1});
}

TEST_CASE("overlap histogram") {
  const auto wyth = fibottention_head_masks(default_config());
  for (const auto& [offset, count] : overlap_histogram(wyth)) {
    CHECK(count == 1);
  }
  HeadMaskConfig mod = default_config();
  mod.variant = WythoffVariant::kModified;
  for (const auto& [offset, count] : overlap_histogram(fibottention_head_masks(mod))) {
    CHECK(count <= 3);
  }
  const SupportSet lw = local_window_mask(64, 3, false);
  for (const auto& [offset, count] : overlap_histogram({lw, lw})) {
    CHECK(count == 2);
  }
}

TEST_CASE("pruning_ratio contract") {
  const SupportSet full = local_window_mask(32, 31, true);
  CHECK(pruning_ratio({full}) == Catch::Approx(0.0));
  CHECK_THROWS_AS(pruning_ratio({}), std::invalid_argument);
}
