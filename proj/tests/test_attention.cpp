#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "fibottention/attention.hpp"
#include "fibottention/maskgen.hpp"
#include "oracles.hpp"

using namespace fibottention;

namespace {

SupportSet full_mask(int n) { return local_window_mask(n, n - 1, true); }

SupportSet full_mask_with_class(int n) {
  SupportSet s = full_mask(n);
  s.include_class_token = true;
  return s;
}

std::vector<SupportSet> small_stack(int n, int heads, int w_max, std::uint64_t seed) {
  HeadMaskConfig cfg;
  cfg.heads = heads;
  cfg.w_min = 1;
  cfg.w_max = w_max;
  cfg.n_patches = n;
  cfg.layers = 1;
  cfg.seed = seed;
  return fibottention_masks(cfg).masks.front();
}

}  // namespace

TEST_CASE("masked_scores computes scaled dot products on the support only") {
  // orthonormal token rows: scores form the identity over sqrt(d_h)
  Matrix q(2, 2), k(2, 2);
  q(0, 0) = 1.0;
  q(1, 1) = 1.0;
  k(0, 0) = 1.0;
  k(1, 1) = 1.0;
  const HeadScores hs = masked_scores(q, k, full_mask_with_class(1));
  CHECK(hs.dot_products == 4);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(hs.scores(0, 0) == Catch::Approx(s));
  CHECK(hs.scores(1, 1) == Catch::Approx(s));
  CHECK(hs.scores(0, 1) == Catch::Approx(0.0));
  CHECK(hs.scores(1, 0) == Catch::Approx(0.0));
}

TEST_CASE("empty patch mask plus class token leaves only the border finite") {
  const int n = 6;
  const SupportSet mask = make_support(n, {}, false, true);
  const Matrix q = oracles::random_matrix(n + 1, 3, 1);
  const Matrix k = oracles::random_matrix(n + 1, 3, 2);
  const HeadScores hs = masked_scores(q, k, mask);
  CHECK(hs.dot_products == 2 * (n + 1) - 1);
  for (int r = 0; r <= n; ++r) {
    for (int c = 0; c <= n; ++c) {
      CHECK(hs.is_finite(r, c) == (r == 0 || c == 0));
    }
  }
}

TEST_CASE("masked scores equal dense scores on admissible pairs") {
  const int n = 4;  // 5 tokens
  const Matrix q = oracles::random_matrix(n + 1, 2, 11);
  const Matrix k = oracles::random_matrix(n + 1, 2, 12);
  const SupportSet mask = make_support(n, {1, 3}, false, true);
  const HeadScores hs = masked_scores(q, k, mask);
  const Matrix dense = matmul_transB(q, k);
  for (int r = 0; r <= n; ++r) {
    for (int c = 0; c <= n; ++c) {
      if (hs.is_finite(r, c)) {
        CHECK(hs.scores(r, c) == Catch::Approx(dense(r, c) / std::sqrt(2.0)).epsilon(1e-12));
      } else {
        CHECK(hs.scores(r, c) == 0.0);
      }
    }
  }
  CHECK_THROWS_AS(masked_scores(q, oracles::random_matrix(n, 2, 3), mask), std::invalid_argument);
}

TEST_CASE("masked_softmax examples") {
  HeadScores hs;
  hs.scores = Matrix(2, 2);
  hs.finite = {1, 0, 1, 1};
  const Matrix a = masked_softmax(hs);
  CHECK(a(0, 0) == Catch::Approx(1.0));
  CHECK(a(0, 1) == 0.0);
  CHECK(a(1, 0) == Catch::Approx(0.5));
  CHECK(a(1, 1) == Catch::Approx(0.5));

  // constant finite rows map to the uniform distribution
  HeadScores sq;
  sq.scores = Matrix(5, 5);
  sq.finite.assign(25, 1);
  for (auto& v : sq.scores.data()) v = 3.25;
  const Matrix u = masked_softmax(sq);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) CHECK(u(r, c) == Catch::Approx(0.2));
  }

  HeadScores degenerate;
  degenerate.scores = Matrix(2, 2);
  degenerate.finite = {1, 1, 0, 0};
  CHECK_THROWS_AS(masked_softmax(degenerate), std::domain_error);
}

TEST_CASE("masked_softmax matches the dense oracle and is row-stochastic") {
  Splitmix64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 5;
    const SupportSet mask = [&] {
      std::vector<int> offsets;
      for (int o = 1; o < n; ++o) {
        if (rng.next_below(2) == 0) offsets.push_back(o);
      }
      return make_support(n, std::move(offsets), rng.next_below(2) == 0, true);
    }();
    const Matrix q = oracles::random_matrix(n + 1, 3, 100 + trial);
    const Matrix k = oracles::random_matrix(n + 1, 3, 200 + trial);
    const HeadScores hs = masked_scores(q, k, mask);
    const Matrix a = masked_softmax(hs);
    // dense path with -1e30 logits
    Matrix s(n + 1, n + 1);
    for (int r = 0; r <= n; ++r) {
      for (int c = 0; c <= n; ++c) {
        if (mask.token_admissible(r, c)) {
          double dot = 0.0;
          for (int e = 0; e < 3; ++e) dot += q(r, e) * k(c, e);
          s(r, c) = dot / std::sqrt(3.0);
        } else {
          s(r, c) = -1e30;
        }
      }
    }
    for (int r = 0; r <= n; ++r) {
      double mx = s(r, 0);
      for (int c = 1; c <= n; ++c) mx = std::max(mx, s(r, c));
      double sum = 0.0;
      for (int c = 0; c <= n; ++c) sum += std::exp(s(r, c) - mx);
      double total = 0.0;
      for (int c = 0; c <= n; ++c) {
        const double dense = std::exp(s(r, c) - mx) / sum;
        CHECK(std::abs(a(r, c) - dense) < 1e-9);
        total += a(r, c);
        CHECK(a(r, c) >= 0.0);
        CHECK(a(r, c) <= 1.0);
      }
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("full masks reproduce the dense block exactly") {
  const int n = 3, d = 4, h = 2;
  const AttentionParams params = random_attention_params(d, h, 5);
  const Matrix x = oracles::random_matrix(n + 1, d, 6);
  const std::vector<SupportSet> masks(static_cast<std::size_t>(h), full_mask_with_class(n));
  const Matrix masked = block_forward(x, params, masks);
  const Matrix dense = dense_block_forward(x, params);
  CHECK(max_abs_diff(masked, dense) < 1e-12);
}

TEST_CASE("zero input maps to zero output") {
  const AttentionParams params = random_attention_params(8, 4, 9);
  const Matrix x(6, 8);
  const std::vector<SupportSet> masks = small_stack(5, 4, 4, 3);
  const Matrix out = block_forward(x, params, masks);
  for (const double v : out.data()) CHECK(v == 0.0);
  for (const Matrix& y : head_outputs(x, params, masks)) {
    for (const double v : y.data()) CHECK(v == 0.0);
  }
}

TEST_CASE("masked forward equals the dense -1e30 oracle") {
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + trial;
    const int h = 2 + trial % 3;
    const int d = 4 * h;
    const AttentionParams params = random_attention_params(d, h, 40 + trial);
    const Matrix x = oracles::random_matrix(n + 1, d, 50 + trial);
    const std::vector<SupportSet> masks = small_stack(n, h, std::max(2, n / 2), 60 + trial);
    const Matrix masked = block_forward(x, params, masks);
    const Matrix dense = oracles::dense_masked_forward(x, params, masks);
    CHECK(max_abs_diff(masked, dense) < 1e-9);
  }
}

TEST_CASE("dot products are counted on the support only, never N^2") {
  const int n = 16, h = 4, d = 8;
  const AttentionParams params = random_attention_params(d, h, 77);
  const Matrix x = oracles::random_matrix(n + 1, d, 78);
  const std::vector<SupportSet> masks = small_stack(n, h, 8, 79);
  std::int64_t dots = 0;
  block_forward(x, params, masks, &dots);
  std::int64_t expected = 0;
  for (const SupportSet& m : masks) expected += m.patch_pair_count() + 2 * (n + 1) - 1;
  CHECK(dots == expected);
  CHECK(dots < static_cast<std::int64_t>(h) * (n + 1) * (n + 1));
}

TEST_CASE("head permutation with matching parameter permutation is a no-op") {
  const int n = 10, h = 4, d = 8, dh = d / h;
  AttentionParams params = random_attention_params(d, h, 31);
  const Matrix x = oracles::random_matrix(n + 1, d, 32);
  const std::vector<SupportSet> masks = small_stack(n, h, 6, 33);
  const Matrix base = block_forward(x, params, masks);

  std::vector<int> perm = {2, 0, 3, 1};
  AttentionParams shuffled = params;
  std::vector<SupportSet> shuffled_masks;
  for (int i = 0; i < h; ++i) {
    shuffled.wq[static_cast<std::size_t>(i)] = params.wq[static_cast<std::size_t>(perm[i])];
    shuffled.wk[static_cast<std::size_t>(i)] = params.wk[static_cast<std::size_t>(perm[i])];
    shuffled.wv[static_cast<std::size_t>(i)] = params.wv[static_cast<std::size_t>(perm[i])];
    shuffled_masks.push_back(masks[static_cast<std::size_t>(perm[i])]);
    for (int r = 0; r < dh; ++r) {
      for (int c = 0; c < d; ++c) {
        shuffled.wz(i * dh + r, c) = params.wz(perm[i] * dh + r, c);
      }
    }
  }
  const Matrix permuted = block_forward(x, shuffled, shuffled_masks);
  CHECK(max_abs_diff(base, permuted) < 1e-12);
}

TEST_CASE("vjp gradients match central finite differences") {
  // zero upstream -> zero gradients
  {
    const int n = 4, h = 2, d = 4;
    const AttentionParams params = random_attention_params(d, h, 1);
    const Matrix x = oracles::random_matrix(n + 1, d, 2);
    const std::vector<SupportSet> masks = small_stack(n, h, 3, 3);
    const Matrix upstream(n + 1, d);
    const AttentionGradients g = attention_vjp(x, params, masks, upstream);
    for (const double v : g.x.data()) CHECK(v == 0.0);
    for (const double v : g.wz.data()) CHECK(v == 0.0);
    for (int i = 0; i < h; ++i) {
      for (const double v : g.wq[static_cast<std::size_t>(i)].data()) CHECK(v == 0.0);
    }
  }
  // full and sparse masks against finite differences
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 4, h = 2, d = 4;
    const AttentionParams params = random_attention_params(d, h, 10 + trial);
    const Matrix x = oracles::random_matrix(n + 1, d, 20 + trial);
    const Matrix upstream = oracles::random_matrix(n + 1, d, 30 + trial);
    const std::vector<SupportSet> masks =
        trial % 2 == 0 ? std::vector<SupportSet>(2, full_mask_with_class(n))
                       : small_stack(n, h, 3, 40 + trial);
    CHECK(oracles::max_gradient_rel_error(x, params, masks, upstream) < 1e-4);
  }
}

TEST_CASE("head outputs coincide when parameters and masks coincide") {
  const int n = 8, h = 3, d = 9;
  AttentionParams params = random_attention_params(d, h, 55);
  for (int i = 1; i < h; ++i) {
    params.wq[static_cast<std::size_t>(i)] = params.wq[0];
    params.wk[static_cast<std::size_t>(i)] = params.wk[0];
    params.wv[static_cast<std::size_t>(i)] = params.wv[0];
  }
  const Matrix x = oracles::random_matrix(n + 1, d, 56);
  const std::vector<SupportSet> masks(static_cast<std::size_t>(h),
                                      make_support(n, {1, 2}, false, true));
  const std::vector<Matrix> ys = head_outputs(x, params, masks);
  for (int i = 1; i < h; ++i) {
    CHECK(max_abs_diff(ys[0], ys[static_cast<std::size_t>(i)]) == 0.0);
  }
}
