#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fibottention/matrix.hpp"
#include "fibottention/prng.hpp"
#include "fibottention/support.hpp"

namespace fibottention {

// Per-head projections plus the output projection of one attention block.
// Inputs are token matrices X of shape (N+1) x d with the class token in
// row 0.
struct AttentionParams {
  int d = 0;
  int heads = 0;
  std::vector<Matrix> wq, wk, wv;  // each d x d_h
  Matrix wz;                       // (heads * d_h) x d
  std::uint64_t seed = 0;

  int head_dim() const { return d / heads; }
};

// Seeded init, every entry uniform in [-1/sqrt(d), 1/sqrt(d)). Draw order is
// fixed (per head: wq, wk, wv row-major; then wz) so a seed pins all
// parameters.
inline AttentionParams random_attention_params(int d, int heads, std::uint64_t seed) {
  if (heads < 1) throw std::invalid_argument("attention params: heads must be >= 1");
  if (d < 1 || d % heads != 0) throw std::invalid_argument("attention params: heads must divide d");
  AttentionParams p;
  p.d = d;
  p.heads = heads;
  p.seed = seed;
  const int dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Splitmix64 rng(seed);
  auto fill = [&](Matrix& m) {
    for (double& v : m.data()) v = (2.0 * rng.next_double() - 1.0) * scale;
  };
  for (int i = 0; i < heads; ++i) {
    p.wq.emplace_back(d, dh);
    p.wk.emplace_back(d, dh);
    p.wv.emplace_back(d, dh);
    fill(p.wq.back());
    fill(p.wk.back());
    fill(p.wv.back());
  }
  p.wz = Matrix(heads * dh, d);
  fill(p.wz);
  return p;
}

// Masked score matrix of one head. Blocked entries carry a sentinel flag
// rather than a stored -inf so that the dot-product count stays honest and
// softmax never sees NaNs.
struct HeadScores {
  Matrix scores;                      // (N+1) x (N+1); blocked entries hold 0
  std::vector<std::uint8_t> finite;   // row-major admissibility flags
  std::int64_t dot_products = 0;      // query-key dots actually evaluated

  int tokens() const { return scores.rows(); }
  bool is_finite(int r, int c) const {
    return finite[static_cast<std::size_t>(r) * tokens() + c] != 0;
  }
};

// S[j][k] = <Q_j, K_k> / sqrt(d_h) on admissible pairs only; no dot product
// is evaluated on blocked pairs.
inline HeadScores masked_scores(const Matrix& q, const Matrix& k, const SupportSet& mask) {
  if (q.rows() != k.rows() || q.cols() != k.cols()) {
    throw std::invalid_argument("masked_scores: Q and K shapes disagree");
  }
  if (q.rows() != mask.tokens()) {
    throw std::invalid_argument("masked_scores: token count disagrees with the mask grid");
  }
  if (q.cols() < 1) throw std::invalid_argument("masked_scores: head dimension must be >= 1");
  const int t = mask.tokens();
  const int dh = q.cols();
  const double inv_scale = 1.0 / std::sqrt(static_cast<double>(dh));
  HeadScores hs;
  hs.scores = Matrix(t, t);
  hs.finite.assign(static_cast<std::size_t>(t) * t, 0);
  mask.for_each_token_pair([&](int r, int c) {
    double s = 0.0;
    for (int x = 0; x < dh; ++x) s += q(r, x) * k(c, x);
    hs.scores(r, c) = s * inv_scale;
    hs.finite[static_cast<std::size_t>(r) * t + c] = 1;
    ++hs.dot_products;
  });
  return hs;
}

// Row-stochastic attention weights; blocked entries map to probability 0.
// Stabilized by subtracting the row max over finite entries.
inline Matrix masked_softmax(const HeadScores& hs) {
  const int t = hs.tokens();
  Matrix out(t, t);
  for (int r = 0; r < t; ++r) {
    double row_max = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < t; ++c) {
      if (hs.is_finite(r, c)) row_max = std::max(row_max, hs.scores(r, c));
    }
    if (!(row_max > -std::numeric_limits<double>::infinity())) {
      throw std::domain_error("masked_softmax: fully blocked row");
    }
    double sum = 0.0;
    for (int c = 0; c < t; ++c) {
      if (hs.is_finite(r, c)) {
        const double e = std::exp(hs.scores(r, c) - row_max);
        out(r, c) = e;
        sum += e;
      }
    }
    for (int c = 0; c < t; ++c) {
      if (hs.is_finite(r, c)) out(r, c) /= sum;
    }
  }
  return out;
}

namespace detail {

inline void check_block_inputs(const Matrix& x, const AttentionParams& p,
                               const std::vector<SupportSet>& masks) {
  if (p.heads < 1 || p.d % p.heads != 0) throw std::invalid_argument("attention: invalid params");
  if (x.cols() != p.d) throw std::invalid_argument("attention: X width disagrees with d");
  if (static_cast<int>(masks.size()) != p.heads) {
    throw std::invalid_argument("attention: need one mask per head");
  }
  for (const SupportSet& m : masks) {
    if (m.tokens() != x.rows()) throw std::invalid_argument("attention: mask grid disagrees with X");
  }
}

}  // namespace detail

// Per-head outputs Y_i = softmax(S_i) * V_i, shape (N+1) x d_h each.
inline std::vector<Matrix> head_outputs(const Matrix& x, const AttentionParams& p,
                                        const std::vector<SupportSet>& masks,
                                        std::int64_t* dot_count = nullptr) {
  detail::check_block_inputs(x, p, masks);
  std::vector<Matrix> ys;
  ys.reserve(static_cast<std::size_t>(p.heads));
  for (int i = 0; i < p.heads; ++i) {
    const Matrix q = matmul(x, p.wq[static_cast<std::size_t>(i)]);
    const Matrix k = matmul(x, p.wk[static_cast<std::size_t>(i)]);
    const Matrix v = matmul(x, p.wv[static_cast<std::size_t>(i)]);
    const HeadScores hs = masked_scores(q, k, masks[static_cast<std::size_t>(i)]);
    if (dot_count != nullptr) *dot_count += hs.dot_products;
    ys.push_back(matmul(masked_softmax(hs), v));
  }
  return ys;
}

// Masked multi-head block: O = concat_i(softmax(S_i) V_i) * WZ.
inline Matrix block_forward(const Matrix& x, const AttentionParams& p,
                            const std::vector<SupportSet>& masks,
                            std::int64_t* dot_count = nullptr) {
  const std::vector<Matrix> ys = head_outputs(x, p, masks, dot_count);
  const int t = x.rows();
  const int dh = p.head_dim();
  Matrix z(t, p.heads * dh);
  for (int i = 0; i < p.heads; ++i) {
    const Matrix& y = ys[static_cast<std::size_t>(i)];
    for (int r = 0; r < t; ++r) {
      for (int c = 0; c < dh; ++c) z(r, i * dh + c) = y(r, c);
    }
  }
  return matmul(z, p.wz);
}

// Unmasked reference block, written as its own straight-line dense path.
inline Matrix dense_block_forward(const Matrix& x, const AttentionParams& p) {
  if (p.heads < 1 || p.d % p.heads != 0) throw std::invalid_argument("attention: invalid params");
  if (x.cols() != p.d) throw std::invalid_argument("attention: X width disagrees with d");
  const int t = x.rows();
  const int dh = p.head_dim();
  const double inv_scale = 1.0 / std::sqrt(static_cast<double>(dh));
  Matrix z(t, p.heads * dh);
  for (int i = 0; i < p.heads; ++i) {
    const Matrix q = matmul(x, p.wq[static_cast<std::size_t>(i)]);
    const Matrix k = matmul(x, p.wk[static_cast<std::size_t>(i)]);
    const Matrix v = matmul(x, p.wv[static_cast<std::size_t>(i)]);
    Matrix s = matmul_transB(q, k);
    for (double& e : s.data()) e *= inv_scale;
    for (int r = 0; r < t; ++r) {
      double row_max = s(r, 0);
      for (int c = 1; c < t; ++c) row_max = std::max(row_max, s(r, c));
      double sum = 0.0;
      for (int c = 0; c < t; ++c) {
        s(r, c) = std::exp(s(r, c) - row_max);
        sum += s(r, c);
      }
      for (int c = 0; c < t; ++c) s(r, c) /= sum;
    }
    const Matrix y = matmul(s, v);
    for (int r = 0; r < t; ++r) {
      for (int c = 0; c < dh; ++c) z(r, i * dh + c) = y(r, c);
    }
  }
  return matmul(z, p.wz);
}

struct AttentionGradients {
  Matrix x;
  std::vector<Matrix> wq, wk, wv;
  Matrix wz;
};

// Reverse-mode gradients of <upstream, block_forward(X)> with respect to X
// and every parameter matrix. Blocked score entries contribute zero.
inline AttentionGradients attention_vjp(const Matrix& x, const AttentionParams& p,
                                        const std::vector<SupportSet>& masks,
                                        const Matrix& upstream) {
  detail::check_block_inputs(x, p, masks);
  if (upstream.rows() != x.rows() || upstream.cols() != p.d) {
    throw std::invalid_argument("attention_vjp: upstream shape disagrees with the output");
  }
  const int t = x.rows();
  const int dh = p.head_dim();
  const double inv_scale = 1.0 / std::sqrt(static_cast<double>(dh));

  // Forward intermediates.
  std::vector<Matrix> qs, ks, vs, as;
  qs.reserve(static_cast<std::size_t>(p.heads));
  for (int i = 0; i < p.heads; ++i) {
    qs.push_back(matmul(x, p.wq[static_cast<std::size_t>(i)]));
    ks.push_back(matmul(x, p.wk[static_cast<std::size_t>(i)]));
    vs.push_back(matmul(x, p.wv[static_cast<std::size_t>(i)]));
    as.push_back(masked_softmax(
        masked_scores(qs.back(), ks.back(), masks[static_cast<std::size_t>(i)])));
  }
  Matrix z(t, p.heads * dh);
  for (int i = 0; i < p.heads; ++i) {
    const Matrix y = matmul(as[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(i)]);
    for (int r = 0; r < t; ++r) {
      for (int c = 0; c < dh; ++c) z(r, i * dh + c) = y(r, c);
    }
  }

  AttentionGradients g;
  g.wz = matmul_transA(z, upstream);       // Z^T dO
  const Matrix dz = matmul_transB(upstream, p.wz);  // dO WZ^T
  g.x = Matrix(t, p.d);
  for (int i = 0; i < p.heads; ++i) {
    const Matrix& a = as[static_cast<std::size_t>(i)];
    Matrix dzi(t, dh);
    for (int r = 0; r < t; ++r) {
      for (int c = 0; c < dh; ++c) dzi(r, c) = dz(r, i * dh + c);
    }
    const Matrix dv = matmul_transA(a, dzi);      // A^T dZ_i
    Matrix da = matmul_transB(dzi, vs[static_cast<std::size_t>(i)]);  // dZ_i V^T

    // Softmax backward, restricted to the support: A is exactly zero on
    // blocked entries, so dS = A .* (dA - rowdot(dA, A)) vanishes there.
    Matrix ds(t, t);
    for (int r = 0; r < t; ++r) {
      double rowdot = 0.0;
      for (int c = 0; c < t; ++c) rowdot += da(r, c) * a(r, c);
      for (int c = 0; c < t; ++c) ds(r, c) = a(r, c) * (da(r, c) - rowdot);
    }
    for (double& e : ds.data()) e *= inv_scale;

    const Matrix dq = matmul(ds, ks[static_cast<std::size_t>(i)]);
    const Matrix dk = matmul_transA(ds, qs[static_cast<std::size_t>(i)]);
    g.wq.push_back(matmul_transA(x, dq));
    g.wk.push_back(matmul_transA(x, dk));
    g.wv.push_back(matmul_transA(x, dv));

    const Matrix dx_q = matmul_transB(dq, p.wq[static_cast<std::size_t>(i)]);
    const Matrix dx_k = matmul_transB(dk, p.wk[static_cast<std::size_t>(i)]);
    const Matrix dx_v = matmul_transB(dv, p.wv[static_cast<std::size_t>(i)]);
    for (std::size_t e = 0; e < g.x.data().size(); ++e) {
      g.x.data()[e] += dx_q.data()[e] + dx_k.data()[e] + dx_v.data()[e];
    }
  }
  return g;
}

}  // namespace fibottention
