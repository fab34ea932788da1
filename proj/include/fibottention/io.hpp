#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fibottention/analysis.hpp"
#include "fibottention/maskgen.hpp"

namespace fibottention {

using ordered_json = nlohmann::ordered_json;

// Plain-text PBM (P1) over the (N+1)-token grid; 1 = admissible pair, class
// token at row/column 0.
inline std::string pbm_p1(const SupportSet& s) {
  const int t = s.tokens();
  const std::vector<std::uint8_t> dense = s.dense_token_mask();
  std::string out = "P1\n" + std::to_string(t) + " " + std::to_string(t) + "\n";
  out.reserve(out.size() + static_cast<std::size_t>(t) * (2 * t));
  for (int r = 0; r < t; ++r) {
    for (int c = 0; c < t; ++c) {
      out.push_back(dense[static_cast<std::size_t>(r) * t + c] ? '1' : '0');
      out.push_back(c + 1 == t ? '\n' : ' ');
    }
  }
  return out;
}

// Coordinate listing of a mask stack: header layer,head,row,col with all
// indices 0-based and the class token at index 0. Rows are emitted in
// lexicographic order, so the bytes are a pure function of the stack.
inline std::string mask_stack_csv(const MaskStack& stack) {
  std::string out = "layer,head,row,col\n";
  for (int l = 0; l < stack.layers; ++l) {
    for (int h = 0; h < stack.heads; ++h) {
      const SupportSet& s = stack.masks[static_cast<std::size_t>(l)][static_cast<std::size_t>(h)];
      const int t = s.tokens();
      const std::vector<std::uint8_t> dense = s.dense_token_mask();
      for (int r = 0; r < t; ++r) {
        for (int c = 0; c < t; ++c) {
          if (dense[static_cast<std::size_t>(r) * t + c]) {
            out += std::to_string(l) + "," + std::to_string(h) + "," + std::to_string(r) + "," +
                   std::to_string(c) + "\n";
          }
        }
      }
    }
  }
  return out;
}

inline ordered_json support_set_json(const SupportSet& s) {
  ordered_json j;
  j["n_patches"] = s.n_patches;
  j["offsets"] = s.offsets;
  j["include_diagonal"] = s.include_diagonal;
  j["include_class_token"] = s.include_class_token;
  if (!s.explicit_pairs.empty()) {
    ordered_json pairs = ordered_json::array();
    for (const auto& [r, c] : s.explicit_pairs) pairs.push_back({r, c});
    j["explicit_pairs"] = pairs;
  }
  j["patch_pairs"] = s.patch_pair_count();
  return j;
}

inline ordered_json mask_stack_json(const MaskStack& stack) {
  ordered_json j;
  j["n_patches"] = stack.n_patches;
  j["heads"] = stack.heads;
  j["layers"] = stack.layers;
  j["permutations"] = stack.permutations;
  ordered_json masks = ordered_json::array();
  for (int l = 0; l < stack.layers; ++l) {
    for (int h = 0; h < stack.heads; ++h) {
      ordered_json m = support_set_json(stack.masks[static_cast<std::size_t>(l)][static_cast<std::size_t>(h)]);
      m["layer"] = l;
      m["head"] = h;
      masks.push_back(m);
    }
  }
  j["masks"] = masks;
  return j;
}

inline ordered_json head_mask_config_json(const HeadMaskConfig& cfg) {
  ordered_json j;
  j["n"] = cfg.n_patches;
  j["heads"] = cfg.heads;
  j["wmin"] = cfg.w_min;
  j["wmax"] = cfg.w_max;
  j["variant"] = to_string(cfg.variant);
  j["layers"] = cfg.layers;
  j["seed"] = cfg.seed;
  return j;
}

inline ordered_json bound_report_json(const BoundReport& r) {
  ordered_json j;
  j["config"] = head_mask_config_json(r.cfg);
  j["d"] = r.d;
  ordered_json heads = ordered_json::array();
  for (const HeadBoundRow& row : r.heads) {
    ordered_json h;
    h["head"] = row.head;
    h["a"] = row.a;
    h["b"] = row.b;
    h["window"] = row.window;
    h["measured_pairs"] = row.measured_pairs;
    h["bound_applies"] = row.bound_applies;
    if (row.bound_applies) {
      h["support_bound"] = row.support_bound;
      h["pass"] = row.pass;
    }
    heads.push_back(h);
  }
  j["heads"] = heads;
  ordered_json totals;
  totals["patch_pairs"] = r.total_pairs;
  totals["measured_dot_products"] = r.measured_dot_products;
  totals["bound_tight"] = r.tight_bound;
  totals["bound_simplified"] = r.simplified_bound;
  totals["pass"] = r.totals_pass;
  j["totals"] = totals;
  j["all_pass"] = r.all_pass;
  return j;
}

inline ordered_json diversity_stats_json(const DiversityStats& st) {
  ordered_json j;
  j["count"] = st.samples.size();
  j["min"] = st.min;
  j["q1"] = st.q1;
  j["median"] = st.median;
  j["q3"] = st.q3;
  j["max"] = st.max;
  return j;
}

inline ordered_json flop_report_json(const FlopReport& r) {
  ordered_json j;
  j["d"] = r.d;
  j["heads"] = r.heads;
  ordered_json rows = ordered_json::array();
  for (const FlopRow& row : r.rows) {
    ordered_json x;
    x["image_side"] = row.image_side;
    x["patch_size"] = row.patch_size;
    x["n"] = row.n;
    x["wmin"] = row.w_min;
    x["wmax"] = row.w_max;
    x["dense_dots"] = row.dense_dots;
    x["sparse_dots"] = row.sparse_dots;
    x["class_token_dots"] = row.class_token_dots;
    x["ratio"] = row.ratio;
    rows.push_back(x);
  }
  j["rows"] = rows;
  return j;
}

inline std::string flop_report_csv(const FlopReport& r) {
  char buf[160];
  std::string out = "image_side,patch_size,n,wmin,wmax,dense_dots,sparse_dots,class_token_dots,ratio\n";
  for (const FlopRow& row : r.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%.0f,%.0f,%.0f,%.6f\n", row.image_side,
                  row.patch_size, row.n, row.w_min, row.w_max, row.dense_dots, row.sparse_dots,
                  row.class_token_dots, row.ratio);
    out += buf;
  }
  return out;
}

// Local-window pruning table: per window size, the kept-diagonal and
// dropped-diagonal pruning percentages over the N^2 patch grid.
inline std::string local_window_table_csv(int n_patches, const std::vector<int>& windows) {
  char buf[96];
  std::string out = "w,pruning_with_diagonal,pruning_without_diagonal\n";
  for (const int w : windows) {
    const double with_diag = pruning_ratio({local_window_mask(n_patches, w, true)});
    const double without = pruning_ratio({local_window_mask(n_patches, w, false)});
    std::snprintf(buf, sizeof(buf), "%d,%.2f,%.2f\n", w, with_diag, without);
    out += buf;
  }
  return out;
}

// JSON files end with a newline and are UTF-8.
inline std::string json_text(const ordered_json& j) { return j.dump(2) + "\n"; }

// Writes via a temp file in the same directory plus rename, so a crash never
// leaves a half-written artifact behind.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("short write: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace fibottention
