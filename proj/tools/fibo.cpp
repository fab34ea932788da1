// Command-line surface for the fibottention library: mask generation and
// export, sparsity statistics, bound verification, a seeded toy forward
// pass with gradient checking, and the head-diversity metric. Every run is
// reproducible from its seed; runs with --out also write a manifest that
// can be re-executed with --manifest.

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fibottention/fibottention.hpp"

namespace fs = std::filesystem;
using fibottention::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBoundViolation = 3;
constexpr int kExitIo = 4;

bool use_color() {
  return isatty(STDOUT_FILENO) != 0 && std::getenv("FIBO_NO_COLOR") == nullptr;
}

std::string paint(const std::string& s, const char* code) {
  if (!use_color()) return s;
  return std::string("\x1b[") + code + "m" + s + "\x1b[0m";
}

struct Options {
  std::string command;

  // token grid: either --n directly or --image-side/--patch
  int n = 196;
  int image_side = 0;
  int patch = 16;

  // head mask configuration
  int heads = 12;
  int wmin = 5;
  int wmax = 65;
  std::string variant = "wythoff";
  int layers = 1;
  std::uint64_t seed = 42;

  // baseline families
  std::string family;  // empty = wythoff dilation masks
  int window = 2;
  bool with_diagonal = false;
  double keep_fraction = 0.2;
  bool force_class_token = false;
  int global_tokens = 1;
  int random_pairs = -1;  // -1 = N
  int stride = 2;
  int local_width = 1;
  int factor = 2;
  bool variable = false;
  int base = 2;
  int exponent = 2;
  int delta = 0;

  // analysis / forward
  int dim = 768;
  int samples = 64;
  bool grad_check = false;
  bool zero_input = false;
  bool identical_heads = false;
  std::string table;
  std::string resolutions = "224,448,896";

  std::string format = "pbm";
  std::string out;

  int resolved_n() const {
    if (image_side > 0) {
      if (patch < 1 || image_side % patch != 0) {
        throw std::invalid_argument("--patch must divide --image-side");
      }
      const int g = image_side / patch;
      return g * g;
    }
    return n;
  }

  fibottention::HeadMaskConfig mask_config() const {
    fibottention::HeadMaskConfig cfg;
    cfg.heads = heads;
    cfg.w_min = wmin;
    cfg.w_max = wmax;
    cfg.variant = fibottention::variant_from_string(variant);
    cfg.n_patches = resolved_n();
    cfg.layers = layers;
    cfg.seed = seed;
    return cfg;
  }
};

ordered_json to_manifest(const Options& o) {
  ordered_json j;
  j["command"] = o.command;
  j["n"] = o.resolved_n();
  j["patch"] = o.patch;
  j["heads"] = o.heads;
  j["wmin"] = o.wmin;
  j["wmax"] = o.wmax;
  j["variant"] = o.variant;
  j["layers"] = o.layers;
  j["seed"] = o.seed;
  j["family"] = o.family;
  j["window"] = o.window;
  j["with_diagonal"] = o.with_diagonal;
  j["keep_fraction"] = o.keep_fraction;
  j["force_class_token"] = o.force_class_token;
  j["global_tokens"] = o.global_tokens;
  j["random_pairs"] = o.random_pairs;
  j["stride"] = o.stride;
  j["local_width"] = o.local_width;
  j["factor"] = o.factor;
  j["variable"] = o.variable;
  j["base"] = o.base;
  j["exponent"] = o.exponent;
  j["delta"] = o.delta;
  j["dim"] = o.dim;
  j["samples"] = o.samples;
  j["grad_check"] = o.grad_check;
  j["zero_input"] = o.zero_input;
  j["identical_heads"] = o.identical_heads;
  j["table"] = o.table;
  j["resolutions"] = o.resolutions;
  j["format"] = o.format;
  return j;
}

Options from_manifest(const ordered_json& j) {
  Options o;
  o.command = j.at("command").get<std::string>();
  o.n = j.at("n").get<int>();
  o.image_side = 0;
  o.patch = j.at("patch").get<int>();
  o.heads = j.at("heads").get<int>();
  o.wmin = j.at("wmin").get<int>();
  o.wmax = j.at("wmax").get<int>();
  o.variant = j.at("variant").get<std::string>();
  o.layers = j.at("layers").get<int>();
  o.seed = j.at("seed").get<std::uint64_t>();
  o.family = j.at("family").get<std::string>();
  o.window = j.at("window").get<int>();
  o.with_diagonal = j.at("with_diagonal").get<bool>();
  o.keep_fraction = j.at("keep_fraction").get<double>();
  o.force_class_token = j.at("force_class_token").get<bool>();
  o.global_tokens = j.at("global_tokens").get<int>();
  o.random_pairs = j.at("random_pairs").get<int>();
  o.stride = j.at("stride").get<int>();
  o.local_width = j.at("local_width").get<int>();
  o.factor = j.at("factor").get<int>();
  o.variable = j.at("variable").get<bool>();
  o.base = j.at("base").get<int>();
  o.exponent = j.at("exponent").get<int>();
  o.delta = j.at("delta").get<int>();
  o.dim = j.at("dim").get<int>();
  o.samples = j.at("samples").get<int>();
  o.grad_check = j.at("grad_check").get<bool>();
  o.zero_input = j.at("zero_input").get<bool>();
  o.identical_heads = j.at("identical_heads").get<bool>();
  o.table = j.at("table").get<std::string>();
  o.resolutions = j.at("resolutions").get<std::string>();
  o.format = j.at("format").get<std::string>();
  return o;
}

// Layers x heads masks for the selected family ("" = wythoff dilation
// stack). Single-pattern families produce one mask.
fibottention::MaskStack build_masks(const Options& o) {
  const int n = o.resolved_n();
  if (o.family.empty()) return fibottention::fibottention_masks(o.mask_config());

  fibottention::MaskStack stack;
  stack.n_patches = n;
  stack.layers = 1;
  std::vector<fibottention::SupportSet> masks;
  if (o.family == "local") {
    masks.push_back(fibottention::local_window_mask(n, o.window, o.with_diagonal));
  } else if (o.family == "random") {
    masks.push_back(fibottention::random_mask(n, o.keep_fraction, o.force_class_token, o.seed));
  } else if (o.family == "bigbird") {
    const int r = o.random_pairs < 0 ? n : o.random_pairs;
    masks.push_back(fibottention::bigbird_mask(n, o.window, o.global_tokens, r, o.seed));
  } else if (o.family == "strided") {
    masks.push_back(fibottention::strided_mask(n, o.stride, o.local_width));
  } else if (o.family == "linear") {
    const auto windows = fibottention::head_window_sizes(o.heads, o.wmin, o.wmax);
    masks = fibottention::dilated_heads_masks(n, o.heads, o.factor, o.variable, windows);
  } else if (o.family == "power" || o.family == "poly") {
    const auto windows = fibottention::head_window_sizes(o.heads, o.wmin, o.wmax);
    for (const int w : windows) {
      const fibottention::DilationSequence seq =
          o.family == "power" ? fibottention::power_sequence(o.base, w)
                              : fibottention::poly_sequence(o.exponent, w);
      masks.push_back(fibottention::support_from_sequence(seq, w, n, false));
    }
  } else if (o.family == "fib-offset") {
    const auto windows = fibottention::head_window_sizes(o.heads, o.wmin, o.wmax);
    masks = fibottention::offset_family_masks(n, o.heads, o.delta, windows);
  } else {
    throw std::invalid_argument("unknown family: " + o.family);
  }
  stack.heads = static_cast<int>(masks.size());
  stack.masks.push_back(std::move(masks));
  std::vector<int> identity(static_cast<std::size_t>(stack.heads));
  for (int i = 0; i < stack.heads; ++i) identity[static_cast<std::size_t>(i)] = i;
  stack.permutations.push_back(std::move(identity));
  return stack;
}

void write_manifest(const Options& o) {
  if (o.out.empty()) return;
  fs::create_directories(o.out);
  fibottention::write_file_atomic(fs::path(o.out) / "manifest.json",
                                  fibottention::json_text(to_manifest(o)));
}

int cmd_mask(const Options& o) {
  if (o.out.empty()) throw std::invalid_argument("mask: --out is required");
  const fibottention::MaskStack stack = build_masks(o);
  fs::create_directories(o.out);
  write_manifest(o);
  int files = 0;
  if (o.format == "pbm") {
    char name[64];
    for (int l = 0; l < stack.layers; ++l) {
      for (int h = 0; h < stack.heads; ++h) {
        std::snprintf(name, sizeof(name), "mask_L%03d_H%02d.pbm", l, h);
        fibottention::write_file_atomic(
            fs::path(o.out) / name,
            fibottention::pbm_p1(stack.masks[static_cast<std::size_t>(l)][static_cast<std::size_t>(h)]));
        ++files;
      }
    }
  } else if (o.format == "csv") {
    fibottention::write_file_atomic(fs::path(o.out) / "pairs.csv", fibottention::mask_stack_csv(stack));
    ++files;
  } else if (o.format == "json") {
    fibottention::write_file_atomic(fs::path(o.out) / "masks.json",
                                    fibottention::json_text(fibottention::mask_stack_json(stack)));
    ++files;
  } else {
    throw std::invalid_argument("unknown format: " + o.format);
  }
  std::cout << "wrote " << files << " mask file(s) + manifest.json to " << o.out << "\n";
  return kExitOk;
}

int cmd_stats(const Options& o) {
  if (o.table == "local-window") {
    const std::vector<int> windows = {2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 40, 80, 120, 160};
    const std::string csv = fibottention::local_window_table_csv(o.resolved_n(), windows);
    std::cout << csv;
    if (!o.out.empty()) {
      write_manifest(o);
      fibottention::write_file_atomic(fs::path(o.out) / "local_window_table.csv", csv);
    }
    return kExitOk;
  }
  if (o.table == "flops") {
    std::vector<std::pair<int, int>> sweep;
    std::string tok;
    std::istringstream ss(o.resolutions);
    while (std::getline(ss, tok, ',')) sweep.emplace_back(std::stoi(tok), o.patch);
    fibottention::WindowRule rule;
    rule.w_min = o.wmin;
    const fibottention::FlopReport report = fibottention::flop_projection(
        sweep, o.dim, o.heads, rule, fibottention::variant_from_string(o.variant));
    const std::string csv = fibottention::flop_report_csv(report);
    std::cout << csv;
    if (!o.out.empty()) {
      write_manifest(o);
      fibottention::write_file_atomic(fs::path(o.out) / "flops.csv", csv);
      fibottention::write_file_atomic(fs::path(o.out) / "flops.json",
                                      fibottention::json_text(fibottention::flop_report_json(report)));
    }
    return kExitOk;
  }
  if (!o.table.empty()) throw std::invalid_argument("unknown table: " + o.table);

  const fibottention::MaskStack stack = build_masks(o);
  const std::vector<fibottention::SupportSet>& masks = stack.masks.front();
  const double ratio = fibottention::pruning_ratio(masks);
  const auto hist = fibottention::overlap_histogram(masks);
  int max_share = 0;
  for (const auto& [offset, count] : hist) max_share = std::max(max_share, count);

  ordered_json j;
  j["n"] = stack.n_patches;
  j["heads"] = stack.heads;
  j["family"] = o.family.empty() ? o.variant : o.family;
  ordered_json counts = ordered_json::array();
  double mean = 0.0;
  for (const auto& m : masks) {
    counts.push_back(m.patch_pair_count());
    mean += static_cast<double>(m.patch_pair_count());
  }
  mean /= static_cast<double>(masks.size());
  j["patch_pairs_per_head"] = counts;
  j["mean_patch_pairs"] = mean;
  j["density_pct"] = 100.0 - ratio;
  j["pruning_ratio_pct"] = ratio;
  j["max_heads_sharing_an_offset"] = max_share;

  std::cout << "n=" << stack.n_patches << " heads=" << stack.heads
            << " family=" << (o.family.empty() ? o.variant : o.family) << "\n";
  std::cout << "patch pairs per head:";
  for (const auto& m : masks) std::cout << " " << m.patch_pair_count();
  std::cout << "\n";
  char line[128];
  std::snprintf(line, sizeof(line), "pruning ratio: %.2f%%  (density %.2f%%, mean %.1f pairs/head)",
                ratio, 100.0 - ratio, mean);
  std::cout << paint(line, "1") << "\n";
  std::cout << "max heads sharing an offset: " << max_share << "\n";
  if (!o.out.empty()) {
    write_manifest(o);
    fibottention::write_file_atomic(fs::path(o.out) / "stats.json", fibottention::json_text(j));
  }
  return kExitOk;
}

int cmd_bounds(const Options& o) {
  const fibottention::BoundReport report = fibottention::verify_bounds(o.mask_config(), o.dim);
  const ordered_json j = fibottention::bound_report_json(report);
  std::cout << fibottention::json_text(j);
  if (!o.out.empty()) {
    write_manifest(o);
    fibottention::write_file_atomic(fs::path(o.out) / "bounds.json", fibottention::json_text(j));
  }
  if (!report.all_pass) {
    std::cout << paint("bound violation detected", "31") << "\n";
    return kExitBoundViolation;
  }
  std::cout << paint("all bounds hold", "32") << "\n";
  return kExitOk;
}

fibottention::Matrix seeded_input(int tokens, int d, std::uint64_t seed, bool zero) {
  fibottention::Matrix x(tokens, d);
  if (zero) return x;
  fibottention::Splitmix64 rng(seed);
  for (double& v : x.data()) v = 2.0 * rng.next_double() - 1.0;
  return x;
}

int cmd_forward(const Options& o) {
  const int n = o.resolved_n();
  if (o.dim % o.heads != 0) throw std::invalid_argument("forward: --heads must divide --dim");
  fibottention::HeadMaskConfig cfg = o.mask_config();
  const fibottention::MaskStack stack = fibottention::fibottention_masks(cfg);
  const auto& masks = stack.masks.front();
  fibottention::AttentionParams params = fibottention::random_attention_params(o.dim, o.heads, o.seed);
  fibottention::Matrix x = seeded_input(n + 1, o.dim, o.seed + 1, o.zero_input);
  std::int64_t dots = 0;
  const fibottention::Matrix out = fibottention::block_forward(x, params, masks, &dots);

  double sum = 0.0;
  for (const double v : out.data()) sum += v;
  ordered_json j;
  j["n"] = n;
  j["dim"] = o.dim;
  j["heads"] = o.heads;
  j["seed"] = o.seed;
  j["zero_input"] = o.zero_input;
  j["dot_products"] = dots;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", sum);
  j["checksum_sum"] = buf;
  std::snprintf(buf, sizeof(buf), "%.17g", fibottention::frobenius_norm(out));
  j["checksum_fro"] = buf;

  if (o.grad_check) {
    if (n > 16 || o.dim > 16) {
      throw std::invalid_argument("forward: --grad-check needs --n <= 16 and --dim <= 16");
    }
    const fibottention::Matrix upstream = seeded_input(n + 1, o.dim, o.seed + 2, false);
    const auto grads = fibottention::attention_vjp(x, params, masks, upstream);
    const double eps = 1e-5;
    double max_rel = 0.0;
    auto loss = [&]() {
      return fibottention::inner(upstream, fibottention::block_forward(x, params, masks));
    };
    auto check_entry = [&](double analytic, double* slot) {
      const double keep = *slot;
      *slot = keep + eps;
      const double up = loss();
      *slot = keep - eps;
      const double down = loss();
      *slot = keep;
      const double fd = (up - down) / (2.0 * eps);
      const double rel = std::abs(analytic - fd) / std::max(1.0, std::abs(analytic) + std::abs(fd));
      max_rel = std::max(max_rel, rel);
    };
    for (std::size_t e = 0; e < x.data().size(); ++e) check_entry(grads.x.data()[e], &x.data()[e]);
    for (std::size_t i = 0; i < params.wq.size(); ++i) {
      for (std::size_t e = 0; e < params.wq[i].data().size(); ++e) {
        check_entry(grads.wq[i].data()[e], &params.wq[i].data()[e]);
        check_entry(grads.wk[i].data()[e], &params.wk[i].data()[e]);
        check_entry(grads.wv[i].data()[e], &params.wv[i].data()[e]);
      }
    }
    for (std::size_t e = 0; e < params.wz.data().size(); ++e) {
      check_entry(grads.wz.data()[e], &params.wz.data()[e]);
    }
    std::snprintf(buf, sizeof(buf), "%.3e", max_rel);
    j["grad_max_rel_err"] = buf;
  }

  std::cout << fibottention::json_text(j);
  if (!o.out.empty()) {
    write_manifest(o);
    fibottention::write_file_atomic(fs::path(o.out) / "forward.json", fibottention::json_text(j));
  }
  return kExitOk;
}

int cmd_diversity(const Options& o) {
  if (o.heads < 2) throw std::invalid_argument("diversity: needs at least two heads");
  const int n = o.resolved_n();
  if (o.dim % o.heads != 0) throw std::invalid_argument("diversity: --heads must divide --dim");
  fibottention::HeadMaskConfig cfg = o.mask_config();
  std::vector<fibottention::SupportSet> masks;
  fibottention::AttentionParams params;
  if (o.identical_heads) {
    // Same projections and the same mask for every head: head outputs are
    // identical by construction.
    params = fibottention::random_attention_params(o.dim, o.heads, o.seed);
    for (int i = 1; i < o.heads; ++i) {
      params.wq[static_cast<std::size_t>(i)] = params.wq[0];
      params.wk[static_cast<std::size_t>(i)] = params.wk[0];
      params.wv[static_cast<std::size_t>(i)] = params.wv[0];
    }
    const auto base = fibottention::fibottention_head_masks(cfg);
    masks.assign(static_cast<std::size_t>(o.heads), base.front());
  } else {
    params = fibottention::random_attention_params(o.dim, o.heads, o.seed);
    masks = fibottention::fibottention_head_masks(cfg);
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(o.samples));
  for (int s = 0; s < o.samples; ++s) {
    const fibottention::Matrix x =
        seeded_input(n + 1, o.dim, o.seed + 1000 + static_cast<std::uint64_t>(s), false);
    values.push_back(fibottention::head_diversity(fibottention::head_outputs(x, params, masks)));
  }
  const fibottention::DiversityStats st = fibottention::diversity_stats(values);
  const ordered_json j = fibottention::diversity_stats_json(st);
  std::cout << fibottention::json_text(j);
  if (!o.out.empty()) {
    write_manifest(o);
    fibottention::write_file_atomic(fs::path(o.out) / "diversity.json", fibottention::json_text(j));
  }
  return kExitOk;
}

int dispatch(const Options& o) {
  if (o.command == "mask") return cmd_mask(o);
  if (o.command == "stats") return cmd_stats(o);
  if (o.command == "bounds") return cmd_bounds(o);
  if (o.command == "forward") return cmd_forward(o);
  if (o.command == "diversity") return cmd_diversity(o);
  throw std::invalid_argument("unknown command: " + o.command);
}

void add_common_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--n", o.n, "patch token count N");
  cmd->add_option("--image-side", o.image_side, "image side in pixels (with --patch, sets N)");
  cmd->add_option("--patch", o.patch, "patch size in pixels");
  cmd->add_option("--heads", o.heads, "attention head count");
  cmd->add_option("--wmin", o.wmin, "minimal head window");
  cmd->add_option("--wmax", o.wmax, "maximal head window");
  cmd->add_option("--variant", o.variant, "wythoff | modified")
      ->check(CLI::IsMember({"wythoff", "modified"}));
  cmd->add_option("--layers", o.layers, "attention layer count");
  cmd->add_option("--seed", o.seed, "seed for every random choice");
  cmd->add_option("--out", o.out, "output directory");
}

void add_family_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--family", o.family,
                  "local | random | bigbird | strided | linear | power | poly | fib-offset");
  cmd->add_option("--window", o.window, "local/bigbird window width");
  cmd->add_flag("--with-diagonal", o.with_diagonal, "local: keep the main diagonal");
  cmd->add_option("--keep-fraction", o.keep_fraction, "random: kept fraction of the N^2 grid");
  cmd->add_flag("--force-class-token", o.force_class_token, "random: dense class-token row/col");
  cmd->add_option("--global-tokens", o.global_tokens, "bigbird: global token count g");
  cmd->add_option("--random-pairs", o.random_pairs, "bigbird: random pair count r (default N)");
  cmd->add_option("--stride", o.stride, "strided: stride");
  cmd->add_option("--local-width", o.local_width, "strided: local width");
  cmd->add_option("--factor", o.factor, "linear: dilation factor c");
  cmd->add_flag("--variable", o.variable, "linear: shift offsets by head index");
  cmd->add_option("--base", o.base, "power: base");
  cmd->add_option("--exponent", o.exponent, "poly: exponent (2 or 3)");
  cmd->add_option("--delta", o.delta, "fib-offset: delta of Fib(i+delta, i+delta)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wythoff-Fibonacci sparse attention masks, statistics, bounds and reference kernels"};
  app.require_subcommand(0, 1);

  std::string manifest_path;
  std::string manifest_out;
  app.add_option("--manifest", manifest_path, "re-run a recorded manifest");
  app.add_option("--out", manifest_out, "output directory override for --manifest");

  Options o;
  CLI::App* mask = app.add_subcommand("mask", "generate and export masks");
  add_common_options(mask, o);
  add_family_options(mask, o);
  mask->add_option("--format", o.format, "pbm | csv | json")
      ->check(CLI::IsMember({"pbm", "csv", "json"}));

  CLI::App* stats = app.add_subcommand("stats", "pruning ratios, per-head counts, overlap");
  add_common_options(stats, o);
  add_family_options(stats, o);
  stats->add_option("--table", o.table, "local-window | flops");
  stats->add_option("--resolutions", o.resolutions, "flops: comma list of image sides");
  stats->add_option("--dim", o.dim, "embedding width d");

  CLI::App* bounds = app.add_subcommand("bounds", "verify sparsity and complexity bounds");
  add_common_options(bounds, o);
  bounds->add_option("--dim", o.dim, "embedding width d");

  CLI::App* forward = app.add_subcommand("forward", "seeded toy forward pass");
  add_common_options(forward, o);
  forward->add_option("--dim", o.dim, "embedding width d");
  forward->add_flag("--grad-check", o.grad_check, "finite-difference gradient check");
  forward->add_flag("--zero-input", o.zero_input, "use an all-zero input matrix");

  CLI::App* diversity = app.add_subcommand("diversity", "head-diversity statistics");
  add_common_options(diversity, o);
  diversity->add_option("--dim", o.dim, "embedding width d");
  diversity->add_option("--samples", o.samples, "number of random inputs");
  diversity->add_flag("--identical-heads", o.identical_heads, "synthetic identical-head run");

  // forward/diversity defaults are desk scale
  forward->preparse_callback([&](std::size_t) {
    o.n = 16; o.heads = 4; o.dim = 32; o.wmin = 2; o.wmax = 5;
  });
  diversity->preparse_callback([&](std::size_t) {
    o.n = 16; o.heads = 4; o.dim = 32; o.wmin = 2; o.wmax = 5; o.samples = 64;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (!manifest_path.empty()) {
      std::ifstream f(manifest_path);
      if (!f) {
        std::cerr << "cannot read manifest: " << manifest_path << "\n";
        return kExitIo;
      }
      ordered_json j = ordered_json::parse(f);
      Options mo = from_manifest(j);
      if (!manifest_out.empty()) mo.out = manifest_out;
      return dispatch(mo);
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return kExitUsage;
    }
    o.command = app.get_subcommands().front()->get_name();
    return dispatch(o);
  } catch (const fibottention::EmptySequenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::runtime_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
