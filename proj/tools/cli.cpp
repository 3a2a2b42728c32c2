// tubekit - point tube pretext targets for point cloud videos
// Command-line front end.

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tubekit/tubekit.hpp"

namespace tubekit::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

std::vector<char> read_input(const std::string& path, Io& io) {
  if (path == "-") return {std::istreambuf_iterator<char>(io.in), std::istreambuf_iterator<char>()};
  return read_file_bytes(path);
}

void write_output(const std::string& path, const std::vector<char>& data, Io& io) {
  if (path == "-") {
    io.out.write(data.data(), static_cast<std::streamsize>(data.size()));
    io.out.flush();
    return;
  }
  write_file_bytes(path, data);
}

// Worker pool size: TUBEKIT_THREADS if set, else hardware concurrency.
std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TUBEKIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw UsageError("TUBEKIT_THREADS must be a positive integer");
    n = static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

// Runs job(i) for i in [0, count) on the pool. Results are written by
// index, so output order follows input order. The first failure is
// rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = worker_count(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Pipeline flags shared by divide / targets / mask.
struct PipelineFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  double mask_ratio = 0.75;
  std::string sections = "8";
  std::string codebook_path;
  bool no_interp = false;
  std::size_t stride = 1;
  std::string recon_mode = "decoupled";
  double radius = 0.3;
  std::size_t tube_frames = 3;
  std::size_t neighbors = 32;
  std::size_t spatial_downsample = 32;
  std::size_t temporal_downsample = 2;
  bool normalize_cd = false;
  bool no_motion = false;

  CLI::Option* o_seed = nullptr;
  CLI::Option* o_mask = nullptr;
  CLI::Option* o_sections = nullptr;
  CLI::Option* o_codebook = nullptr;
  CLI::Option* o_no_interp = nullptr;
  CLI::Option* o_stride = nullptr;
  CLI::Option* o_recon = nullptr;
  CLI::Option* o_radius = nullptr;
  CLI::Option* o_frames = nullptr;
  CLI::Option* o_neighbors = nullptr;
  CLI::Option* o_sd = nullptr;
  CLI::Option* o_td = nullptr;
  CLI::Option* o_norm = nullptr;
  CLI::Option* o_no_motion = nullptr;

  void attach(CLI::App& app) {
    app.add_option("--config", config_path, "Canonical text config file");
    o_seed = app.add_option("--seed", seed, "Sampling and masking seed");
    o_mask = app.add_option("--mask-ratio", mask_ratio, "Fraction of tubes to mask")
                 ->check(CLI::Range(0.0, 1.0));
    o_sections = app.add_option("--sections", sections, "Direction bins: 4, 8, 16 or custom")
                     ->check(CLI::IsMember({"4", "8", "16", "custom"}));
    o_codebook = app.add_option("--codebook", codebook_path, "Custom codebook file (x y z per line)");
    o_no_interp = app.add_flag("--no-interp", no_interp, "Hard bin assignment");
    o_stride = app.add_option("--stride", stride, "Temporal stride of the cardinality difference");
    o_recon = app.add_option("--recon-mode", recon_mode, "decoupled, coupled or middle")
                  ->check(CLI::IsMember({"decoupled", "coupled", "middle"}));
    o_radius = app.add_option("--radius", radius, "Ball query radius (meters)");
    o_frames = app.add_option("--tube-frames", tube_frames, "Frames per tube (l)");
    o_neighbors = app.add_option("--neighbors", neighbors, "Points per tube frame (n)");
    o_sd = app.add_option("--spatial-downsample", spatial_downsample, "Points per key point");
    o_td = app.add_option("--temporal-downsample", temporal_downsample, "Anchor frame step");
    o_norm = app.add_flag("--normalize-cd", normalize_cd, "Divide CD entries by n");
    o_no_motion = app.add_flag("--no-motion", no_motion, "Skip motion targets");
  }

  std::pair<PipelineConfig, DirectionCodebook> resolve() const {
    PipelineConfig cfg;
    if (!config_path.empty()) cfg = read_config(config_path);
    if (*o_seed) cfg.seed = seed;
    if (*o_mask) cfg.mask_ratio = mask_ratio;
    if (*o_sections) cfg.sections = parse_sections(sections);
    if (*o_no_interp) cfg.interpolate = false;
    if (*o_stride) cfg.cd_stride = stride;
    if (*o_recon) cfg.recon_mode = parse_recon_mode(recon_mode);
    if (*o_radius) cfg.radius = radius;
    if (*o_frames) cfg.tube_frames = tube_frames;
    if (*o_neighbors) cfg.neighbors = neighbors;
    if (*o_sd) cfg.spatial_downsample = spatial_downsample;
    if (*o_td) cfg.temporal_downsample = temporal_downsample;
    if (*o_norm) cfg.cd_normalize = true;
    if (*o_no_motion) cfg.motion_stream = false;
    if (*o_codebook) cfg.sections = 0;
    if (cfg.sections == 0 && codebook_path.empty())
      throw UsageError("--sections custom requires --codebook");
    cfg.validate();
    auto book = cfg.sections == 0 ? read_codebook(codebook_path) : DirectionCodebook::standard(cfg.sections);
    return {cfg, std::move(book)};
  }
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

json division_json(const std::string& name, const PointCloudVideo& video, const Division& d,
                   const PipelineConfig& cfg) {
  double max_norm = 0.0, sum_norm = 0.0;
  std::size_t count = 0, outside = 0;
  for (const auto& t : d.tubes)
    for (const auto& p : t.local_points.flat()) {
      const double nrm = vec::norm(p);
      max_norm = std::max(max_norm, nrm);
      sum_norm += nrm;
      ++count;
      if (!(nrm < cfg.radius)) ++outside;
    }
  return json{{"input", name},
              {"frames", video.frame_count()},
              {"anchor_frames", d.anchor_frames},
              {"key_points_per_anchor", d.key_points_per_anchor},
              {"tube_count", d.tubes.size()},
              {"tube_shape", {cfg.tube_frames, cfg.neighbors, 3}},
              {"queries", d.queries},
              {"sparse_queries", d.sparse_queries},
              {"fallback_queries", d.fallback_queries},
              {"offsets_outside_radius", outside},
              {"max_offset_norm", max_norm},
              {"mean_offset_norm", count ? sum_norm / static_cast<double>(count) : 0.0}};
}

int cmd_divide(const std::vector<std::string>& inputs, const PipelineFlags& flags, bool as_json, Io& io) {
  const auto [cfg, book] = flags.resolve();
  std::vector<json> results(inputs.size());
  parallel_for(inputs.size(), [&](std::size_t i) {
    const auto video = decode_pcv(read_input(inputs[i], io));
    results[i] = division_json(inputs[i], video, divide_with_stats(video, cfg), cfg);
  });
  if (as_json) {
    io.out << json{{"videos", results}}.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& r : results) {
    io.out << r["input"].get<std::string>() << ": " << r["frames"] << " frames, "
           << r["anchor_frames"].size() << " anchors, " << r["tube_count"] << " tubes of "
           << cfg.tube_frames << "x" << cfg.neighbors << "x3\n"
           << "  queries " << r["queries"] << " (sparse " << r["sparse_queries"] << ", fallback "
           << r["fallback_queries"] << "), max offset " << fmt(r["max_offset_norm"].get<double>())
           << " m\n";
  }
  return kExitOk;
}

int cmd_targets(const std::vector<std::string>& inputs, const std::string& out_path,
                const std::string& out_dir, const PipelineFlags& flags, bool as_json, Io& io) {
  const auto [cfg, book] = flags.resolve();
  if (inputs.size() > 1 && out_dir.empty())
    throw UsageError("targets: several inputs need --out-dir");
  if (!out_dir.empty() && !std::filesystem::is_directory(out_dir))
    throw UsageError("targets: --out-dir '" + out_dir + "' is not a directory");
  std::vector<std::string> outputs(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i)
    outputs[i] = out_dir.empty() ? out_path
                                 : (std::filesystem::path(out_dir) /
                                    (std::filesystem::path(inputs[i]).stem().string() + ".tbnd"))
                                       .string();
  std::vector<std::vector<char>> bytes(inputs.size());
  std::vector<json> summary(inputs.size());
  parallel_for(inputs.size(), [&](std::size_t i) {
    const auto video = decode_pcv(read_input(inputs[i], io));
    const auto bundle = build_targets(video, cfg, book);
    bytes[i] = encode_bundle(bundle);
    summary[i] = json{{"input", inputs[i]},
                      {"output", outputs[i]},
                      {"tube_count", bundle.tube_count},
                      {"masked_count", bundle.entries.size()}};
  });
  for (std::size_t i = 0; i < inputs.size(); ++i) write_output(outputs[i], bytes[i], io);
  // Summaries go to stderr when the bundle itself is on stdout.
  std::ostream& report = (outputs.size() == 1 && outputs[0] == "-") ? io.err : io.out;
  if (as_json) {
    report << json{{"bundles", summary}}.dump(2) << "\n";
  } else if (&report == &io.out) {
    for (const auto& s : summary)
      report << s["input"].get<std::string>() << " -> " << s["output"].get<std::string>() << ": "
             << s["masked_count"] << "/" << s["tube_count"] << " tubes masked\n";
  }
  return kExitOk;
}

int cmd_mask(const std::optional<std::string>& input, std::optional<std::size_t> tubes,
             const PipelineFlags& flags, bool as_json, Io& io) {
  const auto [cfg, book] = flags.resolve();
  std::size_t count = 0;
  if (tubes) {
    count = *tubes;
  } else if (input) {
    count = divide(decode_pcv(read_input(*input, io)), cfg).size();
  } else {
    throw UsageError("mask: give a video or --tubes");
  }
  const auto flags_v = mask_flags(count, cfg.mask_ratio, cfg.seed);
  std::vector<std::size_t> masked;
  std::string bits;
  for (std::size_t i = 0; i < flags_v.size(); ++i) {
    bits += flags_v[i] ? '1' : '0';
    if (flags_v[i]) masked.push_back(i);
  }
  if (as_json) {
    io.out << json{{"tube_count", count},     {"mask_ratio", cfg.mask_ratio},
                   {"seed", cfg.seed},        {"masked_count", masked.size()},
                   {"masked_indices", masked}, {"flags", bits}}
                  .dump(2)
           << "\n";
  } else {
    io.out << masked.size() << "/" << count << " tubes masked (ratio " << fmt(cfg.mask_ratio)
           << ", seed " << cfg.seed << ")\n"
           << bits << "\n";
  }
  return kExitOk;
}

double frame_stack_norm(const FrameStack& s) {
  double sum = 0.0;
  for (const auto& p : s.flat()) sum += vec::squared_norm(p);
  return std::sqrt(sum);
}

double matrix_norm(const Matrix& m) {
  double sum = 0.0;
  for (double v : m.flat()) sum += v * v;
  return std::sqrt(sum);
}

int cmd_loss(const std::string& pred_path, const std::string& gt_path, bool as_json, Io& io) {
  if (pred_path == "-" && gt_path == "-") throw UsageError("loss: only one bundle can come from stdin");
  const auto pred = decode_bundle(read_input(pred_path, io));
  const auto gt = decode_bundle(read_input(gt_path, io));
  const auto res = bundle_loss(pred, gt);
  if (as_json) {
    json per = json::array();
    for (std::size_t i = 0; i < res.per_tube.size(); ++i) {
      const auto& r = res.per_tube[i];
      per.push_back({{"tube_index", res.tube_indices[i]},
                     {"app_loss", r.app_loss},
                     {"motion_loss", r.motion_loss},
                     {"total_loss", r.total_loss},
                     {"grad_app_norm", frame_stack_norm(r.grad_app)},
                     {"grad_motion_norm", matrix_norm(r.grad_motion)}});
    }
    io.out << json{{"app_loss", res.app_loss},
                   {"motion_loss", res.motion_loss},
                   {"total_loss", res.total_loss},
                   {"tubes", res.per_tube.size()},
                   {"per_tube", per}}
                  .dump(2)
           << "\n";
  } else {
    io.out << "tubes        " << res.per_tube.size() << "\n"
           << "app_loss     " << fmt(res.app_loss, 17) << "\n"
           << "motion_loss  " << fmt(res.motion_loss, 17) << "\n"
           << "total_loss   " << fmt(res.total_loss, 17) << "\n";
  }
  return kExitOk;
}

int cmd_gradcheck(std::size_t trials, std::uint64_t seed, bool as_json, Io& io) {
  const auto rep = checks::run_gradcheck(trials, seed);
  if (as_json) {
    io.out << json{{"trials", rep.trials},
                   {"chamfer_max_rel_error", rep.chamfer_max_rel_error},
                   {"appearance_max_rel_error", rep.appearance_max_rel_error},
                   {"smooth_l1_max_rel_error", rep.smooth_l1_max_rel_error},
                   {"max_rel_error", rep.max_rel_error()},
                   {"tolerance", checks::kGradTolerance},
                   {"continuity_value_gap", rep.continuity_value_gap},
                   {"continuity_derivative_gap", rep.continuity_derivative_gap},
                   {"passed", rep.passed()}}
                  .dump(2)
           << "\n";
  } else {
    io.out << "gradcheck: " << rep.trials << " trials, step " << fmt(checks::kFdStep) << "\n"
           << "  chamfer     max rel error " << fmt(rep.chamfer_max_rel_error) << "\n"
           << "  appearance  max rel error " << fmt(rep.appearance_max_rel_error) << "\n"
           << "  smooth L1   max rel error " << fmt(rep.smooth_l1_max_rel_error) << "\n"
           << "  continuity  value gap " << fmt(rep.continuity_value_gap) << ", derivative gap "
           << fmt(rep.continuity_derivative_gap) << "\n"
           << (rep.passed() ? "PASS" : "FAIL") << " (tolerance " << fmt(checks::kGradTolerance) << ")\n";
  }
  return rep.passed() ? kExitOk : kExitCompute;
}

int cmd_verify(std::size_t trials, std::uint64_t seed, bool as_json, Io& io) {
  const auto rep = checks::run_verify(trials, seed);
  if (as_json) {
    io.out << json{{"trials", rep.trials},
                   {"fps_mismatches", rep.fps_mismatches},
                   {"chamfer_mismatches", rep.chamfer_mismatches},
                   {"chamfer_max_abs_error", rep.chamfer_max_abs_error},
                   {"cd_mismatches", rep.cd_mismatches},
                   {"cd_max_abs_error", rep.cd_max_abs_error},
                   {"passed", rep.passed()}}
                  .dump(2)
           << "\n";
  } else {
    io.out << "verify: " << rep.trials << " trials per kernel\n"
           << "  fps      mismatches " << rep.fps_mismatches << "\n"
           << "  chamfer  mismatches " << rep.chamfer_mismatches << ", max abs error "
           << fmt(rep.chamfer_max_abs_error) << "\n"
           << "  cd       mismatches " << rep.cd_mismatches << ", max abs error "
           << fmt(rep.cd_max_abs_error) << "\n"
           << (rep.passed() ? "PASS" : "FAIL") << "\n";
  }
  return rep.passed() ? kExitOk : kExitCompute;
}

int cmd_gen(const std::string& kind, std::size_t frames, std::size_t points, std::uint64_t seed,
            const std::string& out_path, Io& io) {
  const auto video = gen_synthetic(parse_motion_kind(kind), frames, points, seed);
  write_output(out_path, encode_pcv(video), io);
  return kExitOk;
}

json bundle_stats(const std::string& name, const TargetBundle& b) {
  const std::size_t k = b.codebook.size();
  std::vector<double> total(k, 0.0);
  json tubes = json::array();
  bool all_zero = true;
  double max_abs = 0.0;
  for (const auto& e : b.entries) {
    json rows = json::array();
    for (std::size_t r = 0; r < e.cd.rows(); ++r) {
      const auto row = e.cd.row(r);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
      for (std::size_t c = 0; c < row.size(); ++c) {
        total[c] += row[c];
        max_abs = std::max(max_abs, std::abs(row[c]));
        all_zero = all_zero && row[c] == 0.0;
      }
    }
    tubes.push_back({{"tube_index", e.tube_index}, {"key_frame", e.key_frame}, {"cd", rows}});
  }
  return json{{"input", name},       {"tube_count", b.tube_count}, {"masked_count", b.entries.size()},
              {"sections", k},       {"cd_total", total},         {"cd_max_abs", max_abs},
              {"all_zero", all_zero}, {"tubes", tubes}};
}

int cmd_stats(const std::vector<std::string>& inputs, bool as_json, bool per_tube, Io& io) {
  std::vector<json> results(inputs.size());
  parallel_for(inputs.size(), [&](std::size_t i) {
    results[i] = bundle_stats(inputs[i], decode_bundle(read_input(inputs[i], io)));
  });
  if (as_json) {
    io.out << json{{"bundles", results}}.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& r : results) {
    const std::size_t k = r["sections"].get<std::size_t>();
    io.out << r["input"].get<std::string>() << ": " << r["masked_count"] << " masked of "
           << r["tube_count"] << " tubes, " << k << " bins, max |CD| "
           << fmt(r["cd_max_abs"].get<double>()) << (r["all_zero"].get<bool>() ? " (all zero)" : "")
           << "\n  bin     ";
    for (std::size_t c = 0; c < k; ++c) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "  %8zu", c);
      io.out << buf;
    }
    io.out << "\n  total   ";
    for (double v : r["cd_total"]) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "  %8.3f", v);
      io.out << buf;
    }
    io.out << "\n";
    if (!per_tube) continue;
    for (const auto& t : r["tubes"]) {
      io.out << "  tube " << t["tube_index"] << " (frame " << t["key_frame"] << ")\n";
      std::size_t row = 0;
      for (const auto& cd : t["cd"]) {
        io.out << "    row " << row++ << " ";
        for (double v : cd) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "  %8.3f", v);
          io.out << buf;
        }
        io.out << "\n";
      }
    }
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  Io io{in, out, err};
  CLI::App app{"tubekit: point tube division, masking and pretext targets for point cloud videos",
               "tubekit"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable JSON output");

  // divide
  auto* divide_cmd = app.add_subcommand("divide", "Divide videos into point tubes and report statistics");
  std::vector<std::string> divide_inputs{"-"};
  divide_cmd->add_option("inputs", divide_inputs, "PCVD videos ('-' = stdin)");
  divide_cmd->add_flag("--json", as_json, "Machine-readable JSON output");
  PipelineFlags divide_flags;
  divide_flags.attach(*divide_cmd);

  // targets
  auto* targets_cmd = app.add_subcommand("targets", "Build masked-tube target bundles");
  std::vector<std::string> targets_inputs{"-"};
  std::string targets_out = "-", targets_dir;
  targets_cmd->add_option("inputs", targets_inputs, "PCVD videos ('-' = stdin)");
  targets_cmd->add_option("-o,--out", targets_out, "Bundle output path ('-' = stdout)");
  targets_cmd->add_option("--out-dir", targets_dir, "Directory for one bundle per input");
  targets_cmd->add_flag("--json", as_json, "Machine-readable JSON output");
  PipelineFlags targets_flags;
  targets_flags.attach(*targets_cmd);

  // mask
  auto* mask_cmd = app.add_subcommand("mask", "Report the mask flags drawn for a seed");
  std::optional<std::string> mask_input;
  std::optional<std::size_t> mask_tubes;
  mask_cmd->add_option("input", mask_input, "PCVD video whose tubes are masked");
  mask_cmd->add_option("--tubes", mask_tubes, "Tube count (instead of a video)");
  mask_cmd->add_flag("--json", as_json, "Machine-readable JSON output");
  PipelineFlags mask_flags_opt;
  mask_flags_opt.attach(*mask_cmd);

  // loss
  auto* loss_cmd = app.add_subcommand("loss", "Score a prediction bundle against a target bundle");
  std::string pred_path, gt_path;
  loss_cmd->add_option("--pred", pred_path, "Prediction bundle")->required();
  loss_cmd->add_option("--gt", gt_path, "Target bundle")->required();
  loss_cmd->add_flag("--json", as_json, "Machine-readable JSON output");

  // gradcheck
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference check of the loss gradients");
  std::size_t grad_trials = 200;
  std::uint64_t grad_seed = 0;
  grad_cmd->add_option("--trials", grad_trials, "Random instances")->check(CLI::PositiveNumber);
  grad_cmd->add_option("--seed", grad_seed, "Instance seed");
  grad_cmd->add_flag("--json", as_json, "Machine-readable JSON output");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Check FPS, Chamfer and CD against brute-force oracles");
  std::size_t verify_trials = 500;
  std::uint64_t verify_seed = 0;
  verify_cmd->add_option("--trials", verify_trials, "Random instances per kernel")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_seed, "Instance seed");
  verify_cmd->add_flag("--json", as_json, "Machine-readable JSON output");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic video");
  std::string gen_kind = "static", gen_out = "-";
  std::size_t gen_frames = 24, gen_points = 1024;
  std::uint64_t gen_seed = 0;
  gen_cmd->add_option("--kind", gen_kind, "static, translate, raise, lower or kick")
      ->check(CLI::IsMember({"static", "translate", "raise", "lower", "kick"}));
  gen_cmd->add_option("--frames", gen_frames, "Frame count (>= 3)");
  gen_cmd->add_option("--points", gen_points, "Points per frame (>= 64)");
  gen_cmd->add_option("--seed", gen_seed, "Body layout seed");
  gen_cmd->add_option("-o,--out", gen_out, "Output path ('-' = stdout)");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Summarize the cardinality differences in bundles");
  std::vector<std::string> stats_inputs{"-"};
  bool per_tube = false;
  stats_cmd->add_option("inputs", stats_inputs, "Target bundles ('-' = stdin)");
  stats_cmd->add_flag("--per-tube", per_tube, "Print every tube's CD matrix");
  stats_cmd->add_flag("--json", as_json, "Machine-readable JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*divide_cmd) return cmd_divide(divide_inputs, divide_flags, as_json, io);
    if (*targets_cmd) return cmd_targets(targets_inputs, targets_out, targets_dir, targets_flags, as_json, io);
    if (*mask_cmd) return cmd_mask(mask_input, mask_tubes, mask_flags_opt, as_json, io);
    if (*loss_cmd) return cmd_loss(pred_path, gt_path, as_json, io);
    if (*grad_cmd) return cmd_gradcheck(grad_trials, grad_seed, as_json, io);
    if (*verify_cmd) return cmd_verify(verify_trials, verify_seed, as_json, io);
    if (*gen_cmd) return cmd_gen(gen_kind, gen_frames, gen_points, gen_seed, gen_out, io);
    if (*stats_cmd) return cmd_stats(stats_inputs, as_json, per_tube, io);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCompute;
  }
  return kExitUsage;
}

}  // namespace tubekit::cli
