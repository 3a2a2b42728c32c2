#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "tubekit/bundle.hpp"
#include "tubekit/pcv_io.hpp"
#include "tubekit/synthetic.hpp"

using namespace tubekit;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args, const std::string& stdin_data = "") {
  args.insert(args.begin(), "tubekit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_data);
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
  const auto dir = std::filesystem::path(TUBEKIT_TEST_TMPDIR) / "cli";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string read_all(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  return {bytes.begin(), bytes.end()};
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(call({}).code, cli::kExitUsage);
  EXPECT_EQ(call({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"divide", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"targets", "x.pcv", "--sections", "6"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"loss", "--pred", "a"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"mask"}).code, cli::kExitUsage);
  const auto r = call({"targets", "a.pcv", "b.pcv"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("--out-dir"), std::string::npos);
}

TEST(Cli, HelpExitsZero) {
  const auto r = call({"--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("targets"), std::string::npos);
}

TEST(Cli, ComputeErrorsExitOne) {
  const auto missing = call({"divide", tmp("does_not_exist.pcv")});
  EXPECT_EQ(missing.code, cli::kExitCompute);
  EXPECT_NE(missing.err.find("cannot open"), std::string::npos);
  const auto garbage = call({"divide", "-"}, "not a video at all");
  EXPECT_EQ(garbage.code, cli::kExitCompute);
  EXPECT_NE(garbage.err.find("bad magic"), std::string::npos);
  EXPECT_EQ(call({"gen", "--frames", "2", "-o", tmp("short.pcv")}).code, cli::kExitCompute);
}

TEST(Cli, GenTargetsStatsPipeline) {
  const auto video = tmp("raise.pcv");
  ASSERT_EQ(call({"gen", "--kind", "raise", "--frames", "24", "--points", "1024", "--seed", "3", "-o", video}).code, 0);
  EXPECT_EQ(read_pcv(video).frames[5].points, gen_synthetic(MotionKind::kRaise, 24, 1024, 3).frames[5].points);

  const auto a = tmp("raise_a.tbnd"), b = tmp("raise_b.tbnd");
  ASSERT_EQ(call({"targets", video, "-o", a, "--seed", "9"}).code, 0);
  ASSERT_EQ(call({"targets", video, "-o", b, "--seed", "9"}).code, 0);
  EXPECT_EQ(read_all(a), read_all(b));

  const auto bundle = read_bundle(a);
  EXPECT_EQ(bundle.tube_count, 352u);
  EXPECT_EQ(bundle.entries.size(), 264u);
  PipelineConfig cfg;
  cfg.seed = 9;
  EXPECT_EQ(bundle, build_targets(read_pcv(video), cfg, DirectionCodebook::octants()));

  const auto stats = call({"stats", a, "--json"});
  ASSERT_EQ(stats.code, 0);
  const auto j = json::parse(stats.out);
  EXPECT_EQ(j["bundles"][0]["masked_count"], 264);
  EXPECT_EQ(j["bundles"][0]["sections"], 8);
  EXPECT_EQ(j["bundles"][0]["tubes"].size(), 264u);

  const auto text = call({"stats", a, "--per-tube"});
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("row 1"), std::string::npos);
}

TEST(Cli, TargetsThroughPipes) {
  const auto gen = call({"gen", "--kind", "kick", "--frames", "6", "--points", "256"});
  ASSERT_EQ(gen.code, 0);
  const auto targets = call({"targets", "--json"}, gen.out);
  ASSERT_EQ(targets.code, 0);
  const auto summary = json::parse(targets.err);
  EXPECT_EQ(summary["bundles"][0]["tube_count"], 16);
  const std::vector<char> bytes(targets.out.begin(), targets.out.end());
  EXPECT_EQ(decode_bundle(bytes).entries.size(), 12u);
}

TEST(Cli, ConfigFileAndFlagOverrides) {
  const auto video = tmp("kick.pcv");
  ASSERT_EQ(call({"gen", "--kind", "kick", "--frames", "8", "--points", "512", "-o", video}).code, 0);
  const auto cfg_path = tmp("run.cfg");
  {
    std::ofstream out(cfg_path);
    out << "# experiment\nsections = 16\nmask_ratio = 0.5\nseed = 4\n";
  }
  const auto out = tmp("kick.tbnd");
  ASSERT_EQ(call({"targets", video, "--config", cfg_path, "--seed", "5", "-o", out}).code, 0);
  const auto b = read_bundle(out);
  const auto cfg = b.config();
  EXPECT_EQ(cfg.sections, 16u);
  EXPECT_EQ(cfg.mask_ratio, 0.5);
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_EQ(b.codebook.size(), 16u);
  // Re-running from the echoed config reproduces the bundle.
  EXPECT_EQ(b, build_targets(read_pcv(video), cfg, b.direction_codebook()));
}

TEST(Cli, CustomCodebook) {
  const auto video = tmp("static.pcv");
  ASSERT_EQ(call({"gen", "--frames", "4", "--points", "256", "-o", video}).code, 0);
  const auto book = tmp("axes.txt");
  {
    std::ofstream out(book);
    out << "1 0 0\n-1 0 0\n0 1 0\n0 -1 0\n0 0 1\n0 0 -1\n";
  }
  const auto out = tmp("static.tbnd");
  ASSERT_EQ(call({"targets", video, "--codebook", book, "-o", out}).code, 0);
  EXPECT_EQ(read_bundle(out).codebook.size(), 6u);
  EXPECT_EQ(call({"targets", video, "--sections", "custom", "-o", out}).code, cli::kExitUsage);
}

TEST(Cli, OutDirWritesOneBundlePerInput) {
  const auto v1 = tmp("multi_a.pcv"), v2 = tmp("multi_b.pcv");
  ASSERT_EQ(call({"gen", "--kind", "translate", "--frames", "5", "--points", "256", "-o", v1}).code, 0);
  ASSERT_EQ(call({"gen", "--kind", "raise", "--frames", "5", "--points", "256", "-o", v2}).code, 0);
  const auto dir = tmp("bundles");
  std::filesystem::create_directories(dir);
  ASSERT_EQ(call({"targets", v1, v2, "--out-dir", dir}).code, 0);
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(dir) / "multi_a.tbnd"));
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(dir) / "multi_b.tbnd"));
}

TEST(Cli, DivideJson) {
  const auto video = tmp("divide.pcv");
  ASSERT_EQ(call({"gen", "--kind", "raise", "--frames", "24", "--points", "1024", "-o", video}).code, 0);
  const auto r = call({"divide", video, "--json"});
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out)["videos"][0];
  EXPECT_EQ(j["tube_count"], 352);
  EXPECT_EQ(j["anchor_frames"].size(), 11u);
  EXPECT_EQ(j["tube_shape"], json::parse("[3, 32, 3]"));
  EXPECT_EQ(j["offsets_outside_radius"], 0);
  EXPECT_LT(j["max_offset_norm"].get<double>(), 0.3);
}

TEST(Cli, MaskReport) {
  const auto r = call({"mask", "--tubes", "32", "--seed", "2", "--json"});
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["masked_count"], 24);
  EXPECT_EQ(j["flags"].get<std::string>().size(), 32u);
  const auto flags = mask_flags(32, 0.75, 2);
  for (std::size_t i = 0; i < 32; ++i) EXPECT_EQ(j["flags"].get<std::string>()[i] == '1', flags[i]);
  EXPECT_EQ(call({"mask", "--tubes", "8", "--mask-ratio", "1.5"}).code, cli::kExitUsage);
}

TEST(Cli, LossAgainstItselfIsZero) {
  const auto video = tmp("loss.pcv"), bundle = tmp("loss.tbnd");
  ASSERT_EQ(call({"gen", "--kind", "kick", "--frames", "6", "--points", "256", "-o", video}).code, 0);
  ASSERT_EQ(call({"targets", video, "-o", bundle}).code, 0);
  const auto r = call({"loss", "--pred", bundle, "--gt", bundle, "--json"});
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["total_loss"].get<double>(), 0.0);
  EXPECT_EQ(j["tubes"], 12);
  EXPECT_EQ(j["per_tube"].size(), 12u);

  const auto other = tmp("loss_other.tbnd");
  ASSERT_EQ(call({"targets", video, "-o", other, "--mask-ratio", "0.5"}).code, 0);
  EXPECT_EQ(call({"loss", "--pred", other, "--gt", bundle}).code, cli::kExitCompute);
}

TEST(Cli, GradcheckAndVerifyExitZero) {
  const auto g = call({"gradcheck", "--trials", "50", "--json"});
  EXPECT_EQ(g.code, 0);
  EXPECT_TRUE(json::parse(g.out)["passed"].get<bool>());
  EXPECT_LT(json::parse(g.out)["max_rel_error"].get<double>(), 1e-4);
  const auto v = call({"verify", "--trials", "100"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("PASS"), std::string::npos);
}

TEST(Cli, ThreadEnvironment) {
  const auto video = tmp("threads.pcv");
  ASSERT_EQ(call({"gen", "--frames", "4", "--points", "128", "-o", video}).code, 0);
  ::setenv("TUBEKIT_THREADS", "zero", 1);
  EXPECT_EQ(call({"divide", video, video}).code, cli::kExitUsage);
  ::setenv("TUBEKIT_THREADS", "3", 1);
  const auto par = call({"divide", video, video, "--json"});
  ::setenv("TUBEKIT_THREADS", "1", 1);
  const auto seq = call({"divide", video, video, "--json"});
  ::unsetenv("TUBEKIT_THREADS");
  EXPECT_EQ(par.code, 0);
  EXPECT_EQ(par.out, seq.out);
}
