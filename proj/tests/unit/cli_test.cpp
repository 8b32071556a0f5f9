#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "radiomap/map_io.hpp"
#include "test_support.hpp"

namespace radiomap::cli {
namespace {

namespace fs = std::filesystem;
using radiomap::testing::fnv1a;
using radiomap::testing::slurp;
using radiomap::testing::spit;
using radiomap::testing::TempDir;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "radiomap");
  std::ostringstream out, err;
  Run r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

const std::string kScenario = std::string(RADIOMAP_SCENARIO_DIR) + "/default.json";

// A small east-west walk across a 4x8 grid at origin 37.55,127.04.
std::string small_trace(double lat_shift = 0.0) {
  GridSpec g{{37.55, 127.04}, 10.0, 4, 8};
  SurveyTrace t{{}, "w"};
  for (int i = 0; i < 16; ++i) {
    auto p = to_geo(g, {2.5 + 5.0 * i, 15.0});
    p.lat += lat_shift;
    t.samples.push_back({double(i), p, -50.0 - 2.0 * i, "w"});
  }
  return format_trace(t);
}

std::vector<std::string> small_build_args(const fs::path& trace, const fs::path& out) {
  return {"build", trace.string(), "--grid-origin", "37.55,127.04", "--cell-size", "10",
          "--rows", "4", "--cols", "8", "-o", out.string()};
}

TEST(CliBuildTest, WritesAllArtifacts) {
  TempDir tmp("cli_build");
  spit(tmp / "walk.csv", small_trace());
  const auto r = run_cli(small_build_args(tmp / "walk.csv", tmp / "out"));
  ASSERT_EQ(r.code, kOk) << r.err;
  for (const char* f : {kMeasuredGridFile, kGridFile, kMetaFile, kHeatmapFile, kDefectFile})
    EXPECT_TRUE(fs::exists(tmp.path() / "out" / f)) << f;
  const auto grid = parse_grid_csv(slurp(tmp.path() / "out" / kGridFile));
  EXPECT_EQ(grid.spec.rows, 4u);
  EXPECT_EQ(grid.spec.cols, 8u);
  for (double v : grid.values) EXPECT_FALSE(std::isnan(v));
  const auto meta = nlohmann::json::parse(slurp(tmp.path() / "out" / kMetaFile));
  EXPECT_EQ(meta["sources"], (nlohmann::json{"walk"}));
  EXPECT_EQ(meta["samples"]["input"], 16);
  // Last stdout line is machine readable.
  const auto last = r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1);
  EXPECT_EQ(nlohmann::json::parse(last)["samples_in"], 16);
}

TEST(CliBuildTest, FlagsReachTheBuilder) {
  TempDir tmp("cli_flags");
  spit(tmp / "walk.csv", small_trace());
  auto args = small_build_args(tmp / "walk.csv", tmp / "out");
  for (const char* f : {"--no-disc-update", "--no-stuck-correction", "--alpha", "0.5", "--sigma-window", "12",
                        "--stuck-min-len", "4"})
    args.push_back(f);
  const auto r = run_cli(args);
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto meta = nlohmann::json::parse(slurp(tmp.path() / "out" / kMetaFile));
  EXPECT_EQ(meta["params"]["disc_update"], false);
  EXPECT_EQ(meta["params"]["stuck_correction"], false);
  EXPECT_EQ(meta["params"]["alpha"], 0.5);
  EXPECT_EQ(meta["params"]["sigma_window"], 12);
  EXPECT_EQ(meta["params"]["stuck_min_len"], 4);
}

TEST(CliBuildTest, EmptyTraceNamesFile) {
  TempDir tmp("cli_empty");
  spit(tmp / "blank.csv", "t_s,lat_deg,lon_deg,rssi_dbm\n");
  const auto r = run_cli(small_build_args(tmp / "blank.csv", tmp / "out"));
  EXPECT_EQ(r.code, kInputError);
  EXPECT_NE(r.err.find("blank.csv"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(tmp.path() / "out" / kGridFile));
}

TEST(CliBuildTest, MalformedRowIsInputError) {
  TempDir tmp("cli_bad");
  spit(tmp / "bad.csv", "t_s,lat_deg,lon_deg,rssi_dbm\n0,37.5501,127.0401,-60\n1,abc,127.0401,-61\n");
  const auto r = run_cli(small_build_args(tmp / "bad.csv", tmp / "out"));
  EXPECT_EQ(r.code, kInputError);
  EXPECT_NE(r.err.find("bad.csv"), std::string::npos);
}

TEST(CliBuildTest, BadAlphaAndOriginRejected) {
  TempDir tmp("cli_args");
  spit(tmp / "walk.csv", small_trace());
  auto args = small_build_args(tmp / "walk.csv", tmp / "out");
  args.push_back("--alpha");
  args.push_back("1.5");
  EXPECT_EQ(run_cli(args).code, kInputError);
  args = small_build_args(tmp / "walk.csv", tmp / "out");
  args[3] = "37.55";
  EXPECT_EQ(run_cli(args).code, kInputError);
  EXPECT_EQ(run_cli({"build"}).code, kInputError);
}

TEST(CliBuildTest, AllSamplesOffGridIsEmptyResult) {
  TempDir tmp("cli_offgrid");
  spit(tmp / "far.csv", small_trace(0.01));  // about 1.1 km north
  const auto r = run_cli(small_build_args(tmp / "far.csv", tmp / "out"));
  EXPECT_EQ(r.code, kEmptyResult) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(CliBuildTest, UnrepairableStuckIsReported) {
  TempDir tmp("cli_stuck");
  GridSpec g{{37.55, 127.04}, 10.0, 4, 8};
  SurveyTrace t{{}, "s"};
  for (int i = 0; i < 10; ++i) t.samples.push_back({double(i), to_geo(g, {5.0 + 5.0 * std::min(i, 4), 15.0}), -60.0, "s"});
  spit(tmp / "s.csv", format_trace(t));
  const auto r = run_cli(small_build_args(tmp / "s.csv", tmp / "out"));
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto line = slurp(tmp.path() / "out" / kDefectFile);
  const auto j = nlohmann::json::parse(line.substr(0, line.find('\n')));
  EXPECT_EQ(j["source"], "s");
  EXPECT_EQ(j["t_s"], 4.0);
  EXPECT_TRUE(j["t_f"].is_null());
  EXPECT_EQ(j["epochs"], 5);
  EXPECT_EQ(j["repaired"], false);
}

// Checksums of the artifacts for scenarios/default.json, frozen from a
// reviewed run. Any change to the simulator output must update these.
constexpr std::uint64_t kGoldenTrace = 532223498313904227ULL;
constexpr std::uint64_t kGoldenTruth = 575198931991671585ULL;

TEST(CliSimulateTest, DefaultScenarioMatchesGolden) {
  TempDir tmp("cli_sim");
  const auto r = run_cli({"simulate", kScenario, "-o", tmp.path().string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto trace = slurp(tmp.path() / "trace_w1.csv");
  const auto truth = slurp(tmp.path() / kTruthFile);
  EXPECT_TRUE(fs::exists(tmp.path() / "positions_w1.csv"));
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "t_s,lat_deg,lon_deg,rssi_dbm");
  EXPECT_EQ(fnv1a(trace), kGoldenTrace) << std::hex << fnv1a(trace);
  EXPECT_EQ(fnv1a(truth), kGoldenTruth) << std::hex << fnv1a(truth);
}

TEST(CliSimulateTest, SeedChangesOutput) {
  TempDir tmp("cli_seed");
  auto j = nlohmann::json::parse(slurp(kScenario));
  j["field"]["shadowing_sigma_db"] = 4.0;
  spit(tmp / "a.json", j.dump());
  j["seed"] = j["seed"].get<int>() + 1;
  spit(tmp / "b.json", j.dump());
  ASSERT_EQ(run_cli({"simulate", (tmp / "a.json").string(), "-o", (tmp / "a").string()}).code, kOk);
  ASSERT_EQ(run_cli({"simulate", (tmp / "b.json").string(), "-o", (tmp / "b").string()}).code, kOk);
  ASSERT_EQ(run_cli({"simulate", (tmp / "a.json").string(), "-o", (tmp / "c").string()}).code, kOk);
  EXPECT_NE(slurp(tmp / "a" / "trace_w1.csv"), slurp(tmp / "b" / "trace_w1.csv"));
  EXPECT_EQ(slurp(tmp / "a" / "trace_w1.csv"), slurp(tmp / "c" / "trace_w1.csv"));
}

TEST(CliSimulateTest, OverlapReportsPointer) {
  TempDir tmp("cli_overlap");
  auto j = nlohmann::json::parse(slurp(kScenario));
  j["walkers"][0]["defects"]["stuck_windows"] = {{{"start_t", 10}, {"end_t", 30}}, {{"start_t", 20}, {"end_t", 40}}};
  spit(tmp / "bad.json", j.dump());
  const auto r = run_cli({"simulate", (tmp / "bad.json").string(), "-o", (tmp / "o").string()});
  EXPECT_EQ(r.code, kInputError);
  EXPECT_NE(r.err.find("/walkers/0/defects/stuck_windows"), std::string::npos) << r.err;
}

TEST(CliEvalTest, SelfComparisonIsZero) {
  TempDir tmp("cli_eval");
  spit(tmp / "g.csv", format_grid_csv(GridSpec{{37.55, 127.04}, 10.0, 2, 2}, {-50, -60, -70, -80}));
  const auto r = run_cli({"eval", (tmp / "g.csv").string(), (tmp / "g.csv").string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("rmse_db: 0\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("argmax_match: yes"), std::string::npos);
}

TEST(CliEvalTest, DimensionMismatch) {
  TempDir tmp("cli_dims");
  spit(tmp / "a.csv", format_grid_csv(GridSpec{{37.55, 127.04}, 10.0, 2, 2}, {-50, -60, -70, -80}));
  spit(tmp / "b.csv", format_grid_csv(GridSpec{{37.55, 127.04}, 10.0, 1, 4}, {-50, -60, -70, -80}));
  const auto r = run_cli({"eval", (tmp / "a.csv").string(), (tmp / "b.csv").string()});
  EXPECT_EQ(r.code, kInputError);
  EXPECT_NE(r.err.find("dimension mismatch"), std::string::npos);
  EXPECT_EQ(run_cli({"eval", (tmp / "a.csv").string(), (tmp / "missing.csv").string()}).code, kInputError);
}

TEST(CliTest, NoSubcommandIsInputError) { EXPECT_EQ(run_cli({}).code, kInputError); }

}  // namespace
}  // namespace radiomap::cli
