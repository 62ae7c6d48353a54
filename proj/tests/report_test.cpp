#include "latfit/report.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "latfit/error.hpp"

namespace latfit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an exception";
  return ErrorCode::kInvalidArgument;
}

std::string data_file(const std::string& name) { return std::string(LATFIT_DATA_DIR) + "/" + name; }

PointSet ingest_text(const std::string& s) {
  std::istringstream in(s);
  return ingest(in);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LATFIT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Matrix matrix_from_json(const json& rows) {
  std::vector<std::vector<double>> v = rows.get<std::vector<std::vector<double>>>();
  return Matrix::from_rows(v);
}

TEST(Ingest, OneValuePerLine) {
  const PointSet ps = ingest_file(data_file("six_reals.txt"));
  EXPECT_EQ(ps.size(), 6u);
  EXPECT_EQ(ps.dim(), 1u);
  EXPECT_DOUBLE_EQ(ps.point(4)[0], 4.295116);
}

TEST(Ingest, TwoDimensionalRows) {
  const PointSet ps = ingest_file(data_file("log_points.txt"));
  EXPECT_EQ(ps.size(), 6u);
  EXPECT_EQ(ps.dim(), 2u);
  EXPECT_DOUBLE_EQ(ps.point(1)[1], 103.2838586);
}

TEST(Ingest, SeparatorsCommentsAndExponents) {
  const PointSet ps = ingest_text("# header\n\n1, 2\n  # indented comment\n3\t4\n5 ,6\n7e-1,+8E1\n\r\n");
  EXPECT_EQ(ps.size(), 4u);
  EXPECT_DOUBLE_EQ(ps.point(3)[0], 0.7);
  EXPECT_DOUBLE_EQ(ps.point(3)[1], 80.0);
}

TEST(Ingest, TooFewPointsIsDegenerate) {
  EXPECT_EQ(code_of([] { ingest_text("0 0\n1 0\n0 1\n"); }), ErrorCode::kDegenerateInput);
  EXPECT_EQ(code_of([] { ingest_text("# nothing\n"); }), ErrorCode::kDegenerateInput);
}

TEST(Ingest, BadNumberReportsLine) {
  try {
    ingest_text("1\n2\nabc\n4\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { ingest_text("1\n2x\n3\n4\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { ingest_file("/nonexistent/points.txt"); }), ErrorCode::kParseError);
}

TEST(Ingest, RaggedRows) {
  EXPECT_EQ(code_of([] { ingest_text("1 2\n3 4\n5\n6 7\n"); }), ErrorCode::kDimensionMismatch);
}

TEST(Config, SweepParsing) {
  const auto s = parse_sweep("2:10");
  ASSERT_EQ(s.size(), 9u);
  EXPECT_DOUBLE_EQ(s.front(), 1e-2);
  EXPECT_DOUBLE_EQ(s.back(), 1e-10);
  EXPECT_EQ(parse_sweep("-2:-10"), s);
  EXPECT_EQ(parse_sweep("3:3").size(), 1u);
  EXPECT_THROW(parse_sweep(""), Error);
  EXPECT_THROW(parse_sweep("2"), Error);
  EXPECT_THROW(parse_sweep("0:4"), Error);
  EXPECT_THROW(parse_sweep("a:b"), Error);
}

TEST(Config, Validation) {
  RunConfig cfg;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.eps = {1e-3};
  EXPECT_NO_THROW(cfg.validate());
  cfg.digits = 9;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.digits = 20;
  cfg.eps = {1.0};
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_EQ(parse_mode("1d"), Mode::kOneD);
  EXPECT_EQ(parse_mode("axis"), Mode::kAxis);
  EXPECT_THROW(parse_mode("2d"), Error);
}

TEST(Run, OneDimensionalJson) {
  RunConfig cfg;
  cfg.mode = Mode::kOneD;
  cfg.eps = {1e-3};
  cfg.refine = true;
  const auto result = run(cfg, ingest_file(data_file("six_reals.txt")));
  EXPECT_EQ(exit_status(result), 0);
  const json j = json::parse(to_json(result));
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["mode"], "1d");
  const auto& e = j["entries"][0];
  EXPECT_EQ(e["q"], 14);
  EXPECT_NEAR(e["norm_max"].get<double>(), 0.2316, 5e-5);
  EXPECT_NEAR(e["certificates"]["thm22_bound"].get<double>(), 2.3784, 5e-5);
  EXPECT_TRUE(e["certificates"]["thm24"]["bound_ok"].get<bool>());
  EXPECT_TRUE(e["certificates"]["thm25"].contains("d_threshold"));
  EXPECT_TRUE(e["refinement"]["after"].contains("norm_l2"));
  EXPECT_EQ(e["coefficients"][5][0], 14);
}

TEST(Run, JsonRoundTripsThroughScore) {
  RunConfig cfg;
  cfg.eps = parse_sweep("2:6");
  const PointSet ps = ingest_file(data_file("permuted_points.txt"));
  const json j = json::parse(to_json(run(cfg, ps)));
  const PointSet again(matrix_from_json(j["points"]));
  for (const auto& e : j["entries"]) {
    ASSERT_TRUE(e["ok"].get<bool>());
    const AffineLattice lat(e["origin"].get<std::vector<double>>(), matrix_from_json(e["basis"]));
    const auto r = score(again, lat);
    EXPECT_NEAR(r.norm_max, e["norm_max"].get<double>(), 1e-9);
    EXPECT_NEAR(r.norm_l2, e["norm_l2"].get<double>(), 1e-9);
  }
}

TEST(Run, SweepAtTwentyDigitsHasNineRows) {
  RunConfig cfg;
  cfg.eps = parse_sweep("2:10");
  cfg.digits = 20;
  const auto result = run(cfg, ingest_file(data_file("permuted_points.txt")));
  ASSERT_EQ(result.entries.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_TRUE(result.entries[i].ok());
    EXPECT_DOUBLE_EQ(result.entries[i].eps, cfg.eps[i]);
  }
  const std::string text = to_text(result);
  EXPECT_NE(text.find("1e-10"), std::string::npos);
  EXPECT_NE(text.find("2.1818"), std::string::npos);
}

TEST(Run, AxisModeAndDimensionCheck) {
  RunConfig cfg;
  cfg.mode = Mode::kAxis;
  cfg.eps = {1e-3};
  const auto r = run(cfg, ingest_file(data_file("paired_points.txt")));
  ASSERT_TRUE(r.entries[0].ok());
  EXPECT_NEAR(r.entries[0].report->norm_max, 9.3622, 1e-3);
  EXPECT_EQ(r.entries[0].q_values, (std::vector<std::int64_t>{14, 150}));
  cfg.mode = Mode::kOneD;
  EXPECT_THROW(run(cfg, ingest_file(data_file("paired_points.txt"))), Error);
}

TEST(Run, FailedEntriesAreReported) {
  RunConfig cfg;
  cfg.eps = {1e-14};
  const auto r = run(cfg, ingest_file(data_file("permuted_points.txt")));
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_FALSE(r.entries[0].ok());
  EXPECT_EQ(exit_status(r), 1);
  const json j = json::parse(to_json(r));
  EXPECT_FALSE(j["entries"][0]["ok"].get<bool>());
  EXPECT_TRUE(j["entries"][0].contains("error"));
}

TEST(Run, AlternativeQBlocks) {
  RunConfig cfg;
  cfg.eps = {1e-3};
  cfg.alternatives = 3;
  const auto r = run(cfg, ingest_file(data_file("permuted_points.txt")));
  ASSERT_EQ(r.entries[0].alternatives.size(), 3u);
  EXPECT_EQ(r.entries[0].alternatives.front().Q, *r.entries[0].q_block);
  EXPECT_NEAR(r.entries[0].alternatives.front().report.norm_l2, r.entries[0].report->norm_l2, 1e-12);
  const json j = json::parse(to_json(r));
  EXPECT_EQ(j["entries"][0]["alternatives"].size(), 3u);
  cfg.alternatives = 11;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Cli, ExitStatus) {
  EXPECT_EQ(run_cli("--mode 1d --eps 1e-3 " + data_file("six_reals.txt")), 0);
  EXPECT_EQ(run_cli("--eps-sweep '' " + data_file("permuted_points.txt")), 2);
  EXPECT_EQ(run_cli("--eps 2 " + data_file("permuted_points.txt")), 2);
  EXPECT_EQ(run_cli("--mode 3d " + data_file("permuted_points.txt")), 2);
  EXPECT_EQ(run_cli("--eps 1e-3 --eps-sweep 2:4 " + data_file("permuted_points.txt")), 2);
  EXPECT_EQ(run_cli("--eps 1e-14 " + data_file("permuted_points.txt")), 1);
  EXPECT_EQ(run_cli("--alternatives 11 " + data_file("permuted_points.txt")), 2);
  EXPECT_EQ(run_cli("--alternatives 4 " + data_file("permuted_points.txt")), 0);

  const fs::path tmp = fs::temp_directory_path() / "latfit_three_points.txt";
  std::ofstream(tmp) << "0 0\n1 0\n0 1\n";
  EXPECT_EQ(run_cli(tmp.string()), 1);
  fs::remove(tmp);
}

TEST(Cli, WritesJsonToOutputFile) {
  const fs::path out = fs::temp_directory_path() / "latfit_report.json";
  ASSERT_EQ(run_cli("--format json --refine --output " + out.string() + " " +
                    data_file("permuted_points.txt")),
            0);
  std::ifstream f(out);
  const json j = json::parse(f);
  EXPECT_EQ(j["mode"], "general");
  EXPECT_NEAR(j["entries"][0]["refinement"]["after"]["norm_l2"].get<double>(), 0.8302, 5e-4);
  fs::remove(out);
}

TEST(Cli, ReadsStdin) {
  const std::string cmd = "printf '0\\n1.7320508\\n2.2360680\\n2.6457513\\n3.3166248\\n3.6055513\\n' | " +
                          std::string(LATFIT_CLI_PATH) + " --mode 1d - > /dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
}

}  // namespace
}  // namespace latfit
