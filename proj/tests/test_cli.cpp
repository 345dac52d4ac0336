#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "isostrata/commands.hpp"
#include "isostrata/errors.hpp"

using namespace isostrata;

namespace {

const char* kSo11 = R"({
  "name": "so11",
  "dim_v": 2,
  "k_basis": [],
  "p_basis": [[[0, 0.7071067811865476], [0.7071067811865476, 0]]],
  "tolerances": {"flow_tol": 1e-10}
})";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, BuiltinReference) {
  const RunConfig cfg = parse_config(R"({"builtin": "so22", "tolerances": {"seed": 7}})");
  EXPECT_EQ(cfg.description.dim_v, 4);
  EXPECT_EQ(cfg.options.seed, 7u);
}

TEST(Config, ExplicitGroup) {
  const RunConfig cfg = parse_config(kSo11);
  EXPECT_EQ(cfg.description.dim_v, 2);
  EXPECT_EQ(cfg.description.p_basis.size(), 1u);
  EXPECT_DOUBLE_EQ(cfg.options.flow_tol, 1e-10);
}

TEST(Config, MalformedRowNamesField) {
  const std::string text = "{\n  \"dim_v\": 2,\n  \"k_basis\": [],\n  \"p_basis\": [[[0, 1], [1]]]\n}";
  try {
    parse_config(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "p_basis[0][1]");
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(Config, NonNumericEntry) {
  try {
    parse_config(R"({"dim_v": 1, "k_basis": [], "p_basis": [[["x"]]]})");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "p_basis[0][0][0]");
  }
}

TEST(Config, UnknownTolerance) {
  try {
    parse_config(R"({"builtin": "so11", "tolerances": {"flow_tolerance": 1e-3}})");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "tolerances.flow_tolerance");
  }
}

TEST(Config, SyntaxErrorHasLine) {
  try {
    parse_config("{\n  \"dim_v\": 2,\n  oops\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Config, InvalidGroupIsRejected) {
  // A symmetric matrix in k.
  EXPECT_THROW(parse_config(R"({"dim_v": 2, "k_basis": [[[1, 0], [0, 1]]], "p_basis": []})"), StructureViolation);
}

TEST(Config, UnknownBuiltin) { EXPECT_THROW(parse_config(R"({"builtin": "so33"})"), ParseError); }

TEST(Point, Parsing) {
  EXPECT_EQ(parse_point("origin", 3), Vec::Zero(3));
  const Vec v = parse_point("1, -2.5,3e-1", 3);
  EXPECT_DOUBLE_EQ(v(1), -2.5);
  EXPECT_DOUBLE_EQ(v(2), 0.3);
  EXPECT_THROW(parse_point("1,2", 3), ParseError);
  EXPECT_THROW(parse_point("1,a,2", 3), ParseError);
}

TEST(Commands, ExitCodes) {
  const RunConfig cfg = builtin_config("so11");
  CommandParams p;
  p.command = "validate";
  EXPECT_EQ(run_command(cfg, p).exit_code, 0);

  p.command = "flow";
  EXPECT_EQ(run_command(cfg, p).exit_code, 2);
  p.at = parse_point("2,1", 2);
  const CommandResult flow = run_command(cfg, p);
  EXPECT_EQ(flow.exit_code, 0);
  EXPECT_TRUE(flow.report["checks"]["reached_minimal"].get<bool>());

  RunConfig capped = cfg;
  capped.options.max_iter = 1;
  EXPECT_EQ(run_command(capped, p).exit_code, 1);
}

TEST(Commands, StratifyReportAndCsv) {
  const RunConfig cfg = builtin_config("sl2r-adjoint");
  CommandParams p;
  p.command = "stratify";
  p.samples = 200;
  const CommandResult r = run_command(cfg, p);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.report["result"]["open_count"].get<int>(), 2);
  std::istringstream csv(r.csv);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "x0,x1,x2,label,f_limit,residual,flag");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 200);
}

TEST(Commands, SplitAtOrigin) {
  CommandParams p;
  p.command = "split";
  p.at = Vec::Zero(4);
  RunConfig cfg = builtin_config("so22");
  cfg.options.slice_samples = 300;
  const CommandResult r = run_command(cfg, p);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.report["result"]["splitting_number"].get<int>(), 2);
}

TEST(Commands, OutputsAreDeterministic) {
  const RunConfig cfg = builtin_config("so22");
  CommandParams p;
  p.command = "stratify";
  p.samples = 100;
  const auto dir = std::filesystem::temp_directory_path() / "isostrata_test_cli";
  std::filesystem::remove_all(dir);
  write_outputs(run_command(cfg, p), (dir / "a").string());
  write_outputs(run_command(cfg, p), (dir / "b").string());
  for (const char* f : {"report.json", "samples.csv"}) {
    const std::string a = slurp(dir / "a" / f);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(dir / "b" / f)) << f;
  }
  std::filesystem::remove_all(dir);
}
