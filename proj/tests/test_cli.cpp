// SPDX-FileCopyrightText: Copyright (c) 2026 navlim contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "navlim/cli.hpp"

using namespace navlim;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("navlim_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

fs::path write_json(const fs::path& dir, const std::string& name, const std::string& body) {
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

const std::string kDemo = std::string(NAVLIM_SCENARIO_DIR) + "/demo_two_agents.json";

/// Restores NAVLIM_SEED on scope exit.
class SeedEnv {
 public:
  explicit SeedEnv(const char* value) {
    if (const char* old = std::getenv("NAVLIM_SEED")) saved_ = old;
    if (value) {
      setenv("NAVLIM_SEED", value, 1);
    } else {
      unsetenv("NAVLIM_SEED");
    }
  }
  ~SeedEnv() {
    if (saved_) {
      setenv("NAVLIM_SEED", saved_->c_str(), 1);
    } else {
      unsetenv("NAVLIM_SEED");
    }
  }
  SeedEnv(const SeedEnv&) = delete;
  SeedEnv& operator=(const SeedEnv&) = delete;

 private:
  std::optional<std::string> saved_;
};

}  // namespace

TEST(ParseRange, FormsAndErrors) {
  EXPECT_EQ(cli::parse_range("3"), (std::vector<std::size_t>{3}));
  EXPECT_EQ(cli::parse_range("2..4"), (std::vector<std::size_t>{2, 3, 4}));
  EXPECT_THROW(cli::parse_range("4..2"), ConfigError);
  EXPECT_THROW(cli::parse_range("x"), ConfigError);
  EXPECT_THROW(cli::parse_range("1..y"), ConfigError);
  EXPECT_THROW(cli::parse_range("1.5"), ConfigError);
  EXPECT_EQ(cli::parse_modes("joint,spatial"), (std::vector<CoopMode>{CoopMode::Joint, CoopMode::SpatialOnly}));
  EXPECT_THROW(cli::parse_modes("joint,joint"), ConfigError);
}

TEST(SweepTime, ProducesOneRowPerModeAndStep) {
  SeedEnv env(nullptr);
  const fs::path dir = scratch("sweep_time");
  const Result r = run({"sweep-time", "--trials", "200", "--steps", "1..20", "--seed", "7", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(slurp(dir / "sweep_time.csv"));
  ASSERT_EQ(rows.size(), 61U);
  EXPECT_EQ(rows[0], kTableHeader);
  EXPECT_EQ(rows[1].rfind("spatial,1,", 0), 0U);
  EXPECT_EQ(rows[60].rfind("joint,20,", 0), 0U);
  EXPECT_FALSE(fs::exists(dir / "sweep_time.svg"));
}

TEST(SweepTime, RejectsBadArguments) {
  const fs::path dir = scratch("bad_args");
  const Result zero = run({"sweep-time", "--trials", "0", "--out", dir.string()});
  EXPECT_EQ(zero.code, 2);
  const Result unknown = run({"sweep-time", "--bogus", "1"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos) << unknown.err;
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"sweep-time", "--steps", "3..1", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"sweep-time", "--modes", "fast", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"sweep-time", "--config", kDemo, "--out", dir.string()}).code, 2);  // fixed positions
  // a config that gives counts is accepted
  const fs::path cfg = write_json(dir, "counts.json", R"({"agents": 2, "anchors": 3, "T": 3, "seed": 4})");
  const Result ok = run({"sweep-time", "--config", cfg.string(), "--trials", "3", "--steps", "1..3", "--out", dir.string()});
  EXPECT_EQ(ok.code, 0) << ok.err;
}

TEST(SweepNodes, ProducesOneRowPerModeAndCount) {
  SeedEnv env(nullptr);
  const fs::path dir = scratch("sweep_nodes");
  const Result r = run({"sweep-nodes", "--agents", "2..12", "--trials", "20", "--out", dir.string(), "--emit", "both"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(slurp(dir / "sweep_nodes.csv"));
  ASSERT_EQ(rows.size(), 34U);
  EXPECT_EQ(rows[33].rfind("joint,12,", 0), 0U);
  EXPECT_NE(slurp(dir / "sweep_nodes.svg").find("<svg"), std::string::npos);
  EXPECT_EQ(run({"sweep-nodes", "--nope"}).code, 2);
  EXPECT_EQ(run({"sweep-nodes", "--steps", "2..3", "--out", dir.string()}).code, 2);
}

TEST(Determinism, IdenticalInvocationsGiveIdenticalBytes) {
  SeedEnv env(nullptr);
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::vector<std::string> base{"sweep-time", "--trials", "15", "--steps", "1..6", "--seed", "3"};
  auto args_a = base, args_b = base;
  args_a.insert(args_a.end(), {"--out", a.string()});
  args_b.insert(args_b.end(), {"--out", b.string(), "--jobs", "2"});
  ASSERT_EQ(run(args_a).code, 0);
  ASSERT_EQ(run(args_b).code, 0);
  EXPECT_EQ(slurp(a / "sweep_time.csv"), slurp(b / "sweep_time.csv"));

  ASSERT_EQ(run({"ellipse", "--scenario", kDemo, "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"ellipse", "--scenario", kDemo, "--out", b.string()}).code, 0);
  EXPECT_EQ(slurp(a / "ellipse.csv"), slurp(b / "ellipse.csv"));
}

TEST(Determinism, SvgDoesNotAlterCsv) {
  SeedEnv env(nullptr);
  const fs::path a = scratch("svg_a"), b = scratch("svg_b");
  ASSERT_EQ(run({"sweep-time", "--trials", "10", "--steps", "1..4", "--out", a.string()}).code, 0);
  ASSERT_EQ(run({"sweep-time", "--trials", "10", "--steps", "1..4", "--out", b.string(), "--emit", "both"}).code, 0);
  EXPECT_EQ(slurp(a / "sweep_time.csv"), slurp(b / "sweep_time.csv"));
  EXPECT_TRUE(fs::exists(b / "sweep_time.svg"));

  const fs::path c = scratch("svg_c"), d = scratch("svg_d");
  ASSERT_EQ(run({"ellipse", "--scenario", kDemo, "--out", c.string()}).code, 0);
  ASSERT_EQ(run({"ellipse", "--scenario", kDemo, "--out", d.string(), "--emit", "both"}).code, 0);
  EXPECT_EQ(slurp(c / "ellipse.csv"), slurp(d / "ellipse.csv"));
  EXPECT_NE(slurp(d / "ellipse.svg").find("<ellipse"), std::string::npos);
}

TEST(Seed, EnvironmentIsTheDefaultAndTheFlagWins) {
  const fs::path flag7 = scratch("seed_flag7"), env7 = scratch("seed_env7"), both = scratch("seed_both");
  const std::vector<std::string> base{"sweep-time", "--trials", "8", "--steps", "1..3"};
  {
    SeedEnv env(nullptr);
    auto args = base;
    args.insert(args.end(), {"--seed", "7", "--out", flag7.string()});
    ASSERT_EQ(run(args).code, 0);
  }
  {
    SeedEnv env("7");
    auto args = base;
    args.insert(args.end(), {"--out", env7.string()});
    ASSERT_EQ(run(args).code, 0);
    auto override_args = base;
    override_args.insert(override_args.end(), {"--seed", "8", "--out", both.string()});
    ASSERT_EQ(run(override_args).code, 0);
  }
  EXPECT_EQ(slurp(flag7 / "sweep_time.csv"), slurp(env7 / "sweep_time.csv"));
  EXPECT_NE(slurp(flag7 / "sweep_time.csv"), slurp(both / "sweep_time.csv"));
  {
    SeedEnv env("seven");
    EXPECT_EQ(run({"sweep-time", "--trials", "2", "--steps", "1", "--out", both.string()}).code, 2);
  }
}

TEST(Verify, ListsIdentitiesWithoutRunning) {
  const Result r = run({"verify", "--list"});
  ASSERT_EQ(r.code, 0);
  const auto names = lines(r.out);
  ASSERT_EQ(names.size(), verify::identities().size());
  for (std::size_t i = 0; i < names.size(); ++i) EXPECT_EQ(names[i], verify::identities()[i].name);
  EXPECT_EQ(r.out.find("PASS"), std::string::npos);
}

TEST(Verify, AllIdentitiesPass) {
  const Result r = run({"verify", "--seed", "42", "--cases", "1000"});
  EXPECT_EQ(r.code, 0) << r.out;
  const auto out = lines(r.out);
  ASSERT_EQ(out.size(), verify::identities().size());
  for (const auto& l : out) EXPECT_EQ(l.rfind("PASS ", 0), 0U) << l;
}

TEST(Verify, CorruptedToleranceFailsAndNamesTheSeed) {
  const Result r = run({"verify", "--seed", "5", "--cases", "3", "--tolerance-override", "-1"});
  EXPECT_EQ(r.code, 1);
  const std::string first = verify::identities().front().name;
  EXPECT_NE(r.out.find("FAIL " + first), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("seed=5"), std::string::npos);
  EXPECT_NE(r.out.find("verify --seed 5 --cases 3"), std::string::npos);
}

TEST(Ellipse, DemoScenarioShape) {
  for (const char* recursion : {"distributed", "centralized"}) {
    const fs::path dir = scratch(std::string("ellipse_") + recursion);
    const Result r = run({"ellipse", "--scenario", kDemo, "--out", dir.string(), "--recursion", recursion});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(slurp(dir / "ellipse.csv"));
    ASSERT_EQ(rows.size(), 9U);
    EXPECT_EQ(rows[0], "agent,step,stage,semi_major_m_inv,semi_minor_m_inv,orientation_rad,degenerate");
    EXPECT_EQ(rows[1].rfind("1,1,carry_over,", 0), 0U);
    EXPECT_EQ(rows[2].rfind("1,1,after_spatial,", 0), 0U);
    EXPECT_EQ(rows[8].rfind("2,2,after_spatial,", 0), 0U);
    // nothing is carried into the first step
    EXPECT_NE(rows[1].find(",true"), std::string::npos);
    EXPECT_NE(rows[4].find(",false"), std::string::npos);
  }
}

TEST(Ellipse, IsotropicAndRankOneCases) {
  const fs::path dir = scratch("ellipse_cases");
  // four anchors on the axes around a static agent: equal information in every direction
  const fs::path iso = write_json(dir, "iso.json", R"({
    "anchors": [[15, 10], [5, 10], [10, 15], [10, 5]],
    "agents": [[[10, 10]]],
    "intensities": {"lambda_kj": 3}
  })");
  ASSERT_EQ(run({"ellipse", "--scenario", iso.string(), "--out", dir.string()}).code, 0);
  auto rows = lines(slurp(dir / "ellipse.csv"));
  ASSERT_EQ(rows.size(), 3U);
  const std::vector<cli::EllipseRow> parsed = cli::ellipse_rows(load_scenario_file(iso).realize(), false);
  EXPECT_NEAR(parsed[1].semi_major, std::sqrt(6.0), 1e-12);
  EXPECT_NEAR(parsed[1].semi_minor, parsed[1].semi_major, 1e-12);
  EXPECT_FALSE(parsed[1].degenerate);
  EXPECT_NE(rows[2].find(",false"), std::string::npos);

  const fs::path one = write_json(dir, "one.json", R"({"anchors": [[0, 0]], "agents": [[[3, 4]]]})");
  ASSERT_EQ(run({"ellipse", "--scenario", one.string(), "--out", dir.string()}).code, 0);
  rows = lines(slurp(dir / "ellipse.csv"));
  ASSERT_EQ(rows.size(), 3U);
  EXPECT_EQ(rows[2].substr(rows[2].size() - 5), ",true");
  const std::vector<cli::EllipseRow> r1 = cli::ellipse_rows(load_scenario_file(one).realize(), false);
  EXPECT_NEAR(r1[1].semi_major, std::sqrt(5.0), 1e-12);
  EXPECT_EQ(r1[1].semi_minor, 0.0);
}

TEST(Ellipse, MalformedScenarioIsAConfigError) {
  const fs::path dir = scratch("ellipse_bad");
  EXPECT_EQ(run({"ellipse", "--scenario", write_json(dir, "a.json", "{ not json").string()}).code, 2);
  EXPECT_EQ(run({"ellipse", "--scenario", write_json(dir, "b.json", R"({"agent": 2})").string()}).code, 2);
  EXPECT_EQ(run({"ellipse", "--scenario", (dir / "missing.json").string()}).code, 2);
  EXPECT_EQ(run({"ellipse"}).code, 2);
}
