#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include <hypodist/io.hpp>

#include "temp_dir.hpp"

using hypodist::testing::TempDir;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + HYPODIST_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

json strip_timing(json j) {
  if (j.is_object()) {
    json out = json::object();
    for (auto& [k, v] : j.items())
      if (k.find("seconds") == std::string::npos) out[k] = strip_timing(v);
    return out;
  }
  if (j.is_array())
    for (auto& v : j) v = strip_timing(v);
  return j;
}

const char* kTwoUniformsSmall = R"({
  "schema": "hypodist-config/1",
  "domain": {"lower": [0, 0], "upper": [3, 3]},
  "grid": {"cells_per_axis": 8},
  "F0": {"type": "uniform_box", "lower": [0, 0], "upper": [1, 1]},
  "G0": {"type": "uniform_box", "lower": [2, 2], "upper": [3, 3]},
  "deltas": [0.7, 0.1]
})";

} // namespace

TEST(Cli, HelpAndBadUsage) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("estimate"), 1); // --config missing
  EXPECT_EQ(run("frobnicate"), 1);
}

TEST(Cli, GenerateTwoUniforms) {
  TempDir dir;
  ASSERT_EQ(run("generate two-uniforms --quiet --out " + q(dir.path())), 0);
  const json cfg = json::parse(slurp(dir / "two_uniforms.json"));
  EXPECT_EQ(cfg.at("domain").at("upper"), json({3.0, 3.0}));
  EXPECT_EQ(cfg.at("F0").at("upper"), json({1.0, 1.0}));
  EXPECT_EQ(cfg.at("G0").at("lower"), json({2.0, 2.0}));
  const json study = json::parse(slurp(dir / "two_uniforms_study.json"));
  EXPECT_EQ(study.at("study").at("levels"), json({10, 20, 40}));
}

TEST(Cli, GenerateUuvDeterministic) {
  TempDir a, b;
  ASSERT_EQ(run("generate uuv-synthetic --quiet --seed 7 --out " + q(a.path())), 0);
  ASSERT_EQ(run("generate uuv-synthetic --quiet --seed 7 --out " + q(b.path())), 0);
  for (const char* f : {"inertial_samples.csv", "ping_samples.csv", "uuv.json"}) {
    const std::string x = slurp(a / f);
    EXPECT_FALSE(x.empty()) << f;
    EXPECT_EQ(x, slurp(b / f)) << f;
  }
  EXPECT_EQ(hypodist::io::load_samples(a / "inertial_samples.csv").size(), 300u);
}

TEST(Cli, GenerateErrors) {
  TempDir dir;
  EXPECT_EQ(run("generate gaussian-blobs --out " + q(dir.path())), 1);
  EXPECT_EQ(run("generate two-uniforms"), 1); // --out missing
  spit(dir / "file", "x");
  EXPECT_EQ(run("generate two-uniforms --out " + q(dir / "file" / "sub")), 1);
  if (::geteuid() != 0) {
    fs::create_directories(dir / "ro");
    fs::permissions(dir / "ro", fs::perms::owner_read | fs::perms::owner_exec);
    EXPECT_EQ(run("generate two-uniforms --out " + q(dir / "ro")), 1);
    fs::permissions(dir / "ro", fs::perms::owner_all);
  }
}

TEST(Cli, MalformedConfig) {
  TempDir dir;
  spit(dir / "bad.json", "{\n  \"schema\": \"hypodist-config/1\",\n  \"delta\": ,\n}\n");
  EXPECT_EQ(run("estimate --config " + q(dir / "bad.json") + " --out " + q(dir / "o")), 1);
  spit(dir / "unknown.json", std::string(kTwoUniformsSmall).replace(1, 0, "\n  \"bogus\": 1,"));
  EXPECT_EQ(run("estimate --config " + q(dir / "unknown.json") + " --out " + q(dir / "o")), 1);
  EXPECT_EQ(run("estimate --config " + q(dir / "missing.json")), 1);
}

TEST(Cli, MalformedConfigMessageHasLine) {
  TempDir dir;
  spit(dir / "bad.json", "{\n  \"schema\": \"hypodist-config/1\",\n  \"delta\": ,\n}\n");
  const std::string cmd = std::string("\"") + HYPODIST_CLI_PATH + "\" estimate --config " + q(dir / "bad.json") +
                          " --out " + q(dir / "o") + " 2>" + q(dir / "err.txt");
  EXPECT_NE(std::system(cmd.c_str()), 0);
  EXPECT_NE(slurp(dir / "err.txt").find("bad.json:3:"), std::string::npos) << slurp(dir / "err.txt");
}

TEST(Cli, EstimateWritesOutputs) {
  TempDir dir;
  spit(dir / "cfg.json", kTwoUniformsSmall);
  ASSERT_EQ(run("estimate --quiet --config " + q(dir / "cfg.json") + " --out " + q(dir / "out")), 0);
  const json result = json::parse(slurp(dir / "out" / "result.json"));
  ASSERT_EQ(result.at("runs").size(), 2u);
  const json& r0 = result.at("runs").at(0);
  EXPECT_EQ(r0.at("delta"), 0.7);
  EXPECT_GT(r0.at("eta").get<double>(), 0.0);
  EXPECT_LT(r0.at("eta").get<double>(), 1.0);
  EXPECT_LE(r0.at("slack").get<double>(), 1e-8);
  EXPECT_TRUE(r0.contains("history"));
  EXPECT_TRUE(r0.contains("distribution_error_pct"));
  EXPECT_GE(result.at("runs").at(1).at("eta").get<double>(), r0.at("eta").get<double>());
  for (const char* f : {"solution_0.csv", "solution_0.meta.json", "surface_0.dat", "cell_mass_0.dat", "solution_1.csv"})
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;

  // reload the solution and compare with the reported expected value
  const auto F = hypodist::io::load_grid_function(dir / "out" / "solution_0.csv");
  const auto ev = hypodist::expected_value(F);
  const auto reported = r0.at("expected_value").get<std::vector<double>>();
  EXPECT_EQ(ev, reported);

  // same config, same result modulo timings
  ASSERT_EQ(run("estimate --quiet --config " + q(dir / "cfg.json") + " --out " + q(dir / "out2")), 0);
  EXPECT_EQ(strip_timing(result), strip_timing(json::parse(slurp(dir / "out2" / "result.json"))));
  EXPECT_EQ(slurp(dir / "out" / "solution_0.csv"), slurp(dir / "out2" / "solution_0.csv"));
}

TEST(Cli, EstimateExitCodes) {
  TempDir dir;
  std::string infeasible = kTwoUniformsSmall;
  infeasible.replace(infeasible.find("\"deltas\""), 0, "\"shape\": {\"bounded_growth\": 0},\n  ");
  spit(dir / "inf.json", infeasible);
  EXPECT_EQ(run("estimate --config " + q(dir / "inf.json") + " --out " + q(dir / "o")), 2);
  std::string limited = kTwoUniformsSmall;
  limited.replace(limited.find("\"deltas\""), 0, "\"max_lp_iterations\": 1,\n  ");
  spit(dir / "lim.json", limited);
  EXPECT_EQ(run("estimate --config " + q(dir / "lim.json") + " --out " + q(dir / "o")), 3);
}

TEST(Cli, DistanceIdenticalSourcesZero) {
  TempDir dir;
  spit(dir / "cfg.json", R"({
  "schema": "hypodist-config/1",
  "domain": {"lower": [0, 0], "upper": [1, 1]},
  "grid": {"cells_per_axis": 6},
  "F0": {"type": "dirac", "at": [0.3, 0.6]},
  "G0": {"type": "dirac", "at": [0.3, 0.6]},
  "distance": {"rho_values": [0.5, 1.0], "oracle_samples": 11, "quad_points": 8}
})");
  ASSERT_EQ(run("distance --quiet --config " + q(dir / "cfg.json") + " --out " + q(dir / "o")), 0);
  const json d = json::parse(slurp(dir / "o" / "distance.json"));
  for (const auto& row : d.at("per_rho")) {
    EXPECT_EQ(row.at("hat"), 0.0);
    EXPECT_EQ(row.at("eta_minus"), 0.0);
    EXPECT_EQ(row.at("oracle"), 0.0);
  }
  EXPECT_EQ(d.at("hypo_distance").at("value"), 0.0);
  EXPECT_EQ(d.at("hypo_distance").at("upper_bound"), 0.0);
}

TEST(Cli, DistanceDiracPair) {
  TempDir dir;
  spit(dir / "cfg.json", R"({
  "schema": "hypodist-config/1",
  "domain": {"lower": [0], "upper": [1]},
  "grid": {"cells_per_axis": 400},
  "F0": {"type": "dirac", "at": [1]},
  "G0": {"type": "dirac", "at": [0.5]},
  "distance": {"rho_values": [0.2, 0.4, 0.8], "oracle_samples": 401}
})");
  ASSERT_EQ(run("distance --quiet --config " + q(dir / "cfg.json") + " --out " + q(dir / "o")), 0);
  const json d = json::parse(slurp(dir / "o" / "distance.json"));
  const double expected[] = {0.0, 0.3, 0.5};
  for (std::size_t i = 0; i < 3; ++i) {
    const json& row = d.at("per_rho").at(i);
    EXPECT_NEAR(row.at("oracle").get<double>(), expected[i], 2.0 * row.at("oracle_slack").get<double>() + 2.0 / 400.0);
  }
}

TEST(Cli, DistanceDisjointUniformsSaturate) {
  TempDir dir;
  spit(dir / "cfg.json", R"({
  "schema": "hypodist-config/1",
  "domain": {"lower": [0, 0], "upper": [3, 3]},
  "grid": {"cells_per_axis": 12},
  "F0": {"type": "uniform_box", "lower": [0, 0], "upper": [1, 1]},
  "G0": {"type": "uniform_box", "lower": [2, 2], "upper": [3, 3]},
  "distance": {"rho_values": [1.0, 2.0, 4.0], "oracle_samples": 13, "quad_points": 16}
})");
  ASSERT_EQ(run("distance --quiet --config " + q(dir / "cfg.json") + " --out " + q(dir / "o")), 0);
  const json d = json::parse(slurp(dir / "o" / "distance.json"));
  for (const auto& row : d.at("per_rho")) {
    EXPECT_GE(row.at("hat").get<double>(), 0.9) << row.dump();
    EXPECT_LE(row.at("hat").get<double>(), 1.0 + 1e-8);
  }
}

TEST(Cli, StudyNeedsTwoLevels) {
  TempDir dir;
  std::string cfg = kTwoUniformsSmall;
  cfg.replace(cfg.find("\"deltas\": [0.7, 0.1]"), 20, "\"delta\": 0.7, \"study\": {\"levels\": [8]}");
  spit(dir / "one.json", cfg);
  EXPECT_EQ(run("study --config " + q(dir / "one.json") + " --out " + q(dir / "o")), 1);
}

TEST(Cli, StudyWritesTable) {
  TempDir dir;
  std::string cfg = kTwoUniformsSmall;
  cfg.replace(cfg.find("\"deltas\": [0.7, 0.1]"), 20, "\"delta\": 0.7, \"study\": {\"levels\": [4, 8]}");
  spit(dir / "s.json", cfg);
  ASSERT_EQ(run("study --quiet --config " + q(dir / "s.json") + " --out " + q(dir / "o")), 0);
  const json s = json::parse(slurp(dir / "o" / "study.json"));
  ASSERT_EQ(s.at("levels").size(), 2u);
  EXPECT_TRUE(s.at("levels").at(0).at("distance_to_previous").is_null());
  EXPECT_TRUE(s.at("levels").at(1).at("distance_to_previous").is_object());
  EXPECT_EQ(s.at("sandwich_violations"), 0);
}

TEST(Cli, ValidateSmall) {
  TempDir dir;
  spit(dir / "v.json", R"({
  "schema": "hypodist-config/1",
  "domain": {"lower": [0, 0], "upper": [1, 1]},
  "grid": {"cells_per_axis": 4},
  "validate": {"pairs": 3, "cells_per_axis": 5, "oracle_samples": 11}
})");
  ASSERT_EQ(run("validate --quiet --config " + q(dir / "v.json") + " --out " + q(dir / "o")), 0);
  const json v = json::parse(slurp(dir / "o" / "validation.json"));
  EXPECT_EQ(v.at("sandwich_violations"), 0);
  EXPECT_EQ(v.at("closure").size(), 4u);
  EXPECT_EQ(v.at("closure").at(0).at("delta_A_limit"), -1.0);
}
