// hypodist command-line driver.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <hypodist.hpp>

#include "config.hpp"
#include "scenarios.hpp"

namespace {

using namespace hypodist;
using namespace hypodist::cli;
using json = nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kConfig = 1, kInfeasible = 2, kIterationLimit = 3, kValidationFailed = 4 };

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

struct Context {
  RunConfig cfg;
  fs::path out;
  bool quiet = false;
};

void say(const Context& ctx, const std::string& line) {
  if (!ctx.quiet) std::cout << line << '\n';
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path prepare_out(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError(dir.string() + ":0: cannot create output directory");
  const fs::path probe = dir / ".hypodist_probe";
  {
    std::ofstream os(probe);
    if (!os) throw ConfigError(dir.string() + ":0: output directory is not writable");
  }
  fs::remove(probe, ec);
  return dir;
}

Context open_context(const Common& c, bool need_config = true) {
  Context ctx;
  ctx.quiet = c.quiet;
  if (!c.config.empty()) ctx.cfg = load_config(c.config);
  else if (need_config) throw ConfigError("--config is required");
  if (c.seed) ctx.cfg.seed = *c.seed;
  if (!c.out.empty()) ctx.out = c.out;
  else if (ctx.cfg.output) ctx.out = *ctx.cfg.output;
  else ctx.out = "hypodist_out";
  prepare_out(ctx.out);
  return ctx;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

json point_json(const GridFunction& F) {
  try {
    return expected_value(F);
  } catch (const DegenerateFunction&) {
    return nullptr;
  }
}

EstimationProblem make_problem(const RunConfig& cfg, double delta) {
  if (!cfg.F0 || !cfg.G0) throw ConfigError(cfg.file.string() + ":1: F0 and G0 are required");
  const auto grid = run_grid(cfg);
  EstimationProblem p;
  p.F0 = materialize(*cfg.F0, grid);
  p.G0 = materialize(*cfg.G0, grid);
  p.delta = delta;
  p.rho = cfg.rho;
  p.shape = cfg.shape;
  p.tol = cfg.tol;
  p.max_lp_iterations = cfg.max_lp_iterations;
  return p;
}

json history_json(const EstimateResult& r) {
  json h = json::array();
  for (const auto& s : r.history) h.push_back({{"eta", s.eta}, {"slack", s.slack}, {"lp_iterations", s.lp_iterations}});
  return h;
}

int cmd_estimate(const Common& common) {
  Context ctx = open_context(common);
  const RunConfig& cfg = ctx.cfg;
  if (cfg.deltas.empty()) throw ConfigError(cfg.file.string() + ":1: 'delta' or 'deltas' is required");
  json runs = json::array();
  for (std::size_t i = 0; i < cfg.deltas.size(); ++i) {
    const EstimationProblem p = make_problem(cfg, cfg.deltas[i]);
    const EstimateResult r = estimate(p);
    const std::string suffix = cfg.deltas.size() > 1 ? "_" + std::to_string(i) : "";
    const fs::path csv = ctx.out / ("solution" + suffix + ".csv");
    io::save(r.solution, csv, io::meta_path_for(csv));
    io::write_surface(r.solution, ctx.out / ("surface" + suffix + ".dat"));
    io::write_cell_mass(r.solution, ctx.out / ("cell_mass" + suffix + ".dat"));
    const auto err = distribution_error_pct(r.solution, 2'000'000, cfg.seed);
    json run{{"delta", p.delta},
             {"rho", p.rho_value()},
             {"eta", r.eta},
             {"slack", r.slack},
             {"relaxed_eta", r.relaxed_eta ? json(*r.relaxed_eta) : json(nullptr)},
             {"expected_value", point_json(r.solution)},
             {"expected_value_F0", point_json(p.F0)},
             {"expected_value_G0", point_json(p.G0)},
             {"distribution_error_pct", err.percent},
             {"history", history_json(r)},
             {"timings", {{"wall_seconds", r.wall_seconds}}},
             {"files",
              {{"solution", csv.filename().string()},
               {"metadata", io::meta_path_for(csv).filename().string()},
               {"surface", "surface" + suffix + ".dat"},
               {"cell_mass", "cell_mass" + suffix + ".dat"}}}};
    say(ctx, "delta=" + fmt("%g", p.delta) + "  eta=" + fmt("%.6f", r.eta) + "  s=" + fmt("%.6g", r.slack) +
                 "  time=" + fmt("%.2fs", r.wall_seconds));
    runs.push_back(std::move(run));
  }
  json result{{"grid", io::to_json(*run_grid(cfg))}, {"seed", cfg.seed}, {"runs", runs}};
  write_json(ctx.out / "result.json", result);
  return kOk;
}

int cmd_distance(const Common& common) {
  Context ctx = open_context(common);
  const RunConfig& cfg = ctx.cfg;
  if (!cfg.F0 || !cfg.G0) throw ConfigError(cfg.file.string() + ":1: F0 and G0 are required");
  const auto grid = run_grid(cfg);
  const GridFunction f = materialize(*cfg.F0, grid);
  const GridFunction g = materialize(*cfg.G0, grid);
  std::vector<double> rhos = cfg.rho_values;
  if (rhos.empty()) rhos.push_back(cfg.rho ? *cfg.rho : default_rho(cfg.domain));
  json per_rho = json::array();
  for (double rho : rhos) {
    const RhoBall ball(rho);
    const auto oracle = dl_rho_oracle_report(f, g, ball, cfg.oracle_samples);
    json row{{"rho", rho},
             {"hat", hat_dl_rho(f, g, ball, cfg.tol)},
             {"eta_minus", eta_minus(f, g, ball, *grid, cfg.tol)},
             {"eta_plus", eta_plus(f, g, ball, *grid, cfg.tol)},
             {"oracle", oracle.value},
             {"oracle_slack", oracle.slack}};
    say(ctx, "rho=" + fmt("%g", rho) + "  hat=" + fmt("%.6f", row["hat"].get<double>()) +
                 "  oracle=" + fmt("%.6f", oracle.value));
    per_rho.push_back(std::move(row));
  }
  const DistanceReport d = hypo_dist_estimate(f, g, cfg.quad_points, cfg.tol);
  say(ctx, "dl=" + fmt("%.6f", d.value) + "  [" + fmt("%.6f", d.lower_bound) + ", " + fmt("%.6f", d.upper_bound) + "]");
  write_json(ctx.out / "distance.json", {{"per_rho", per_rho}, {"hypo_distance", io::to_json(d)}});
  return kOk;
}

int cmd_study(const Common& common) {
  Context ctx = open_context(common);
  const RunConfig& cfg = ctx.cfg;
  if (cfg.levels.size() < 2) throw ConfigError(cfg.file.string() + ":1: 'study.levels' needs at least two levels");
  if (cfg.deltas.size() != 1) throw ConfigError(cfg.file.string() + ":1: a study needs exactly one 'delta'");
  if (!cfg.F0 || !cfg.G0) throw ConfigError(cfg.file.string() + ":1: F0 and G0 are required");
  ProblemTemplate t;
  t.domain = cfg.domain;
  const SourceConfig F0 = *cfg.F0, G0 = *cfg.G0;
  t.F0 = [F0](std::shared_ptr<const Grid> g) { return materialize(F0, g); };
  t.G0 = [G0](std::shared_ptr<const Grid> g) { return materialize(G0, g); };
  t.delta = cfg.deltas.front();
  t.rho = cfg.rho;
  t.shape = cfg.shape;
  t.tol = cfg.tol;
  const auto levels = refinement_study(t, cfg.levels, cfg.study_quad_points);

  json rows = json::array();
  std::size_t violations = 0;
  for (const auto& lvl : levels) {
    const EstimateResult& r = lvl.result;
    const auto err = distribution_error_pct(r.solution, 2'000'000, cfg.seed);
    const EstimationProblem p = instantiate(t, lvl.cells_per_axis);
    const RhoBall ball(p.rho_value());
    const auto check = verify_sandwich(r.solution, p.F0, ball, r.solution.grid(), 0, cfg.tol);
    violations += check.failures.size();
    json row{{"cells_per_axis", lvl.cells_per_axis},
             {"eta", r.eta},
             {"slack", r.slack},
             {"distribution_error_pct", err.percent},
             {"sandwich", {{"eta_minus", check.eta_minus}, {"hat", check.hat}, {"eta_plus", check.eta_plus}, {"ok", check.ok()}}},
             {"wall_seconds", r.wall_seconds}};
    std::string line = "cells=" + std::to_string(lvl.cells_per_axis) + "  eta=" + fmt("%.6f", r.eta) +
                       "  s=" + fmt("%.3g", r.slack) + "  err%=" + fmt("%.4f", err.percent);
    if (lvl.distance_to_previous) {
      row["distance_to_previous"] = io::to_json(*lvl.distance_to_previous);
      line += "  dl(prev)=" + fmt("%.5f", lvl.distance_to_previous->value);
    } else {
      row["distance_to_previous"] = nullptr;
    }
    say(ctx, line);
    rows.push_back(std::move(row));
  }
  write_json(ctx.out / "study.json", {{"levels", rows}, {"sandwich_violations", violations}, {"seed", cfg.seed}});
  say(ctx, "sandwich violations: " + std::to_string(violations));
  return violations == 0 ? kOk : kValidationFailed;
}

int cmd_generate(const std::string& scenario, const Common& common) {
  if (common.out.empty()) throw ConfigError("--out is required");
  const fs::path dir = prepare_out(common.out);
  const std::uint64_t seed = common.seed.value_or(7);
  Context ctx;
  ctx.quiet = common.quiet;
  if (scenario == "two-uniforms") {
    write_json(dir / "two_uniforms.json", two_uniforms_config());
    json study = two_uniforms_config();
    study["study"] = {{"levels", {10, 20, 40}}};
    study["output"] = "two_uniforms_study_out";
    write_json(dir / "two_uniforms_study.json", study);
    say(ctx, "wrote two_uniforms.json, two_uniforms_study.json");
  } else if (scenario == "uuv-synthetic") {
    const UuvScenario sc = uuv_synthetic(seed);
    io::save(sc.inertial, dir / "inertial_samples.csv");
    io::save(sc.ping, dir / "ping_samples.csv");
    json cfg = uuv_config(sc.domain);
    cfg["seed"] = seed;
    write_json(dir / "uuv.json", cfg);
    say(ctx, "wrote uuv.json, inertial_samples.csv, ping_samples.csv");
  } else {
    throw ConfigError("unknown scenario '" + scenario + "' (expected two-uniforms or uuv-synthetic)");
  }
  return kOk;
}

int cmd_validate(const Common& common) {
  Context ctx = open_context(common, false);
  const RunConfig& cfg = ctx.cfg;
  const std::size_t pairs = cfg.validate_pairs;
  const Domain dom = cfg.domain.dim() == 2 ? cfg.domain : Domain({0.0, 0.0}, {1.0, 1.0});
  const auto grid = std::make_shared<const Grid>(uniform_cells(dom, cfg.validate_cells));
  const RhoBall ball(default_rho(dom));
  std::mt19937_64 rng(cfg.seed);

  std::size_t sandwich_bad = 0, oracle_bad = 0, lipschitz_bad = 0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const GridFunction f = random_monotone(grid, rng), g = random_monotone(grid, rng);
    const auto r = verify_sandwich(f, g, RhoBall(0.5), *grid, cfg.validate_oracle_samples, cfg.tol);
    const auto s = verify_sandwich(f, g, ball, *grid, 0, cfg.tol);
    if (!s.sandwich_ok || !r.sandwich_ok) ++sandwich_bad;
    if (!r.oracle_lower_ok || !r.oracle_upper_ok) ++oracle_bad;
    const GridFunction a = random_lipschitz(grid, cfg.validate_kappa, rng),
                       b = random_lipschitz(grid, cfg.validate_kappa, rng);
    const double gap = eta_plus(a, b, ball, *grid, cfg.tol) - eta_minus(a, b, ball, *grid, cfg.tol);
    if (gap > cfg.validate_kappa * grid->mesh_size() + 2.0 * cfg.tol) ++lipschitz_bad;
  }
  say(ctx, "sandwich violations: " + std::to_string(sandwich_bad) + "/" + std::to_string(pairs));
  say(ctx, "oracle ordering violations: " + std::to_string(oracle_bad) + "/" + std::to_string(pairs));
  say(ctx, "lipschitz gap violations: " + std::to_string(lipschitz_bad) + "/" + std::to_string(pairs));

  json closure = json::array();
  for (std::size_t nu : {1, 2, 4, 8}) {
    const ClosureFixture fx = closure_fixture(nu);
    closure.push_back({{"nu", nu}, {"delta_A_nu", fx.delta_nu}, {"delta_A_limit", fx.delta_limit}, {"dl", fx.distance.value}});
    say(ctx, "closure nu=" + std::to_string(nu) + "  dA(F_nu)=" + fmt("%g", fx.delta_nu) +
                 "  dA(F)=" + fmt("%g", fx.delta_limit) + "  dl=" + fmt("%.5f", fx.distance.value));
  }
  json density = json::array();
  const Domain unit({0.0, 0.0}, {1.0, 1.0});
  for (const auto& lvl : density_convergence(dirac({0.5, 0.5}), unit, {4, 8, 16, 32}))
    density.push_back({{"cells_per_axis", lvl.cells_per_axis}, {"dl", lvl.distance.value}});

  const std::size_t failures = sandwich_bad + oracle_bad + lipschitz_bad;
  write_json(ctx.out / "validation.json", {{"seed", cfg.seed},
                                           {"pairs", pairs},
                                           {"sandwich_violations", sandwich_bad},
                                           {"oracle_violations", oracle_bad},
                                           {"lipschitz_violations", lipschitz_bad},
                                           {"closure", closure},
                                           {"density", density}});
  return failures == 0 ? kOk : kValidationFailed;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypo-distance estimation of multivariate distribution functions"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", common.config, "JSON configuration file");
    if (config_required) opt->required();
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--seed", common.seed, "random seed");
    sub->add_flag("--quiet", common.quiet, "suppress progress output");
  };
  auto* est = app.add_subcommand("estimate", "solve the estimation problem");
  add_common(est, true);
  auto* dist = app.add_subcommand("distance", "hat- and hypo-distances between two sources");
  add_common(dist, true);
  auto* study = app.add_subcommand("study", "mesh refinement study");
  add_common(study, true);
  auto* gen = app.add_subcommand("generate", "write a ready-to-run scenario");
  std::string scenario;
  gen->add_option("scenario", scenario, "two-uniforms or uuv-synthetic")->required();
  add_common(gen, false);
  auto* val = app.add_subcommand("validate", "run the validation suite");
  add_common(val, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (est->parsed()) return cmd_estimate(common);
    if (dist->parsed()) return cmd_distance(common);
    if (study->parsed()) return cmd_study(common);
    if (gen->parsed()) return cmd_generate(scenario, common);
    if (val->parsed()) return cmd_validate(common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ShapeInfeasible& e) {
    std::cerr << "shape constraints infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const IterationLimit& e) {
    std::cerr << "solver iteration limit: " << e.what() << '\n';
    return kIterationLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
