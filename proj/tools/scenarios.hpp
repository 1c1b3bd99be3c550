#pragma once

// Ready-to-run scenarios written by `hypodist generate`.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include <json.hpp>

#include <hypodist.hpp>

namespace hypodist::cli {

/// Two Gaussian clouds standing in for the inertial and the ping-based
/// position estimates; samples outside the domain are redrawn.
struct UuvScenario {
  Domain domain{{7.0, 0.0}, {12.0, 3.0}};
  SampleSet inertial;
  SampleSet ping;
};

inline SampleSet gaussian_cloud(const Domain& dom, double mx, double my, double sx, double sy, std::size_t n,
                                std::mt19937_64& rng) {
  std::normal_distribution<double> nx(mx, sx), ny(my, sy);
  SampleSet s;
  while (s.points.size() < n) {
    Point p{nx(rng), ny(rng)};
    if (dom.contains(p)) s.points.push_back(std::move(p));
  }
  return s;
}

inline UuvScenario uuv_synthetic(std::uint64_t seed, std::size_t samples = 300) {
  UuvScenario sc;
  std::mt19937_64 rng(seed);
  sc.inertial = gaussian_cloud(sc.domain, 8.83, 1.07, 0.45, 0.30, samples, rng);
  sc.ping = gaussian_cloud(sc.domain, 10.0, 1.75, 0.35, 0.30, samples, rng);
  return sc;
}

inline nlohmann::json two_uniforms_config(std::size_t cells = 50, double delta = 0.7) {
  using nlohmann::json;
  return json{{"schema", "hypodist-config/1"},
              {"domain", {{"lower", {0.0, 0.0}}, {"upper", {3.0, 3.0}}}},
              {"grid", {{"cells_per_axis", cells}}},
              {"F0", {{"type", "uniform_box"}, {"lower", {0.0, 0.0}}, {"upper", {1.0, 1.0}}}},
              {"G0", {{"type", "uniform_box"}, {"lower", {2.0, 2.0}}, {"upper", {3.0, 3.0}}}},
              {"delta", delta},
              {"tolerance", 1e-8},
              {"output", "two_uniforms_out"}};
}

inline nlohmann::json uuv_config(const Domain& dom, std::size_t cells = 30) {
  using nlohmann::json;
  return json{{"schema", "hypodist-config/1"},
              {"domain", {{"lower", dom.lower}, {"upper", dom.upper}}},
              {"grid", {{"cells_per_axis", cells}}},
              {"F0", {{"type", "samples"}, {"path", "inertial_samples.csv"}}},
              {"G0", {{"type", "samples"}, {"path", "ping_samples.csv"}}},
              {"deltas", {0.9, 0.1, 0.01}},
              {"tolerance", 1e-8},
              {"output", "uuv_out"}};
}

} // namespace hypodist::cli
