#pragma once

// File formats: grid JSON, grid-function CSV with a metadata sidecar, sample
// CSV, and whitespace-delimited plot data for gnuplot.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "functions.hpp"
#include "grid.hpp"
#include "metrics.hpp"

namespace hypodist {

namespace io {

using json = nlohmann::json;

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view s, const std::string& where) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw IoError(where + ": not a number: '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path.string());
  return is;
}

// ---------------------------------------------------------------------------
// Grid

inline json to_json(const Grid& g) {
  json j;
  j["dim"] = g.dim();
  j["lower"] = g.domain().lower;
  j["upper"] = g.domain().upper;
  j["axes"] = g.axes();
  return j;
}

inline Grid grid_from_json(const json& j) {
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    Domain dom(j.at("lower").get<std::vector<double>>(), j.at("upper").get<std::vector<double>>());
    auto axes = j.at("axes").get<std::vector<std::vector<double>>>();
    if (dom.dim() != dim || axes.size() != dim) throw IoError("grid: dim does not match lower/upper/axes");
    return Grid(std::move(dom), std::move(axes));
  } catch (const json::exception& e) {
    throw IoError(std::string("grid: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// GridFunction

/// Sample points of f's values: nodes for order 1, cell centroids for order 0,
/// axis 0 varying fastest.
inline Point value_site(const GridFunction& f, std::size_t i) {
  return f.order() == 1 ? f.grid().node(i) : f.grid().cell(i).centroid();
}

inline json metadata(const GridFunction& f) {
  json j;
  j["order"] = f.order();
  j["monotone"] = f.monotone();
  j["grid_hash"] = f.grid().hash();
  j["grid"] = to_json(f.grid());
  return j;
}

inline void write_csv(const GridFunction& f, std::ostream& os) {
  for (std::size_t d = 0; d < f.dim(); ++d) os << 'x' << d << ',';
  os << "value\n";
  for (std::size_t i = 0; i < f.values().size(); ++i) {
    const Point x = value_site(f, i);
    for (double c : x) os << format_double(c) << ',';
    os << format_double(f.values()[i]) << '\n';
  }
}

/// Writes `<stem>.csv` and `<stem>.meta.json`.
inline void save(const GridFunction& f, const std::filesystem::path& csv_path, const std::filesystem::path& meta_path) {
  auto os = open_out(csv_path);
  write_csv(f, os);
  auto ms = open_out(meta_path);
  ms << metadata(f).dump(2) << '\n';
}

inline std::filesystem::path meta_path_for(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".meta.json");
  return p;
}

inline GridFunction load_grid_function(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path) {
  json meta;
  {
    auto is = open_in(meta_path);
    try {
      meta = json::parse(is);
    } catch (const json::exception& e) {
      throw IoError(meta_path.string() + ": " + e.what());
    }
  }
  int order = 0;
  bool monotone = false;
  std::uint64_t hash = 0;
  try {
    order = meta.at("order").get<int>();
    monotone = meta.at("monotone").get<bool>();
    hash = meta.at("grid_hash").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw IoError(meta_path.string() + ": " + e.what());
  }
  auto grid = std::make_shared<const Grid>(grid_from_json(meta.at("grid")));
  if (grid->hash() != hash) throw IoError(meta_path.string() + ": grid hash mismatch");
  if (order != 0 && order != 1) throw IoError(meta_path.string() + ": order must be 0 or 1");

  const std::size_t m = grid->dim();
  const std::size_t expected = order == 1 ? grid->node_count() : grid->cell_count();
  std::vector<double> values;
  values.reserve(expected);
  auto is = open_in(csv_path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (lineno == 1 || line.empty() || line == "\r") continue; // header
    const std::string where = csv_path.string() + ":" + std::to_string(lineno);
    const auto cols = split_csv(line);
    if (cols.size() != m + 1) throw IoError(where + ": expected " + std::to_string(m + 1) + " columns");
    if (values.size() >= expected) throw IoError(where + ": too many rows");
    const Point site = order == 1 ? grid->node(values.size()) : grid->cell(values.size()).centroid();
    for (std::size_t d = 0; d < m; ++d) {
      const double c = parse_double(cols[d], where);
      if (std::abs(c - site[d]) > 1e-9 * std::max(1.0, std::abs(site[d])))
        throw IoError(where + ": coordinate does not match the grid");
    }
    values.push_back(parse_double(cols[m], where));
  }
  if (values.size() != expected) throw IoError(csv_path.string() + ": expected " + std::to_string(expected) + " rows");
  return GridFunction(std::move(grid), order, std::move(values), monotone);
}

inline GridFunction load_grid_function(const std::filesystem::path& csv_path) {
  return load_grid_function(csv_path, meta_path_for(csv_path));
}

// ---------------------------------------------------------------------------
// SampleSet: header x0,...,x{m-1}[,weight]; one point per row

inline void save(const SampleSet& s, const std::filesystem::path& path) {
  if (s.points.empty()) throw InvalidArgument("sample set: nothing to write");
  auto os = open_out(path);
  const std::size_t m = s.points.front().size();
  for (std::size_t d = 0; d < m; ++d) os << (d ? "," : "") << 'x' << d;
  if (!s.weights.empty()) os << ",weight";
  os << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t d = 0; d < m; ++d) os << (d ? "," : "") << format_double(s.points[i][d]);
    if (!s.weights.empty()) os << ',' << format_double(s.weights[i]);
    os << '\n';
  }
}

inline SampleSet load_samples(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::string line;
  if (!std::getline(is, line)) throw IoError(path.string() + ": empty file");
  const auto header = split_csv(line);
  std::size_t m = header.size();
  bool weighted = false;
  if (m > 0) {
    std::string last(header.back());
    while (!last.empty() && (last.back() == '\r' || last.back() == ' ')) last.pop_back();
    if (last == "weight") {
      weighted = true;
      --m;
    }
  }
  if (m == 0) throw IoError(path.string() + ":1: no coordinate columns");
  SampleSet s;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const auto cols = split_csv(line);
    if (cols.size() != header.size()) throw IoError(where + ": expected " + std::to_string(header.size()) + " columns");
    Point p(m);
    for (std::size_t d = 0; d < m; ++d) p[d] = parse_double(cols[d], where);
    s.points.push_back(std::move(p));
    if (weighted) s.weights.push_back(parse_double(cols[m], where));
  }
  s.validate(m);
  return s;
}

// ---------------------------------------------------------------------------
// Plot data

/// gnuplot `splot` data: "x y value" per node with a blank line after each
/// row of constant y (m = 2); "x value" for m = 1.
inline void write_surface(const GridFunction& f, std::ostream& os) {
  const Grid& g = f.grid();
  if (g.dim() > 2) throw InvalidArgument("write_surface: m <= 2 only");
  const std::size_t n0 = g.nodes_on_axis(0);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Point x = g.node(n);
    for (double c : x) os << format_double(c) << ' ';
    os << format_double(f.eval(x)) << '\n';
    if (g.dim() == 2 && (n + 1) % n0 == 0) os << '\n';
  }
}

/// Probability mass per cell at its centroid, laid out like write_surface.
inline void write_cell_mass(const GridFunction& f, std::ostream& os) {
  const Grid& g = f.grid();
  if (g.dim() > 2) throw InvalidArgument("write_cell_mass: m <= 2 only");
  const std::size_t c0 = g.cells_on_axis(0);
  for (std::size_t k = 0; k < g.cell_count(); ++k) {
    const Point c = g.cell(k).centroid();
    for (double v : c) os << format_double(v) << ' ';
    os << format_double(cell_mass(f, k)) << '\n';
    if (g.dim() == 2 && (k + 1) % c0 == 0) os << '\n';
  }
}

inline void write_surface(const GridFunction& f, const std::filesystem::path& path) {
  auto os = open_out(path);
  write_surface(f, os);
}

inline void write_cell_mass(const GridFunction& f, const std::filesystem::path& path) {
  auto os = open_out(path);
  write_cell_mass(f, os);
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const DistanceReport& r) {
  return json{{"value", r.value}, {"lower_bound", r.lower_bound}, {"upper_bound", r.upper_bound},
              {"quadrature_term", r.quadrature_term}, {"method", r.method}};
}

} // namespace io
} // namespace hypodist
