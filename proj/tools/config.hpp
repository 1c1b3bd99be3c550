#pragma once

// Run configuration: strict JSON with a schema tag. Errors carry the line of
// the offending key.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include <hypodist.hpp>

namespace hypodist::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr const char* kSchema = "hypodist-config/1";

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Line of every JSON pointer in a syntactically valid document.
class JsonLocator {
public:
  explicit JsonLocator(std::string_view text) { scan(text); }

  /// Line of `pointer` or of its nearest located ancestor; 0 if unknown.
  [[nodiscard]] int line(std::string pointer) const {
    while (true) {
      if (auto it = lines_.find(pointer); it != lines_.end()) return it->second;
      const auto slash = pointer.rfind('/');
      if (slash == std::string::npos) return 0;
      pointer.resize(slash);
    }
  }

private:
  struct Frame {
    bool object = false;
    std::string base;
    std::string key;
    std::size_t index = 0;
    bool expect_key = true;
  };

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  [[nodiscard]] std::string child_path() const {
    if (stack_.empty()) return "";
    const Frame& f = stack_.back();
    return f.base + "/" + (f.object ? escape(f.key) : std::to_string(f.index));
  }

  void value_starts(int line) {
    if (!stack_.empty() && !stack_.back().object) lines_.emplace(child_path(), line);
  }

  void scan(std::string_view t) {
    int line = 1;
    lines_[""] = 1;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const char c = t[i];
      switch (c) {
      case '\n': ++line; break;
      case ' ': case '\t': case '\r': case ':': break;
      case '"': {
        std::string s;
        for (++i; i < t.size() && t[i] != '"'; ++i) {
          if (t[i] == '\\' && i + 1 < t.size()) ++i;
          s += t[i];
        }
        if (!stack_.empty() && stack_.back().object && stack_.back().expect_key) {
          stack_.back().key = s;
          stack_.back().expect_key = false;
          lines_[child_path()] = line;
        } else {
          value_starts(line);
        }
        break;
      }
      case ',':
        if (!stack_.empty()) {
          if (stack_.back().object) stack_.back().expect_key = true;
          else ++stack_.back().index;
        }
        break;
      case '{': case '[': {
        value_starts(line);
        Frame f;
        f.object = c == '{';
        f.base = child_path();
        stack_.push_back(std::move(f));
        break;
      }
      case '}': case ']':
        if (!stack_.empty()) stack_.pop_back();
        break;
      default:
        value_starts(line);
        while (i + 1 < t.size() && std::string_view(",]}\n \t\r").find(t[i + 1]) == std::string_view::npos) ++i;
        break;
      }
    }
  }

  std::vector<Frame> stack_;
  std::map<std::string, int> lines_;
};

/// A function source before it is put on a grid.
struct SourceConfig {
  struct File {
    fs::path csv;
    fs::path meta;
  };
  std::variant<CdfSpec, File> kind;
};

struct RunConfig {
  fs::path file;
  Domain domain;
  std::vector<std::size_t> cells; // per axis
  std::optional<SourceConfig> F0;
  std::optional<SourceConfig> G0;
  std::vector<double> deltas;
  std::optional<double> rho;
  ShapeConstraints shape;
  double tol = 1e-8;
  std::size_t max_lp_iterations = 2'000'000;
  std::optional<fs::path> output;
  std::uint64_t seed = 1;
  // study
  std::vector<std::size_t> levels;
  std::size_t study_quad_points = 16;
  // distance
  std::vector<double> rho_values;
  std::size_t oracle_samples = 101;
  std::size_t quad_points = 64;
  // validate
  std::size_t validate_pairs = 50;
  std::size_t validate_cells = 10;
  double validate_kappa = 1.0;
  std::size_t validate_oracle_samples = 41;
};

namespace detail {

class Reader {
public:
  Reader(const json& doc, const JsonLocator& loc, std::string file) : doc_(doc), loc_(loc), file_(std::move(file)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& msg) const {
    throw ConfigError(file_ + ":" + std::to_string(loc_.line(pointer)) + ": " + msg);
  }

  const json& at(const std::string& pointer) const { return doc_.at(json::json_pointer(pointer)); }

  [[nodiscard]] bool has(const std::string& pointer) const { return doc_.contains(json::json_pointer(pointer)); }

  void only_keys(const std::string& pointer, std::initializer_list<std::string_view> allowed) const {
    if (!pointer.empty()) require(pointer);
    const json& obj = at(pointer);
    if (!obj.is_object()) fail(pointer, "expected an object at '" + label(pointer) + "'");
    const std::set<std::string_view> ok(allowed);
    for (const auto& [k, v] : obj.items())
      if (!ok.contains(k)) fail(pointer + "/" + k, "unknown key '" + k + "' in " + label(pointer));
  }

  void require(const std::string& pointer) const {
    if (!has(pointer)) {
      const auto slash = pointer.rfind('/');
      fail(pointer.substr(0, slash), "missing key '" + pointer.substr(slash + 1) + "' in " + label(pointer.substr(0, slash)));
    }
  }

  [[nodiscard]] double number(const std::string& pointer) const {
    require(pointer);
    const json& v = at(pointer);
    if (!v.is_number()) fail(pointer, "'" + label(pointer) + "' must be a number");
    return v.get<double>();
  }

  [[nodiscard]] std::size_t count(const std::string& pointer) const {
    require(pointer);
    const json& v = at(pointer);
    if (!v.is_number_unsigned()) fail(pointer, "'" + label(pointer) + "' must be a nonnegative integer");
    return v.get<std::size_t>();
  }

  [[nodiscard]] bool boolean(const std::string& pointer) const {
    require(pointer);
    const json& v = at(pointer);
    if (!v.is_boolean()) fail(pointer, "'" + label(pointer) + "' must be true or false");
    return v.get<bool>();
  }

  [[nodiscard]] std::string string(const std::string& pointer) const {
    require(pointer);
    const json& v = at(pointer);
    if (!v.is_string()) fail(pointer, "'" + label(pointer) + "' must be a string");
    return v.get<std::string>();
  }

  [[nodiscard]] std::vector<double> numbers(const std::string& pointer) const {
    require(pointer);
    const json& v = at(pointer);
    if (!v.is_array()) fail(pointer, "'" + label(pointer) + "' must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(pointer + "/" + std::to_string(i)));
    return out;
  }

  [[nodiscard]] std::vector<std::size_t> counts(const std::string& pointer) const {
    require(pointer);
    const json& v = at(pointer);
    if (!v.is_array()) fail(pointer, "'" + label(pointer) + "' must be an array of integers");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(count(pointer + "/" + std::to_string(i)));
    return out;
  }

  static std::string label(const std::string& pointer) { return pointer.empty() ? "top level" : pointer; }

private:
  const json& doc_;
  const JsonLocator& loc_;
  std::string file_;
};

inline CdfSpec parse_spec(const Reader& r, const std::string& p, const fs::path& base, std::size_t dim);

inline SourceConfig parse_source(const Reader& r, const std::string& p, const fs::path& base, std::size_t dim) {
  const std::string type = r.string(p + "/type");
  if (type == "grid_function") {
    r.only_keys(p, {"type", "path", "meta"});
    SourceConfig::File f;
    f.csv = base / r.string(p + "/path");
    f.meta = r.has(p + "/meta") ? base / r.string(p + "/meta") : io::meta_path_for(f.csv);
    return SourceConfig{f};
  }
  return SourceConfig{parse_spec(r, p, base, dim)};
}

inline CdfSpec parse_spec(const Reader& r, const std::string& p, const fs::path& base, std::size_t dim) {
  const std::string type = r.string(p + "/type");
  auto check_dim = [&](const std::vector<double>& v, const std::string& q) {
    if (v.size() != dim) r.fail(q, "'" + q + "' must have " + std::to_string(dim) + " entries");
  };
  if (type == "uniform_box") {
    r.only_keys(p, {"type", "lower", "upper"});
    auto lo = r.numbers(p + "/lower"), hi = r.numbers(p + "/upper");
    check_dim(lo, p + "/lower");
    check_dim(hi, p + "/upper");
    for (std::size_t d = 0; d < dim; ++d)
      if (!(lo[d] < hi[d])) r.fail(p + "/upper", "uniform box needs lower < upper on every axis");
    return uniform_box(std::move(lo), std::move(hi));
  }
  if (type == "dirac") {
    r.only_keys(p, {"type", "at"});
    auto at = r.numbers(p + "/at");
    check_dim(at, p + "/at");
    return dirac(std::move(at));
  }
  if (type == "mixture") {
    r.only_keys(p, {"type", "weights", "components"});
    auto w = r.numbers(p + "/weights");
    r.require(p + "/components");
    const json& comps = r.at(p + "/components");
    if (!comps.is_array() || comps.size() != w.size())
      r.fail(p + "/components", "mixture needs one component per weight");
    std::vector<CdfSpec> parts;
    for (std::size_t i = 0; i < comps.size(); ++i) parts.push_back(parse_spec(r, p + "/components/" + std::to_string(i), base, dim));
    return mixture(std::move(w), std::move(parts));
  }
  if (type == "samples") {
    r.only_keys(p, {"type", "path"});
    const fs::path path = base / r.string(p + "/path");
    try {
      SampleSet s = io::load_samples(path);
      if (s.points.front().size() != dim) r.fail(p + "/path", "sample dimension does not match the domain");
      return CdfSpec{EmpiricalSamples{std::move(s)}};
    } catch (const IoError& e) {
      r.fail(p + "/path", e.what());
    } catch (const InvalidArgument& e) {
      r.fail(p + "/path", e.what());
    }
  }
  if (type == "empirical") {
    r.only_keys(p, {"type", "points", "weights"});
    r.require(p + "/points");
    const json& pts = r.at(p + "/points");
    if (!pts.is_array()) r.fail(p + "/points", "'points' must be an array of points");
    SampleSet s;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string q = p + "/points/" + std::to_string(i);
      auto x = r.numbers(q);
      check_dim(x, q);
      s.points.push_back(std::move(x));
    }
    if (r.has(p + "/weights")) s.weights = r.numbers(p + "/weights");
    try {
      s.validate(dim);
    } catch (const InvalidArgument& e) {
      r.fail(p, e.what());
    }
    return CdfSpec{EmpiricalSamples{std::move(s)}};
  }
  r.fail(p + "/type", "unknown source type '" + type + "'");
}

} // namespace detail

/// Parses `text` as a configuration whose relative paths resolve against
/// `base`. `file` is used in messages only.
inline RunConfig parse_config(std::string_view text, const fs::path& base, const std::string& file) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError(file + ":" + std::to_string(line) + ": malformed JSON");
  }
  const JsonLocator loc(text);
  const detail::Reader r(doc, loc, file);
  if (!doc.is_object()) r.fail("", "configuration must be a JSON object");
  r.only_keys("", {"schema", "domain", "grid", "F0", "G0", "delta", "deltas", "rho", "shape", "tolerance",
                   "max_lp_iterations", "output", "seed", "study", "distance", "validate"});
  if (r.string("/schema") != kSchema) r.fail("/schema", std::string("unsupported schema; expected '") + kSchema + "'");

  RunConfig c;
  c.file = file;
  r.only_keys("/domain", {"lower", "upper"});
  try {
    c.domain = Domain(r.numbers("/domain/lower"), r.numbers("/domain/upper"));
  } catch (const InvalidArgument& e) {
    r.fail("/domain", e.what());
  }
  const std::size_t dim = c.domain.dim();

  r.only_keys("/grid", {"cells_per_axis"});
  r.require("/grid/cells_per_axis");
  if (r.at("/grid/cells_per_axis").is_array()) {
    c.cells = r.counts("/grid/cells_per_axis");
    if (c.cells.size() != dim) r.fail("/grid/cells_per_axis", "one cell count per axis required");
  } else {
    c.cells.assign(dim, r.count("/grid/cells_per_axis"));
  }
  for (std::size_t n : c.cells)
    if (n < 1) r.fail("/grid/cells_per_axis", "cell counts must be at least 1");

  if (r.has("/F0")) c.F0 = detail::parse_source(r, "/F0", base, dim);
  if (r.has("/G0")) c.G0 = detail::parse_source(r, "/G0", base, dim);

  if (r.has("/delta") && r.has("/deltas")) r.fail("/deltas", "give either 'delta' or 'deltas', not both");
  if (r.has("/delta")) c.deltas = {r.number("/delta")};
  if (r.has("/deltas")) c.deltas = r.numbers("/deltas");
  for (std::size_t i = 0; i < c.deltas.size(); ++i)
    if (!(c.deltas[i] >= 0.0)) r.fail(r.has("/delta") ? "/delta" : "/deltas/" + std::to_string(i), "delta must be >= 0");

  if (r.has("/rho")) {
    c.rho = r.number("/rho");
    if (!(*c.rho >= 0.0)) r.fail("/rho", "rho must be >= 0");
  }
  if (r.has("/shape")) {
    r.only_keys("/shape", {"monotone", "boundary_zero", "boundary_one", "distribution_condition", "bounded_growth"});
    if (r.has("/shape/monotone") && !r.boolean("/shape/monotone"))
      r.fail("/shape/monotone", "monotonicity cannot be switched off");
    if (r.has("/shape/boundary_zero")) c.shape.boundary_zero = r.boolean("/shape/boundary_zero");
    if (r.has("/shape/boundary_one")) c.shape.boundary_one = r.boolean("/shape/boundary_one");
    if (r.has("/shape/distribution_condition"))
      c.shape.distribution_condition = r.boolean("/shape/distribution_condition");
    if (r.has("/shape/bounded_growth") && !r.at("/shape/bounded_growth").is_null()) {
      c.shape.bounded_growth = r.number("/shape/bounded_growth");
      if (!(*c.shape.bounded_growth >= 0.0)) r.fail("/shape/bounded_growth", "growth bound must be >= 0");
    }
  }
  if (r.has("/tolerance")) {
    c.tol = r.number("/tolerance");
    if (!(c.tol > 0.0)) r.fail("/tolerance", "tolerance must be positive");
  }
  if (r.has("/max_lp_iterations")) c.max_lp_iterations = r.count("/max_lp_iterations");
  if (r.has("/output")) c.output = base / r.string("/output");
  if (r.has("/seed")) c.seed = r.count("/seed");

  if (r.has("/study")) {
    r.only_keys("/study", {"levels", "quad_points"});
    c.levels = r.counts("/study/levels");
    if (r.has("/study/quad_points")) c.study_quad_points = r.count("/study/quad_points");
  }
  if (r.has("/distance")) {
    r.only_keys("/distance", {"rho_values", "oracle_samples", "quad_points"});
    if (r.has("/distance/rho_values")) c.rho_values = r.numbers("/distance/rho_values");
    if (r.has("/distance/oracle_samples")) c.oracle_samples = r.count("/distance/oracle_samples");
    if (r.has("/distance/quad_points")) c.quad_points = r.count("/distance/quad_points");
    for (std::size_t i = 0; i < c.rho_values.size(); ++i)
      if (!(c.rho_values[i] >= 0.0)) r.fail("/distance/rho_values/" + std::to_string(i), "rho must be >= 0");
    if (c.oracle_samples < 2) r.fail("/distance/oracle_samples", "at least 2 oracle samples per axis required");
    if (c.quad_points < 1) r.fail("/distance/quad_points", "at least one quadrature point required");
  }
  if (r.has("/validate")) {
    r.only_keys("/validate", {"pairs", "cells_per_axis", "kappa", "oracle_samples"});
    if (r.has("/validate/pairs")) c.validate_pairs = r.count("/validate/pairs");
    if (r.has("/validate/cells_per_axis")) c.validate_cells = r.count("/validate/cells_per_axis");
    if (r.has("/validate/kappa")) c.validate_kappa = r.number("/validate/kappa");
    if (r.has("/validate/oracle_samples")) c.validate_oracle_samples = r.count("/validate/oracle_samples");
  }
  return c;
}

inline RunConfig load_config(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(path.string() + ":0: cannot read configuration");
  std::stringstream ss;
  ss << is.rdbuf();
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return parse_config(ss.str(), base, path.string());
}

inline std::shared_ptr<const Grid> run_grid(const RunConfig& c) {
  std::vector<std::size_t> nodes(c.cells);
  for (auto& n : nodes) ++n;
  return std::make_shared<const Grid>(build_grid(c.domain, nodes));
}

/// Puts a source on `grid`: specs are realised, stored functions are
/// resampled when their grid differs.
inline GridFunction materialize(const SourceConfig& s, const std::shared_ptr<const Grid>& grid) {
  if (const auto* spec = std::get_if<CdfSpec>(&s.kind)) {
    if (const auto* emp = std::get_if<EmpiricalSamples>(&spec->kind)) return empirical_cdf(emp->samples, grid);
    validate_spec(*spec, grid->domain());
    return realize(*spec, grid);
  }
  const auto& file = std::get<SourceConfig::File>(s.kind);
  GridFunction f;
  try {
    f = io::load_grid_function(file.csv, file.meta);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  if (!(f.grid().domain() == grid->domain())) throw ConfigError(file.csv.string() + ": domain differs from the run domain");
  if (f.order() == 1 && f.grid() == *grid) return f;
  return resample(f, grid);
}

} // namespace hypodist::cli
