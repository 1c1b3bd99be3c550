#pragma once

// Upper semicontinuous [0,1]-valued functions on a grid (epi-splines of
// order 0 and 1), analytic CDF specifications, empirical CDFs and the signed
// corner sum over rectangles.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "grid.hpp"

namespace hypodist {

/// Node weight in an affine interpolation formula.
struct NodeWeight {
  std::size_t node;
  double weight;
};

/// A function on the domain of `grid` stored as one value per cell (order 0)
/// or one value per node (order 1).
///
/// Order 1 interpolates linearly on the Kuhn simplices of each cell; for m = 2
/// that is the split along the lower-left to upper-right diagonal. Order 0 is
/// constant on open cells and takes the largest incident cell value on cell
/// boundaries, which makes it usc.
class GridFunction {
public:
  static constexpr double kValueTol = 1e-9;

  GridFunction() = default;

  GridFunction(std::shared_ptr<const Grid> grid, int order, std::vector<double> values, bool monotone = false)
      : grid_(std::move(grid)), order_(order), values_(std::move(values)), monotone_(monotone) {
    if (!grid_) throw InvalidArgument("grid function: null grid");
    if (order_ != 0 && order_ != 1) throw InvalidArgument("grid function: order must be 0 or 1");
    const std::size_t expected = order_ == 0 ? grid_->cell_count() : grid_->node_count();
    if (values_.size() != expected)
      throw InvalidArgument("grid function: expected " + std::to_string(expected) + " values, got " +
                            std::to_string(values_.size()));
    for (double& v : values_) {
      if (!std::isfinite(v) || v < -kValueTol || v > 1.0 + kValueTol)
        throw InvalidArgument("grid function: values must lie in [0,1]");
      v = std::clamp(v, 0.0, 1.0);
    }
    if (monotone_ && !values_nondecreasing(kValueTol))
      throw InvalidArgument("grid function: flagged monotone but values decrease along an axis");
  }

  GridFunction(const Grid& grid, int order, std::vector<double> values, bool monotone = false)
      : GridFunction(std::make_shared<const Grid>(grid), order, std::move(values), monotone) {}

  [[nodiscard]] const Grid& grid() const { return *grid_; }
  [[nodiscard]] const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] bool monotone() const { return monotone_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] std::size_t dim() const { return grid_->dim(); }

  /// Checks the stored values for monotonicity along every grid direction.
  [[nodiscard]] bool values_nondecreasing(double tol = 0.0) const {
    const Grid& g = *grid_;
    const std::size_t count = values_.size();
    for (std::size_t flat = 0; flat < count; ++flat) {
      std::size_t rem = flat;
      for (std::size_t d = 0; d < g.dim(); ++d) {
        const std::size_t extent = order_ == 0 ? g.cells_on_axis(d) : g.nodes_on_axis(d);
        const std::size_t stride = order_ == 0 ? g.cell_stride(d) : g.node_stride(d);
        const std::size_t i = rem % extent;
        rem /= extent;
        if (i + 1 < extent && values_[flat + stride] < values_[flat] - tol) return false;
      }
    }
    return true;
  }

  [[nodiscard]] double operator()(std::span<const double> x) const { return eval(x); }

  [[nodiscard]] double eval(std::span<const double> x) const {
    const Grid& g = *grid_;
    if (!g.domain().contains(x)) throw OutOfDomain("eval: point outside the domain");
    return order_ == 1 ? eval_linear(x) : eval_constant(x);
  }

  /// Value at a node (order 1) or the usc value at that node (order 0).
  [[nodiscard]] double node_value(std::size_t node) const {
    if (order_ == 1) return values_[node];
    return eval(grid_->node(node));
  }

  /// Affine weights of the order-1 interpolant at `x`. Zero weights dropped.
  [[nodiscard]] std::vector<NodeWeight> interpolation_weights(std::span<const double> x) const {
    return interpolation_weights(*grid_, x);
  }

  static std::vector<NodeWeight> interpolation_weights(const Grid& g, std::span<const double> x) {
    if (!g.domain().contains(x)) throw OutOfDomain("interpolation: point outside the domain");
    const std::size_t m = g.dim();
    std::array<double, kMaxDim> t{};
    std::array<std::size_t, kMaxDim> perm{};
    std::size_t base = 0;
    for (std::size_t d = 0; d < m; ++d) {
      const std::size_t c = g.locate_axis(d, x[d]);
      const auto& a = g.axis(d);
      t[d] = std::clamp((x[d] - a[c]) / (a[c + 1] - a[c]), 0.0, 1.0);
      base += c * g.node_stride(d);
      perm[d] = d;
    }
    std::sort(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(m),
              [&](std::size_t a, std::size_t b) { return t[a] > t[b] || (t[a] == t[b] && a < b); });
    std::vector<NodeWeight> w;
    w.reserve(m + 1);
    std::size_t node = base;
    double prev = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double tk = t[perm[k]];
      if (prev - tk > 0.0) w.push_back({node, prev - tk});
      node += g.node_stride(perm[k]);
      prev = tk;
    }
    if (prev > 0.0) w.push_back({node, prev});
    return w;
  }

  /// Exact supremum over a rectangle made of whole grid cells; for order 0
  /// the maximum of the cell values inside it.
  [[nodiscard]] double cell_sup(const Rect& rect) const {
    const Grid& g = *grid_;
    if (monotone_) {
      if (order_ == 1) return eval(rect.upper);
      Point inner(rect.upper);
      for (std::size_t d = 0; d < dim(); ++d) inner[d] = 0.5 * (rect.upper[d] + std::max(rect.lower[d], prev_node(d, rect.upper[d])));
      return eval_constant(inner);
    }
    std::vector<std::size_t> lo(dim()), hi(dim());
    for (std::size_t d = 0; d < dim(); ++d) {
      const auto& a = g.axis(d);
      lo[d] = static_cast<std::size_t>(std::lower_bound(a.begin(), a.end(), rect.lower[d]) - a.begin());
      hi[d] = static_cast<std::size_t>(std::lower_bound(a.begin(), a.end(), rect.upper[d]) - a.begin());
      if (order_ == 0) hi[d] = std::max(hi[d], lo[d] + 1) - 1; // cells lo..hi-1
    }
    double best = 0.0;
    std::vector<std::size_t> idx(lo);
    while (true) {
      best = std::max(best, order_ == 1 ? values_[g.node_index(idx)] : values_[g.cell_index(idx)]);
      std::size_t d = 0;
      for (; d < dim(); ++d) {
        if (idx[d] < hi[d]) {
          ++idx[d];
          break;
        }
        idx[d] = lo[d];
      }
      if (d == dim()) break;
    }
    return best;
  }

  /// Maximum of the function over the box [lo, hi] intersected with the domain.
  [[nodiscard]] double box_max(std::span<const double> lo, std::span<const double> hi) const {
    const Grid& g = *grid_;
    const Point a = g.clip(lo);
    const Point b = g.clip(hi);
    if (monotone_) return eval(b);
    if (order_ == 0) {
      // cells whose closure meets the box
      std::vector<std::size_t> clo(dim()), chi(dim());
      for (std::size_t d = 0; d < dim(); ++d) {
        const auto& ax = g.axis(d);
        auto first = static_cast<std::size_t>(std::lower_bound(ax.begin(), ax.end(), a[d]) - ax.begin());
        clo[d] = first == 0 ? 0 : first - 1;
        if (first < ax.size() && ax[first] > a[d] && first > 0) clo[d] = first - 1;
        auto last = static_cast<std::size_t>(std::upper_bound(ax.begin(), ax.end(), b[d]) - ax.begin());
        chi[d] = std::min(last, g.cells_on_axis(d)) - 1;
        chi[d] = std::max(chi[d], clo[d]);
      }
      return max_over_cells(clo, chi);
    }
    if (dim() == 1) {
      double best = std::max(eval(a), eval(b));
      const auto& ax = g.axis(0);
      for (std::size_t i = 0; i < ax.size(); ++i)
        if (ax[i] >= a[0] && ax[i] <= b[0]) best = std::max(best, values_[i]);
      return best;
    }
    if (dim() != 2) throw InvalidArgument("box_max: non-monotone order-1 functions supported for m <= 2");
    double best = 0.0;
    const std::size_t c0lo = g.locate_axis(0, a[0]), c0hi = g.locate_axis(0, b[0]);
    const std::size_t c1lo = g.locate_axis(1, a[1]), c1hi = g.locate_axis(1, b[1]);
    for (std::size_t j = c1lo; j <= c1hi; ++j) {
      for (std::size_t i = c0lo; i <= c0hi; ++i) {
        const std::size_t cell = i + j * g.cell_stride(1);
        for (int tri = 0; tri < 2; ++tri) {
          auto poly = triangle_polygon(cell, tri);
          poly = geometry::clip_box(poly, a[0], a[1], b[0], b[1]);
          for (const auto& p : poly) {
            const std::array<double, 2> q{std::clamp(p.x, a[0], b[0]), std::clamp(p.y, a[1], b[1])};
            best = std::max(best, eval_linear(q));
          }
        }
      }
    }
    return best;
  }

  /// Counter-clockwise polygon of triangle `tri` (0 lower, 1 upper) of a cell.
  [[nodiscard]] geometry::Polygon triangle_polygon(std::size_t cell, int tri) const {
    const Rect r = grid_->cell(cell);
    if (tri == 0) return {{r.lower[0], r.lower[1]}, {r.upper[0], r.lower[1]}, {r.upper[0], r.upper[1]}};
    return {{r.lower[0], r.lower[1]}, {r.upper[0], r.upper[1]}, {r.lower[0], r.upper[1]}};
  }

private:
  [[nodiscard]] double prev_node(std::size_t d, double x) const {
    const auto& a = grid_->axis(d);
    auto it = std::lower_bound(a.begin(), a.end(), x);
    return it == a.begin() ? a.front() : *(it - 1);
  }

  [[nodiscard]] double max_over_cells(std::span<const std::size_t> lo, std::span<const std::size_t> hi) const {
    const Grid& g = *grid_;
    double best = 0.0;
    std::vector<std::size_t> idx(lo.begin(), lo.end());
    while (true) {
      best = std::max(best, values_[g.cell_index(idx)]);
      std::size_t d = 0;
      for (; d < dim(); ++d) {
        if (idx[d] < hi[d]) {
          ++idx[d];
          break;
        }
        idx[d] = lo[d];
      }
      if (d == dim()) break;
    }
    return best;
  }

  [[nodiscard]] double eval_linear(std::span<const double> x) const {
    const Grid& g = *grid_;
    const std::size_t m = g.dim();
    if (m == 1) {
      const std::size_t c = g.locate_axis(0, x[0]);
      const auto& a = g.axis(0);
      const double t = std::clamp((x[0] - a[c]) / (a[c + 1] - a[c]), 0.0, 1.0);
      return values_[c] + t * (values_[c + 1] - values_[c]);
    }
    if (m == 2) {
      const std::size_t c0 = g.locate_axis(0, x[0]);
      const std::size_t c1 = g.locate_axis(1, x[1]);
      const auto& a0 = g.axis(0);
      const auto& a1 = g.axis(1);
      const double s = std::clamp((x[0] - a0[c0]) / (a0[c0 + 1] - a0[c0]), 0.0, 1.0);
      const double t = std::clamp((x[1] - a1[c1]) / (a1[c1 + 1] - a1[c1]), 0.0, 1.0);
      const std::size_t n0 = g.nodes_on_axis(0);
      const std::size_t b = c0 + c1 * n0;
      const double v00 = values_[b], v10 = values_[b + 1], v01 = values_[b + n0], v11 = values_[b + n0 + 1];
      if (s >= t) return v00 + s * (v10 - v00) + t * (v11 - v10);
      return v00 + t * (v01 - v00) + s * (v11 - v01);
    }
    double acc = 0.0;
    for (const auto& nw : interpolation_weights(g, x)) acc += nw.weight * values_[nw.node];
    return acc;
  }

  [[nodiscard]] double eval_constant(std::span<const double> x) const {
    const Grid& g = *grid_;
    const std::size_t m = g.dim();
    std::array<std::size_t, kMaxDim> lo{}, hi{};
    for (std::size_t d = 0; d < m; ++d) {
      const std::size_t c = g.locate_axis(d, x[d]);
      hi[d] = c;
      lo[d] = (c > 0 && x[d] == g.axis(d)[c]) ? c - 1 : c;
    }
    if (monotone_) {
      std::size_t flat = 0;
      for (std::size_t d = 0; d < m; ++d) flat += hi[d] * g.cell_stride(d);
      return values_[flat];
    }
    return max_over_cells(std::span<const std::size_t>(lo.data(), m), std::span<const std::size_t>(hi.data(), m));
  }

  std::shared_ptr<const Grid> grid_;
  int order_ = 1;
  std::vector<double> values_;
  bool monotone_ = false;
};

// ---------------------------------------------------------------------------
// Analytic CDF specifications

struct CdfSpec;

struct UniformBox {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct DiracPoint {
  std::vector<double> location;
};

struct Mixture {
  std::vector<double> weights;
  std::vector<CdfSpec> components;
};

struct SampleSet {
  std::vector<Point> points;
  std::vector<double> weights; // empty means equal weights

  [[nodiscard]] std::size_t size() const { return points.size(); }
  [[nodiscard]] double weight(std::size_t i) const {
    return weights.empty() ? 1.0 / static_cast<double>(points.size()) : weights[i];
  }

  void validate(std::size_t dim) const {
    if (points.empty()) throw InvalidArgument("sample set: no samples");
    for (const auto& p : points)
      if (p.size() != dim) throw InvalidArgument("sample set: point dimension mismatch");
    if (!weights.empty()) {
      if (weights.size() != points.size()) throw InvalidArgument("sample set: one weight per point required");
      double s = 0.0;
      for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidArgument("sample set: weights must be nonnegative");
        s += w;
      }
      if (std::abs(s - 1.0) > 1e-9) throw InvalidArgument("sample set: weights must sum to 1");
    }
  }
};

struct EmpiricalSamples {
  SampleSet samples;
};

struct CdfSpec {
  std::variant<UniformBox, DiracPoint, Mixture, EmpiricalSamples> kind;
};

/// Exact value of the CDF described by `spec` at `x`.
inline double cdf_value(const CdfSpec& spec, std::span<const double> x) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformBox>) {
          double p = 1.0;
          for (std::size_t d = 0; d < x.size(); ++d)
            p *= std::clamp((x[d] - s.lower[d]) / (s.upper[d] - s.lower[d]), 0.0, 1.0);
          return p;
        } else if constexpr (std::is_same_v<T, DiracPoint>) {
          for (std::size_t d = 0; d < x.size(); ++d)
            if (x[d] < s.location[d]) return 0.0;
          return 1.0;
        } else if constexpr (std::is_same_v<T, Mixture>) {
          double acc = 0.0;
          for (std::size_t k = 0; k < s.components.size(); ++k) acc += s.weights[k] * cdf_value(s.components[k], x);
          return std::clamp(acc, 0.0, 1.0);
        } else {
          double acc = 0.0;
          const auto& pts = s.samples.points;
          for (std::size_t i = 0; i < pts.size(); ++i) {
            bool below = true;
            for (std::size_t d = 0; d < x.size() && below; ++d) below = pts[i][d] <= x[d];
            if (below) acc += s.samples.weight(i);
          }
          return std::clamp(acc, 0.0, 1.0);
        }
      },
      spec.kind);
}

/// Throws unless the spec is well formed with support inside `domain`.
inline void validate_spec(const CdfSpec& spec, const Domain& domain) {
  const std::size_t m = domain.dim();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformBox>) {
          if (s.lower.size() != m || s.upper.size() != m) throw InvalidArgument("uniform box: dimension mismatch");
          for (std::size_t d = 0; d < m; ++d) {
            if (!(s.lower[d] < s.upper[d])) throw InvalidArgument("uniform box: empty box");
            if (s.lower[d] < domain.lower[d] || s.upper[d] > domain.upper[d])
              throw InvalidArgument("uniform box: support outside the domain");
          }
        } else if constexpr (std::is_same_v<T, DiracPoint>) {
          if (s.location.size() != m) throw InvalidArgument("dirac: dimension mismatch");
          if (!domain.contains(s.location)) throw InvalidArgument("dirac: location outside the domain");
        } else if constexpr (std::is_same_v<T, Mixture>) {
          if (s.weights.size() != s.components.size() || s.weights.empty())
            throw InvalidArgument("mixture: one weight per component required");
          double sum = 0.0;
          for (double w : s.weights) {
            if (!(w >= 0.0)) throw InvalidArgument("mixture: weights must be nonnegative");
            sum += w;
          }
          if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("mixture: weights must sum to 1");
          for (const auto& c : s.components) validate_spec(c, domain);
        } else {
          s.samples.validate(m);
          for (const auto& p : s.samples.points)
            if (!domain.contains(p)) throw InvalidArgument("empirical: sample outside the domain");
        }
      },
      spec.kind);
}

inline CdfSpec uniform_box(std::vector<double> lo, std::vector<double> hi) {
  return CdfSpec{UniformBox{std::move(lo), std::move(hi)}};
}
inline CdfSpec dirac(std::vector<double> at) { return CdfSpec{DiracPoint{std::move(at)}}; }
inline CdfSpec mixture(std::vector<double> w, std::vector<CdfSpec> parts) {
  return CdfSpec{Mixture{std::move(w), std::move(parts)}};
}

/// Order-1 function whose node values are the exact CDF values.
inline GridFunction realize(const CdfSpec& spec, std::shared_ptr<const Grid> grid) {
  validate_spec(spec, grid->domain());
  std::vector<double> values(grid->node_count());
  for (std::size_t n = 0; n < values.size(); ++n) values[n] = cdf_value(spec, grid->node(n));
  return GridFunction(std::move(grid), 1, std::move(values), true);
}

inline GridFunction realize(const CdfSpec& spec, const Grid& grid) {
  return realize(spec, std::make_shared<const Grid>(grid));
}

/// Multivariate empirical CDF sampled at the grid nodes.
inline GridFunction empirical_cdf(const SampleSet& samples, std::shared_ptr<const Grid> grid) {
  const Grid& g = *grid;
  samples.validate(g.dim());
  for (const auto& p : samples.points)
    if (!g.domain().contains(p)) throw InvalidArgument("empirical_cdf: sample outside the domain");
  // Deposit each weight on the first node dominating the sample, then
  // accumulate along every axis (a discrete prefix sum).
  std::vector<double> mass(g.node_count(), 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < g.dim(); ++d) {
      const auto& a = g.axis(d);
      auto k = static_cast<std::size_t>(std::lower_bound(a.begin(), a.end(), samples.points[i][d]) - a.begin());
      flat += k * g.node_stride(d);
    }
    mass[flat] += samples.weight(i);
  }
  for (std::size_t d = 0; d < g.dim(); ++d) {
    const std::size_t stride = g.node_stride(d);
    const std::size_t extent = g.nodes_on_axis(d);
    for (std::size_t flat = 0; flat < mass.size(); ++flat) {
      const std::size_t i = (flat / stride) % extent;
      if (i > 0) mass[flat] += mass[flat - stride];
    }
  }
  for (double& v : mass) v = std::clamp(v, 0.0, 1.0);
  mass.back() = 1.0;
  return GridFunction(std::move(grid), 1, std::move(mass), true);
}

inline GridFunction empirical_cdf(const SampleSet& samples, const Grid& grid) {
  return empirical_cdf(samples, std::make_shared<const Grid>(grid));
}

/// Order-0 function with each cell value the supremum of `spec`'s CDF over
/// the closed cell, i.e. the value at its upper corner.
inline GridFunction upper_envelope(const CdfSpec& spec, std::shared_ptr<const Grid> grid) {
  validate_spec(spec, grid->domain());
  std::vector<double> values(grid->cell_count());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = cdf_value(spec, grid->cell(k).upper);
  return GridFunction(std::move(grid), 0, std::move(values), true);
}

/// Order-0 envelope of an arbitrary evaluator; the cell supremum is taken over
/// a `samples_per_axis`-point lattice of the closed cell (corners included).
inline GridFunction upper_envelope(const std::function<double(std::span<const double>)>& target,
                                   std::shared_ptr<const Grid> grid, std::size_t samples_per_axis = 9,
                                   bool target_monotone = false) {
  const Grid& g = *grid;
  if (samples_per_axis < 2) throw InvalidArgument("upper_envelope: at least 2 samples per axis");
  std::vector<double> values(g.cell_count());
  const std::size_t m = g.dim();
  std::size_t lattice = 1;
  for (std::size_t d = 0; d < m; ++d) lattice *= samples_per_axis;
  Point p(m);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Rect r = g.cell(k);
    if (target_monotone) {
      values[k] = std::clamp(target(r.upper), 0.0, 1.0);
      continue;
    }
    double best = 0.0;
    for (std::size_t s = 0; s < lattice; ++s) {
      std::size_t rem = s;
      for (std::size_t d = 0; d < m; ++d) {
        const double frac = static_cast<double>(rem % samples_per_axis) / static_cast<double>(samples_per_axis - 1);
        rem /= samples_per_axis;
        p[d] = r.lower[d] + frac * (r.upper[d] - r.lower[d]);
      }
      best = std::max(best, target(p));
    }
    values[k] = std::clamp(best, 0.0, 1.0);
  }
  bool mono = target_monotone;
  GridFunction f(std::move(grid), 0, std::move(values), false);
  if (mono || f.values_nondecreasing()) return GridFunction(f.grid_ptr(), 0, f.values(), true);
  return f;
}

/// Signed corner sum of `eval` over `rect`.
template <class Evaluator>
double delta_rect(const Evaluator& eval, const Rect& rect) {
  double acc = 0.0;
  for (std::size_t j = 0; j < rect.vertex_count(); ++j) acc += rect.sign(j) * eval(rect.vertex(j));
  return acc;
}

inline double delta_rect(const GridFunction& f, const Rect& rect) {
  return delta_rect([&](const Point& x) { return f.eval(x); }, rect);
}

/// Probability mass of grid cell `k` for an order-1 function (corner sum of
/// node values).
inline double cell_mass(const GridFunction& f, std::size_t k) {
  const Grid& g = f.grid();
  double acc = 0.0;
  const std::size_t corners = std::size_t{1} << g.dim();
  for (std::size_t j = 0; j < corners; ++j) acc += Rect::vertex_sign(j, g.dim()) * f.node_value(g.cell_vertex_node(k, j));
  return acc;
}

/// Mean of the distribution whose cell masses are the clipped corner sums,
/// with every mass placed at its cell centroid.
inline Point expected_value(const GridFunction& f) {
  const Grid& g = f.grid();
  std::vector<double> mass(g.cell_count());
  double total = 0.0;
  for (std::size_t k = 0; k < mass.size(); ++k) {
    mass[k] = std::max(0.0, cell_mass(f, k));
    total += mass[k];
  }
  if (!(total > 0.0)) throw DegenerateFunction("expected_value: total cell mass is not positive");
  Point mean(g.dim(), 0.0);
  for (std::size_t k = 0; k < mass.size(); ++k) {
    if (mass[k] == 0.0) continue;
    const Point c = g.cell(k).centroid();
    for (std::size_t d = 0; d < g.dim(); ++d) mean[d] += mass[k] / total * c[d];
  }
  return mean;
}

/// Resample an order-1 function onto another grid over the same domain.
inline GridFunction resample(const GridFunction& f, std::shared_ptr<const Grid> target) {
  if (!(f.grid().domain() == target->domain())) throw InvalidArgument("resample: domains differ");
  std::vector<double> values(target->node_count());
  for (std::size_t n = 0; n < values.size(); ++n) values[n] = f.eval(target->node(n));
  const bool mono = f.monotone();
  return GridFunction(std::move(target), 1, std::move(values), mono);
}

} // namespace hypodist
