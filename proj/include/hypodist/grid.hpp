#pragma once

// Rectangular domains and the box partitions induced by per-axis node lists.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace hypodist {

using Point = std::vector<double>;

/// Largest dimension supported by the fixed-size scratch buffers.
inline constexpr std::size_t kMaxDim = 8;

struct Domain {
  std::vector<double> lower;
  std::vector<double> upper;

  Domain() = default;
  Domain(std::vector<double> lo, std::vector<double> hi)
      : lower(std::move(lo)), upper(std::move(hi)) {
    validate();
  }

  [[nodiscard]] std::size_t dim() const { return lower.size(); }

  /// Largest side length, i.e. the sup-norm diameter.
  [[nodiscard]] double diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) d = std::max(d, upper[i] - lower[i]);
    return d;
  }

  [[nodiscard]] bool contains(std::span<const double> x) const {
    if (x.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
      if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
    return true;
  }

  void validate() const {
    if (lower.empty() || lower.size() != upper.size())
      throw InvalidArgument("domain: lower/upper must be nonempty and of equal length");
    if (lower.size() > kMaxDim)
      throw InvalidArgument("domain: dimension exceeds " + std::to_string(kMaxDim));
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
        throw InvalidArgument("domain: bounds must be finite");
      if (!(lower[i] < upper[i]))
        throw InvalidArgument("domain: lower bound must be below upper bound on every axis");
    }
  }

  friend bool operator==(const Domain&, const Domain&) = default;
};

/// One cell of a box partition with its sign-annotated corners.
///
/// Corner `j` uses the bit pattern of `j`: bit d set means the corner sits at
/// the upper bound on axis d. Its sign is +1 when the number of coordinates at
/// a lower bound is even.
struct Rect {
  std::vector<double> lower;
  std::vector<double> upper;

  [[nodiscard]] std::size_t dim() const { return lower.size(); }
  [[nodiscard]] std::size_t vertex_count() const { return std::size_t{1} << dim(); }

  [[nodiscard]] Point vertex(std::size_t j) const {
    Point v(dim());
    for (std::size_t d = 0; d < dim(); ++d) v[d] = (j >> d) & 1U ? upper[d] : lower[d];
    return v;
  }

  [[nodiscard]] int sign(std::size_t j) const { return vertex_sign(j, dim()); }

  [[nodiscard]] Point centroid() const {
    Point c(dim());
    for (std::size_t d = 0; d < dim(); ++d) c[d] = 0.5 * (lower[d] + upper[d]);
    return c;
  }

  static int vertex_sign(std::size_t j, std::size_t m) {
    const auto at_lower = m - static_cast<std::size_t>(std::popcount(j));
    return at_lower % 2 == 0 ? 1 : -1;
  }
};

struct Location {
  std::size_t cell = 0;
  std::vector<double> local; // in [0,1]^m
};

class Grid {
public:
  Grid() = default;

  Grid(Domain domain, std::vector<std::vector<double>> axes)
      : domain_(std::move(domain)), axes_(std::move(axes)) {
    domain_.validate();
    if (axes_.size() != domain_.dim()) throw InvalidArgument("grid: one axis per dimension required");
    for (std::size_t d = 0; d < axes_.size(); ++d) {
      const auto& a = axes_[d];
      if (a.size() < 2) throw InvalidArgument("grid: every axis needs at least 2 nodes");
      if (a.front() != domain_.lower[d] || a.back() != domain_.upper[d])
        throw InvalidArgument("grid: axis must start at the lower and end at the upper bound");
      for (std::size_t i = 1; i < a.size(); ++i)
        if (!(a[i] > a[i - 1])) throw InvalidArgument("grid: axis must be strictly increasing");
    }
    node_stride_.assign(dim(), 1);
    cell_stride_.assign(dim(), 1);
    for (std::size_t d = 1; d < dim(); ++d) {
      node_stride_[d] = node_stride_[d - 1] * axes_[d - 1].size();
      cell_stride_[d] = cell_stride_[d - 1] * (axes_[d - 1].size() - 1);
    }
  }

  [[nodiscard]] const Domain& domain() const { return domain_; }
  [[nodiscard]] std::size_t dim() const { return axes_.size(); }
  [[nodiscard]] const std::vector<std::vector<double>>& axes() const { return axes_; }
  [[nodiscard]] const std::vector<double>& axis(std::size_t d) const { return axes_[d]; }
  [[nodiscard]] std::size_t nodes_on_axis(std::size_t d) const { return axes_[d].size(); }
  [[nodiscard]] std::size_t cells_on_axis(std::size_t d) const { return axes_[d].size() - 1; }

  [[nodiscard]] std::size_t node_count() const {
    std::size_t n = 1;
    for (const auto& a : axes_) n *= a.size();
    return n;
  }
  [[nodiscard]] std::size_t cell_count() const {
    std::size_t n = 1;
    for (const auto& a : axes_) n *= a.size() - 1;
    return n;
  }

  [[nodiscard]] std::size_t node_stride(std::size_t d) const { return node_stride_[d]; }
  [[nodiscard]] std::size_t cell_stride(std::size_t d) const { return cell_stride_[d]; }

  /// Multi-index of a node; axis 0 varies fastest.
  [[nodiscard]] std::vector<std::size_t> node_multi_index(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t d = 0; d < dim(); ++d) {
      idx[d] = flat % axes_[d].size();
      flat /= axes_[d].size();
    }
    return idx;
  }
  [[nodiscard]] std::vector<std::size_t> cell_multi_index(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t d = 0; d < dim(); ++d) {
      idx[d] = flat % (axes_[d].size() - 1);
      flat /= axes_[d].size() - 1;
    }
    return idx;
  }
  [[nodiscard]] std::size_t node_index(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < dim(); ++d) flat += idx[d] * node_stride_[d];
    return flat;
  }
  [[nodiscard]] std::size_t cell_index(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < dim(); ++d) flat += idx[d] * cell_stride_[d];
    return flat;
  }

  [[nodiscard]] Point node(std::size_t flat) const {
    Point p(dim());
    for (std::size_t d = 0; d < dim(); ++d) {
      p[d] = axes_[d][flat % axes_[d].size()];
      flat /= axes_[d].size();
    }
    return p;
  }

  /// Flat index of the node at the lower corner of cell `cell`, plus the
  /// offset of corner bit-pattern `j`.
  [[nodiscard]] std::size_t cell_vertex_node(std::size_t cell, std::size_t j) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < dim(); ++d) {
      const std::size_t c = cell % (axes_[d].size() - 1);
      cell /= axes_[d].size() - 1;
      flat += (c + ((j >> d) & 1U)) * node_stride_[d];
    }
    return flat;
  }

  [[nodiscard]] Rect cell(std::size_t flat) const {
    Rect r;
    r.lower.resize(dim());
    r.upper.resize(dim());
    for (std::size_t d = 0; d < dim(); ++d) {
      const std::size_t c = flat % (axes_[d].size() - 1);
      flat /= axes_[d].size() - 1;
      r.lower[d] = axes_[d][c];
      r.upper[d] = axes_[d][c + 1];
    }
    return r;
  }

  /// Cell index along axis `d` containing coordinate `x`; at an interior node
  /// the cell starting at that node wins.
  [[nodiscard]] std::size_t locate_axis(std::size_t d, double x) const {
    const auto& a = axes_[d];
    auto it = std::upper_bound(a.begin(), a.end(), x);
    auto c = static_cast<std::size_t>(std::distance(a.begin(), it));
    if (c == 0) return 0;
    return std::min(c - 1, a.size() - 2);
  }

  [[nodiscard]] Location locate(std::span<const double> x) const {
    if (!domain_.contains(x)) throw OutOfDomain("locate: point outside the domain");
    Location loc;
    loc.local.resize(dim());
    for (std::size_t d = 0; d < dim(); ++d) {
      const std::size_t c = locate_axis(d, x[d]);
      loc.cell += c * cell_stride_[d];
      const double lo = axes_[d][c];
      const double hi = axes_[d][c + 1];
      loc.local[d] = std::clamp((x[d] - lo) / (hi - lo), 0.0, 1.0);
    }
    return loc;
  }

  /// Componentwise projection onto the domain.
  [[nodiscard]] Point clip(std::span<const double> x) const {
    Point p(x.begin(), x.end());
    for (std::size_t d = 0; d < dim(); ++d) p[d] = std::clamp(p[d], domain_.lower[d], domain_.upper[d]);
    return p;
  }

  [[nodiscard]] double mesh_size() const {
    double h = 0.0;
    for (const auto& a : axes_)
      for (std::size_t i = 1; i < a.size(); ++i) h = std::max(h, a[i] - a[i - 1]);
    return h;
  }

  /// All cells in lexicographic order (axis 0 fastest).
  [[nodiscard]] std::vector<Rect> cells() const {
    std::vector<Rect> out;
    out.reserve(cell_count());
    for (std::size_t k = 0; k < cell_count(); ++k) out.push_back(cell(k));
    return out;
  }

  /// Triangles of the main-diagonal split (m = 2 only): per cell the lower
  /// triangle {00, 10, 11} then the upper triangle {00, 01, 11}.
  [[nodiscard]] std::vector<std::array<std::size_t, 3>> triangles() const {
    if (dim() != 2) throw InvalidArgument("triangles: only defined for two-dimensional grids");
    std::vector<std::array<std::size_t, 3>> tris;
    tris.reserve(2 * cell_count());
    for (std::size_t k = 0; k < cell_count(); ++k) {
      const auto v00 = cell_vertex_node(k, 0), v10 = cell_vertex_node(k, 1);
      const auto v01 = cell_vertex_node(k, 2), v11 = cell_vertex_node(k, 3);
      tris.push_back({v00, v10, v11});
      tris.push_back({v00, v01, v11});
    }
    return tris;
  }

  /// FNV-1a over the axis coordinates; identifies a grid in file metadata.
  [[nodiscard]] std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint64_t v) {
      for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xffU;
        h *= 1099511628211ULL;
      }
    };
    mix(dim());
    for (const auto& a : axes_) {
      mix(a.size());
      for (double x : a) mix(std::bit_cast<std::uint64_t>(x));
    }
    return h;
  }

  friend bool operator==(const Grid& a, const Grid& b) { return a.axes_ == b.axes_ && a.domain_ == b.domain_; }

private:
  Domain domain_;
  std::vector<std::vector<double>> axes_;
  std::vector<std::size_t> node_stride_;
  std::vector<std::size_t> cell_stride_;
};

inline std::vector<double> uniform_axis(double lo, double hi, std::size_t nodes) {
  std::vector<double> a(nodes);
  const double n = static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) a[i] = lo + (hi - lo) * (static_cast<double>(i) / n);
  a.front() = lo;
  a.back() = hi;
  return a;
}

inline Grid build_grid(const Domain& domain, std::span<const std::size_t> nodes_per_axis) {
  domain.validate();
  if (nodes_per_axis.size() != domain.dim())
    throw InvalidArgument("build_grid: nodes_per_axis must match the domain dimension");
  std::vector<std::vector<double>> axes;
  for (std::size_t d = 0; d < domain.dim(); ++d) {
    if (nodes_per_axis[d] < 2) throw InvalidArgument("build_grid: at least 2 nodes per axis required");
    axes.push_back(uniform_axis(domain.lower[d], domain.upper[d], nodes_per_axis[d]));
  }
  return Grid(domain, std::move(axes));
}

inline Grid build_grid(const Domain& domain, std::size_t nodes_per_axis) {
  std::vector<std::size_t> n(domain.dim(), nodes_per_axis);
  return build_grid(domain, n);
}

/// Uniform grid with `cells` cells per axis.
inline Grid uniform_cells(const Domain& domain, std::size_t cells) { return build_grid(domain, cells + 1); }

/// Split every cell into factor^m congruent subcells.
inline Grid refine(const Grid& grid, std::size_t factor) {
  if (factor < 2) throw InvalidArgument("refine: factor must be at least 2");
  std::vector<std::vector<double>> axes;
  for (const auto& a : grid.axes()) {
    std::vector<double> r;
    r.reserve((a.size() - 1) * factor + 1);
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      r.push_back(a[i]);
      for (std::size_t s = 1; s < factor; ++s)
        r.push_back(a[i] + (a[i + 1] - a[i]) * (static_cast<double>(s) / static_cast<double>(factor)));
    }
    r.push_back(a.back());
    axes.push_back(std::move(r));
  }
  return Grid(grid.domain(), std::move(axes));
}

inline double mesh_size(const Grid& grid) { return grid.mesh_size(); }

/// Per-axis union of the node sets of two grids on the same domain.
inline Grid common_refinement(const Grid& a, const Grid& b) {
  if (a == b) return a;
  if (!(a.domain() == b.domain())) throw InvalidArgument("common_refinement: grids live on different domains");
  std::vector<std::vector<double>> axes;
  for (std::size_t d = 0; d < a.dim(); ++d) {
    std::vector<double> u;
    std::merge(a.axis(d).begin(), a.axis(d).end(), b.axis(d).begin(), b.axis(d).end(), std::back_inserter(u));
    const double scale = a.domain().upper[d] - a.domain().lower[d];
    std::vector<double> out;
    for (double x : u)
      if (out.empty() || x - out.back() > 1e-12 * scale) out.push_back(x);
    out.back() = a.domain().upper[d];
    axes.push_back(std::move(out));
  }
  return Grid(a.domain(), std::move(axes));
}

} // namespace hypodist
