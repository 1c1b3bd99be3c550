#pragma once

// Distances between hypographs: point-to-hypograph distance, the truncated
// rho-distance (lattice oracle), the hat-distance of monotone functions, its
// cell-corner surrogates eta+/eta-, and the exponentially weighted integral.
//
// The rho-ball is centred at the lower corner alpha of the domain.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "functions.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "parallel.hpp"

namespace hypodist {

struct RhoBall {
  double radius = 0.0;

  RhoBall() = default;
  explicit RhoBall(double r) : radius(r) {
    if (!std::isfinite(r) || r < 0.0) throw InvalidArgument("rho must be finite and nonnegative");
  }
};

struct DistanceReport {
  double value = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  /// Gap between the upper and lower panel sums of the ladder.
  double quadrature_term = 0.0;
  std::string method;
};

inline constexpr double kDefaultTol = 1e-8;

/// Default truncation radius: 1 + sup-norm diameter of the domain.
inline double default_rho(const Domain& s) { return 1.0 + s.diameter(); }

namespace detail {

inline constexpr double kCheckTol = 1e-12;

inline void require_same_domain(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid().domain() == g.grid().domain())) throw InvalidArgument("functions live on different domains");
}

inline void require_monotone(const GridFunction& f, const GridFunction& g) {
  if (!f.monotone() || !g.monotone()) throw InvalidArgument("hat-distance requires monotone functions");
}

/// Upper corner of S intersected with the rho-ball around alpha.
inline Point ball_top(const Domain& s, double rho) {
  Point top(s.dim());
  for (std::size_t d = 0; d < s.dim(); ++d) top[d] = std::min(s.upper[d], s.lower[d] + rho);
  return top;
}

/// Sorted coordinates with near-duplicates merged.
inline void sort_unique(std::vector<double>& v, double scale) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v)
    if (out.empty() || x - out.back() > 1e-13 * scale) out.push_back(x);
  v.swap(out);
}

} // namespace detail

/// Distance from a point (x, x0) to the hypograph of f along the ray
/// r -> x + r*1, evaluated for many heights at the same x.
///
/// dist((x, x0), hypo f) is the smallest r >= 0 with M(r) + r >= x0, where
/// M(r) is the maximum of f over the r-box around x. For monotone f that is
/// f(clip(x + r*1)), which is piecewise linear (order 1) or piecewise constant
/// (order 0) in r.
class HypoRay {
public:
  HypoRay(const GridFunction& f, std::span<const double> x) : f_(&f), x_(x.begin(), x.end()) {
    const Grid& g = f.grid();
    if (!g.domain().contains(x)) throw OutOfDomain("point_hypo_dist: spatial part outside the domain");
    if (!f.monotone()) return;
    const std::size_t m = g.dim();
    r_.push_back(0.0);
    for (std::size_t d = 0; d < m; ++d)
      for (double a : g.axis(d))
        if (a > x[d]) r_.push_back(a - x[d]);
    detail::sort_unique(r_, std::max(1.0, g.domain().diameter()));
    if (f.order() == 1 && m >= 2) add_simplex_kinks();
    Point p(m);
    auto value_at = [&](double r) {
      for (std::size_t d = 0; d < m; ++d) p[d] = std::min(x_[d] + r, g.domain().upper[d]);
      return f.eval(p);
    };
    right_.resize(r_.size());
    left_.resize(r_.size());
    for (std::size_t i = 0; i < r_.size(); ++i) right_[i] = value_at(r_[i]);
    for (std::size_t i = 0; i + 1 < r_.size(); ++i)
      left_[i] = f.order() == 1 ? right_[i + 1] : value_at(0.5 * (r_[i] + r_[i + 1]));
  }

  [[nodiscard]] double distance(double height) const {
    if (!f_->monotone()) return generic_distance(height);
    if (height <= right_[0]) return 0.0;
    const std::size_t k = r_.size();
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const double a = right_[i] + r_[i];
      if (a >= height) return r_[i];
      const double b = left_[i] + r_[i + 1];
      if (b >= height) return r_[i] + (height - a) / (b - a) * (r_[i + 1] - r_[i]);
    }
    const double last = right_[k - 1] + r_[k - 1];
    if (last >= height) return r_[k - 1];
    return height - right_[k - 1];
  }

private:
  void add_simplex_kinks() {
    const Grid& g = f_->grid();
    const std::size_t m = g.dim();
    std::vector<double> extra;
    for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
      const double ra = r_[i], rb = r_[i + 1];
      const double mid = 0.5 * (ra + rb);
      std::array<double, kMaxDim> base{}, h{};
      std::array<bool, kMaxDim> free{};
      for (std::size_t d = 0; d < m; ++d) {
        const double y = x_[d] + mid;
        free[d] = y < g.domain().upper[d];
        if (!free[d]) continue;
        const std::size_t c = g.locate_axis(d, y);
        base[d] = g.axis(d)[c];
        h[d] = g.axis(d)[c + 1] - base[d];
      }
      for (std::size_t d = 0; d < m; ++d) {
        if (!free[d]) continue;
        for (std::size_t e = d + 1; e < m; ++e) {
          if (!free[e] || h[d] == h[e]) continue;
          // (x_d + r - base_d)/h_d == (x_e + r - base_e)/h_e
          const double r = ((base[d] - x_[d]) / h[d] - (base[e] - x_[e]) / h[e]) / (1.0 / h[d] - 1.0 / h[e]);
          if (r > ra && r < rb) extra.push_back(r);
        }
      }
    }
    if (extra.empty()) return;
    r_.insert(r_.end(), extra.begin(), extra.end());
    detail::sort_unique(r_, std::max(1.0, g.domain().diameter()));
  }

  [[nodiscard]] double generic_distance(double height) const {
    const Grid& g = f_->grid();
    const std::size_t m = g.dim();
    Point lo(m), hi(m);
    auto reach = [&](double r) {
      for (std::size_t d = 0; d < m; ++d) {
        lo[d] = x_[d] - r;
        hi[d] = x_[d] + r;
      }
      return f_->box_max(lo, hi) + r;
    };
    if (reach(0.0) >= height) return 0.0;
    double a = 0.0, b = std::max(height, 0.0);
    for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
      const double mid = 0.5 * (a + b);
      if (reach(mid) >= height) b = mid;
      else a = mid;
    }
    return b;
  }

  const GridFunction* f_;
  Point x_;
  std::vector<double> r_;
  std::vector<double> right_; // M(r_i)
  std::vector<double> left_;  // limit of M at r_{i+1} from the left
};

/// Distance (sup-norm on S x R) from xbar = (x, x0) to hypo f.
inline double point_hypo_dist(const GridFunction& f, std::span<const double> xbar) {
  const std::size_t m = f.dim();
  if (xbar.size() != m + 1) throw InvalidArgument("point_hypo_dist: expected a point of dimension m+1");
  HypoRay ray(f, xbar.first(m));
  return ray.distance(xbar[m]);
}

struct OracleResult {
  double value = 0.0;
  /// Rigorous bound on the gap to the true maximum (the lattice spacing; the
  /// objective is 2-Lipschitz and every point lies within half a spacing).
  double slack = 0.0;
  std::size_t samples_per_axis = 0;
};

/// Lattice maximum of |dist(xbar, hypo f) - dist(xbar, hypo g)| over the
/// rho-ball. Heights below zero contribute nothing since both functions are
/// nonnegative.
inline OracleResult dl_rho_oracle_report(const GridFunction& f, const GridFunction& g, RhoBall rho,
                                         std::size_t samples_per_axis) {
  detail::require_same_domain(f, g);
  if (samples_per_axis < 2) throw InvalidArgument("dl_rho_oracle: at least 2 samples per axis");
  const Domain& s = f.grid().domain();
  const std::size_t m = s.dim();
  const Point top = detail::ball_top(s, rho.radius);
  const std::size_t n = samples_per_axis;
  const double denom = static_cast<double>(n - 1);
  OracleResult res;
  res.samples_per_axis = n;
  res.slack = rho.radius / denom;
  for (std::size_t d = 0; d < m; ++d) res.slack = std::max(res.slack, (top[d] - s.lower[d]) / denom);
  if (rho.radius == 0.0) return res;

  std::size_t columns = 1;
  for (std::size_t d = 0; d < m; ++d) columns *= n;
  std::vector<double> best(columns, 0.0);
  parallel_for(columns, [&](std::size_t c) {
    Point x(m);
    std::size_t rem = c;
    for (std::size_t d = 0; d < m; ++d) {
      x[d] = s.lower[d] + static_cast<double>(rem % n) / denom * (top[d] - s.lower[d]);
      rem /= n;
    }
    const HypoRay rf(f, x), rg(g, x);
    double b = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double h = static_cast<double>(j) / denom * rho.radius;
      b = std::max(b, std::abs(rf.distance(h) - rg.distance(h)));
    }
    best[c] = b;
  });
  res.value = *std::max_element(best.begin(), best.end());
  return res;
}

inline double dl_rho_oracle(const GridFunction& f, const GridFunction& g, RhoBall rho, std::size_t samples_per_axis) {
  return dl_rho_oracle_report(f, g, rho, samples_per_axis).value;
}

namespace detail {

/// One direction of the hat-distance test:
/// f(clip(x + eta*1)) + eta >= min(g(x), rho) for every x in S within the ball.
///
/// Both sides are piecewise polynomial on known pieces, so the infimum of the
/// difference is found at finitely many points:
///  - g of order 0: the lower corners of g's cells (where g jumps up and the
///    shifted f is smallest),
///  - f of order 0: per cell of f, its shifted region against the supremum of
///    g at the region's upper corner,
///  - both of order 1: vertices of the overlay of both triangulations and the
///    level line g = rho (m <= 2), or the product lattice of all breakpoints
///    (m >= 3).
class KenmochiSide {
public:
  KenmochiSide(const GridFunction& f, const GridFunction& g, double rho, double eta)
      : f_(f), g_(g), rho_(rho), eta_(eta), dom_(f.grid().domain()), top_(ball_top(dom_, rho)),
        m_(dom_.dim()), shifted_(m_) {}

  [[nodiscard]] bool holds() {
    if (rho_ == 0.0) return true;
    if (g_.order() == 0) return check_g_constant();
    if (f_.order() == 0) return check_f_constant();
    if (m_ == 1) return check_linear_1d();
    if (m_ == 2) return check_linear_2d();
    return check_lattice();
  }

private:
  double shifted_f(std::span<const double> x) {
    for (std::size_t d = 0; d < m_; ++d) shifted_[d] = std::min(x[d] + eta_, dom_.upper[d]);
    return f_.eval(shifted_);
  }

  [[nodiscard]] bool ok(double fval, double gval) const { return fval + eta_ >= std::min(gval, rho_) - kCheckTol; }

  bool ok_at(std::span<const double> x) { return ok(shifted_f(x), g_.eval(x)); }

  [[nodiscard]] bool in_ball(std::span<const double> x) const {
    for (std::size_t d = 0; d < m_; ++d)
      if (x[d] > top_[d]) return false;
    return true;
  }

  bool check_g_constant() {
    const Grid& gg = g_.grid();
    for (std::size_t n = 0; n < gg.node_count(); ++n) {
      const Point x = gg.node(n);
      if (in_ball(x) && !ok_at(x)) return false;
    }
    return true;
  }

  bool check_f_constant() {
    const Grid& fg = f_.grid();
    Point corner(m_);
    for (std::size_t k = 0; k < fg.cell_count(); ++k) {
      std::size_t rem = k;
      bool empty = false;
      for (std::size_t d = 0; d < m_ && !empty; ++d) {
        const std::size_t c = rem % fg.cells_on_axis(d);
        rem /= fg.cells_on_axis(d);
        const double lo = fg.axis(d)[c] - eta_;
        const bool last = c + 1 == fg.cells_on_axis(d);
        const double hi = last ? std::numeric_limits<double>::infinity() : fg.axis(d)[c + 1] - eta_;
        if (std::max(lo, dom_.lower[d]) > top_[d] || hi <= dom_.lower[d]) empty = true;
        corner[d] = std::min(hi, top_[d]);
      }
      if (empty) continue;
      if (!ok(f_.values()[k], g_.eval(corner))) return false;
    }
    return true;
  }

  std::vector<double> breakpoints(std::size_t d) const {
    std::vector<double> c{dom_.lower[d], top_[d]};
    for (double a : g_.grid().axis(d))
      if (a > dom_.lower[d] && a < top_[d]) c.push_back(a);
    for (double a : f_.grid().axis(d)) {
      const double b = a - eta_;
      if (b > dom_.lower[d] && b < top_[d]) c.push_back(b);
    }
    sort_unique(c, std::max(1.0, dom_.upper[d] - dom_.lower[d]));
    return c;
  }

  bool check_linear_1d() {
    std::vector<double> c = breakpoints(0);
    std::vector<double> extra;
    double prev = g_.eval(std::span<const double>(&c[0], 1)) - rho_;
    for (std::size_t i = 1; i < c.size(); ++i) {
      const double cur = g_.eval(std::span<const double>(&c[i], 1)) - rho_;
      if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) extra.push_back(c[i - 1] + prev / (prev - cur) * (c[i] - c[i - 1]));
      prev = cur;
    }
    c.insert(c.end(), extra.begin(), extra.end());
    for (double x : c) {
      const double xc = std::clamp(x, dom_.lower[0], top_[0]);
      if (!ok_at(std::span<const double>(&xc, 1))) return false;
    }
    return true;
  }

  bool check_linear_2d() {
    using geometry::HalfPlane;
    using geometry::SmallPolygon;
    const std::vector<double> c0 = breakpoints(0), c1 = breakpoints(1);
    const Grid& gg = g_.grid();
    const Grid& fg = f_.grid();
    const auto& gv = g_.values();
    const std::size_t gn0 = gg.nodes_on_axis(0);
    const bool point0 = c0.size() == 1, point1 = c1.size() == 1;
    if (point0 || point1) return check_lattice();

    std::array<SmallPolygon, 8> pieces{};
    std::array<SmallPolygon, 8> next{};
    std::array<double, 2> q{};
    for (std::size_t j = 0; j + 1 < c1.size(); ++j) {
      for (std::size_t i = 0; i + 1 < c0.size(); ++i) {
        const double x0 = c0[i], x1 = c0[i + 1], y0 = c1[j], y1 = c1[j + 1];
        // both sides are monotone, so the box corners bound the whole box
        q[0] = x0;
        q[1] = y0;
        const double f_low = shifted_f(q);
        q[0] = x1;
        q[1] = y1;
        if (ok(f_low, g_.eval(q))) continue;
        const double px = 0.5 * (x0 + x1), py = 0.5 * (y0 + y1);
        std::size_t count = 1;
        pieces[0] = geometry::box_polygon(x0, y0, x1, y1);

        // g's diagonal
        const std::size_t gi = gg.locate_axis(0, px), gj = gg.locate_axis(1, py);
        const double ga0 = gg.axis(0)[gi], gb0 = gg.axis(0)[gi + 1];
        const double ga1 = gg.axis(1)[gj], gb1 = gg.axis(1)[gj + 1];
        const double gh0 = gb0 - ga0, gh1 = gb1 - ga1;
        const HalfPlane gdiag{gh1, -gh0, gh1 * ga0 - gh0 * ga1};
        count = split_all(pieces, count, next, gdiag);

        // shifted f's diagonal, unless a coordinate is clipped in this box
        if (px + eta_ < dom_.upper[0] && py + eta_ < dom_.upper[1]) {
          const std::size_t fi = fg.locate_axis(0, px + eta_), fj = fg.locate_axis(1, py + eta_);
          const double fa0 = fg.axis(0)[fi] - eta_, fb0 = fg.axis(0)[fi + 1] - eta_;
          const double fa1 = fg.axis(1)[fj] - eta_, fb1 = fg.axis(1)[fj + 1] - eta_;
          const double fh0 = fb0 - fa0, fh1 = fb1 - fa1;
          count = split_all(pieces, count, next, HalfPlane{fh1, -fh0, fh1 * fa0 - fh0 * fa1});
        }

        // level line g = rho on g's triangle of each piece
        const std::size_t gb = gi + gj * gn0;
        const double v00 = gv[gb], v10 = gv[gb + 1], v01 = gv[gb + gn0], v11 = gv[gb + gn0 + 1];
        std::size_t out = 0;
        for (std::size_t k = 0; k < count; ++k) {
          const SmallPolygon& p = pieces[k];
          double cx = 0.0, cy = 0.0;
          for (std::size_t v = 0; v < p.n; ++v) {
            cx += p.v[v].x;
            cy += p.v[v].y;
          }
          cx /= static_cast<double>(p.n);
          cy /= static_cast<double>(p.n);
          const bool lower = (cx - ga0) / gh0 >= (cy - ga1) / gh1;
          const double a = lower ? (v10 - v00) / gh0 : (v11 - v01) / gh0;
          const double b = lower ? (v11 - v10) / gh1 : (v01 - v00) / gh1;
          const double c = v00 - a * ga0 - b * ga1;
          double lo = std::numeric_limits<double>::infinity(), hi = -lo;
          for (std::size_t v = 0; v < p.n; ++v) {
            const double gvv = a * p.v[v].x + b * p.v[v].y + c;
            lo = std::min(lo, gvv);
            hi = std::max(hi, gvv);
          }
          if (lo < rho_ && hi > rho_ && out + 2 <= next.size()) {
            const auto halves = geometry::split(p, HalfPlane{a, b, rho_ - c});
            for (const auto& hpoly : halves)
              if (hpoly.n > 0) next[out++] = hpoly;
          } else if (out < next.size()) {
            next[out++] = p;
          }
        }
        for (std::size_t k = 0; k < out; ++k) {
          const SmallPolygon& p = next[k];
          for (std::size_t v = 0; v < p.n; ++v) {
            q[0] = std::clamp(p.v[v].x, x0, x1);
            q[1] = std::clamp(p.v[v].y, y0, y1);
            if (!ok_at(q)) return false;
          }
        }
      }
    }
    return true;
  }

  static std::size_t split_all(std::array<geometry::SmallPolygon, 8>& pieces, std::size_t count,
                               std::array<geometry::SmallPolygon, 8>& scratch, const geometry::HalfPlane& h) {
    std::size_t out = 0;
    for (std::size_t k = 0; k < count; ++k) {
      const auto halves = geometry::split(pieces[k], h);
      for (const auto& p : halves)
        if (p.n > 0 && out < scratch.size()) scratch[out++] = p;
    }
    for (std::size_t k = 0; k < out; ++k) pieces[k] = scratch[k];
    return out;
  }

  bool check_lattice() {
    std::vector<std::vector<double>> c(m_);
    std::size_t total = 1;
    for (std::size_t d = 0; d < m_; ++d) {
      c[d] = breakpoints(d);
      total *= c[d].size();
    }
    Point x(m_);
    for (std::size_t t = 0; t < total; ++t) {
      std::size_t rem = t;
      for (std::size_t d = 0; d < m_; ++d) {
        x[d] = c[d][rem % c[d].size()];
        rem /= c[d].size();
      }
      if (!ok_at(x)) return false;
    }
    return true;
  }

  const GridFunction& f_;
  const GridFunction& g_;
  double rho_;
  double eta_;
  const Domain& dom_;
  Point top_;
  std::size_t m_;
  Point shifted_;
};

} // namespace detail

/// True iff eta satisfies both monotone hat-distance inequalities on the
/// rho-ball.
inline bool kenmochi_ok(const GridFunction& f, const GridFunction& g, RhoBall rho, double eta) {
  detail::require_same_domain(f, g);
  detail::require_monotone(f, g);
  if (!(eta >= 0.0)) throw InvalidArgument("kenmochi_ok: eta must be nonnegative");
  return detail::KenmochiSide(f, g, rho.radius, eta).holds() && detail::KenmochiSide(g, f, rho.radius, eta).holds();
}

/// Smallest feasible eta in [lo, hi] found by bisection; `hi` must be feasible.
template <class Feasible>
double bisect_eta(Feasible&& feasible, double tol, double lo = 0.0, double hi = 1.0) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  lo = std::max(lo, 0.0);
  if (lo <= 0.0 && feasible(0.0)) return 0.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

/// Hat-distance of monotone functions, accurate to `tol` from above.
inline double hat_dl_rho(const GridFunction& f, const GridFunction& g, RhoBall rho, double tol = kDefaultTol,
                         double lo = 0.0, double hi = 1.0) {
  detail::require_same_domain(f, g);
  detail::require_monotone(f, g);
  return bisect_eta([&](double eta) { return kenmochi_ok(f, g, rho, eta); }, tol, lo, hi);
}

namespace detail {

enum class EtaKind { plus, minus };

inline double eta_surrogate(const GridFunction& f, const GridFunction& g, RhoBall rho, const Grid& grid, double tol,
                            EtaKind kind) {
  require_same_domain(f, g);
  if (!(grid.domain() == f.grid().domain())) throw InvalidArgument("eta: partition and functions differ in domain");
  const Domain& s = grid.domain();
  const std::size_t m = s.dim();
  const Point top = ball_top(s, rho.radius);
  struct CellData {
    Point lower;
    double rhs_g; // min(g(.), rho) for the f-side inequality
    double rhs_f;
  };
  std::vector<CellData> cells;
  for (std::size_t k = 0; k < grid.cell_count(); ++k) {
    Rect r = grid.cell(k);
    bool inside = true;
    for (std::size_t d = 0; d < m; ++d) inside = inside && r.lower[d] <= top[d];
    if (!inside) continue;
    double gv, fv;
    if (kind == EtaKind::plus) {
      gv = g.box_max(r.lower, r.upper);
      fv = f.box_max(r.lower, r.upper);
    } else {
      gv = g.eval(r.lower);
      fv = f.eval(r.lower);
    }
    cells.push_back({std::move(r.lower), std::min(gv, rho.radius), std::min(fv, rho.radius)});
  }
  Point lo(m), hi(m);
  auto reach = [&](const GridFunction& h, const Point& l, double eta) {
    for (std::size_t d = 0; d < m; ++d) {
      lo[d] = l[d] - eta;
      hi[d] = l[d] + eta;
    }
    if (h.monotone()) return h.eval(grid.clip(hi));
    return h.box_max(lo, hi);
  };
  auto feasible = [&](double eta) {
    for (const auto& c : cells) {
      if (reach(f, c.lower, eta) + eta < c.rhs_g - kCheckTol) return false;
      if (reach(g, c.lower, eta) + eta < c.rhs_f - kCheckTol) return false;
    }
    return true;
  };
  return bisect_eta(feasible, tol);
}

} // namespace detail

/// Upper surrogate: cell lower corners on the left, cell suprema in the min.
inline double eta_plus(const GridFunction& f, const GridFunction& g, RhoBall rho, const Grid& grid,
                       double tol = kDefaultTol) {
  return detail::eta_surrogate(f, g, rho, grid, tol, detail::EtaKind::plus);
}

/// Lower surrogate: cell lower corners on both sides.
inline double eta_minus(const GridFunction& f, const GridFunction& g, RhoBall rho, const Grid& grid,
                        double tol = kDefaultTol) {
  return detail::eta_surrogate(f, g, rho, grid, tol, detail::EtaKind::minus);
}

/// Radius beyond which the truncated distances no longer change: the ball
/// then covers S and every function value.
inline double saturation_radius(const Domain& s) { return std::max(s.diameter(), 1.0); }

/// Hypo-distance from hat-distances on a rho ladder.
///
/// The value uses a composite midpoint rule with exact exponential panel
/// weights on [0, rbar], integrand (hat(rho) + hat(2 rho))/2. Beyond rbar the
/// truncated distance is constant and equal to hat(rbar), so the tail is
/// exact. Bounds intersect the pointwise estimates
///   hat(rho) e^-rho <= dl <= e^-rho + (1 - e^-rho) hat(2 rho)
/// with the panel brackets hat(a_i) <= dl_rho <= hat(2 b_i).
inline DistanceReport hypo_dist_estimate(const GridFunction& f, const GridFunction& g, std::size_t quad_points = 64,
                                         double tol = kDefaultTol) {
  detail::require_same_domain(f, g);
  detail::require_monotone(f, g);
  if (quad_points < 2) throw InvalidArgument("hypo_dist_estimate: at least 2 quadrature points");
  const Domain& s = f.grid().domain();
  const double rbar = saturation_radius(s);
  const std::size_t p = quad_points;
  const std::size_t top = 2 * p;
  auto t = [&](std::size_t j) { return rbar * static_cast<double>(j) / static_cast<double>(top); };

  std::vector<double> hat(top + 1, -1.0);
  hat[0] = hat_dl_rho(f, g, RhoBall(0.0), tol);
  hat[top] = hat_dl_rho(f, g, RhoBall(rbar), tol);
  // hat is nondecreasing in rho: fill the ladder by bisection on the index,
  // reusing neighbours as brackets and copying flat stretches.
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, top}};
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    stack.pop_back();
    if (b - a <= 1) continue;
    if (hat[b] - hat[a] <= tol) {
      for (std::size_t j = a + 1; j < b; ++j) hat[j] = hat[b];
      continue;
    }
    const std::size_t mid = (a + b) / 2;
    hat[mid] = hat_dl_rho(f, g, RhoBall(t(mid)), tol, std::max(0.0, hat[a] - tol), hat[b]);
    stack.push_back({a, mid});
    stack.push_back({mid, b});
  }
  auto hat2 = [&](std::size_t j) { return hat[std::min(2 * j, top)]; };

  const double tail = hat[top] * std::exp(-rbar);
  double value = tail, quad_lo = tail, quad_hi = tail;
  for (std::size_t i = 0; i < p; ++i) {
    const double w = std::exp(-t(2 * i)) - std::exp(-t(2 * i + 2));
    value += w * 0.5 * (hat[2 * i + 1] + hat2(2 * i + 1));
    quad_lo += w * hat[2 * i];
    quad_hi += w * hat2(2 * i + 2);
  }
  double point_lo = 0.0, point_hi = 1.0;
  for (std::size_t j = 0; j <= top; ++j) {
    const double e = std::exp(-t(j));
    point_lo = std::max(point_lo, hat[j] * e);
    point_hi = std::min(point_hi, e + (1.0 - e) * hat2(j));
  }
  DistanceReport rep;
  rep.method = "hat-ladder-midpoint";
  rep.quadrature_term = quad_hi - quad_lo;
  // ladder values sit at most tol above the true hat-distance
  rep.lower_bound = std::clamp(std::max(point_lo, quad_lo) - tol, 0.0, 1.0);
  rep.upper_bound = std::clamp(std::min(point_hi, quad_hi), 0.0, 1.0);
  if (rep.upper_bound < rep.lower_bound) rep.upper_bound = rep.lower_bound;
  rep.value = std::clamp(value, rep.lower_bound, rep.upper_bound);
  return rep;
}

/// Hypo-distance by integrating the lattice oracle (midpoint rule plus the
/// saturated tail). Independent of the hat-distance machinery.
inline DistanceReport hypo_dist_oracle(const GridFunction& f, const GridFunction& g, std::size_t panels = 32,
                                       std::size_t samples_per_axis = 101) {
  detail::require_same_domain(f, g);
  if (panels < 1) throw InvalidArgument("hypo_dist_oracle: at least one panel");
  const double rbar = saturation_radius(f.grid().domain());
  double value = 0.0, slack = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = rbar * static_cast<double>(i) / static_cast<double>(panels);
    const double b = rbar * static_cast<double>(i + 1) / static_cast<double>(panels);
    const auto o = dl_rho_oracle_report(f, g, RhoBall(0.5 * (a + b)), samples_per_axis);
    const double w = std::exp(-a) - std::exp(-b);
    value += w * o.value;
    slack = std::max(slack, o.slack);
  }
  const auto o = dl_rho_oracle_report(f, g, RhoBall(rbar), samples_per_axis);
  value += o.value * std::exp(-rbar);
  DistanceReport rep;
  rep.method = "oracle-midpoint";
  rep.quadrature_term = 2.0 * slack;
  rep.value = value;
  rep.lower_bound = std::max(0.0, value - slack);
  rep.upper_bound = std::min(1.0, value + slack);
  return rep;
}

} // namespace hypodist
