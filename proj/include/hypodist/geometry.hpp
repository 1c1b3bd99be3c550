#pragma once

// Small planar helpers: convex polygons clipped against half-planes.

#include <array>
#include <cmath>
#include <vector>

namespace hypodist::geometry {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

using Polygon = std::vector<Vec2>;

/// Half-plane a*x + b*y <= c.
struct HalfPlane {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Sutherland-Hodgman against one half-plane. `poly` must be convex.
inline Polygon clip(const Polygon& poly, const HalfPlane& h) {
  Polygon out;
  if (poly.empty()) return out;
  out.reserve(poly.size() + 1);
  auto side = [&](const Vec2& p) { return h.a * p.x + h.b * p.y - h.c; };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % poly.size()];
    const double sp = side(p), sq = side(q);
    const bool pin = sp <= 0.0, qin = sq <= 0.0;
    if (pin) out.push_back(p);
    if (pin != qin) {
      const double t = sp / (sp - sq);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

inline Polygon clip_box(Polygon poly, double x0, double y0, double x1, double y1) {
  poly = clip(poly, {-1.0, 0.0, -x0});
  poly = clip(poly, {1.0, 0.0, x1});
  poly = clip(poly, {0.0, -1.0, -y0});
  poly = clip(poly, {0.0, 1.0, y1});
  return poly;
}

/// Half-planes bounding a counter-clockwise convex polygon.
inline std::vector<HalfPlane> edges_of(const Polygon& ccw) {
  std::vector<HalfPlane> hs;
  hs.reserve(ccw.size());
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const Vec2& p = ccw[i];
    const Vec2& q = ccw[(i + 1) % ccw.size()];
    // interior lies to the left of p->q: (q-p) x (r-p) >= 0
    const double a = q.y - p.y;
    const double b = -(q.x - p.x);
    hs.push_back({a, b, a * p.x + b * p.y});
  }
  return hs;
}

inline Polygon intersect(Polygon poly, const Polygon& convex_ccw) {
  for (const auto& h : edges_of(convex_ccw)) {
    poly = clip(poly, h);
    if (poly.empty()) break;
  }
  return poly;
}

/// Fixed-capacity convex polygon for hot loops. A convex polygon cut by k
/// lines has at most 4 + k vertices when it starts as a box.
struct SmallPolygon {
  static constexpr std::size_t kCap = 16;
  std::array<Vec2, kCap> v{};
  std::size_t n = 0;

  void push(const Vec2& p) {
    if (n < kCap) v[n++] = p;
  }
  [[nodiscard]] bool empty() const { return n < 3; }
};

inline SmallPolygon box_polygon(double x0, double y0, double x1, double y1) {
  SmallPolygon p;
  p.push({x0, y0});
  p.push({x1, y0});
  p.push({x1, y1});
  p.push({x0, y1});
  return p;
}

inline SmallPolygon clip(const SmallPolygon& poly, const HalfPlane& h) {
  SmallPolygon out;
  if (poly.n == 0) return out;
  for (std::size_t i = 0; i < poly.n; ++i) {
    const Vec2& p = poly.v[i];
    const Vec2& q = poly.v[(i + 1) % poly.n];
    const double sp = h.a * p.x + h.b * p.y - h.c;
    const double sq = h.a * q.x + h.b * q.y - h.c;
    const bool pin = sp <= 0.0, qin = sq <= 0.0;
    if (pin) out.push(p);
    if (pin != qin) {
      const double t = sp / (sp - sq);
      out.push({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

/// Splits `poly` by the line a*x + b*y = c into its two closed sides.
inline std::array<SmallPolygon, 2> split(const SmallPolygon& poly, const HalfPlane& h) {
  return {clip(poly, h), clip(poly, HalfPlane{-h.a, -h.b, -h.c})};
}

} // namespace hypodist::geometry
