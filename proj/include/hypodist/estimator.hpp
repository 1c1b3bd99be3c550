#pragma once

// Shape-constrained estimation of a CDF on a grid: minimise the eta+ surrogate
// distance to F0 subject to an eta+ ball of radius delta around G0. At a fixed
// eta this is a linear feasibility problem with a slack s on the ball rows;
// eta is found by bisection.

#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "functions.hpp"
#include "grid.hpp"
#include "lp.hpp"
#include "metrics.hpp"

namespace hypodist {

struct ShapeConstraints {
  bool monotone = true; // always imposed
  bool boundary_zero = true;
  bool boundary_one = true;
  bool distribution_condition = true;
  std::optional<double> bounded_growth;
};

struct EstimationProblem {
  GridFunction F0;
  GridFunction G0;
  double delta = 0.0;
  std::optional<double> rho; // defaults to 1 + diam(S)
  ShapeConstraints shape;
  double tol = 1e-8;
  std::size_t max_lp_iterations = 2'000'000;

  [[nodiscard]] const Grid& grid() const { return F0.grid(); }
  [[nodiscard]] double rho_value() const { return rho ? *rho : default_rho(grid().domain()); }

  void validate() const {
    if (!F0.grid_ptr() || !G0.grid_ptr()) throw InvalidArgument("estimation problem: missing F0 or G0");
    if (!(F0.grid() == G0.grid())) throw InvalidArgument("estimation problem: F0 and G0 must share the grid");
    if (F0.order() != 1 || G0.order() != 1) throw InvalidArgument("estimation problem: F0 and G0 must be order 1");
    if (!F0.monotone() || !G0.monotone()) throw InvalidArgument("estimation problem: F0 and G0 must be monotone");
    const std::size_t m = grid().dim();
    if (m != 1 && m != 2) throw InvalidArgument("estimation problem: only m = 1 or m = 2 is supported");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw InvalidArgument("estimation problem: delta must be >= 0");
    if (!(tol > 0.0)) throw InvalidArgument("estimation problem: tolerance must be positive");
    if (rho && (!(*rho >= 0.0) || !std::isfinite(*rho))) throw InvalidArgument("estimation problem: rho must be >= 0");
    if (shape.bounded_growth && !(*shape.bounded_growth >= 0.0))
      throw InvalidArgument("estimation problem: growth bound must be >= 0");
  }
};

struct EstimateStep {
  double eta = 0.0;
  double slack = 0.0;
  std::size_t lp_iterations = 0;
};

struct EstimateResult {
  GridFunction solution;
  double eta = 1.0;
  double slack = 0.0;
  std::vector<EstimateStep> history;
  double wall_seconds = 0.0;
  /// Set when the ambiguity set is empty: the eta reached by the returned
  /// solution within the smallest feasible relaxation.
  std::optional<double> relaxed_eta;
};

struct MinSlackResult {
  double slack = 0.0;
  GridFunction F;
  std::size_t iterations = 0;
  std::vector<BasisStatus> basis;
};

/// Index of the slack variable in the assembled model (after the nodes).
inline std::size_t slack_index(const Grid& grid) { return grid.node_count(); }

/// Builds the LP at a fixed eta. Variables: one per node in [0,1], then the
/// slack s >= 0 (cost 1). Row layout does not depend on eta, so a basis from
/// one eta can seed the next.
inline LpModel assemble_lp(const EstimationProblem& problem, double eta) {
  problem.validate();
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("assemble_lp: eta must lie in [0,1]");
  const Grid& g = problem.grid();
  const std::size_t m = g.dim();
  const std::size_t nodes = g.node_count();
  const double rho = problem.rho_value();
  const double delta = problem.delta;
  const Domain& dom = g.domain();
  const Point top = detail::ball_top(dom, rho);
  LpModel lp;

  for (std::size_t v = 0; v < nodes; ++v) {
    double lo = 0.0, hi = 1.0;
    const auto idx = g.node_multi_index(v);
    if (problem.shape.boundary_zero)
      for (std::size_t d = 0; d < m; ++d)
        if (idx[d] == 0) hi = 0.0;
    if (problem.shape.boundary_one && v + 1 == nodes) lo = hi = 1.0;
    if (lo > hi) throw ShapeInfeasible("assemble_lp: boundary conditions conflict at a node");
    lp.add_variable(lo, hi, 0.0, "v" + std::to_string(v));
  }
  const std::size_t s = lp.add_variable(0.0, kInfinity, 1.0, "s");

  // (a) monotonicity along grid edges
  for (std::size_t v = 0; v < nodes; ++v) {
    const auto idx = g.node_multi_index(v);
    for (std::size_t d = 0; d < m; ++d)
      if (idx[d] + 1 < g.nodes_on_axis(d))
        lp.add_constraint({{v + g.node_stride(d), 1.0}, {v, -1.0}}, Relation::ge, 0.0);
  }

  // (c) distribution condition per cell
  if (problem.shape.distribution_condition) {
    const std::size_t corners = std::size_t{1} << m;
    for (std::size_t k = 0; k < g.cell_count(); ++k) {
      std::vector<LpTerm> terms;
      for (std::size_t j = 0; j < corners; ++j)
        terms.push_back({g.cell_vertex_node(k, j), static_cast<double>(Rect::vertex_sign(j, m))});
      lp.add_constraint(std::move(terms), Relation::ge, 0.0);
    }
  }

  // (d) bounded growth on every edge of the triangulation
  if (problem.shape.bounded_growth) {
    const double L = *problem.shape.bounded_growth;
    auto edge = [&](std::size_t a, std::size_t b) {
      const Point pa = g.node(a), pb = g.node(b);
      double len = 0.0;
      for (std::size_t d = 0; d < m; ++d) len = std::max(len, std::abs(pa[d] - pb[d]));
      lp.add_range({{b, 1.0}, {a, -1.0}}, -L * len, L * len);
    };
    for (std::size_t v = 0; v < nodes; ++v) {
      const auto idx = g.node_multi_index(v);
      for (std::size_t d = 0; d < m; ++d)
        if (idx[d] + 1 < g.nodes_on_axis(d)) edge(v, v + g.node_stride(d));
      if (m == 2 && idx[0] + 1 < g.nodes_on_axis(0) && idx[1] + 1 < g.nodes_on_axis(1))
        edge(v, v + g.node_stride(0) + g.node_stride(1));
    }
  }

  // (e), (f) distance rows per cell whose lower corner lies in the ball
  const auto& f0 = problem.F0;
  const auto& g0 = problem.G0;
  Point p(m);
  auto shifted = [&](const Rect& r, double by) {
    for (std::size_t d = 0; d < m; ++d) p[d] = std::min(r.lower[d] + by, dom.upper[d]);
    return p;
  };
  auto interp_terms = [&](const Point& at) {
    std::vector<LpTerm> terms;
    for (const auto& w : GridFunction::interpolation_weights(g, at)) terms.push_back({w.node, w.weight});
    return terms;
  };
  for (std::size_t k = 0; k < g.cell_count(); ++k) {
    const Rect r = g.cell(k);
    bool inside = true;
    for (std::size_t d = 0; d < m; ++d) inside = inside && r.lower[d] <= top[d];
    if (!inside) continue;
    const std::size_t upper_node = g.cell_vertex_node(k, (std::size_t{1} << m) - 1);

    // (e) F(clip(l + eta)) + eta >= min(F0(u), rho)
    lp.add_constraint(interp_terms(shifted(r, eta)), Relation::ge, std::min(f0.eval(r.upper), rho) - eta);
    // (e) F0(clip(l + eta)) + eta >= min(F(u), rho)
    const double ce = f0.eval(shifted(r, eta)) + eta;
    if (ce >= rho) lp.add_range({{upper_node, 1.0}}, -kInfinity, kInfinity);
    else lp.add_constraint({{upper_node, 1.0}}, Relation::le, ce);

    // (f) F(clip(l + delta)) + delta + s >= min(G0(u), rho)
    auto terms = interp_terms(shifted(r, delta));
    terms.push_back({s, 1.0});
    lp.add_constraint(std::move(terms), Relation::ge, std::min(g0.eval(r.upper), rho) - delta);
    // (f) G0(clip(l + delta)) + delta + s >= min(F(u), rho)
    const double cf = g0.eval(shifted(r, delta)) + delta;
    if (cf >= rho) lp.add_range({{upper_node, 1.0}, {s, -1.0}}, -kInfinity, kInfinity);
    else lp.add_constraint({{upper_node, 1.0}, {s, -1.0}}, Relation::le, cf);
  }
  return lp;
}

/// Minimal ambiguity slack at a fixed eta, with the minimising function.
inline MinSlackResult min_slack(const EstimationProblem& problem, double eta,
                                const std::vector<BasisStatus>* warm_start = nullptr, LpSolver* solver = nullptr) {
  const LpModel lp = assemble_lp(problem, eta);
  LpOptions opt;
  opt.max_iterations = problem.max_lp_iterations;
  opt.warm_start = warm_start;
  SimplexSolver fallback;
  LpSolver& engine = solver ? *solver : fallback;
  LpSolution sol = engine.solve(lp, opt);
  if (sol.status == LpStatus::infeasible)
    throw ShapeInfeasible("min_slack: shape constraints admit no feasible function");
  if (sol.status == LpStatus::iteration_limit) throw IterationLimit("min_slack: LP iteration limit reached");
  if (sol.status == LpStatus::unbounded) throw ShapeInfeasible("min_slack: LP reported unbounded");
  const Grid& g = problem.grid();
  MinSlackResult res;
  res.slack = std::max(0.0, sol.x[slack_index(g)]);
  std::vector<double> values(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(g.node_count()));
  res.F = GridFunction(problem.F0.grid_ptr(), 1, std::move(values), true);
  res.iterations = sol.iterations;
  res.basis = std::move(sol.basis);
  return res;
}

/// Solves at eta = 1 first. If the minimal slack s* there is <= tol, bisects
/// for the smallest eta whose minimal slack is <= tol. Otherwise eta = 1 and
/// s = s* are reported, and among the functions attaining s* the one with the
/// smallest eta is returned (same bisection against the threshold s* + tol).
inline EstimateResult estimate(const EstimationProblem& problem, LpSolver* solver = nullptr) {
  problem.validate();
  const auto start = std::chrono::steady_clock::now();
  EstimateResult out;
  MinSlackResult best = min_slack(problem, 1.0, nullptr, solver);
  out.history.push_back({1.0, best.slack, best.iterations});
  const bool feasible = best.slack <= problem.tol;
  const double threshold = feasible ? problem.tol : best.slack + problem.tol;
  const double slack_at_one = best.slack;
  std::vector<BasisStatus> basis = best.basis;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > problem.tol) {
    const double mid = 0.5 * (lo + hi);
    MinSlackResult r;
    try {
      r = min_slack(problem, mid, &basis, solver);
    } catch (const ShapeInfeasible&) {
      // At eta < 1 the distance rows to F0 can conflict with the shape
      // rows on their own; that only says eta is too small.
      out.history.push_back({mid, kInfinity, 0});
      lo = mid;
      continue;
    }
    out.history.push_back({mid, r.slack, r.iterations});
    basis = r.basis;
    if (r.slack <= threshold) {
      hi = mid;
      best = std::move(r);
    } else {
      lo = mid;
    }
  }
  out.solution = std::move(best.F);
  if (feasible) {
    out.eta = hi;
    out.slack = best.slack;
  } else {
    out.eta = 1.0;
    out.slack = slack_at_one;
    out.relaxed_eta = hi;
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// Largest violation of the active linear shape constraints by a solution.
inline double shape_violation(const GridFunction& F, const ShapeConstraints& shape) {
  const Grid& g = F.grid();
  const auto& v = F.values();
  const std::size_t m = g.dim();
  double worst = 0.0;
  for (std::size_t n = 0; n < v.size(); ++n) {
    const auto idx = g.node_multi_index(n);
    for (std::size_t d = 0; d < m; ++d)
      if (idx[d] + 1 < g.nodes_on_axis(d)) worst = std::max(worst, v[n] - v[n + g.node_stride(d)]);
    if (shape.boundary_zero)
      for (std::size_t d = 0; d < m; ++d)
        if (idx[d] == 0) worst = std::max(worst, std::abs(v[n]));
  }
  if (shape.boundary_one) worst = std::max(worst, std::abs(1.0 - v.back()));
  if (shape.distribution_condition)
    for (std::size_t k = 0; k < g.cell_count(); ++k) worst = std::max(worst, -cell_mass(F, k));
  if (shape.bounded_growth) {
    const double L = *shape.bounded_growth;
    for (std::size_t n = 0; n < v.size(); ++n) {
      const auto idx = g.node_multi_index(n);
      auto check = [&](std::size_t other) {
        const Point a = g.node(n), b = g.node(other);
        double len = 0.0;
        for (std::size_t d = 0; d < m; ++d) len = std::max(len, std::abs(a[d] - b[d]));
        worst = std::max(worst, std::abs(v[other] - v[n]) - L * len);
      };
      for (std::size_t d = 0; d < m; ++d)
        if (idx[d] + 1 < g.nodes_on_axis(d)) check(n + g.node_stride(d));
      if (m == 2 && idx[0] + 1 < g.nodes_on_axis(0) && idx[1] + 1 < g.nodes_on_axis(1))
        check(n + g.node_stride(0) + g.node_stride(1));
    }
  }
  return worst;
}

/// Largest slope |dv| / edge length over the edges of the triangulation.
inline double max_edge_slope(const GridFunction& F) {
  const Grid& g = F.grid();
  const auto& v = F.values();
  const std::size_t m = g.dim();
  double worst = 0.0;
  for (std::size_t n = 0; n < v.size(); ++n) {
    const auto idx = g.node_multi_index(n);
    auto check = [&](std::size_t other) {
      const Point a = g.node(n), b = g.node(other);
      double len = 0.0;
      for (std::size_t d = 0; d < m; ++d) len = std::max(len, std::abs(a[d] - b[d]));
      worst = std::max(worst, std::abs(v[other] - v[n]) / len);
    };
    for (std::size_t d = 0; d < m; ++d)
      if (idx[d] + 1 < g.nodes_on_axis(d)) check(n + g.node_stride(d));
    if (m == 2 && idx[0] + 1 < g.nodes_on_axis(0) && idx[1] + 1 < g.nodes_on_axis(1))
      check(n + g.node_stride(0) + g.node_stride(1));
  }
  return worst;
}

/// Inputs of a refinement study: sources are realised on each level's grid.
struct ProblemTemplate {
  Domain domain;
  std::function<GridFunction(std::shared_ptr<const Grid>)> F0;
  std::function<GridFunction(std::shared_ptr<const Grid>)> G0;
  double delta = 0.0;
  std::optional<double> rho;
  ShapeConstraints shape;
  double tol = 1e-8;
};

struct StudyLevel {
  std::size_t cells_per_axis = 0;
  EstimateResult result;
  std::optional<DistanceReport> distance_to_previous;
};

inline EstimationProblem instantiate(const ProblemTemplate& t, std::size_t cells_per_axis) {
  auto grid = std::make_shared<const Grid>(uniform_cells(t.domain, cells_per_axis));
  EstimationProblem p;
  p.F0 = t.F0(grid);
  p.G0 = t.G0(grid);
  p.delta = t.delta;
  p.rho = t.rho;
  p.shape = t.shape;
  p.tol = t.tol;
  return p;
}

/// Runs estimate on each level; consecutive solutions are compared on the
/// common refinement of their grids.
inline std::vector<StudyLevel> refinement_study(const ProblemTemplate& t, const std::vector<std::size_t>& levels,
                                                std::size_t quad_points = 16) {
  if (levels.size() < 2) throw InvalidArgument("refinement_study: at least two levels required");
  std::vector<StudyLevel> out;
  for (std::size_t cells : levels) {
    StudyLevel lvl;
    lvl.cells_per_axis = cells;
    lvl.result = estimate(instantiate(t, cells));
    if (!out.empty()) {
      const GridFunction& prev = out.back().result.solution;
      const GridFunction& cur = lvl.result.solution;
      auto common = std::make_shared<const Grid>(common_refinement(prev.grid(), cur.grid()));
      lvl.distance_to_previous = hypo_dist_estimate(resample(prev, common), resample(cur, common), quad_points);
    }
    out.push_back(std::move(lvl));
  }
  return out;
}

} // namespace hypodist
