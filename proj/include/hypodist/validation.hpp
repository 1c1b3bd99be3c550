#pragma once

// Independent checks: the eta-/hat/eta+ sandwich against the lattice oracle,
// the rectangle-wise distribution condition, convergence of upper envelopes,
// the non-closure counterexample, and seeded random test functions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "functions.hpp"
#include "grid.hpp"
#include "metrics.hpp"

namespace hypodist {

struct SandwichReport {
  double eta_minus = 0.0;
  double hat = 0.0;
  double eta_plus = 0.0;
  double hat_double = 0.0; // hat-distance at 2 rho
  double oracle = 0.0;
  double oracle_slack = 0.0;
  bool oracle_computed = false;
  bool sandwich_ok = true;
  bool oracle_lower_ok = true; // hat <= oracle + slack
  bool oracle_upper_ok = true; // oracle <= hat(2 rho)
  std::vector<std::string> failures;

  [[nodiscard]] bool ok() const { return failures.empty(); }
};

/// Computes eta-, hat, eta+, the oracle and hat(2 rho) and checks their
/// ordering; failures are recorded, not thrown. `oracle_samples` = 0 skips
/// the oracle.
inline SandwichReport verify_sandwich(const GridFunction& f, const GridFunction& g, RhoBall rho, const Grid& grid,
                                      std::size_t oracle_samples = 0, double tol = kDefaultTol) {
  SandwichReport r;
  r.eta_minus = eta_minus(f, g, rho, grid, tol);
  r.eta_plus = eta_plus(f, g, rho, grid, tol);
  r.hat = hat_dl_rho(f, g, rho, tol);
  const double slop = 2.0 * tol;
  if (r.eta_minus > r.hat + slop) r.failures.push_back("eta- exceeds hat-distance");
  if (r.hat > r.eta_plus + slop) r.failures.push_back("hat-distance exceeds eta+");
  r.sandwich_ok = r.failures.empty();
  if (oracle_samples >= 2) {
    const auto o = dl_rho_oracle_report(f, g, rho, oracle_samples);
    r.oracle = o.value;
    r.oracle_slack = o.slack;
    r.oracle_computed = true;
    r.hat_double = hat_dl_rho(f, g, RhoBall(2.0 * rho.radius), tol);
    r.oracle_lower_ok = r.hat <= r.oracle + r.oracle_slack + slop;
    r.oracle_upper_ok = r.oracle <= r.hat_double + slop;
    if (!r.oracle_lower_ok) r.failures.push_back("hat-distance exceeds oracle plus lattice slack");
    if (!r.oracle_upper_ok) r.failures.push_back("oracle exceeds hat-distance at 2 rho");
  }
  return r;
}

struct DistributionErrorReport {
  double percent = 0.0;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  bool exhaustive = true;
  std::uint64_t seed = 0;
  double worst = 0.0; // most negative corner sum seen
};

/// Share of node-pair rectangles of `grid` with a corner sum below -1e-9.
/// All rectangles are checked when their number is within `budget`,
/// otherwise `budget` of them are drawn with a seeded generator.
inline DistributionErrorReport distribution_error_pct(const GridFunction& F, const Grid& grid,
                                                      std::uint64_t budget = 50'000'000, std::uint64_t seed = 1) {
  if (budget < 1) throw InvalidArgument("distribution_error_pct: budget must be positive");
  if (!(grid.domain() == F.grid().domain())) throw InvalidArgument("distribution_error_pct: domain mismatch");
  constexpr double kViolation = -1e-9;
  const std::size_t m = grid.dim();
  std::vector<double> node_values(grid.node_count());
  const bool same = F.order() == 1 && F.grid() == grid;
  for (std::size_t n = 0; n < node_values.size(); ++n) node_values[n] = same ? F.values()[n] : F.eval(grid.node(n));

  DistributionErrorReport rep;
  rep.seed = seed;
  std::uint64_t total = 1;
  bool overflow = false;
  for (std::size_t d = 0; d < m; ++d) {
    const std::uint64_t k = grid.nodes_on_axis(d);
    const std::uint64_t pairs = k * (k - 1) / 2;
    if (total > budget / std::max<std::uint64_t>(pairs, 1)) overflow = true;
    total *= pairs;
  }
  rep.exhaustive = !overflow && total <= budget;

  std::vector<std::size_t> lo(m), hi(m);
  const std::size_t corners = std::size_t{1} << m;
  auto check = [&] {
    double s = 0.0;
    for (std::size_t j = 0; j < corners; ++j) {
      std::size_t flat = 0;
      for (std::size_t d = 0; d < m; ++d) flat += ((j >> d) & 1U ? hi[d] : lo[d]) * grid.node_stride(d);
      s += Rect::vertex_sign(j, m) * node_values[flat];
    }
    ++rep.checked;
    rep.worst = std::min(rep.worst, s);
    if (s < kViolation) ++rep.violations;
  };

  if (rep.exhaustive) {
    // odometer over (lo_d < hi_d) per axis
    for (std::size_t d = 0; d < m; ++d) {
      lo[d] = 0;
      hi[d] = 1;
    }
    while (true) {
      check();
      std::size_t d = 0;
      for (; d < m; ++d) {
        const std::size_t k = grid.nodes_on_axis(d);
        if (hi[d] + 1 < k) {
          ++hi[d];
          break;
        }
        if (lo[d] + 2 < k) {
          ++lo[d];
          hi[d] = lo[d] + 1;
          break;
        }
        lo[d] = 0;
        hi[d] = 1;
      }
      if (d == m) break;
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::uint64_t t = 0; t < budget; ++t) {
      for (std::size_t d = 0; d < m; ++d) {
        std::uniform_int_distribution<std::size_t> pick(0, grid.nodes_on_axis(d) - 1);
        std::size_t a = pick(rng), b = pick(rng);
        while (a == b) b = pick(rng);
        lo[d] = std::min(a, b);
        hi[d] = std::max(a, b);
      }
      check();
    }
  }
  rep.percent = rep.checked ? 100.0 * static_cast<double>(rep.violations) / static_cast<double>(rep.checked) : 0.0;
  return rep;
}

inline DistributionErrorReport distribution_error_pct(const GridFunction& F, std::uint64_t budget = 50'000'000,
                                                      std::uint64_t seed = 1) {
  return distribution_error_pct(F, F.grid(), budget, seed);
}

struct DensityLevel {
  std::size_t cells_per_axis = 0;
  DistanceReport distance;
};

/// Order-0 upper envelopes of `target` on uniform grids with the given cells
/// per axis, each compared with the target realised on a grid of
/// `fine_cells` per axis.
inline std::vector<DensityLevel> density_convergence(const CdfSpec& target, const Domain& domain,
                                                     const std::vector<std::size_t>& levels,
                                                     std::size_t fine_cells = 128, std::size_t quad_points = 32) {
  if (levels.size() < 2) throw InvalidArgument("density_convergence: at least two levels required");
  const auto fine = std::make_shared<const Grid>(uniform_cells(domain, fine_cells));
  const GridFunction reference = realize(target, fine);
  std::vector<DensityLevel> out;
  for (std::size_t cells : levels) {
    const auto grid = std::make_shared<const Grid>(uniform_cells(domain, cells));
    const GridFunction env = upper_envelope(target, grid);
    out.push_back({cells, hypo_dist_estimate(env, reference, quad_points)});
  }
  return out;
}

struct ClosureFixture {
  GridFunction F_nu;
  GridFunction F_limit;
  DistanceReport distance;
  double delta_nu = 0.0;
  double delta_limit = 0.0;
  Rect A;
};

namespace detail {

/// Indicator above the segment from (x1, y2) to (x2, y_end) within A, on
/// S = [0,1]^2 with A = [1/2, 1]^2.
inline double closure_indicator(std::span<const double> z, const Rect& a, double y_end) {
  const double x1 = a.lower[0], x2 = a.upper[0], y2 = a.upper[1];
  if (z[0] < x1) return 0.0;
  const double threshold = y2 - (y2 - y_end) * (z[0] - x1) / (x2 - x1);
  return z[1] >= threshold - 1e-12 ? 1.0 : 0.0;
}

} // namespace detail

/// Monotone usc indicators F^nu whose jump line tilts towards the
/// anti-diagonal of A; each satisfies the distribution condition on A but
/// the hypo-limit does not. Grid versions interpolate the node values.
inline ClosureFixture closure_fixture(std::size_t nu, std::size_t cells = 64, std::size_t quad_points = 32) {
  if (nu < 1) throw InvalidArgument("closure_fixture: nu must be at least 1");
  if (cells % 2 != 0) throw InvalidArgument("closure_fixture: cells per axis must be even");
  const Domain dom({0.0, 0.0}, {1.0, 1.0});
  ClosureFixture fx;
  fx.A = Rect{{0.5, 0.5}, {1.0, 1.0}};
  const double y1 = fx.A.lower[1], y2 = fx.A.upper[1];
  const double nuf = static_cast<double>(nu);
  const double y_end = y2 / nuf + (1.0 - 1.0 / nuf) * y1;
  auto f_nu = [&](std::span<const double> z) { return detail::closure_indicator(z, fx.A, y_end); };
  auto f_lim = [&](std::span<const double> z) { return detail::closure_indicator(z, fx.A, y1); };
  fx.delta_nu = delta_rect([&](const Point& z) { return f_nu(z); }, fx.A);
  fx.delta_limit = delta_rect([&](const Point& z) { return f_lim(z); }, fx.A);

  const auto grid = std::make_shared<const Grid>(uniform_cells(dom, cells));
  std::vector<double> vn(grid->node_count()), vl(grid->node_count());
  for (std::size_t n = 0; n < vn.size(); ++n) {
    const Point z = grid->node(n);
    vn[n] = f_nu(z);
    vl[n] = f_lim(z);
  }
  fx.F_nu = GridFunction(grid, 1, std::move(vn), true);
  fx.F_limit = GridFunction(grid, 1, std::move(vl), true);
  fx.distance = hypo_dist_estimate(fx.F_nu, fx.F_limit, quad_points);
  return fx;
}

// ---------------------------------------------------------------------------
// Seeded random test functions

/// Random order-1 monotone function with values in [0,1]. Half of the draws
/// are CDFs of random cell masses, the rest general monotone surfaces.
inline GridFunction random_monotone(std::shared_ptr<const Grid> grid, std::mt19937_64& rng) {
  const Grid& g = *grid;
  const std::size_t m = g.dim();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(g.node_count(), 0.0);
  if (u(rng) < 0.5) {
    // cumulative sums of random masses placed on nodes
    std::vector<double> mass(g.node_count(), 0.0);
    for (double& x : mass) x = u(rng) < 0.3 ? std::pow(u(rng), 3.0) : 0.0;
    for (std::size_t d = 0; d < m; ++d)
      for (std::size_t n = 0; n < mass.size(); ++n) {
        const auto idx = g.node_multi_index(n);
        if (idx[d] > 0) mass[n] += mass[n - g.node_stride(d)];
      }
    const double total = std::max(mass.back(), 1e-300);
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = mass[n] / total;
  } else {
    // running max of predecessors plus sparse random increments
    for (std::size_t n = 0; n < v.size(); ++n) {
      const auto idx = g.node_multi_index(n);
      double base = 0.0;
      for (std::size_t d = 0; d < m; ++d)
        if (idx[d] > 0) base = std::max(base, v[n - g.node_stride(d)]);
      v[n] = base + (u(rng) < 0.4 ? u(rng) : 0.0);
    }
    const double top = std::max(v.back(), 1e-300);
    const double scale = 0.5 + 0.5 * u(rng);
    for (double& x : v) x = std::clamp(scale * x / top, 0.0, 1.0);
  }
  return GridFunction(std::move(grid), 1, std::move(v), true);
}

/// Random order-1 monotone function whose modulus of continuity with respect
/// to the sup norm is at most kappa. Each cell's increment along the main
/// diagonal equals the l1 norm of the gradient times the cell side, so it is
/// capped at kappa * h.
inline GridFunction random_lipschitz(std::shared_ptr<const Grid> grid, double kappa, std::mt19937_64& rng) {
  const Grid& g = *grid;
  const std::size_t m = g.dim();
  if (m > 2) throw InvalidArgument("random_lipschitz: m <= 2 only");
  if (!(kappa >= 0.0)) throw InvalidArgument("random_lipschitz: kappa must be nonnegative");
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < m; ++d)
    for (std::size_t i = 0; i + 1 < g.nodes_on_axis(d); ++i) h = std::min(h, g.axis(d)[i + 1] - g.axis(d)[i]);
  const double step = kappa * h;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(g.node_count(), 0.0);
  const double start = 0.5 * u(rng);
  for (std::size_t n = 0; n < v.size(); ++n) {
    const auto idx = g.node_multi_index(n);
    double lo = 0.0, hi = 1.0;
    if (m == 1 || idx[0] == 0 || idx[1] == 0) {
      // along the boundary (or in 1-D): cap the edge increment
      bool first = true;
      for (std::size_t d = 0; d < m; ++d) {
        if (idx[d] == 0) continue;
        const double prev = v[n - g.node_stride(d)];
        lo = std::max(lo, prev);
        hi = std::min(hi, prev + step);
        first = false;
      }
      if (first) lo = hi = start;
    } else {
      lo = std::max(v[n - g.node_stride(0)], v[n - g.node_stride(1)]);
      hi = std::min(1.0, v[n - g.node_stride(0) - g.node_stride(1)] + step);
    }
    hi = std::max(hi, lo);
    // bias towards flat stretches and full steps
    const double r = u(rng);
    const double t = r < 0.3 ? 0.0 : (r < 0.6 ? 1.0 : u(rng));
    v[n] = lo + t * (hi - lo);
  }
  return GridFunction(std::move(grid), 1, std::move(v), true);
}

} // namespace hypodist
