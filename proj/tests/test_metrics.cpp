#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <hypodist/metrics.hpp>
#include <hypodist/validation.hpp>

using namespace hypodist;

namespace {

const Domain kUnit1({0.0}, {1.0});
const Domain kUnit2({0.0, 0.0}, {1.0, 1.0});

// Dirac pair on [0,1]: F jumps at 1, G at 1/2. Fine grid so the interpolated
// ramps are short.
constexpr std::size_t kDiracCells = 1000;

struct DiracPair {
  std::shared_ptr<const Grid> grid = std::make_shared<const Grid>(uniform_cells(kUnit1, kDiracCells));
  GridFunction F = realize(dirac({1.0}), grid);
  GridFunction G = realize(dirac({0.5}), grid);
};

const DiracPair& dirac_pair() {
  static const DiracPair p;
  return p;
}

double dirac_piecewise(double rho) {
  if (rho <= 0.25) return 0.0;
  if (rho <= 0.5) return 2.0 * rho - 0.5;
  return 0.5;
}

std::pair<GridFunction, GridFunction> random_pair(std::mt19937_64& rng, std::size_t cells = 6) {
  auto g = std::make_shared<const Grid>(uniform_cells(kUnit2, cells));
  return {random_monotone(g, rng), random_monotone(g, rng)};
}

} // namespace

TEST(PointHypoDist, InsideHypographIsZero) {
  const GridFunction f = realize(uniform_box({0.0, 0.0}, {1.0, 1.0}), uniform_cells(kUnit2, 4));
  EXPECT_EQ(point_hypo_dist(f, Point{0.5, 0.5, 0.2}), 0.0);
  EXPECT_EQ(point_hypo_dist(f, Point{0.5, 0.5, 0.25}), 0.0);
}

TEST(PointHypoDist, VerticalDropOverZero) {
  const GridFunction f(uniform_cells(kUnit1, 3), 1, {0.0, 0.0, 0.0, 0.0}, true);
  EXPECT_NEAR(point_hypo_dist(f, Point{0.5, 0.3}), 0.3, 1e-15);
}

TEST(PointHypoDist, DiracAtOne) {
  const auto& p = dirac_pair();
  EXPECT_NEAR(point_hypo_dist(p.F, Point{0.5, 1.0}), 0.5, 1.0 / kDiracCells);
}

TEST(PointHypoDist, MatchesBruteForce) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto [f, g] = random_pair(rng, 5);
  (void)g;
  for (int t = 0; t < 40; ++t) {
    const Point x{u(rng), u(rng)};
    const double h = 1.3 * u(rng);
    // brute force: smallest r on a fine ladder with max over the r-box + r >= h
    double brute = 2.0;
    for (int i = 0; i <= 4000; ++i) {
      const double r = 1.5 * i / 4000.0;
      const Point top{std::min(1.0, x[0] + r), std::min(1.0, x[1] + r)};
      if (f(top) + r >= h) {
        brute = r;
        break;
      }
    }
    EXPECT_NEAR(point_hypo_dist(f, Point{x[0], x[1], h}), brute, 1.5 / 4000.0 + 1e-12);
  }
}

TEST(Oracle, IdenticalIsZero) {
  std::mt19937_64 rng(1);
  const auto [f, g] = random_pair(rng);
  (void)g;
  EXPECT_EQ(dl_rho_oracle(f, f, RhoBall(1.0), 21), 0.0);
}

TEST(Oracle, DiracPairPiecewise) {
  const auto& p = dirac_pair();
  for (double rho : {0.2, 0.4, 0.8}) {
    const auto o = dl_rho_oracle_report(p.F, p.G, RhoBall(rho), 401);
    EXPECT_NEAR(o.value, dirac_piecewise(rho), 2.0 * o.slack + 2.0 / kDiracCells) << "rho=" << rho;
  }
}

TEST(Oracle, BoundedByOne) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto [f, g] = random_pair(rng);
    EXPECT_LE(dl_rho_oracle(f, g, RhoBall(3.0), 15), 1.0 + 1e-12);
  }
}

TEST(Oracle, TriangleInequalityOnFixedLattice) {
  std::mt19937_64 rng(4);
  auto grid = std::make_shared<const Grid>(uniform_cells(kUnit2, 5));
  for (int t = 0; t < 10; ++t) {
    const GridFunction f = random_monotone(grid, rng), g = random_monotone(grid, rng), h = random_monotone(grid, rng);
    const RhoBall rho(1.0);
    EXPECT_LE(dl_rho_oracle(f, h, rho, 15), dl_rho_oracle(f, g, rho, 15) + dl_rho_oracle(g, h, rho, 15) + 1e-12);
  }
}

TEST(Kenmochi, EtaOneAlwaysHolds) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto [f, g] = random_pair(rng);
    EXPECT_TRUE(kenmochi_ok(f, g, RhoBall(1.0), 1.0));
    EXPECT_TRUE(kenmochi_ok(f, g, RhoBall(2.0), 1.0));
  }
}

TEST(Kenmochi, IdenticalAtZero) {
  std::mt19937_64 rng(6);
  const auto [f, g] = random_pair(rng);
  (void)g;
  EXPECT_TRUE(kenmochi_ok(f, f, RhoBall(2.0), 0.0));
}

TEST(Kenmochi, DiracPairThreshold) {
  const auto& p = dirac_pair();
  EXPECT_FALSE(kenmochi_ok(p.F, p.G, RhoBall(1.0), 0.49));
  EXPECT_TRUE(kenmochi_ok(p.F, p.G, RhoBall(1.0), 0.5));
}

TEST(Kenmochi, NegativeEtaThrows) {
  const auto& p = dirac_pair();
  EXPECT_THROW(kenmochi_ok(p.F, p.G, RhoBall(1.0), -0.1), InvalidArgument);
}

TEST(HatDistance, IdenticalIsZero) {
  std::mt19937_64 rng(7);
  const auto [f, g] = random_pair(rng);
  (void)g;
  EXPECT_EQ(hat_dl_rho(f, f, RhoBall(3.0)), 0.0);
}

TEST(HatDistance, DiracPairAtRhoOne) {
  const auto& p = dirac_pair();
  EXPECT_NEAR(hat_dl_rho(p.F, p.G, RhoBall(1.0)), 0.5, 1.0 / kDiracCells);
}

TEST(HatDistance, RequiresMonotone) {
  auto g = std::make_shared<const Grid>(uniform_cells(kUnit1, 1));
  const GridFunction f(g, 1, {0.5, 0.2});
  EXPECT_THROW(hat_dl_rho(f, f, RhoBall(1.0)), InvalidArgument);
}

TEST(HatDistance, OrderedAgainstOracle) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const auto [f, g] = random_pair(rng);
    for (double rho : {0.25, 0.5, 1.0}) {
      const auto o = dl_rho_oracle_report(f, g, RhoBall(rho), 31);
      EXPECT_LE(hat_dl_rho(f, g, RhoBall(rho)), o.value + o.slack + 2e-8);
      EXPECT_LE(o.value, hat_dl_rho(f, g, RhoBall(2.0 * rho)) + 2e-8);
    }
  }
}

TEST(HatDistance, NondecreasingInRho) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const auto [f, g] = random_pair(rng);
    double prev = 0.0;
    for (double rho = 0.0; rho <= 2.0; rho += 0.125) {
      const double h = hat_dl_rho(f, g, RhoBall(rho));
      EXPECT_GE(h, prev - 2e-8);
      prev = h;
    }
  }
}

TEST(Distances, Symmetric) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10; ++t) {
    const auto [f, g] = random_pair(rng);
    const RhoBall rho(1.5);
    const Grid& grid = f.grid();
    EXPECT_NEAR(hat_dl_rho(f, g, rho), hat_dl_rho(g, f, rho), 2e-8);
    EXPECT_NEAR(eta_plus(f, g, rho, grid), eta_plus(g, f, rho, grid), 2e-8);
    EXPECT_NEAR(eta_minus(f, g, rho, grid), eta_minus(g, f, rho, grid), 2e-8);
    EXPECT_NEAR(dl_rho_oracle(f, g, rho, 15), dl_rho_oracle(g, f, rho, 15), 1e-12);
  }
}

TEST(EtaBounds, IdenticalLowerIsZero) {
  std::mt19937_64 rng(12);
  const auto [f, g] = random_pair(rng);
  (void)g;
  EXPECT_EQ(eta_minus(f, f, RhoBall(3.0), f.grid()), 0.0);
}

TEST(EtaBounds, IdenticalUpperBelowCellOscillation) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const auto [f, g] = random_pair(rng);
    (void)g;
    const Grid& grid = f.grid();
    double osc = 0.0;
    for (std::size_t k = 0; k < grid.cell_count(); ++k) {
      const Rect r = grid.cell(k);
      osc = std::max(osc, f(r.upper) - f(r.lower));
    }
    EXPECT_LE(eta_plus(f, f, RhoBall(3.0), grid), osc + 2e-8);
  }
}

TEST(EtaBounds, SandwichOnRandomPairs) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 40; ++t) {
    const auto [f, g] = random_pair(rng);
    const RhoBall rho(default_rho(kUnit2));
    const double lo = eta_minus(f, g, rho, f.grid()), hat = hat_dl_rho(f, g, rho), hi = eta_plus(f, g, rho, f.grid());
    EXPECT_LE(lo, hat + 2e-8);
    EXPECT_LE(hat, hi + 2e-8);
  }
}

TEST(EtaBounds, LipschitzGap) {
  std::mt19937_64 rng(15);
  auto grid = std::make_shared<const Grid>(uniform_cells(kUnit2, 8));
  for (double kappa : {0.5, 1.0, 3.0}) {
    for (int t = 0; t < 10; ++t) {
      const GridFunction f = random_lipschitz(grid, kappa, rng), g = random_lipschitz(grid, kappa, rng);
      const RhoBall rho(default_rho(kUnit2));
      EXPECT_LE(eta_plus(f, g, rho, *grid) - eta_minus(f, g, rho, *grid), kappa * grid->mesh_size() + 2e-8);
    }
  }
}

TEST(HypoDistance, IdenticalIsZero) {
  std::mt19937_64 rng(16);
  const auto [f, g] = random_pair(rng);
  (void)g;
  const DistanceReport r = hypo_dist_estimate(f, f, 16);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.lower_bound, 0.0);
  EXPECT_LE(r.upper_bound, std::exp(-saturation_radius(kUnit2)));
}

TEST(HypoDistance, DiracPairMatchesIntegratedPiecewise) {
  const auto& p = dirac_pair();
  const DistanceReport r = hypo_dist_estimate(p.F, p.G, 64);
  const double expected = 2.0 * std::exp(-0.25) - 2.0 * std::exp(-0.5);
  EXPECT_NEAR(expected, 0.34454, 1e-5);
  EXPECT_NEAR(r.value, expected, 0.01);
  EXPECT_LE(r.lower_bound, r.value);
  EXPECT_GE(r.upper_bound, r.value);
}

TEST(HypoDistance, ValueWithinBoundsAndAtMostOne) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    const auto [f, g] = random_pair(rng);
    const DistanceReport r = hypo_dist_estimate(f, g, 16);
    EXPECT_LE(r.lower_bound, r.value);
    EXPECT_LE(r.value, r.upper_bound);
    EXPECT_LE(r.upper_bound, 1.0);
    EXPECT_LE(r.upper_bound - r.lower_bound, std::exp(-saturation_radius(kUnit2)) + r.quadrature_term + 2e-8);
  }
}

TEST(HypoDistance, OracleIntegralAgrees) {
  std::mt19937_64 rng(18);
  const auto [f, g] = random_pair(rng, 4);
  const DistanceReport hat = hypo_dist_estimate(f, g, 32);
  const DistanceReport oracle = hypo_dist_oracle(f, g, 32, 41);
  // hat(rho) <= dl_rho <= hat(2 rho), so the oracle integral sits inside the
  // hat bounds up to the lattice slack
  EXPECT_GE(oracle.value, hat.lower_bound - oracle.quadrature_term - 0.02);
  EXPECT_LE(oracle.value, hat.upper_bound + oracle.quadrature_term + 0.02);
}

TEST(HypoDistance, RejectsTooFewQuadraturePoints) {
  const auto& p = dirac_pair();
  EXPECT_THROW(hypo_dist_estimate(p.F, p.G, 1), InvalidArgument);
}
