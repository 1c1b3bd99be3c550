#include <gtest/gtest.h>

#include <cmath>

#include <hypodist/estimator.hpp>
#include <hypodist/validation.hpp>

using namespace hypodist;

namespace {

const Domain kUnit1({0.0}, {1.0});
const Domain kSquare3({0.0, 0.0}, {3.0, 3.0});

EstimationProblem two_uniforms(std::size_t cells, double delta) {
  auto grid = std::make_shared<const Grid>(uniform_cells(kSquare3, cells));
  EstimationProblem p;
  p.F0 = realize(uniform_box({0.0, 0.0}, {1.0, 1.0}), grid);
  p.G0 = realize(uniform_box({2.0, 2.0}, {3.0, 3.0}), grid);
  p.delta = delta;
  return p;
}

EstimationProblem constant_pair(const Domain& dom, std::size_t cells, double c, double delta) {
  auto grid = std::make_shared<const Grid>(uniform_cells(dom, cells));
  EstimationProblem p;
  p.F0 = GridFunction(grid, 1, std::vector<double>(grid->node_count(), c), true);
  p.G0 = p.F0;
  p.delta = delta;
  p.shape.boundary_zero = false;
  p.shape.boundary_one = false;
  return p;
}

} // namespace

TEST(AssembleLp, OneDimTwoCellCounts) {
  auto grid = std::make_shared<const Grid>(uniform_cells(kUnit1, 2));
  EstimationProblem p;
  p.F0 = realize(uniform_box({0.0}, {1.0}), grid);
  p.G0 = p.F0;
  p.delta = 0.1;
  p.shape = {true, false, false, false, std::nullopt};
  const LpModel lp = assemble_lp(p, 0.5);
  EXPECT_EQ(lp.variable_count(), 4u);
  EXPECT_EQ(lp.row_count(), 2u + 8u);
  EXPECT_EQ(lp.cost()[slack_index(*grid)], 1.0);
  for (std::size_t v = 0; v < 3; ++v) {
    EXPECT_EQ(lp.lower()[v], 0.0);
    EXPECT_EQ(lp.upper()[v], 1.0);
  }
}

TEST(AssembleLp, BoundaryFlagsFixEnds1d) {
  auto grid = std::make_shared<const Grid>(uniform_cells(kUnit1, 4));
  EstimationProblem p;
  p.F0 = realize(uniform_box({0.0}, {1.0}), grid);
  p.G0 = p.F0;
  const LpModel lp = assemble_lp(p, 1.0);
  EXPECT_EQ(lp.upper()[0], 0.0);
  EXPECT_EQ(lp.lower()[4], 1.0);
  EXPECT_EQ(lp.upper()[4], 1.0);
  EXPECT_EQ(lp.lower()[2], 0.0);
  EXPECT_EQ(lp.upper()[2], 1.0);
}

TEST(AssembleLp, BoundaryZeroOnAlphaFaces2d) {
  const auto p = two_uniforms(3, 0.5);
  const LpModel lp = assemble_lp(p, 1.0);
  const Grid& g = p.grid();
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const auto idx = g.node_multi_index(v);
    if (idx[0] == 0 || idx[1] == 0) {
      EXPECT_EQ(lp.upper()[v], 0.0) << v;
    }
  }
}

TEST(AssembleLp, DistributionRowsPerCell) {
  auto p = two_uniforms(4, 0.5);
  p.shape.distribution_condition = false;
  const std::size_t without = assemble_lp(p, 1.0).row_count();
  p.shape.distribution_condition = true;
  EXPECT_EQ(assemble_lp(p, 1.0).row_count(), without + p.grid().cell_count());
}

TEST(AssembleLp, RejectsEtaOutsideUnitInterval) {
  const auto p = two_uniforms(3, 0.5);
  EXPECT_THROW(assemble_lp(p, -0.1), InvalidArgument);
  EXPECT_THROW(assemble_lp(p, 1.1), InvalidArgument);
}

TEST(AssembleLp, ValidatesProblem) {
  auto p = two_uniforms(3, 0.5);
  p.delta = -1.0;
  EXPECT_THROW(assemble_lp(p, 0.5), InvalidArgument);
  p = two_uniforms(3, 0.5);
  p.G0 = realize(uniform_box({2.0, 2.0}, {3.0, 3.0}), uniform_cells(kSquare3, 4));
  EXPECT_THROW(assemble_lp(p, 0.5), InvalidArgument);
  p = two_uniforms(3, 0.5);
  p.shape.bounded_growth = -1.0;
  EXPECT_THROW(assemble_lp(p, 0.5), InvalidArgument);
}

TEST(MinSlack, ZeroGrowthConflictsWithBoundary) {
  auto p = two_uniforms(3, 0.5);
  p.shape.bounded_growth = 0.0;
  EXPECT_THROW(min_slack(p, 1.0), ShapeInfeasible);
  EXPECT_THROW(estimate(p), ShapeInfeasible);
}

TEST(MinSlack, ZeroGrowthGivesConstant) {
  auto p = constant_pair(kSquare3, 4, 0.4, 0.2);
  p.shape.bounded_growth = 0.0;
  const auto r = min_slack(p, 1.0);
  for (double v : r.F.values()) EXPECT_NEAR(v, r.F.values().front(), 1e-12);
}

TEST(MinSlack, VacuousAmbiguityWhenDeltaAtLeastOne) {
  for (double delta : {1.0, 1.5}) {
    const auto p = two_uniforms(6, delta);
    for (double eta : {0.5, 0.8, 1.0}) EXPECT_LE(min_slack(p, eta).slack, 1e-9) << delta << ' ' << eta;
  }
}

TEST(MinSlack, ConstantPairAtEtaZero) {
  const auto p = constant_pair(kSquare3, 5, 0.3, 0.0);
  EXPECT_LE(min_slack(p, 0.0).slack, 1e-9);
}

TEST(MinSlack, NonincreasingInEta) {
  const auto p = two_uniforms(6, 0.1);
  double prev = kInfinity;
  for (double eta : {0.6, 0.7, 0.8, 0.9, 1.0}) {
    const double s = min_slack(p, eta).slack;
    EXPECT_LE(s, prev + 1e-9) << eta;
    prev = s;
  }
}

TEST(Estimate, ConstantPairGivesZero) {
  const auto p = constant_pair(kSquare3, 5, 0.3, 0.0);
  const auto r = estimate(p);
  EXPECT_LE(r.eta, 2.0 * p.tol);
  EXPECT_LE(r.slack, p.tol);
}

TEST(Estimate, EqualSourcesWithinOwnSurrogate) {
  auto p = two_uniforms(6, 0.0);
  p.G0 = p.F0;
  // F = F0 satisfies the ambiguity rows once delta reaches the self surrogate
  const double self = eta_plus(p.F0, p.F0, RhoBall(p.rho_value()), p.grid());
  p.delta = self;
  const auto r = estimate(p);
  EXPECT_LE(r.eta, self + 2.0 * p.tol);
  EXPECT_LE(r.slack, p.tol);
}

TEST(Estimate, HistoryStartsAtOne) {
  const auto r = estimate(two_uniforms(6, 0.7));
  ASSERT_FALSE(r.history.empty());
  EXPECT_EQ(r.history.front().eta, 1.0);
  EXPECT_GE(r.wall_seconds, 0.0);
  EXPECT_GE(r.eta, 0.0);
  EXPECT_LE(r.eta, 1.0);
}

TEST(Estimate, SmallDeltaLeavesPositiveSlack) {
  const auto p = two_uniforms(8, 1e-4);
  const auto r = estimate(p);
  EXPECT_EQ(r.eta, 1.0);
  EXPECT_GT(r.slack, 1e-8);
  ASSERT_TRUE(r.relaxed_eta.has_value());
  EXPECT_LE(*r.relaxed_eta, 1.0);
  // the returned function attains the minimal slack and sits at relaxed_eta
  const RhoBall rho(p.rho_value());
  EXPECT_LE(eta_plus(r.solution, p.F0, rho, p.grid()), *r.relaxed_eta + 2.0 * p.tol);
  EXPECT_LE(eta_plus(r.solution, p.G0, rho, p.grid()), p.delta + r.slack + 2.0 * p.tol);
  EXPECT_LE(shape_violation(r.solution, p.shape), 1e-8);
}

TEST(Estimate, FeasibleRunHasNoRelaxedEta) {
  EXPECT_FALSE(estimate(two_uniforms(6, 0.7)).relaxed_eta.has_value());
}

TEST(Estimate, ShapeRecheckAndVerifiedSurrogate) {
  for (double delta : {0.7, 0.4}) {
    const auto p = two_uniforms(10, delta);
    const auto r = estimate(p);
    EXPECT_LE(shape_violation(r.solution, p.shape), 1e-8);
    const RhoBall rho(p.rho_value());
    EXPECT_LE(eta_plus(r.solution, p.F0, rho, p.grid()), r.eta + 2.0 * p.tol);
    EXPECT_LE(eta_plus(r.solution, p.G0, rho, p.grid()), p.delta + r.slack + 2.0 * p.tol);
  }
}

TEST(Estimate, EtaNonincreasingInDelta) {
  double prev = -1.0;
  for (double delta : {1.0, 0.7, 0.4, 0.1}) {
    const auto r = estimate(two_uniforms(10, delta));
    EXPECT_GE(r.eta, prev - 1e-8) << delta;
    prev = r.eta;
  }
}

TEST(Estimate, BoundedGrowthRespected) {
  auto p = two_uniforms(10, 0.7);
  p.shape.bounded_growth = 1.0;
  const auto r = estimate(p);
  EXPECT_LE(max_edge_slope(r.solution), 1.0 + 1e-8);
  EXPECT_LE(shape_violation(r.solution, p.shape), 1e-8);
}

TEST(Estimate, OneDimensional) {
  auto grid = std::make_shared<const Grid>(uniform_cells(Domain({0.0}, {3.0}), 30));
  EstimationProblem p;
  p.F0 = realize(uniform_box({0.0}, {1.0}), grid);
  p.G0 = realize(uniform_box({2.0}, {3.0}), grid);
  p.delta = 0.5;
  const auto r = estimate(p);
  EXPECT_GT(r.eta, 0.0);
  EXPECT_LT(r.eta, 1.0);
  EXPECT_LE(r.slack, p.tol);
  EXPECT_LE(shape_violation(r.solution, p.shape), 1e-8);
}

TEST(ShapeChecks, RealizedCdfHasNoViolation) {
  const auto p = two_uniforms(6, 0.5);
  EXPECT_LE(shape_violation(p.F0, p.shape), 1e-12);
  // diagonal edge (0.5,0.5)-(1,1): (1 - 0.25) / 0.5
  EXPECT_NEAR(max_edge_slope(p.F0), 1.5, 1e-9);
}

TEST(RefinementStudy, NeedsTwoLevels) {
  ProblemTemplate t;
  t.domain = kSquare3;
  EXPECT_THROW(refinement_study(t, {10}), InvalidArgument);
}

TEST(RefinementStudy, ConstantPairZeroAtEveryLevel) {
  ProblemTemplate t;
  t.domain = kSquare3;
  auto constant = [](std::shared_ptr<const Grid> g) {
    return GridFunction(g, 1, std::vector<double>(g->node_count(), 0.5), true);
  };
  t.F0 = constant;
  t.G0 = constant;
  t.shape.boundary_zero = false;
  t.shape.boundary_one = false;
  const auto levels = refinement_study(t, {2, 4, 8});
  ASSERT_EQ(levels.size(), 3u);
  EXPECT_FALSE(levels[0].distance_to_previous.has_value());
  for (const auto& l : levels) EXPECT_LE(l.result.eta, 2.0 * t.tol);
  for (std::size_t i = 1; i < levels.size(); ++i) {
    ASSERT_TRUE(levels[i].distance_to_previous.has_value());
    EXPECT_NEAR(levels[i].distance_to_previous->value, 0.0, 1e-12);
  }
}

TEST(RefinementStudy, TwoUniformsLevels) {
  ProblemTemplate t;
  t.domain = kSquare3;
  t.F0 = [](std::shared_ptr<const Grid> g) { return realize(uniform_box({0.0, 0.0}, {1.0, 1.0}), g); };
  t.G0 = [](std::shared_ptr<const Grid> g) { return realize(uniform_box({2.0, 2.0}, {3.0, 3.0}), g); };
  t.delta = 0.7;
  const auto levels = refinement_study(t, {6, 12});
  ASSERT_EQ(levels.size(), 2u);
  EXPECT_EQ(levels[1].cells_per_axis, 12u);
  ASSERT_TRUE(levels[1].distance_to_previous.has_value());
  EXPECT_GE(levels[1].distance_to_previous->value, 0.0);
  EXPECT_LT(std::abs(levels[1].result.eta - levels[0].result.eta), 0.2);
}
