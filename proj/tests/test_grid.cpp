#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include <hypodist/grid.hpp>

using namespace hypodist;

namespace {

const Domain kUnit2({0.0, 0.0}, {1.0, 1.0});

} // namespace

TEST(Grid, ThreeNodesPerAxisGivesFourCells) {
  const Grid g = build_grid(kUnit2, 3);
  EXPECT_EQ(g.cell_count(), 4u);
  EXPECT_EQ(g.node_count(), 9u);
  EXPECT_EQ(g.axis(0), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(g.axis(1), (std::vector<double>{0.0, 0.5, 1.0}));
}

TEST(Grid, HundredOneNodesGivesHundredCells) {
  const Grid g = build_grid(kUnit2, 101);
  EXPECT_EQ(g.cells_on_axis(0), 100u);
  EXPECT_EQ(g.cells_on_axis(1), 100u);
  EXPECT_EQ(uniform_cells(kUnit2, 100), g);
}

TEST(Grid, TwoNodesSingleCell1d) {
  const Grid g = build_grid(Domain({0.0}, {1.0}), 2);
  ASSERT_EQ(g.cell_count(), 1u);
  EXPECT_EQ(g.cell(0).lower, (std::vector<double>{0.0}));
  EXPECT_EQ(g.cell(0).upper, (std::vector<double>{1.0}));
}

TEST(Grid, RejectsBadInput) {
  EXPECT_THROW(Domain({0.0, 1.0}, {1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(build_grid(kUnit2, 1), InvalidArgument);
  EXPECT_THROW(Grid(kUnit2, {{0.0, 0.7, 0.5, 1.0}, {0.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(Grid(kUnit2, {{0.1, 1.0}, {0.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(refine(build_grid(kUnit2, 2), 1), InvalidArgument);
}

TEST(Grid, RefineFactorTwoHalvesMesh) {
  const Grid g = build_grid(kUnit2, 3);
  const Grid r = refine(g, 2);
  EXPECT_EQ(r.cell_count(), 16u);
  EXPECT_DOUBLE_EQ(r.mesh_size(), 0.5 * g.mesh_size());
}

TEST(Grid, RepeatedRefinementDrivesMeshToZero) {
  Grid g = build_grid(kUnit2, 2);
  double prev = g.mesh_size();
  for (int i = 0; i < 10; ++i) {
    g = refine(g, 2);
    EXPECT_LT(g.mesh_size(), prev);
    prev = g.mesh_size();
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Grid, RefineFactorThreeOneCell) {
  EXPECT_EQ(refine(build_grid(kUnit2, 2), 3).cell_count(), 9u);
}

TEST(Grid, RefineComposes) {
  const Grid g(kUnit2, {{0.0, 0.3, 1.0}, {0.0, 0.25, 0.6, 1.0}});
  const Grid a = refine(refine(g, 2), 3);
  const Grid b = refine(g, 6);
  for (std::size_t d = 0; d < 2; ++d) {
    ASSERT_EQ(a.axis(d).size(), b.axis(d).size());
    for (std::size_t i = 0; i < a.axis(d).size(); ++i) EXPECT_NEAR(a.axis(d)[i], b.axis(d)[i], 1e-12);
  }
}

TEST(Grid, MeshSize) {
  EXPECT_NEAR(mesh_size(uniform_cells(kUnit2, 10)), 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(mesh_size(Grid(Domain({0.0}, {1.0}), {{0.0, 0.2, 1.0}})), 0.8);
  EXPECT_DOUBLE_EQ(mesh_size(uniform_cells(Domain({2.0, 2.0}, {3.0, 3.0}), 1)), 1.0);
}

TEST(Grid, VertexSignsOfUnitCell) {
  const Rect r = build_grid(kUnit2, 2).cell(0);
  for (std::size_t j = 0; j < 4; ++j) {
    const Point v = r.vertex(j);
    const int expected = (v[0] == v[1]) ? 1 : -1; // + at (0,0),(1,1); - at (1,0),(0,1)
    EXPECT_EQ(r.sign(j), expected) << "vertex " << j;
  }
}

TEST(Grid, VertexSigns1d) {
  const Rect r{{0.2}, {0.7}};
  EXPECT_EQ(r.vertex(1)[0], 0.7);
  EXPECT_EQ(r.sign(1), 1);
  EXPECT_EQ(r.sign(0), -1);
}

TEST(Grid, VertexSignsSumToZero) {
  for (std::size_t m = 1; m <= 5; ++m) {
    int s = 0;
    for (std::size_t j = 0; j < (std::size_t{1} << m); ++j) s += Rect::vertex_sign(j, m);
    EXPECT_EQ(s, 0) << "m=" << m;
  }
}

TEST(Grid, CellsHaveDisjointInteriors) {
  const auto cells = build_grid(kUnit2, 3).cells();
  ASSERT_EQ(cells.size(), 4u);
  double area = 0.0;
  for (std::size_t a = 0; a < cells.size(); ++a) {
    area += (cells[a].upper[0] - cells[a].lower[0]) * (cells[a].upper[1] - cells[a].lower[1]);
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      const double w = std::min(cells[a].upper[0], cells[b].upper[0]) - std::max(cells[a].lower[0], cells[b].lower[0]);
      const double h = std::min(cells[a].upper[1], cells[b].upper[1]) - std::max(cells[a].lower[1], cells[b].lower[1]);
      EXPECT_FALSE(w > 0 && h > 0);
    }
  }
  EXPECT_DOUBLE_EQ(area, 1.0);
}

TEST(Grid, LocateNodePicksLargestLowerCorner) {
  const Grid g = build_grid(kUnit2, 3);
  const Point x{0.5, 0.5};
  const Location loc = g.locate(x);
  EXPECT_EQ(loc.cell, 3u);
  EXPECT_EQ(loc.local, (std::vector<double>{0.0, 0.0}));
}

TEST(Grid, LocateCellCenter) {
  const Grid g = build_grid(kUnit2, 3);
  const Location loc = g.locate(Point{0.25, 0.75});
  EXPECT_EQ(loc.cell, 2u);
  EXPECT_DOUBLE_EQ(loc.local[0], 0.5);
  EXPECT_DOUBLE_EQ(loc.local[1], 0.5);
}

TEST(Grid, LocateUpperCornerIsLastCell) {
  const Grid g = build_grid(kUnit2, 5);
  const Location loc = g.locate(Point{1.0, 1.0});
  EXPECT_EQ(loc.cell, g.cell_count() - 1);
  EXPECT_EQ(loc.local, (std::vector<double>{1.0, 1.0}));
}

TEST(Grid, LocateOutsideThrows) {
  const Grid g = build_grid(kUnit2, 3);
  EXPECT_THROW(g.locate(Point{1.1, 0.5}), OutOfDomain);
}

TEST(Grid, LocatedCellContainsPoint) {
  const Grid g(kUnit2, {{0.0, 0.1, 0.35, 0.9, 1.0}, {0.0, 0.5, 0.52, 1.0}});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const Point x{u(rng), u(rng)};
    const Rect r = g.cell(g.locate(x).cell);
    for (std::size_t d = 0; d < 2; ++d) {
      EXPECT_LE(r.lower[d], x[d]);
      EXPECT_GE(r.upper[d], x[d]);
    }
  }
}

TEST(Grid, IndexingRoundTrip) {
  const Grid g(Domain({0.0, 0.0, 0.0}, {1.0, 2.0, 3.0}), {{0.0, 1.0}, {0.0, 1.0, 2.0}, {0.0, 1.0, 2.0, 3.0}});
  for (std::size_t n = 0; n < g.node_count(); ++n) EXPECT_EQ(g.node_index(g.node_multi_index(n)), n);
  for (std::size_t k = 0; k < g.cell_count(); ++k) {
    EXPECT_EQ(g.cell_index(g.cell_multi_index(k)), k);
    EXPECT_EQ(g.node(g.cell_vertex_node(k, 0)), g.cell(k).lower);
    EXPECT_EQ(g.node(g.cell_vertex_node(k, 7)), g.cell(k).upper);
  }
}

TEST(Grid, TrianglesUseMainDiagonal) {
  const Grid g = build_grid(kUnit2, 2);
  const auto tris = g.triangles();
  ASSERT_EQ(tris.size(), 2u);
  for (const auto& t : tris) {
    EXPECT_EQ(t.front(), 0u);
    EXPECT_EQ(t.back(), 3u);
  }
}

TEST(Grid, CommonRefinementMergesAxes) {
  const Grid a = uniform_cells(kUnit2, 2), b = uniform_cells(kUnit2, 3);
  const Grid c = common_refinement(a, b);
  EXPECT_EQ(c.nodes_on_axis(0), 5u); // {0, 1/3, 1/2, 2/3, 1}
  EXPECT_EQ(common_refinement(a, a), a);
}

TEST(Grid, HashDistinguishesGrids) {
  EXPECT_EQ(uniform_cells(kUnit2, 4).hash(), uniform_cells(kUnit2, 4).hash());
  EXPECT_NE(uniform_cells(kUnit2, 4).hash(), uniform_cells(kUnit2, 5).hash());
}
