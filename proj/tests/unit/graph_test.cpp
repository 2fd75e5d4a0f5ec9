#include "dto/graph.hpp"

#include <gtest/gtest.h>

#include <random>

#include "support/test_support.hpp"

namespace dto {
namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

const Matrix kLaplacianA =
    from_rows({{2, -1, 0, -1}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {-1, 0, -1, 2}});
const Matrix kLaplacianB =
    from_rows({{1, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -1, 1}});

TEST(GraphTest, RingFromOneBasedEdges) {
  const Graph g = Graph::from_one_based(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}});
  EXPECT_EQ(g.edge_count(), 4u);
  EXPECT_EQ(g.laplacian(), kLaplacianA);
  EXPECT_TRUE(g.is_connected());
  EXPECT_EQ(Graph::ring(4).laplacian(), kLaplacianA);
}

TEST(GraphTest, PathFromOneBasedEdges) {
  const Graph g = Graph::from_one_based(4, {{1, 2}, {2, 3}, {3, 4}});
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.laplacian(), kLaplacianB);
  EXPECT_TRUE(g.is_connected());
  EXPECT_EQ(Graph::path(4).laplacian(), kLaplacianB);
}

TEST(GraphTest, SingleNode) {
  const Graph g(1, {});
  EXPECT_EQ(g.laplacian(), Matrix::Zero(1, 1));
  EXPECT_EQ(g.incidence().cols(), 0);
  EXPECT_TRUE(g.is_connected());
}

TEST(GraphTest, TwoIsolatedNodesAreDisconnected) { EXPECT_FALSE(Graph(2, {}).is_connected()); }

TEST(GraphTest, SingleEdgeIncidenceOrientation) {
  const Graph g(2, {{1, 0}});
  Matrix expected(2, 1);
  expected << -1, 1;
  EXPECT_EQ(g.incidence(), expected);
  EXPECT_EQ(g.edges().front(), (Graph::Edge{0, 1}));
}

TEST(GraphTest, IncidenceReproducesLaplacian) {
  for (const Graph& g : {Graph::ring(4), Graph::path(4)}) {
    const Matrix d = g.incidence();
    EXPECT_EQ(Matrix(d * d.transpose()), g.laplacian());
  }
}

TEST(GraphTest, RejectsMalformedEdges) {
  EXPECT_THROW(Graph(3, {{0, 3}}), std::invalid_argument);
  EXPECT_THROW(Graph(3, {{1, 1}}), std::invalid_argument);
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(Graph(0, {}), std::invalid_argument);
  EXPECT_THROW(Graph::from_one_based(3, {{0, 1}}), std::invalid_argument);
}

TEST(GraphTest, NeighborsAreSymmetric) {
  const Graph g = Graph::ring(4);
  EXPECT_EQ(g.neighbors(0), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(g.neighbors(3), (std::vector<std::size_t>{2, 0}));
  EXPECT_EQ(g.adjacency(), g.adjacency().transpose());
}

TEST(GraphProperty, RandomGraphIdentities) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  std::uniform_real_distribution<double> density(0.1, 0.9);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = testing::random_graph(rng, size(rng), density(rng));
    const Matrix l = g.laplacian();
    const Matrix d = g.incidence();
    ASSERT_EQ(Matrix(d * d.transpose()), l);
    ASSERT_EQ(l, l.transpose());
    for (Eigen::Index i = 0; i < l.rows(); ++i) ASSERT_EQ(l.row(i).sum(), 0.0);
    const double lambda2 = testing::fiedler_value(g);
    if (g.node_count() >= 2) {
      if (g.is_connected()) {
        ASSERT_GT(lambda2, 1e-9);
      } else {
        ASSERT_NEAR(lambda2, 0.0, 1e-9);
      }
    }
  }
}

}  // namespace
}  // namespace dto
