#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace synpoly {
namespace {

using Matrix = std::vector<std::vector<double>>;

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('A' + i)));
  return out;
}

// Lowest common ancestor height for every leaf pair, read off the dendrogram.
template <typename T>
std::vector<std::vector<T>> cophenetic(const Dendrogram<T>& tree) {
  const auto n = tree.leaf_count();
  std::vector<std::vector<T>> out(n, std::vector<T>(n, T(0)));
  for (std::size_t id = n; id < tree.nodes.size(); ++id) {
    const auto& node = tree.nodes[id];
    auto left = tree.leaves_under(*node.left);
    auto right = tree.leaves_under(*node.right);
    for (const auto& a : left) {
      for (const auto& b : right) {
        auto i = static_cast<std::size_t>(a[0] - 'A');
        auto j = static_cast<std::size_t>(b[0] - 'A');
        out[i][j] = out[j][i] = T(2) * node.height;
      }
    }
  }
  return out;
}

TEST(Upgma, TwoPoints) {
  auto t = upgma<double>({"A", "B"}, Matrix{{0, 6}, {6, 0}});
  EXPECT_EQ(t.nodes.size(), 3u);
  EXPECT_DOUBLE_EQ(t.nodes[t.root()].height, 3.0);
  EXPECT_EQ(to_newick(t), "(A:3,B:3);");
}

TEST(Upgma, ThreePointsExactAndNewick) {
  DistanceMatrix m({"A", "B", "C"});
  m.set(0, 1, 2);
  m.set(0, 2, 8);
  m.set(1, 2, 8);
  auto t = upgma(m);
  EXPECT_EQ(t.nodes[3].height, 1);
  EXPECT_EQ(t.nodes[4].height, 4);
  EXPECT_TRUE(t.has_clade({"A", "B"}));
  EXPECT_EQ(to_newick(t), "((A:1,B:1):3,C:4);");
}

TEST(Upgma, AverageLinkageUsesClusterSizes) {
  // A,B merge at 1; then d(AB,C) = (4+6)/2 = 5, d(AB,D) = (10+10)/2 = 10, d(C,D) = 9
  DistanceMatrix m({"A", "B", "C", "D"});
  m.set(0, 1, 2);
  m.set(0, 2, 4);
  m.set(1, 2, 6);
  m.set(0, 3, 10);
  m.set(1, 3, 10);
  m.set(2, 3, 9);
  auto t = upgma(m);
  EXPECT_EQ(t.nodes[5].height, Rational(5, 2));
  EXPECT_TRUE(t.has_clade({"A", "B", "C"}));
  // d(ABC,D) = (2*10 + 1*9)/3
  EXPECT_EQ(t.nodes[6].height, Rational(29, 6));
}

TEST(Upgma, RecoversUltrametricTrees) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    // random merge order with strictly increasing heights
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(0)));
    Rational h = 0;
    while (clusters.size() > 1) {
      h += Rational(1 + static_cast<long>(rng() % 5), 3);
      auto a = rng() % clusters.size();
      auto b = rng() % (clusters.size() - 1);
      if (b >= a) ++b;
      for (auto i : clusters[a]) {
        for (auto j : clusters[b]) d[i][j] = d[j][i] = 2 * h;
      }
      clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
      clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
    }
    auto t = upgma(names(n), d);
    EXPECT_EQ(cophenetic(t), d);
  }
}

TEST(Upgma, HeightsAreMonotone) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 10;
    Matrix d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = 1.0 + static_cast<double>(rng() % 1000) / 10.0;
    }
    auto t = upgma(names(n), d);
    for (const auto& node : t.nodes) {
      if (node.is_leaf()) continue;
      EXPECT_GE(node.height, t.nodes[*node.left].height);
      EXPECT_GE(node.height, t.nodes[*node.right].height);
    }
    EXPECT_EQ(t.nodes[t.root()].size, n);
  }
}

TEST(Upgma, RejectsDegenerateInput) {
  EXPECT_THROW(upgma<double>({"A"}, Matrix{{0}}), Error);
  EXPECT_THROW(upgma<double>({"A", "B"}, Matrix{{0, 1}, {2, 0}}), Error);
  EXPECT_THROW(upgma<double>({"A", "B"}, Matrix{{1, 1}, {1, 0}}), Error);
}

TEST(Newick, RoundTrip) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 9;
    Matrix d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = 0.5 + static_cast<double>(rng() % 200) / 8.0;
    }
    auto t = upgma(names(n), d);
    auto text = to_newick(t);
    auto parsed = parse_newick(text);
    ASSERT_EQ(parsed.size(), t.nodes.size());
    auto heights = newick_heights(parsed);
    EXPECT_NEAR(heights[0], t.nodes[t.root()].height, 1e-9);
    std::vector<std::string> leaves;
    for (const auto& node : parsed) {
      if (node.children.empty()) leaves.push_back(node.label);
    }
    std::sort(leaves.begin(), leaves.end());
    EXPECT_EQ(leaves, names(n));
  }
  EXPECT_THROW(parse_newick("((A:1,B:1):3,C:4"), Error);
}

TEST(Jacobi, ResidualIsSmall) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    Matrix a(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) a[i][j] = a[j][i] = u(rng);
    }
    auto e = jacobi_eigen(a);
    EXPECT_TRUE(e.converged);
    EXPECT_TRUE(std::is_sorted(e.values.rbegin(), e.values.rend()));
    for (std::size_t k = 0; k < n; ++k) {
      double residual = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double av = 0.0;
        for (std::size_t j = 0; j < n; ++j) av += a[i][j] * e.vectors[k][j];
        residual = std::max(residual, std::abs(av - e.values[k] * e.vectors[k][i]));
      }
      EXPECT_LT(residual, 1e-8);
    }
  }
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

TEST(Mds, TwoPoints) {
  auto e = classical_mds({"A", "B"}, Matrix{{0, 4}, {4, 0}});
  EXPECT_NEAR(std::abs(e.coordinates[0][0]), 2.0, 1e-9);
  EXPECT_NEAR(e.coordinates[0][0], -e.coordinates[1][0], 1e-9);
  EXPECT_NEAR(e.coordinates[0][1], 0.0, 1e-9);
  EXPECT_NEAR(e.eigenvalue_share(0), 1.0, 1e-12);
}

TEST(Mds, CollinearPoints) {
  std::vector<double> x{0, 1, 3, 7};
  Matrix d(4, std::vector<double>(4));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) d[i][j] = std::abs(x[i] - x[j]);
  }
  auto e = classical_mds(names(4), d);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(e.coordinates[i][1], 0.0, 1e-7);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(e.coordinates[i][0] - e.coordinates[j][0]), d[i][j], 1e-9);
  }
  EXPECT_TRUE(e.warnings.empty());
}

TEST(Mds, PlanarPointsAreReproduced) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng() % 15;
    std::vector<std::vector<double>> pts(n, std::vector<double>(2));
    for (auto& p : pts) p = {u(rng), u(rng)};
    Matrix d(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = dist2(pts[i], pts[j]);
    }
    auto e = classical_mds(names(n), d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(dist2(e.coordinates[i], e.coordinates[j]), d[i][j], 1e-8);
    }
    EXPECT_NEAR(e.eigenvalue_share(0) + e.eigenvalue_share(1), 1.0, 1e-9);
  }
}

TEST(Mds, NonEuclideanInputWarns) {
  // violates the triangle inequality
  Matrix d{{0, 1, 10}, {1, 0, 1}, {10, 1, 0}};
  auto e = classical_mds(names(3), d);
  EXPECT_FALSE(e.warnings.empty());
  EXPECT_THROW(classical_mds({"A"}, Matrix{{0}}), Error);
}

TEST(Mds, SignConventionIsDeterministic) {
  Matrix d{{0, 3, 4}, {3, 0, 5}, {4, 5, 0}};
  auto a = classical_mds(names(3), d);
  auto b = classical_mds(names(3), d);
  EXPECT_EQ(a.coordinates, b.coordinates);
  auto e = jacobi_eigen({{2, 1}, {1, 2}});
  for (const auto& v : e.vectors) {
    auto first = std::find_if(v.begin(), v.end(), [](double x) { return std::abs(x) > 1e-12; });
    EXPECT_GE(*first, 0.0);
  }
}

}  // namespace
}  // namespace synpoly
