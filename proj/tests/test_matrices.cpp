#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace synpoly {
namespace {

using testing::grid_of;
using testing::make_tree;

DepTree one() { return make_tree({35}, {std::nullopt}); }
DepTree two() { return make_tree({35, 27}, {std::nullopt, 0}); }

TEST(LanguageMatrix, IdenticalTreesGiveZeroMatrix) {
  auto grid = grid_of({"a", "b"}, {"eng", "ger", "fre"}, {two(), two(), two(), one(), one(), one()});
  auto m = language_matrix(grid);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m.at(i, j), 0);
  }
}

TEST(LanguageMatrix, TwoLanguages) {
  auto grid = grid_of({"s1"}, {"eng", "ger"}, {one(), two()});
  auto m = language_matrix(grid);
  EXPECT_EQ(m.at(0, 1), 2);
  EXPECT_EQ(m.at(1, 0), 2);
  EXPECT_EQ(m.at(0, 0), 0);
  EXPECT_EQ(translation_matrix(grid, "s1"), m);
}

TEST(LanguageMatrix, MatchesHandOracle) {
  std::mt19937_64 rng(8);
  const std::vector<std::string> langs{"eng", "ger", "fre", "jpn"};
  const std::vector<std::string> ids{"s1", "s2", "s3", "s4", "s5"};
  std::vector<DepTree> trees;
  for (std::size_t k = 0; k < ids.size() * langs.size(); ++k) trees.push_back(testing::random_tree(rng, 12, 8));
  auto grid = grid_of(ids, langs, trees);
  auto m = language_matrix(grid);
  for (std::size_t i = 0; i < langs.size(); ++i) {
    for (std::size_t j = 0; j < langs.size(); ++j) {
      Rational sum = 0;
      for (std::size_t s = 0; s < ids.size(); ++s) {
        sum += testing::naive_value(testing::naive_labeled(trees[s * langs.size() + i]),
                                    testing::naive_labeled(trees[s * langs.size() + j]));
      }
      EXPECT_EQ(m.at(i, j), sum / 5) << i << "," << j;
    }
  }
}

TEST(LanguageMatrix, WorkersDoNotChangeResult) {
  std::mt19937_64 rng(81);
  std::vector<DepTree> trees;
  for (int k = 0; k < 7 * 5; ++k) trees.push_back(testing::random_tree(rng, 15));
  auto grid = grid_of({"a", "b", "c", "d", "e", "f", "g"}, {"eng", "ger", "fre", "ita", "spa"}, trees);
  auto base = language_matrix(grid, 1);
  EXPECT_EQ(language_matrix(grid, 4), base);
  EXPECT_EQ(language_matrix(grid, 8), base);
}

TEST(LanguageMatrix, PermutationEquivariance) {
  std::mt19937_64 rng(12);
  const std::vector<std::string> langs{"eng", "ger", "fre", "ita", "spa"};
  std::vector<DepTree> trees;
  for (int k = 0; k < 3 * 5; ++k) trees.push_back(testing::random_tree(rng, 10));
  auto m = language_matrix(grid_of({"a", "b", "c"}, langs, trees));

  std::vector<std::size_t> order{3, 0, 4, 1, 2};
  std::vector<std::string> plangs;
  std::vector<DepTree> ptrees;
  for (auto k : order) plangs.push_back(langs[k]);
  for (std::size_t s = 0; s < 3; ++s) {
    for (auto k : order) ptrees.push_back(trees[s * 5 + k]);
  }
  auto pm = language_matrix(grid_of({"a", "b", "c"}, plangs, ptrees));
  EXPECT_EQ(pm, m.permuted(order));
}

TEST(DistanceMatrixTest, RejectsNonzeroDiagonal) {
  DistanceMatrix m({"a", "b"});
  EXPECT_THROW(m.set(0, 0, Rational(1)), Error);
  m.set(0, 1, Rational(3, 2));
  EXPECT_EQ(m.at(1, 0), Rational(3, 2));
}

DistanceMatrix matrix_of(const std::vector<std::string>& labels, const std::vector<Rational>& upper) {
  DistanceMatrix m(labels);
  auto pairs = upper_pairs(labels.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) m.set(pairs[k].first, pairs[k].second, upper[k]);
  return m;
}

TEST(Summary, TwoByTwo) {
  auto s = summarize(matrix_of({"a", "b"}, {Rational(5)}));
  EXPECT_EQ(s.mean, 5);
  EXPECT_EQ(s.median, 5);
  ASSERT_EQ(s.smallest.size(), 1u);
  EXPECT_EQ(s.smallest[0].first, "a");
  EXPECT_EQ(s.smallest[0].second, "b");
  EXPECT_EQ(s.average[0].value, 5);
  EXPECT_EQ(s.average[1].value, 5);
  EXPECT_THROW(summarize(DistanceMatrix({"a"})), Error);
}

TEST(Summary, FourLabels) {
  // pairs ab ac ad bc bd cd
  auto m = matrix_of({"a", "b", "c", "d"}, {1, 2, 6, 3, 4, 8});
  auto s = summarize(m, 2);
  EXPECT_EQ(s.mean, Rational(24, 6));
  EXPECT_EQ(s.median, Rational(7, 2));  // mean of 3rd and 4th order statistics
  ASSERT_EQ(s.smallest.size(), 2u);
  EXPECT_EQ(s.smallest[0].value, 1);
  EXPECT_EQ(s.smallest[1].value, 2);
  EXPECT_EQ(s.largest[0].first, "c");
  EXPECT_EQ(s.largest[0].second, "d");
  EXPECT_EQ(s.largest[1].value, 6);
  EXPECT_EQ(s.average[0].value, 3);               // (1+2+6)/3
  EXPECT_EQ(s.average[1].value, Rational(8, 3));  // (1+3+4)/3
  EXPECT_EQ(s.average[3].value, 6);               // (6+4+8)/3
  EXPECT_EQ(s.smallest_average[0].label, "b");
  EXPECT_EQ(s.smallest_average[1].label, "a");
  EXPECT_EQ(s.largest_average[0].label, "d");
}

TEST(Summary, MedianOfManyEqualsSortedMiddle) {
  std::mt19937_64 rng(1);
  std::vector<std::string> labels;
  for (int i = 0; i < 20; ++i) labels.push_back("l" + std::to_string(i));
  std::vector<Rational> upper;
  for (int k = 0; k < 190; ++k) upper.emplace_back(static_cast<long>(rng() % 1000), 7);
  auto s = summarize(matrix_of(labels, upper));
  auto sorted = upper;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(s.median, (sorted[94] + sorted[95]) / 2);
  EXPECT_EQ(s.smallest[0].value, sorted.front());
  EXPECT_EQ(s.largest[0].value, sorted.back());
}

TEST(Extremes, TiesAndOrder) {
  auto grid = grid_of({"b", "c", "d", "e"}, {"eng", "chi"},
                      {one(), two(), two(), two(), one(), one(), two(), one()});
  auto x = extreme_sentences(grid, "eng", "chi");
  EXPECT_EQ(x.min_distance, 0);
  EXPECT_EQ(x.min_sent_id, "c");
  EXPECT_EQ(x.min_ties, (std::vector<std::string>{"c", "d"}));
  EXPECT_EQ(x.max_distance, 2);
  EXPECT_EQ(x.max_sent_id, "b");
  EXPECT_EQ(x.max_ties, (std::vector<std::string>{"b", "e"}));
}

TEST(Extremes, SingleSentence) {
  auto grid = grid_of({"only"}, {"eng", "chi"}, {one(), two()});
  auto x = extreme_sentences(grid, "eng", "chi");
  EXPECT_EQ(x.min_sent_id, "only");
  EXPECT_EQ(x.max_sent_id, "only");
  EXPECT_EQ(x.min_distance, x.max_distance);
  EXPECT_THROW(extreme_sentences(grid, "eng", "kor"), Error);
}

TEST(Parallel, RethrowsLowestFailingIndex) {
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i % 10 == 7) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

}  // namespace
}  // namespace synpoly
