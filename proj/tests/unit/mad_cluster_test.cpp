#include "cata/mad_cluster.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cata;

namespace {

DistanceMatrix three()
{
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 5, 1, 0, 4, 5, 4, 0;
  return {{"A", "B", "C"}, d};
}

DistanceMatrix random_distances(std::mt19937_64& rng, std::size_t n, int levels)
{
  std::uniform_int_distribution<int> v(1, levels);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) d(i, j) = d(j, i) = v(rng);
  }
  Labels labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("L" + std::to_string(i));
  return {labels, d};
}

} // namespace

TEST(CompleteLinkage, TwoItems)
{
  Eigen::MatrixXd d(2, 2);
  d << 0, 7, 7, 0;
  const auto dg = complete_linkage({{"x", "y"}, d});
  ASSERT_EQ(dg.merges.size(), 1u);
  EXPECT_EQ(dg.merges[0].height, 7.0);
  EXPECT_EQ(to_nested_string(dg), "(x,y):7");
}

TEST(CompleteLinkage, ThreeItemsUsesFarthestDistance)
{
  const auto dg = complete_linkage(three());
  ASSERT_EQ(dg.merges.size(), 2u);
  EXPECT_EQ(dg.merges[0].height, 1.0);
  EXPECT_EQ(dg.merges[1].height, 5.0);
  EXPECT_EQ(to_nested_string(dg), "((A,B):1,C):5");
  EXPECT_EQ(leaf_order(dg), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(CompleteLinkage, RejectsBadMatrices)
{
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 2, 0;
  EXPECT_THROW(DistanceMatrix({"a", "b"}, asym), DataError);
  Eigen::MatrixXd one = Eigen::MatrixXd::Zero(1, 1);
  EXPECT_THROW(complete_linkage({{"a"}, one}), ConfigError);
}

TEST(Cut, ExtremesAndNumbering)
{
  const auto dg = complete_linkage(three());
  const auto all = cut(dg, 1);
  EXPECT_EQ(all.assignment, (std::vector<std::size_t>{1, 1, 1}));
  const auto each = cut(dg, 3);
  EXPECT_EQ(each.assignment, (std::vector<std::size_t>{1, 2, 3}));
  const auto two = cut(dg, 2);
  EXPECT_EQ(two.assignment, (std::vector<std::size_t>{1, 1, 2}));
  EXPECT_EQ(two.clusters[0], (Labels{"A", "B"}));
  EXPECT_THROW(cut(dg, 0), ConfigError);
  EXPECT_THROW(cut(dg, 4), ConfigError);
}

TEST(CompleteLinkage, MatchesNaiveReferenceWithTies)
{
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 400; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rep % 9);
    const auto d = random_distances(rng, n, rep % 2 ? 4 : 1000); // few levels forces ties
    const auto dg = complete_linkage(d);
    const auto ref = oracle::naive_complete_linkage(d.values);
    ASSERT_EQ(dg.merges.size(), ref.size());
    const auto members = detail::cluster_members(dg);
    for (std::size_t m = 0; m < ref.size(); ++m) {
      EXPECT_EQ(dg.merges[m].height, ref[m].height);
      auto left = members[dg.merges[m].left], right = members[dg.merges[m].right];
      if (right.front() < left.front()) std::swap(left, right);
      EXPECT_EQ(left, ref[m].a);
      EXPECT_EQ(right, ref[m].b);
    }
    for (std::size_t m = 1; m < dg.merges.size(); ++m) EXPECT_GE(dg.merges[m].height, dg.merges[m - 1].height);
    auto order = leaf_order(dg);
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(order[i], i);
    for (std::size_t k = 1; k <= n; ++k) EXPECT_EQ(cut(dg, k).clusters.size(), k);
  }
}

TEST(Distances, ProductsUseTest4)
{
  Eigen::MatrixXi counts(3, 3);
  counts << 10, 20, 30, 12, 26, 31, 10, 20, 30;
  const CataTable table(counts, 100, {"a", "b", "c"}, {"x", "y", "z"});
  const auto d = product_distances(table);
  EXPECT_EQ(d(0, 1), 2.0);
  EXPECT_EQ(d(0, 2), 0.0);
  EXPECT_EQ(d(1, 0), 2.0);
}

TEST(Distances, TermsUseMedianCentredColumns)
{
  // Centred columns are (-2, 0, 5) and (1, 0, -1).
  Eigen::MatrixXi counts(3, 2);
  counts << 8, 21, 10, 20, 15, 19;
  const CataTable table(counts, 100, {"a", "b", "c"}, {"x", "y"});
  const auto d = term_distances(table);
  EXPECT_EQ(d.labels, (Labels{"x", "y"}));
  EXPECT_EQ(d(0, 1), 3.0);
}
