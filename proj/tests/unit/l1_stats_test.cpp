#include "cata/l1_stats.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cata;

namespace {

const std::vector<double> kHappy{54, 31, 15, 22, 40, 25, 55, 28, 41, 15, 48};
const std::vector<double> kSickly{21, 25, 19, 15, 12, 30, 12, 35, 17, 14, 12};

/// A=100 table whose first two terms are the reference Happy and Sickly rows.
CataTable happy_sickly()
{
  Eigen::MatrixXi counts(11, 2);
  for (int p = 0; p < 11; ++p) {
    counts(p, 0) = static_cast<int>(kHappy[static_cast<std::size_t>(p)]);
    counts(p, 1) = static_cast<int>(kSickly[static_cast<std::size_t>(p)]);
  }
  Labels products;
  for (int p = 1; p <= 11; ++p) products.push_back("P" + std::to_string(p));
  return CataTable(counts, 100, products, {"Happy", "Sickly"});
}

} // namespace

TEST(Median, ReferenceValuesAndConventions)
{
  EXPECT_EQ(median(kHappy), 31.0);
  EXPECT_EQ(median(kSickly), 17.0);
  EXPECT_EQ(median(std::vector<double>{5, 5, 5}), 5.0);
  EXPECT_EQ(median(std::vector<double>{2, 4, 6, 8}), 5.0);
  EXPECT_THROW(median(std::vector<double>{}), DataError);
}

TEST(Mad, ReferenceValuesAndConventions)
{
  EXPECT_EQ(mad_about_median(kHappy), 10.0);
  EXPECT_EQ(mad_about_median(kSickly), 5.0);
  EXPECT_EQ(mad_about_median(std::vector<double>{7, 7, 7, 7}), 0.0);
  EXPECT_THROW(mad_about_median(std::vector<double>{}), DataError);
}

TEST(Median, MinimisesSumOfAbsoluteDeviations)
{
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> val(0, 20), len(1, 9);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<double> xs(static_cast<std::size_t>(len(rng)));
    for (auto& x : xs) x = val(rng);
    auto cost = [&](double c) {
      double s = 0;
      for (double x : xs) s += std::abs(x - c);
      return s;
    };
    double best = std::numeric_limits<double>::infinity();
    for (double c = -1; c <= 21; c += 0.25) best = std::min(best, cost(c));
    EXPECT_DOUBLE_EQ(cost(median(xs)), best);
  }
}

TEST(TestStatistics, HappySicklyRows)
{
  const auto table = happy_sickly();
  EXPECT_EQ(stat_test2(table, 0), 10.0);
  EXPECT_EQ(stat_test2(table, 1), 5.0);

  const auto hi = stat_test3(table, 0, 0); // 54 vs median 31
  EXPECT_EQ(hi.magnitude, 23.0);
  EXPECT_EQ(hi.sign, 1);
  EXPECT_EQ(stat_test3(table, 1, 0).magnitude, 0.0); // at the median
  const auto lo = stat_test3(table, 4, 1);            // Sickly 12 vs 17
  EXPECT_EQ(lo.magnitude, 5.0);
  EXPECT_EQ(lo.sign, -1);

  EXPECT_EQ(stat_test5(table, 6, 2, 0), 40.0); // 55 vs 15
  EXPECT_EQ(stat_test5(table, 2, 6, 0), -40.0);
  EXPECT_THROW(stat_test5(table, 3, 3, 0), ConfigError);
  EXPECT_THROW(stat_test4(table, 3, 3), ConfigError);

  const auto summaries = term_summaries(table);
  EXPECT_EQ(summaries[0].median, 31.0);
  EXPECT_EQ(summaries[0].mad, 10.0);
}

TEST(TestStatistics, SmallForcedCases)
{
  Eigen::MatrixXd m(2, 3);
  m << 10, 20, 30, 12, 26, 31;
  EXPECT_EQ(test4_statistic(m, 0, 1), 2.0);
  Eigen::MatrixXd same(2, 3);
  same << 1, 2, 3, 1, 2, 3;
  EXPECT_EQ(test4_statistic(same, 0, 1), 0.0);
  EXPECT_EQ(test1_statistic(same), 0.0);

  Eigen::MatrixXd single(4, 1);
  single << 3, 9, 1, 4;
  EXPECT_EQ(test1_statistic(single), test2_statistic(single, 0));
}

TEST(TestStatistics, HierarchyIdentitiesOnRandomTables)
{
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dim(2, 9), cnt(0, 40);
  for (int rep = 0; rep < 300; ++rep) {
    const auto P = dim(rng), T = dim(rng) - 1;
    Eigen::MatrixXd m(P, T);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = cnt(rng);
    StatisticWorkspace ws(static_cast<std::size_t>(P), static_cast<std::size_t>(T));
    StatisticSet s;
    std::vector<double> flat;
    for (int p = 0; p < P; ++p) {
      for (int t = 0; t < T; ++t) flat.push_back(m(p, t));
    }
    ws.compute(flat, s);
    EXPECT_EQ(s.test1, oracle::sorted_median(s.test2));
    for (int t = 0; t < T; ++t) {
      std::vector<double> col;
      for (int p = 0; p < P; ++p) col.push_back(s.test3[static_cast<std::size_t>(p * T + t)]);
      EXPECT_EQ(s.test2[static_cast<std::size_t>(t)], oracle::sorted_median(col));
      EXPECT_EQ(s.test2[static_cast<std::size_t>(t)], test2_statistic(m, t));
    }
    for (std::size_t k = 0; k < s.test4.size(); ++k) {
      std::vector<double> d;
      for (int t = 0; t < T; ++t) d.push_back(std::abs(s.test5[k * static_cast<std::size_t>(T) + static_cast<std::size_t>(t)]));
      EXPECT_EQ(s.test4[k], oracle::sorted_median(d));
    }
    const auto pairs = product_pairs(static_cast<std::size_t>(P));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      EXPECT_EQ(s.test4[k], test4_statistic(m, static_cast<Eigen::Index>(pairs[k].first),
                                            static_cast<Eigen::Index>(pairs[k].second)));
    }
  }
}

TEST(TestStatistics, RelabellingPermutesValues)
{
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> cnt(0, 30);
  Eigen::MatrixXd m(5, 4);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = cnt(rng);
  // Row i moves to rows[i], column j to cols[j].
  const std::vector<Eigen::Index> rows{3, 0, 4, 1, 2}, cols{2, 3, 1, 0};
  Eigen::MatrixXd r(5, 4);
  for (Eigen::Index i = 0; i < 5; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) r(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]) = m(i, j);
  }
  EXPECT_EQ(test1_statistic(m), test1_statistic(r));
  for (Eigen::Index t = 0; t < 4; ++t) EXPECT_EQ(test2_statistic(m, t), test2_statistic(r, cols[static_cast<std::size_t>(t)]));
  for (Eigen::Index i = 0; i < 5; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) {
      if (i != j) {
        EXPECT_EQ(test4_statistic(m, i, j),
                  test4_statistic(r, rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]));
      }
    }
  }
}
