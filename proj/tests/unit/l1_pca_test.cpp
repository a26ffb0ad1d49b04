#include "cata/l1_pca.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cata;

namespace {

Labels names(const char* stem, Eigen::Index n)
{
  Labels out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(stem + std::to_string(i + 1));
  return out;
}

CataTable table_of(const Eigen::MatrixXi& counts, std::size_t A = 100)
{
  return CataTable(counts, A, names("P", counts.rows()), names("t", counts.cols()));
}

} // namespace

TEST(L1Pca, RankOneIsExplainedExactly)
{
  // Column medians are 4 v, so the centred table is (u - 4) v^T.
  Eigen::VectorXi u(5), v(4);
  u << 0, 2, 4, 6, 8;
  v << 1, 3, 2, 5;
  const Eigen::MatrixXi counts = u * v.transpose();
  const auto t = table_of(counts);
  const auto m = fit(t, 1);
  EXPECT_NEAR(m.objective, 0.0, 1e-8);
  EXPECT_NEAR(m.prop, 1.0, 1e-10);
  EXPECT_LE((m.reconstruct() - t.values()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(m.loadings.col(0).norm(), 1.0, 1e-12);

  const auto s = scree(t, 3);
  EXPECT_NEAR(s.rows[0].gain, 1.0, 1e-10);
  EXPECT_NEAR(s.rows[1].gain, 0.0, 1e-10);
  EXPECT_NEAR(s.rows[2].gain, 0.0, 1e-10);
}

TEST(L1Pca, AllZeroIsDegenerate)
{
  const auto t = table_of(Eigen::MatrixXi::Constant(4, 3, 7));
  const auto m = fit(t, 2);
  EXPECT_TRUE(m.degenerate);
  EXPECT_EQ(m.prop, 1.0);
  EXPECT_TRUE(m.scores.isZero());
  const auto e = explained_proportion(m, t);
  EXPECT_TRUE(e.degenerate);
}

TEST(L1Pca, ComponentRange)
{
  const auto t = table_of(Eigen::MatrixXi::Identity(4, 3));
  EXPECT_THROW(fit(t, 0), ConfigError);
  EXPECT_THROW(fit(t, 4), ConfigError);
  EXPECT_THROW(scree(t, 4), ConfigError);
}

TEST(L1Pca, MatchesMultistartOracleOnSmallMatrix)
{
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> cnt(0, 20);
  Eigen::MatrixXi counts(4, 3);
  for (Eigen::Index i = 0; i < counts.size(); ++i) counts.data()[i] = cnt(rng);
  const auto t = table_of(counts);
  const auto m = fit(t, 1);
  const Eigen::MatrixXd x = centre(t.values(), m.medians);
  const double best = oracle::multistart_l1_factorisation(x, 1, 10000, 4242);
  EXPECT_LE(m.objective, best + 1e-6);
}

TEST(L1Pca, AlternationNeverIncreasesObjective)
{
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> cnt(0, 50), dim(3, 7);
  L1PcaOptions opt;
  opt.record_history = true;
  for (int rep = 0; rep < 100; ++rep) {
    const int P = dim(rng), T = dim(rng);
    Eigen::MatrixXi counts(P, T);
    for (Eigen::Index i = 0; i < counts.size(); ++i) counts.data()[i] = cnt(rng);
    opt.seed = static_cast<std::uint64_t>(rep);
    const auto m = fit(table_of(counts), 1 + static_cast<std::size_t>(rep % 2), opt);
    for (std::size_t i = 1; i < m.history.size(); ++i) {
      EXPECT_LE(m.history[i], m.history[i - 1] * (1 + 1e-12) + 1e-9) << "rep " << rep << " step " << i;
    }
  }
}

TEST(L1Pca, CanonicalFormAndDeterminism)
{
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> cnt(0, 60);
  Eigen::MatrixXi counts(6, 5);
  for (Eigen::Index i = 0; i < counts.size(); ++i) counts.data()[i] = cnt(rng);
  const auto t = table_of(counts);
  L1PcaOptions opt;
  opt.seed = 9;
  const auto a = fit(t, 2, opt), b = fit(t, 2, opt);
  EXPECT_EQ(a.scores, b.scores);
  EXPECT_EQ(a.loadings, b.loadings);
  for (Eigen::Index k = 0; k < 2; ++k) {
    EXPECT_NEAR(a.loadings.col(k).norm(), 1.0, 1e-12);
    Eigen::Index arg = 0;
    a.loadings.col(k).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(a.loadings(arg, k), 0.0);
  }
  EXPECT_GE(a.scores.col(0).lpNorm<1>(), a.scores.col(1).lpNorm<1>());
  EXPECT_NEAR(explained_proportion(a, t).value, a.prop, 1e-12);
}

TEST(L1Pca, ProjectionConsistency)
{
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> cnt(0, 60);
  Eigen::MatrixXi counts(7, 5);
  for (Eigen::Index i = 0; i < counts.size(); ++i) counts.data()[i] = cnt(rng);
  const auto t = table_of(counts);
  const auto m = fit(t, 2);
  const Eigen::MatrixXd s = project_rows(m, t.values());
  const double obj = (centre(t.values(), m.medians) - s * m.loadings.transpose()).lpNorm<1>();
  EXPECT_LE(obj, m.objective + 1e-8);
}

TEST(Bootstrap, IdenticalAssessorsGiveIdenticalReplicates)
{
  // Arrays need two assessors; identical slices make every resample the original table.
  const CataArray same({"a", "b"}, {"p", "q", "r"}, {"x", "y", "z"},
                 {1, 0, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 0, 1});
  const auto t = aggregate(same);
  const auto m = fit(t, 2);
  const auto clouds = bootstrap_scores(same, m, 25, 3);
  const Eigen::MatrixXd expected = project_rows(m, t.values());
  for (std::size_t p = 0; p < 3; ++p) {
    for (Eigen::Index r = 0; r < 25; ++r) {
      EXPECT_EQ(clouds.clouds[p].row(r), expected.row(static_cast<Eigen::Index>(p)));
    }
  }
  EXPECT_THROW(bootstrap_scores(same, m, 0, 1), ConfigError);
}

TEST(Bootstrap, DeterministicAcrossWorkers)
{
  std::mt19937_64 gen(59);
  const auto arr = oracle::random_array(gen, 12, 5, 6);
  const auto m = fit(aggregate(arr), 2);
  const auto one = bootstrap_scores(arr, m, 40, 8, 1);
  const auto four = bootstrap_scores(arr, m, 40, 8, 4);
  for (std::size_t p = 0; p < 5; ++p) EXPECT_EQ(one.clouds[p], four.clouds[p]);
}
