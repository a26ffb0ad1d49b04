#include "cata/lad.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cata;

TEST(Lad, LocationIsTheMedian)
{
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(3, 1);
  Eigen::VectorXd y(3);
  y << 1, 2, 6;
  const auto r = lad_fit(ones, y);
  EXPECT_NEAR(r.coef(0), 2.0, 1e-12);
  EXPECT_NEAR(r.objective, 5.0, 1e-12);
}

TEST(Lad, OnlyReducibleResidual)
{
  Eigen::MatrixXd x(2, 1);
  x << 1, 0;
  Eigen::VectorXd y(2);
  y << 7, 3;
  EXPECT_NEAR(lad_solve(x, y)(0), 7.0, 1e-12);
}

TEST(Lad, NegativeTargetsAndExactFit)
{
  Eigen::MatrixXd x(4, 2);
  x << 1, 0, 1, 1, 1, 2, 1, 3;
  Eigen::VectorXd y = x * Eigen::Vector2d(-3.0, 2.5);
  const auto r = lad_fit(x, y);
  EXPECT_NEAR(r.objective, 0.0, 1e-10);
  EXPECT_NEAR(r.coef(0), -3.0, 1e-10);
  EXPECT_NEAR(r.coef(1), 2.5, 1e-10);
}

TEST(Lad, Errors)
{
  Eigen::MatrixXd dup(3, 2);
  dup << 1, 2, 1, 2, 1, 2;
  const Eigen::VectorXd y = Eigen::VectorXd::Ones(3);
  EXPECT_THROW(lad_fit(dup, y), NumericalError);
  EXPECT_NO_THROW(lad_fit(dup, y, {.allow_rank_deficient = true}));
  EXPECT_THROW(lad_fit(Eigen::MatrixXd(0, 1), Eigen::VectorXd(0)), ConfigError);
  EXPECT_THROW(lad_fit(Eigen::MatrixXd::Ones(2, 1), y), ConfigError);
}

TEST(Lad, MatchesExhaustiveBasicSolutions)
{
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> rows(1, 8), cols(1, 3), small(-9, 9);
  std::normal_distribution<double> normal;
  int checked = 0;
  for (int rep = 0; checked < 500; ++rep) {
    const int k = cols(rng), n = std::max(k, rows(rng));
    Eigen::MatrixXd x(n, k);
    Eigen::VectorXd y(n);
    const bool integer = rep % 2 == 0; // integer data has many degenerate vertices
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = integer ? small(rng) : normal(rng);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = integer ? small(rng) : 10 * normal(rng);
    if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(x).rank() < k) continue;
    const auto r = lad_fit(x, y);
    EXPECT_NEAR(r.objective, oracle::lad_exhaustive(x, y), 1e-9 * std::max(1.0, r.objective)) << "rep " << rep;
    ++checked;
  }
}

TEST(Lad, PerturbationCertificate)
{
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::MatrixXd x(7, 3);
    Eigen::VectorXd y(7);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
    for (Eigen::Index i = 0; i < 7; ++i) y(i) = normal(rng);
    const auto r = lad_fit(x, y);
    for (Eigen::Index j = 0; j < 3; ++j) {
      for (double delta : {1e-4, -1e-4}) {
        Eigen::VectorXd b = r.coef;
        b(j) += delta;
        EXPECT_GE(l1_residual(x, y, b), r.objective - 1e-10);
      }
    }
  }
}
