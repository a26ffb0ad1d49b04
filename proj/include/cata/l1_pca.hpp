#ifndef CATA_L1_PCA_HPP
#define CATA_L1_PCA_HPP

#include "cata/core_data.hpp"
#include "cata/error.hpp"
#include "cata/lad.hpp"
#include "cata/l1_stats.hpp"
#include "cata/parallel.hpp"
#include "cata/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace cata {

struct L1PcaOptions
{
  /// Stop once an iteration improves the objective by less than this
  /// fraction of its previous value.
  double tolerance = 1e-8;
  std::size_t max_iterations = 500;
  /// One L2-SVD start plus restarts-1 random orthonormal starts.
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  /// Keep the objective after every half-step of the winning start.
  bool record_history = false;
};

struct L1PcaModel
{
  Labels products;
  Labels terms;
  Eigen::VectorXd medians;  // T
  Eigen::MatrixXd scores;   // P x K
  Eigen::MatrixXd loadings; // T x K, unit columns
  std::size_t components = 0;
  /// Sum of absolute residuals of the median-centred table.
  double objective = 0.0;
  /// L1 norm of the median-centred table.
  double total_l1 = 0.0;
  double prop = 0.0;
  bool converged = false;
  /// The centred table is all zeros; prop is reported as 1.
  bool degenerate = false;
  std::size_t iterations = 0;
  std::size_t best_start = 0;
  std::vector<double> history;

  /// scores * loadings^T + medians, on the percentage scale.
  Eigen::MatrixXd reconstruct() const
  {
    Eigen::MatrixXd r = scores * loadings.transpose();
    r.rowwise() += medians.transpose();
    return r;
  }
};

struct ExplainedProportion
{
  double value = 1.0;
  bool degenerate = false;
};

namespace detail {

struct Alternation
{
  Eigen::MatrixXd scores, loadings;
  double objective = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

inline void normalise_loadings(Eigen::MatrixXd& scores, Eigen::MatrixXd& loadings)
{
  for (Eigen::Index k = 0; k < loadings.cols(); ++k) {
    const double n = loadings.col(k).norm();
    if (n > 0.0) {
      loadings.col(k) /= n;
      scores.col(k) *= n;
    }
  }
}

inline Alternation alternate(const Eigen::MatrixXd& X, Eigen::MatrixXd loadings, const L1PcaOptions& opt)
{
  const LadOptions lad{.allow_rank_deficient = true};
  const Eigen::Index P = X.rows(), T = X.cols(), K = loadings.cols();
  Alternation a;
  a.loadings = std::move(loadings);
  a.scores = Eigen::MatrixXd::Zero(P, K);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
    for (Eigen::Index p = 0; p < P; ++p) {
      a.scores.row(p) = lad_fit(a.loadings, X.row(p).transpose(), lad).coef.transpose();
    }
    if (opt.record_history) a.history.push_back((X - a.scores * a.loadings.transpose()).lpNorm<1>());
    for (Eigen::Index t = 0; t < T; ++t) {
      a.loadings.row(t) = lad_fit(a.scores, X.col(t), lad).coef.transpose();
    }
    normalise_loadings(a.scores, a.loadings);
    a.objective = (X - a.scores * a.loadings.transpose()).lpNorm<1>();
    if (opt.record_history) a.history.push_back(a.objective);
    a.iterations = it;
    if (a.objective == 0.0 || previous - a.objective < opt.tolerance * previous) {
      a.converged = true;
      break;
    }
    previous = a.objective;
  }
  return a;
}

inline Eigen::MatrixXd random_orthonormal(Eigen::Index rows, Eigen::Index cols, Engine& rng)
{
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

/// Unit loadings, largest-magnitude loading entry positive, components in
/// decreasing L1 norm of their score column.
inline void canonicalise(Eigen::MatrixXd& scores, Eigen::MatrixXd& loadings)
{
  normalise_loadings(scores, loadings);
  const Eigen::Index K = loadings.cols();
  for (Eigen::Index k = 0; k < K; ++k) {
    Eigen::Index arg = 0;
    loadings.col(k).cwiseAbs().maxCoeff(&arg);
    if (loadings(arg, k) < 0.0) {
      loadings.col(k) *= -1.0;
      scores.col(k) *= -1.0;
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return scores.col(a).lpNorm<1>() > scores.col(b).lpNorm<1>();
  });
  Eigen::MatrixXd s(scores.rows(), K), l(loadings.rows(), K);
  for (Eigen::Index k = 0; k < K; ++k) {
    s.col(k) = scores.col(order[static_cast<std::size_t>(k)]);
    l.col(k) = loadings.col(order[static_cast<std::size_t>(k)]);
  }
  scores = std::move(s);
  loadings = std::move(l);
}

} // namespace detail

/// Median-centred percentages: table values minus `medians`.
inline Eigen::MatrixXd centre(const Eigen::MatrixXd& values, const Eigen::VectorXd& medians)
{
  Eigen::MatrixXd x = values;
  x.rowwise() -= medians.transpose();
  return x;
}

/// Rank-K L1 factorisation of the median-centred table by alternating LAD
/// subproblems (rows with loadings fixed, then columns with scores fixed),
/// keeping the best of several starts.
inline L1PcaModel fit(const CataTable& table, std::size_t K, const L1PcaOptions& opt = {})
{
  const std::size_t kmax = std::min(table.n_products(), table.n_terms());
  if (K < 1 || K > kmax) {
    throw ConfigError("number of components must lie in [1, " + std::to_string(kmax) + "]");
  }
  if (opt.restarts < 1) throw ConfigError("at least one L1-PCA start is required");
  if (opt.max_iterations < 1) throw ConfigError("at least one L1-PCA iteration is required");

  L1PcaModel m;
  m.products = table.product_labels();
  m.terms = table.term_labels();
  m.components = K;
  m.medians = column_medians(table.values());
  const Eigen::MatrixXd X = centre(table.values(), m.medians);
  const auto P = X.rows(), T = X.cols(), k = static_cast<Eigen::Index>(K);
  m.total_l1 = X.lpNorm<1>();

  if (m.total_l1 == 0.0) {
    m.scores = Eigen::MatrixXd::Zero(P, k);
    m.loadings = Eigen::MatrixXd::Identity(T, k);
    m.prop = 1.0;
    m.converged = true;
    m.degenerate = true;
    return m;
  }

  detail::Alternation best;
  for (std::size_t start = 0; start < opt.restarts; ++start) {
    Eigen::MatrixXd init;
    if (start == 0) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinV);
      init = svd.matrixV().leftCols(k);
    } else {
      Engine rng = derive_engine(opt.seed, Stream::pca_restart, start);
      init = detail::random_orthonormal(T, k, rng);
    }
    auto a = detail::alternate(X, std::move(init), opt);
    if (a.objective < best.objective) {
      best = std::move(a);
      m.best_start = start;
    }
  }

  detail::canonicalise(best.scores, best.loadings);
  m.scores = std::move(best.scores);
  m.loadings = std::move(best.loadings);
  m.objective = (X - m.scores * m.loadings.transpose()).lpNorm<1>();
  m.prop = (m.scores * m.loadings.transpose()).lpNorm<1>() / m.total_l1;
  m.converged = best.converged;
  m.iterations = best.iterations;
  m.history = std::move(best.history);
  return m;
}

/// ||scores loadings^T||_1 / ||X||_1 with X centred by the model's medians.
inline ExplainedProportion explained_proportion(const L1PcaModel& model, const CataTable& table)
{
  const double total = centre(table.values(), model.medians).lpNorm<1>();
  if (total == 0.0) return {1.0, true};
  return {(model.scores * model.loadings.transpose()).lpNorm<1>() / total, false};
}

struct ScreeRow
{
  std::size_t components = 0;
  double prop = 0.0;
  /// prop_K - prop_{K-1}, prop_0 = 0. Not necessarily monotone.
  double gain = 0.0;
  bool converged = false;
};

struct ScreeTable
{
  std::vector<ScreeRow> rows;
};

/// Independent fits for K = 1..kmax.
inline ScreeTable scree(const CataTable& table, std::size_t kmax, const L1PcaOptions& opt = {},
                        std::size_t workers = 0)
{
  const std::size_t limit = std::min(table.n_products(), table.n_terms());
  if (kmax < 1 || kmax > limit) throw ConfigError("scree dimension must lie in [1, " + std::to_string(limit) + "]");
  std::vector<ScreeRow> rows(kmax);
  parallel_blocks(kmax, workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto m = fit(table, i + 1, opt);
      rows[i] = {i + 1, m.prop, 0.0, m.converged};
    }
  });
  double previous = 0.0;
  for (auto& r : rows) {
    r.gain = r.prop - previous;
    previous = r.prop;
  }
  return {std::move(rows)};
}

/// Scores of each row of `values` (P x T percentages) on the model's fixed
/// loadings: LAD regression of the centred row on the loading matrix.
inline Eigen::MatrixXd project_rows(const L1PcaModel& model, const Eigen::MatrixXd& values)
{
  const Eigen::MatrixXd X = centre(values, model.medians);
  Eigen::MatrixXd scores(X.rows(), model.loadings.cols());
  const LadOptions lad{.allow_rank_deficient = true};
  for (Eigen::Index p = 0; p < X.rows(); ++p) {
    scores.row(p) = lad_fit(model.loadings, X.row(p).transpose(), lad).coef.transpose();
  }
  return scores;
}

/// Per-product bootstrap score clouds: clouds[p] is R x K.
struct BootstrapClouds
{
  Labels products;
  std::vector<Eigen::MatrixXd> clouds;
};

/// Resamples assessor slices with replacement R times, aggregates each
/// resample and projects its rows onto the original solution (original
/// medians, original loadings).
inline BootstrapClouds bootstrap_scores(const CataArray& array, const L1PcaModel& model, std::size_t replicates,
                                        std::uint64_t seed, std::size_t workers = 0)
{
  if (replicates < 1) throw ConfigError("at least one bootstrap replicate is required");
  const std::size_t A = array.n_assessors(), P = array.n_products(), T = array.n_terms();
  if (P != model.products.size() || T != model.terms.size()) {
    throw DataError("bootstrap array does not match the fitted model");
  }
  const auto K = model.loadings.cols();
  BootstrapClouds out{array.product_labels(), std::vector<Eigen::MatrixXd>(P, Eigen::MatrixXd(replicates, K))};

  parallel_blocks(replicates, workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    Eigen::MatrixXd pct(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(T));
    for (std::size_t r = begin; r < end; ++r) {
      Engine rng = derive_engine(seed, Stream::bootstrap, r + 1);
      pct.setZero();
      for (std::size_t a = 0; a < A; ++a) {
        const std::size_t src = uniform_below(rng, A);
        for (std::size_t p = 0; p < P; ++p) {
          auto row = array.row(src, p);
          for (std::size_t t = 0; t < T; ++t) pct(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(t)) += row[t];
        }
      }
      pct *= 100.0 / static_cast<double>(A);
      const Eigen::MatrixXd s = project_rows(model, pct);
      for (std::size_t p = 0; p < P; ++p) {
        out.clouds[p].row(static_cast<Eigen::Index>(r)) = s.row(static_cast<Eigen::Index>(p));
      }
    }
  });
  return out;
}

} // namespace cata

#endif // CATA_L1_PCA_HPP
