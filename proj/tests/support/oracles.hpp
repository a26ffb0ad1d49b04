// Independent reference implementations used only by the test suites.
// They favour obviousness over speed and share no code path with the
// library routines they check beyond the basic median helpers.
#ifndef CATA_TESTS_ORACLES_HPP
#define CATA_TESTS_ORACLES_HPP

#include "cata/core_data.hpp"
#include "cata/lad.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace cata::oracle {

/// Median by full sort.
inline double sorted_median(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

/// The five statistic families of a count matrix, computed from their
/// definitions one hypothesis at a time.
struct Statistics
{
  double t1 = 0;
  std::vector<double> t2, t3, t4, t5abs;
};

inline Statistics statistics(const Eigen::MatrixXd& m)
{
  const auto P = m.rows(), T = m.cols();
  Statistics s;
  std::vector<double> meds(static_cast<std::size_t>(T));
  for (Eigen::Index t = 0; t < T; ++t) {
    std::vector<double> col;
    for (Eigen::Index p = 0; p < P; ++p) col.push_back(m(p, t));
    meds[static_cast<std::size_t>(t)] = sorted_median(col);
    std::vector<double> dev;
    for (double v : col) dev.push_back(std::abs(v - meds[static_cast<std::size_t>(t)]));
    s.t2.push_back(sorted_median(dev));
  }
  s.t1 = sorted_median(s.t2);
  for (Eigen::Index p = 0; p < P; ++p) {
    for (Eigen::Index t = 0; t < T; ++t) s.t3.push_back(std::abs(m(p, t) - meds[static_cast<std::size_t>(t)]));
  }
  for (Eigen::Index i = 0; i < P; ++i) {
    for (Eigen::Index j = i + 1; j < P; ++j) {
      std::vector<double> d;
      for (Eigen::Index t = 0; t < T; ++t) d.push_back(std::abs(m(i, t) - m(j, t)));
      s.t4.push_back(sorted_median(d));
      for (Eigen::Index t = 0; t < T; ++t) s.t5abs.push_back(std::abs(m(i, t) - m(j, t)));
    }
  }
  return s;
}

/// Exact permutation p-values by enumerating all (P!)^A row assignments.
struct ExactPValues
{
  double t1 = 0;
  std::vector<double> t2, t3, t4, t5;
  std::size_t assignments = 0;
};

inline ExactPValues exact_pvalues(const CataArray& array)
{
  const std::size_t A = array.n_assessors(), P = array.n_products(), T = array.n_terms();
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> perm(P);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  auto table = [&](const std::vector<std::size_t>& choice) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(T));
    for (std::size_t a = 0; a < A; ++a) {
      for (std::size_t p = 0; p < P; ++p) {
        for (std::size_t t = 0; t < T; ++t) {
          m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(t)) += array.cell(a, perms[choice[a]][p], t);
        }
      }
    }
    return m;
  };

  std::vector<std::size_t> choice(A, 0);
  const Statistics obs = statistics(table(choice)); // all-identity assignment
  ExactPValues out;
  out.t2.assign(obs.t2.size(), 0);
  out.t3.assign(obs.t3.size(), 0);
  out.t4.assign(obs.t4.size(), 0);
  out.t5.assign(obs.t5abs.size(), 0);
  for (;;) {
    const Statistics s = statistics(table(choice));
    out.t1 += s.t1 >= obs.t1;
    for (std::size_t i = 0; i < s.t2.size(); ++i) out.t2[i] += s.t2[i] >= obs.t2[i];
    for (std::size_t i = 0; i < s.t3.size(); ++i) out.t3[i] += s.t3[i] >= obs.t3[i];
    for (std::size_t i = 0; i < s.t4.size(); ++i) out.t4[i] += s.t4[i] >= obs.t4[i];
    for (std::size_t i = 0; i < s.t5abs.size(); ++i) out.t5[i] += s.t5abs[i] >= obs.t5abs[i];
    ++out.assignments;
    std::size_t a = 0;
    while (a < A && ++choice[a] == perms.size()) choice[a++] = 0;
    if (a == A) break;
  }
  const double n = static_cast<double>(out.assignments);
  out.t1 /= n;
  for (auto* v : {&out.t2, &out.t3, &out.t4, &out.t5}) {
    for (double& x : *v) x /= n;
  }
  return out;
}

/// Benjamini-Hochberg by quadratic scan: hypothesis i is a candidate when
/// p_i is below the BH entry of its largest tied rank.
struct NaiveBh
{
  bool any = false;
  double critical = 0;
  std::vector<bool> significant;
};

inline NaiveBh naive_bh(const std::vector<double>& p, double alpha, std::size_t M, bool strict)
{
  NaiveBh r;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t rank = 0;
    for (double q : p) rank += q <= p[i];
    const double entry = static_cast<double>(rank) / static_cast<double>(M) * alpha;
    const bool ok = strict ? p[i] < entry : p[i] <= entry;
    if (ok && (!r.any || p[i] > r.critical)) {
      r.any = true;
      r.critical = p[i];
    }
  }
  for (double q : p) r.significant.push_back(r.any && q <= r.critical);
  return r;
}

/// Complete linkage recomputing every inter-cluster distance from the
/// original matrix at each step.
struct NaiveMerge
{
  std::vector<std::size_t> a, b; // member leaves of the two merged clusters
  double height;
};

inline std::vector<NaiveMerge> naive_complete_linkage(const Eigen::MatrixXd& d)
{
  const auto n = static_cast<std::size_t>(d.rows());
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});
  std::vector<NaiveMerge> out;
  while (clusters.size() > 1) {
    std::sort(clusters.begin(), clusters.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        double far = 0;
        for (auto x : clusters[i]) {
          for (auto y : clusters[j]) far = std::max(far, d(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)));
        }
        if (far < best) {
          best = far;
          bi = i;
          bj = j;
        }
      }
    }
    out.push_back({clusters[bi], clusters[bj], best});
    auto merged = clusters[bi];
    merged.insert(merged.end(), clusters[bj].begin(), clusters[bj].end());
    std::sort(merged.begin(), merged.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    clusters[bi] = merged;
  }
  return out;
}

/// Best LAD objective over all basic solutions that interpolate k rows.
inline double lad_exhaustive(const Eigen::MatrixXd& X, const Eigen::VectorXd& y)
{
  const auto n = X.rows(), k = X.cols();
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> pick(static_cast<std::size_t>(n), false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    Eigen::MatrixXd S(k, k);
    Eigen::VectorXd r(k);
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (pick[static_cast<std::size_t>(i)]) {
        S.row(row) = X.row(i);
        r(row++) = y(i);
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd b = lu.solve(r);
    best = std::min(best, (y - X * b).lpNorm<1>());
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

/// Best objective of the plain LAD alternation from many random starts.
inline double multistart_l1_factorisation(const Eigen::MatrixXd& X, Eigen::Index K, std::size_t starts,
                                          std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const LadOptions lad{.allow_rank_deficient = true};
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts; ++s) {
    Eigen::MatrixXd V(X.cols(), K), U(X.rows(), K);
    for (Eigen::Index i = 0; i < V.size(); ++i) V.data()[i] = normal(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
      for (Eigen::Index p = 0; p < X.rows(); ++p) U.row(p) = lad_fit(V, X.row(p).transpose(), lad).coef.transpose();
      for (Eigen::Index t = 0; t < X.cols(); ++t) V.row(t) = lad_fit(U, X.col(t), lad).coef.transpose();
      const double obj = (X - U * V.transpose()).lpNorm<1>();
      if (prev - obj < 1e-12 * std::max(1.0, prev)) {
        prev = obj;
        break;
      }
      prev = obj;
    }
    best = std::min(best, prev);
  }
  return best;
}

/// stem1, stem2, ..., stemN
inline Labels names(const std::string& stem, std::size_t n)
{
  Labels out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(stem + std::to_string(i + 1));
  return out;
}

/// Random complete binary array with citation probability `rate`.
inline CataArray random_array(std::mt19937_64& rng, std::size_t A, std::size_t P, std::size_t T, double rate = 0.4)
{
  std::bernoulli_distribution cite(rate);
  Labels as, ps, ts;
  for (std::size_t a = 0; a < A; ++a) as.push_back("a" + std::to_string(a + 1));
  for (std::size_t p = 0; p < P; ++p) ps.push_back("P" + std::to_string(p + 1));
  for (std::size_t t = 0; t < T; ++t) ts.push_back("t" + std::to_string(t + 1));
  std::vector<std::uint8_t> cells(A * P * T);
  for (auto& c : cells) c = cite(rng);
  return CataArray(as, ps, ts, cells);
}

} // namespace cata::oracle

#endif // CATA_TESTS_ORACLES_HPP
