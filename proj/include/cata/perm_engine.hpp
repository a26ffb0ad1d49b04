#ifndef CATA_PERM_ENGINE_HPP
#define CATA_PERM_ENGINE_HPP

#include "cata/core_data.hpp"
#include "cata/error.hpp"
#include "cata/fdr.hpp"
#include "cata/l1_stats.hpp"
#include "cata/parallel.hpp"
#include "cata/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace cata {

inline constexpr std::size_t default_permutations = 9999;

struct PermutationPlan
{
  std::size_t permutations = default_permutations;
  std::uint64_t seed = 0;
  std::set<int> tests{1, 2, 3, 4, 5};
  double alpha = 0.05;
  bool control_fdr = true;
  /// 0 selects one worker per hardware thread. Results do not depend on it.
  std::size_t workers = 0;

  void validate() const
  {
    if (tests.empty()) throw ConfigError("at least one test must be requested");
    for (int t : tests) {
      if (t < 1 || t > 5) throw ConfigError("unknown test number " + std::to_string(t));
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  }
};

/// Observed statistic plus the B values simulated under the null.
struct NullDistribution
{
  int test = 1;
  std::optional<std::size_t> product;
  std::optional<std::size_t> product2;
  std::optional<std::size_t> term;
  double observed = 0.0;
  std::vector<double> simulated;
};

/// Upper-tail proportion of the B+1 values (observed included) that reach
/// the observed value; on absolute values when `two_sided_on_abs`.
inline double pvalue(const NullDistribution& null, bool two_sided_on_abs = false)
{
  auto key = [&](double v) { return two_sided_on_abs ? std::abs(v) : v; };
  const double obs = key(null.observed);
  std::size_t count = 1;
  for (double v : null.simulated) count += key(v) >= obs;
  return static_cast<double>(count) / static_cast<double>(null.simulated.size() + 1);
}

struct Hypothesis
{
  std::optional<std::size_t> product;
  std::optional<std::size_t> product2;
  std::optional<std::size_t> term;
  /// Percentage scale; signed for Test 5.
  double statistic = 0.0;
  /// Direction on the observed table (Tests 3 and 5), else 0.
  int sign = 0;
  /// Null values, observed included, at least as extreme as the observed.
  std::size_t exceed = 0;
  double p_value = 1.0;
  double bh_value = 0.0;
  bool significant = false;
};

struct TestReport
{
  int test = 1;
  std::size_t permutations = 0;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  bool fdr_controlled = true;
  std::size_t family_size = 0;
  std::optional<double> critical_value;
  bool boundary_tie = false;
  std::vector<Hypothesis> rows;
  /// Kept for Test 1 only; the other families store exceedance counts.
  std::optional<NullDistribution> null;

  std::size_t significant_count() const
  {
    return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const Hypothesis& h) { return h.significant; }));
  }
};

using TestReports = std::map<int, TestReport>;

/// One uniformly random product assignment per assessor: row p of assessor
/// a's permuted slice is source row result[a][p].
inline std::vector<std::vector<std::size_t>> draw_assignment(Engine& rng, std::size_t assessors,
                                                             std::size_t products)
{
  std::vector<std::vector<std::size_t>> out(assessors, std::vector<std::size_t>(products));
  for (auto& perm : out) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    shuffle(std::span<std::size_t>(perm), rng);
  }
  return out;
}

/// Shuffles product rows independently within every assessor slice; the
/// terms of each row stay together.
inline CataArray permute_within_assessor(const CataArray& array, Engine& rng)
{
  const auto rows = draw_assignment(rng, array.n_assessors(), array.n_products());
  std::vector<std::size_t> identity(array.n_assessors());
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  return array.remapped(identity, rows);
}

/// The engine for permutation b (1-based) of a plan.
inline Engine permutation_engine(std::uint64_t seed, std::size_t b)
{
  return derive_engine(seed, Stream::permutation, b);
}

namespace detail {

/// Exceedance counters for every statistic of one table layout.
struct Exceedance
{
  std::size_t test1 = 0;
  std::vector<std::size_t> test2, test3, test4, test5;

  Exceedance(std::size_t P, std::size_t T)
    : test2(T, 0)
    , test3(P * T, 0)
    , test4(pair_count(P), 0)
    , test5(pair_count(P) * T, 0)
  {
  }

  void merge(const Exceedance& o)
  {
    test1 += o.test1;
    auto add = [](std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    add(test2, o.test2);
    add(test3, o.test3);
    add(test4, o.test4);
    add(test5, o.test5);
  }

  void record(const StatisticSet& obs, const StatisticSet& sim)
  {
    test1 += sim.test1 >= obs.test1;
    for (std::size_t i = 0; i < test2.size(); ++i) test2[i] += sim.test2[i] >= obs.test2[i];
    for (std::size_t i = 0; i < test3.size(); ++i) test3[i] += sim.test3[i] >= obs.test3[i];
    for (std::size_t i = 0; i < test4.size(); ++i) test4[i] += sim.test4[i] >= obs.test4[i];
    for (std::size_t i = 0; i < test5.size(); ++i) test5[i] += std::abs(sim.test5[i]) >= std::abs(obs.test5[i]);
  }
};

inline std::vector<double> row_major(const Eigen::MatrixXd& m)
{
  std::vector<double> out(static_cast<std::size_t>(m.size()));
  for (Eigen::Index p = 0; p < m.rows(); ++p) {
    for (Eigen::Index t = 0; t < m.cols(); ++t) out[static_cast<std::size_t>(p * m.cols() + t)] = m(p, t);
  }
  return out;
}

inline void finish_family(TestReport& report, const PermutationPlan& plan)
{
  std::vector<double> ps;
  ps.reserve(report.rows.size());
  for (const auto& h : report.rows) ps.push_back(h.p_value);
  FdrResult fdr = plan.control_fdr && report.test != 1 ? bh_stepup(ps, plan.alpha) : uncorrected(ps, plan.alpha);
  report.family_size = fdr.family_size;
  report.critical_value = fdr.critical_value;
  report.boundary_tie = fdr.boundary_tie;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    report.rows[i].bh_value = fdr.bh_values[i];
    report.rows[i].significant = fdr.significant[i];
  }
}

} // namespace detail

/// Runs the requested tests on one shared set of B permuted tables.
///
/// Statistics are compared on the citation-count scale, where every median
/// and MAD is exact, and reported on the percentage scale. Permutation b
/// draws from its own derived stream, so the output is identical for any
/// worker count.
inline TestReports run_tests(const CataArray& array, const PermutationPlan& plan)
{
  plan.validate();
  const std::size_t A = array.n_assessors(), P = array.n_products(), T = array.n_terms();
  const std::size_t B = plan.permutations;
  const double to_percent = 100.0 / static_cast<double>(A);

  const CataTable table = aggregate(array);
  StatisticSet obs_counts, obs_pct;
  {
    StatisticWorkspace ws(P, T);
    ws.compute(detail::row_major(table.counts().cast<double>()), obs_counts);
    ws.compute(detail::row_major(table.values()), obs_pct);
  }

  std::vector<double> test1_null(B, 0.0);
  const std::size_t workers = resolve_workers(plan.workers);
  std::vector<detail::Exceedance> partial(std::min(workers, std::max<std::size_t>(B, 1)), detail::Exceedance(P, T));

  parallel_blocks(B, workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
    StatisticWorkspace ws(P, T);
    StatisticSet sim;
    std::vector<double> counts(P * T);
    auto& acc = partial[w];
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t b = i + 1;
      Engine rng = permutation_engine(plan.seed, b);
      const auto rows = draw_assignment(rng, A, P);
      std::fill(counts.begin(), counts.end(), 0.0);
      for (std::size_t a = 0; a < A; ++a) {
        for (std::size_t p = 0; p < P; ++p) {
          auto src = array.row(a, rows[a][p]);
          double* dst = counts.data() + p * T;
          for (std::size_t t = 0; t < T; ++t) dst[t] += src[t];
        }
      }
      ws.compute(counts, sim);
      acc.record(obs_counts, sim);
      test1_null[i] = sim.test1 * to_percent;
    }
  });

  detail::Exceedance total(P, T);
  for (const auto& e : partial) total.merge(e);

  const double denom = static_cast<double>(B + 1);
  auto make = [&](int test) {
    TestReport r;
    r.test = test;
    r.permutations = B;
    r.seed = plan.seed;
    r.alpha = plan.alpha;
    r.fdr_controlled = plan.control_fdr && test != 1;
    return r;
  };
  auto hyp = [&](std::size_t exceed_sim) {
    Hypothesis h;
    h.exceed = exceed_sim + 1;
    h.p_value = static_cast<double>(h.exceed) / denom;
    return h;
  };

  TestReports out;
  const auto pairs = product_pairs(P);
  if (plan.tests.count(1)) {
    auto r = make(1);
    auto h = hyp(total.test1);
    h.statistic = obs_pct.test1;
    r.rows.push_back(h);
    r.null = NullDistribution{1, {}, {}, {}, obs_pct.test1, std::move(test1_null)};
    out.emplace(1, std::move(r));
  }
  if (plan.tests.count(2)) {
    auto r = make(2);
    for (std::size_t t = 0; t < T; ++t) {
      auto h = hyp(total.test2[t]);
      h.term = t;
      h.statistic = obs_pct.test2[t];
      r.rows.push_back(h);
    }
    out.emplace(2, std::move(r));
  }
  if (plan.tests.count(3)) {
    auto r = make(3);
    for (std::size_t p = 0; p < P; ++p) {
      for (std::size_t t = 0; t < T; ++t) {
        auto h = hyp(total.test3[p * T + t]);
        h.product = p;
        h.term = t;
        h.statistic = obs_pct.test3[p * T + t];
        h.sign = obs_pct.test3_sign[p * T + t];
        r.rows.push_back(h);
      }
    }
    out.emplace(3, std::move(r));
  }
  if (plan.tests.count(4)) {
    auto r = make(4);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto h = hyp(total.test4[k]);
      h.product = pairs[k].first;
      h.product2 = pairs[k].second;
      h.statistic = obs_pct.test4[k];
      r.rows.push_back(h);
    }
    out.emplace(4, std::move(r));
  }
  if (plan.tests.count(5)) {
    auto r = make(5);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      for (std::size_t t = 0; t < T; ++t) {
        auto h = hyp(total.test5[k * T + t]);
        h.product = pairs[k].first;
        h.product2 = pairs[k].second;
        h.term = t;
        h.statistic = obs_pct.test5[k * T + t];
        h.sign = sign_of(h.statistic);
        r.rows.push_back(h);
      }
    }
    out.emplace(5, std::move(r));
  }
  for (auto& [_, r] : out) detail::finish_family(r, plan);
  return out;
}

} // namespace cata

#endif // CATA_PERM_ENGINE_HPP
