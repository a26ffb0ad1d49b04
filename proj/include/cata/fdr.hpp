#ifndef CATA_FDR_HPP
#define CATA_FDR_HPP

#include "cata/error.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cata {

enum class BhComparison
{
  strict,    // p(k) <  (k/M) alpha
  inclusive, // p(k) <= (k/M) alpha, the classical formulation
};

struct FdrResult
{
  double alpha = 0.05;
  std::size_t family_size = 0;
  /// Largest qualifying p-value; empty when nothing qualifies.
  std::optional<double> critical_value;
  std::vector<bool> significant;
  /// (rank/M) alpha at each hypothesis' position in the ascending sort.
  std::vector<double> bh_values;
  /// Some p-value equals its BH entry exactly, so strict and inclusive
  /// comparisons may disagree.
  bool boundary_tie = false;

  std::size_t significant_count() const
  {
    return static_cast<std::size_t>(std::count(significant.begin(), significant.end(), true));
  }
};

inline double bh_entry(std::size_t rank, std::size_t family_size, double alpha)
{
  return static_cast<double>(rank) / static_cast<double>(family_size) * alpha;
}

/// Benjamini-Hochberg step-up over `pvalues` with family size `family_size`
/// (0 means the number of p-values supplied).
///
/// Tied p-values are compared against the BH entry of the largest rank in
/// their block, so a tied block is accepted or rejected as a unit.
inline FdrResult bh_stepup(std::span<const double> pvalues, double alpha, std::size_t family_size = 0,
                           BhComparison cmp = BhComparison::strict)
{
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("FDR level must lie in (0, 1)");
  for (double p : pvalues) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p-value outside [0, 1]: " + std::to_string(p));
  }
  const std::size_t n = pvalues.size();
  const std::size_t M = family_size == 0 ? n : family_size;
  if (M < n) throw ConfigError("family size smaller than the number of p-values");

  FdrResult r;
  r.alpha = alpha;
  r.family_size = M;
  r.significant.assign(n, false);
  r.bh_values.assign(n, 0.0);
  if (n == 0) return r;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });

  for (std::size_t k = 0; k < n; ++k) r.bh_values[order[k]] = bh_entry(k + 1, M, alpha);

  for (std::size_t start = 0; start < n;) {
    std::size_t end = start;
    while (end + 1 < n && pvalues[order[end + 1]] == pvalues[order[start]]) ++end;
    const double p = pvalues[order[start]];
    const double entry = bh_entry(end + 1, M, alpha);
    if (p == entry) r.boundary_tie = true;
    const bool qualifies = cmp == BhComparison::strict ? p < entry : p <= entry;
    if (qualifies) r.critical_value = p;
    start = end + 1;
  }
  if (r.critical_value) {
    for (std::size_t i = 0; i < n; ++i) r.significant[i] = pvalues[i] <= *r.critical_value;
  }
  return r;
}

/// Unadjusted decisions, p <= alpha, used when FDR control is switched off.
inline FdrResult uncorrected(std::span<const double> pvalues, double alpha)
{
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("significance level must lie in (0, 1)");
  FdrResult r;
  r.alpha = alpha;
  r.family_size = pvalues.size();
  r.bh_values.assign(pvalues.size(), alpha);
  for (double p : pvalues) {
    r.significant.push_back(p <= alpha);
    if (p <= alpha && (!r.critical_value || p > *r.critical_value)) r.critical_value = p;
  }
  return r;
}

} // namespace cata

#endif // CATA_FDR_HPP
