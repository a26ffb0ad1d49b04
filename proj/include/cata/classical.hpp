#ifndef CATA_CLASSICAL_HPP
#define CATA_CLASSICAL_HPP

#include "cata/core_data.hpp"
#include "cata/error.hpp"
#include "cata/fdr.hpp"
#include "cata/l1_stats.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace cata {

struct CochranResult
{
  /// Empty when every assessor answered identically across products.
  std::optional<double> q;
  std::size_t df = 0;
  double p_value = 1.0;
};

/// Upper tail of chi-squared with `df` degrees of freedom.
inline double chi_squared_upper(double x, double df)
{
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

/// Cochran's Q across products for term t, with its asymptotic chi-squared
/// p-value on P-1 degrees of freedom.
inline CochranResult cochran_q(const CataArray& array, std::size_t t)
{
  if (t >= array.n_terms()) throw ConfigError("term index out of range");
  const std::size_t A = array.n_assessors(), P = array.n_products();
  std::vector<double> col(P, 0.0);
  double n_total = 0.0, row_sq = 0.0;
  for (std::size_t a = 0; a < A; ++a) {
    double r = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      const double c = array.cell(a, p, t);
      col[p] += c;
      r += c;
    }
    n_total += r;
    row_sq += r * r;
  }
  CochranResult out;
  out.df = P - 1;
  const double Pd = static_cast<double>(P);
  const double denom = Pd * n_total - row_sq;
  if (denom <= 0.0) return out;
  double col_sq = 0.0;
  for (double c : col) col_sq += c * c;
  const double q = (Pd - 1.0) * (Pd * col_sq - n_total * n_total) / denom;
  out.q = q;
  out.p_value = chi_squared_upper(q, Pd - 1.0);
  return out;
}

struct McNemarResult
{
  std::size_t b = 0; // cited for p1 only
  std::size_t c = 0; // cited for p2 only
  double p_value = 1.0;
};

/// Exact two-sided McNemar: twice the lower binomial(b+c, 1/2) tail at
/// min(b, c), capped at 1.
inline double mcnemar_exact_p(std::size_t b, std::size_t c)
{
  const std::size_t n = b + c;
  if (n == 0) return 1.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(n), 0.5);
  return std::min(1.0, 2.0 * boost::math::cdf(dist, static_cast<double>(std::min(b, c))));
}

inline McNemarResult mcnemar_exact(const CataArray& array, std::size_t p1, std::size_t p2, std::size_t t)
{
  if (p1 == p2) throw ConfigError("McNemar's test needs two distinct products");
  if (p1 >= array.n_products() || p2 >= array.n_products() || t >= array.n_terms()) {
    throw ConfigError("product or term index out of range");
  }
  McNemarResult r;
  for (std::size_t a = 0; a < array.n_assessors(); ++a) {
    const auto x = array.cell(a, p1, t), y = array.cell(a, p2, t);
    r.b += x && !y;
    r.c += !x && y;
  }
  r.p_value = mcnemar_exact_p(r.b, r.c);
  return r;
}

struct ClassicalReport
{
  double alpha = 0.05;
  bool fdr_controlled = true;
  std::vector<CochranResult> cochran;   // per term
  FdrResult cochran_fdr;
  std::vector<McNemarResult> mcnemar;   // pair * T + t, pairs as in product_pairs()
  FdrResult mcnemar_fdr;
  /// McNemar decisions at p <= alpha without adjustment.
  std::size_t mcnemar_uncorrected = 0;

  /// Significant pairs per term under the McNemar decision rule in force.
  std::vector<std::size_t> mcnemar_per_term(std::size_t terms) const
  {
    std::vector<std::size_t> out(terms, 0);
    for (std::size_t i = 0; i < mcnemar_fdr.significant.size(); ++i) out[i % terms] += mcnemar_fdr.significant[i];
    return out;
  }
};

inline ClassicalReport classical_tests(const CataArray& array, double alpha = 0.05, bool control_fdr = true)
{
  const std::size_t T = array.n_terms();
  ClassicalReport r;
  r.alpha = alpha;
  r.fdr_controlled = control_fdr;
  std::vector<double> qp;
  for (std::size_t t = 0; t < T; ++t) {
    r.cochran.push_back(cochran_q(array, t));
    qp.push_back(r.cochran.back().p_value);
  }
  r.cochran_fdr = control_fdr ? bh_stepup(qp, alpha) : uncorrected(qp, alpha);

  std::vector<double> mp;
  for (const auto& [i, j] : product_pairs(array.n_products())) {
    for (std::size_t t = 0; t < T; ++t) {
      r.mcnemar.push_back(mcnemar_exact(array, i, j, t));
      mp.push_back(r.mcnemar.back().p_value);
    }
  }
  r.mcnemar_fdr = control_fdr ? bh_stepup(mp, alpha) : uncorrected(mp, alpha);
  r.mcnemar_uncorrected = uncorrected(mp, alpha).significant_count();
  return r;
}

} // namespace cata

#endif // CATA_CLASSICAL_HPP
