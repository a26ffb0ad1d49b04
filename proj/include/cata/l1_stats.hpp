#ifndef CATA_L1_STATS_HPP
#define CATA_L1_STATS_HPP

#include "cata/core_data.hpp"
#include "cata/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cata {

namespace detail {

/// Median of `buf`, reordering it. Even lengths take the midpoint of the
/// two central order statistics.
inline double median_inplace(std::span<double> buf)
{
  const std::size_t n = buf.size();
  const std::size_t mid = n / 2;
  std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid), buf.end());
  const double upper = buf[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

} // namespace detail

inline double median(std::span<const double> values)
{
  if (values.empty()) throw DataError("median of an empty list");
  std::vector<double> buf(values.begin(), values.end());
  return detail::median_inplace(buf);
}

/// Median of absolute deviations from the median.
inline double mad_about_median(std::span<const double> values)
{
  if (values.empty()) throw DataError("MAD of an empty list");
  std::vector<double> buf(values.begin(), values.end());
  const double m = detail::median_inplace(buf);
  for (std::size_t i = 0; i < values.size(); ++i) buf[i] = std::abs(values[i] - m);
  return detail::median_inplace(buf);
}

struct TermSummary
{
  std::string term;
  double median = 0.0;
  double mad = 0.0;
};

/// Column medians of a P x T matrix.
template <class Derived>
Eigen::VectorXd column_medians(const Eigen::MatrixBase<Derived>& m)
{
  Eigen::VectorXd out(m.cols());
  std::vector<double> buf(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index t = 0; t < m.cols(); ++t) {
    for (Eigen::Index p = 0; p < m.rows(); ++p) buf[static_cast<std::size_t>(p)] = m(p, t);
    out(t) = detail::median_inplace(buf);
  }
  return out;
}

inline std::vector<TermSummary> term_summaries(const CataTable& table)
{
  std::vector<TermSummary> out;
  std::vector<double> col(table.n_products());
  for (std::size_t t = 0; t < table.n_terms(); ++t) {
    for (std::size_t p = 0; p < table.n_products(); ++p) col[p] = table.value(p, t);
    out.push_back({table.term_labels()[t], median(col), mad_about_median(col)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// The five test statistics. Each has a matrix template (used on the count
// scale by the permutation engine) and a CataTable overload on percentages.
// ---------------------------------------------------------------------------

/// Signed deviation of one cell from its column median.
struct CellDeviation
{
  double magnitude = 0.0;
  int sign = 0;
};

inline int sign_of(double x) { return (x > 0) - (x < 0); }

template <class Derived>
double test2_statistic(const Eigen::MatrixBase<Derived>& m, Eigen::Index t)
{
  std::vector<double> col(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index p = 0; p < m.rows(); ++p) col[static_cast<std::size_t>(p)] = m(p, t);
  return mad_about_median(col);
}

template <class Derived>
double test1_statistic(const Eigen::MatrixBase<Derived>& m)
{
  std::vector<double> mads(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index t = 0; t < m.cols(); ++t) mads[static_cast<std::size_t>(t)] = test2_statistic(m, t);
  return median(mads);
}

template <class Derived>
CellDeviation test3_statistic(const Eigen::MatrixBase<Derived>& m, Eigen::Index p, Eigen::Index t)
{
  std::vector<double> col(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) col[static_cast<std::size_t>(i)] = m(i, t);
  const double d = m(p, t) - median(col);
  return {std::abs(d), sign_of(d)};
}

template <class Derived>
double test4_statistic(const Eigen::MatrixBase<Derived>& m, Eigen::Index p1, Eigen::Index p2)
{
  if (p1 == p2) throw ConfigError("pairwise statistic needs two distinct products");
  std::vector<double> diffs(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index t = 0; t < m.cols(); ++t) diffs[static_cast<std::size_t>(t)] = std::abs(m(p1, t) - m(p2, t));
  return median(diffs);
}

template <class Derived>
double test5_statistic(const Eigen::MatrixBase<Derived>& m, Eigen::Index p1, Eigen::Index p2, Eigen::Index t)
{
  if (p1 == p2) throw ConfigError("pairwise statistic needs two distinct products");
  return m(p1, t) - m(p2, t);
}

inline double stat_test1(const CataTable& table) { return test1_statistic(table.values()); }

inline double stat_test2(const CataTable& table, std::size_t t)
{
  return test2_statistic(table.values(), static_cast<Eigen::Index>(t));
}

inline CellDeviation stat_test3(const CataTable& table, std::size_t p, std::size_t t)
{
  return test3_statistic(table.values(), static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(t));
}

inline double stat_test4(const CataTable& table, std::size_t p1, std::size_t p2)
{
  return test4_statistic(table.values(), static_cast<Eigen::Index>(p1), static_cast<Eigen::Index>(p2));
}

inline double stat_test5(const CataTable& table, std::size_t p1, std::size_t p2, std::size_t t)
{
  return test5_statistic(table.values(), static_cast<Eigen::Index>(p1), static_cast<Eigen::Index>(p2),
                         static_cast<Eigen::Index>(t));
}

/// Number of unordered product pairs.
constexpr std::size_t pair_count(std::size_t products) { return products * (products - 1) / 2; }

/// Unordered pairs (i < j) in lexicographic order.
inline std::vector<std::pair<std::size_t, std::size_t>> product_pairs(std::size_t products)
{
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(pair_count(products));
  for (std::size_t i = 0; i < products; ++i) {
    for (std::size_t j = i + 1; j < products; ++j) out.emplace_back(i, j);
  }
  return out;
}

/// Every statistic of the five tests for one table, in flat layout:
/// test2[t], test3[p*T + t], test4[pair], test5[pair*T + t] (signed).
struct StatisticSet
{
  double test1 = 0.0;
  std::vector<double> test2;
  std::vector<double> test3;
  std::vector<int> test3_sign;
  std::vector<double> test4;
  std::vector<double> test5;
};

/// Scratch buffers reused across permuted tables.
class StatisticWorkspace
{
public:
  StatisticWorkspace(std::size_t products, std::size_t terms)
    : P_(products)
    , T_(terms)
    , column_(products)
    , terms_buf_(terms)
  {
  }

  /// Fills `out` from the row-major P x T matrix `m`.
  void compute(std::span<const double> m, StatisticSet& out)
  {
    const std::size_t P = P_, T = T_;
    const std::size_t pairs = pair_count(P);
    out.test2.resize(T);
    out.test3.resize(P * T);
    out.test3_sign.resize(P * T);
    out.test4.resize(pairs);
    out.test5.resize(pairs * T);

    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t p = 0; p < P; ++p) column_[p] = m[p * T + t];
      const double med = detail::median_inplace(column_);
      for (std::size_t p = 0; p < P; ++p) {
        const double d = m[p * T + t] - med;
        out.test3[p * T + t] = std::abs(d);
        out.test3_sign[p * T + t] = sign_of(d);
        column_[p] = std::abs(d);
      }
      out.test2[t] = detail::median_inplace(column_);
    }
    std::copy(out.test2.begin(), out.test2.end(), terms_buf_.begin());
    out.test1 = detail::median_inplace(terms_buf_);

    std::size_t k = 0;
    for (std::size_t i = 0; i < P; ++i) {
      for (std::size_t j = i + 1; j < P; ++j, ++k) {
        for (std::size_t t = 0; t < T; ++t) {
          const double d = m[i * T + t] - m[j * T + t];
          out.test5[k * T + t] = d;
          terms_buf_[t] = std::abs(d);
        }
        out.test4[k] = detail::median_inplace(terms_buf_);
      }
    }
  }

private:
  std::size_t P_, T_;
  std::vector<double> column_;
  std::vector<double> terms_buf_;
};

} // namespace cata

#endif // CATA_L1_STATS_HPP
