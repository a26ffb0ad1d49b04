#ifndef CATA_LAD_HPP
#define CATA_LAD_HPP

#include "cata/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace cata {

struct LadOptions
{
  /// Rank-deficient designs still have optimal basic solutions; the public
  /// entry point rejects them, L1-PCA alternation accepts them.
  bool allow_rank_deficient = false;
  double tolerance = 1e-10;
};

struct LadResult
{
  Eigen::VectorXd coef;
  double objective = 0.0;
  std::size_t pivots = 0;
};

namespace detail {

/// Dense-tableau primal simplex for
///
///   min  sum(u) + sum(v)
///   s.t. X b+ - X b- + u - v = y,   b+, b-, u, v >= 0
///
/// starting from the feasible basis of residual slacks (u_i when y_i >= 0,
/// v_i otherwise). Dantzig pricing, switching to Bland's rule after a run
/// of degenerate pivots.
class LadSimplex
{
public:
  LadSimplex(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double tol)
    : n_(static_cast<std::size_t>(X.rows()))
    , k_(static_cast<std::size_t>(X.cols()))
    , cols_(2 * k_ + 2 * n_)
    , cost_tol_(tol)
    , tol_(tol * std::max({1.0, X.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff()}))
    , tab_(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(cols_ + 1))
    , cost_(cols_, 0.0)
    , basis_(n_)
  {
    tab_.setZero();
    for (std::size_t j = 2 * k_; j < cols_; ++j) cost_[j] = 1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      const double s = y(r) >= 0.0 ? 1.0 : -1.0;
      for (std::size_t c = 0; c < k_; ++c) {
        tab_(r, static_cast<Eigen::Index>(c)) = s * X(r, static_cast<Eigen::Index>(c));
        tab_(r, static_cast<Eigen::Index>(k_ + c)) = -s * X(r, static_cast<Eigen::Index>(c));
      }
      tab_(r, static_cast<Eigen::Index>(2 * k_ + i)) = s;
      tab_(r, static_cast<Eigen::Index>(2 * k_ + n_ + i)) = -s;
      tab_(r, static_cast<Eigen::Index>(cols_)) = s * y(r);
      basis_[i] = s > 0 ? 2 * k_ + i : 2 * k_ + n_ + i;
    }
  }

  std::size_t solve()
  {
    std::vector<double> reduced(cols_);
    const std::size_t max_pivots = 50 * (n_ + cols_) + 1000;
    std::size_t pivots = 0, degenerate_run = 0;
    for (;;) {
      price(reduced);
      const bool bland = degenerate_run > 2 * (n_ + k_);
      std::size_t enter = cols_;
      double most = -cost_tol_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (reduced[j] < most) {
          enter = j;
          if (bland) break;
          most = reduced[j];
        }
      }
      if (enter == cols_) return pivots;

      const auto ec = static_cast<Eigen::Index>(enter);
      std::size_t leave = n_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n_; ++i) {
        const double a = tab_(static_cast<Eigen::Index>(i), ec);
        if (a <= tol_) continue;
        const double ratio = tab_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols_)) / a;
        if (ratio < best_ratio - tol_ || (ratio <= best_ratio + tol_ && leave < n_ && basis_[i] < basis_[leave])) {
          best_ratio = std::min(best_ratio, ratio);
          leave = i;
        }
      }
      if (leave == n_) throw NumericalError("LAD linear program is unbounded");

      degenerate_run = best_ratio <= tol_ ? degenerate_run + 1 : 0;
      pivot(leave, enter);
      if (++pivots > max_pivots) throw NumericalError("LAD simplex exceeded its pivot limit");
    }
  }

  Eigen::VectorXd coefficients() const
  {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k_));
    for (std::size_t i = 0; i < n_; ++i) {
      const double v = tab_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols_));
      if (basis_[i] < k_) b(static_cast<Eigen::Index>(basis_[i])) += v;
      else if (basis_[i] < 2 * k_) b(static_cast<Eigen::Index>(basis_[i] - k_)) -= v;
    }
    return b;
  }

private:
  void price(std::vector<double>& reduced) const
  {
    for (std::size_t j = 0; j < cols_; ++j) {
      double z = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        z += cost_[basis_[i]] * tab_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      reduced[j] = cost_[j] - z;
    }
  }

  void pivot(std::size_t row, std::size_t col)
  {
    const auto r = static_cast<Eigen::Index>(row);
    const auto c = static_cast<Eigen::Index>(col);
    tab_.row(r) /= tab_(r, c);
    for (Eigen::Index i = 0; i < tab_.rows(); ++i) {
      if (i == r) continue;
      const double f = tab_(i, c);
      if (f != 0.0) tab_.row(i) -= f * tab_.row(r);
    }
    basis_[row] = col;
  }

  std::size_t n_, k_, cols_;
  double cost_tol_;
  double tol_;
  Eigen::MatrixXd tab_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
};

} // namespace detail

inline double l1_residual(const Eigen::MatrixXd& design, const Eigen::VectorXd& target, const Eigen::VectorXd& coef)
{
  return (target - design * coef).lpNorm<1>();
}

/// Least-absolute-deviations fit: the coefficient vector minimising
/// sum_i |target_i - (design * coef)_i|.
inline LadResult lad_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& target, const LadOptions& opt = {})
{
  if (design.rows() < 1 || design.cols() < 1) throw ConfigError("LAD design must be non-empty");
  if (design.rows() != target.size()) throw ConfigError("LAD design and target lengths differ");
  if (!design.allFinite() || !target.allFinite()) throw NumericalError("LAD inputs must be finite");
  if (!opt.allow_rank_deficient) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < design.cols()) {
      throw NumericalError("rank-deficient LAD design: rank " + std::to_string(qr.rank()) + " < "
                           + std::to_string(design.cols()) + " columns");
    }
  }
  detail::LadSimplex lp(design, target, opt.tolerance);
  LadResult out;
  out.pivots = lp.solve();
  out.coef = lp.coefficients();
  out.objective = l1_residual(design, target, out.coef);
  return out;
}

inline Eigen::VectorXd lad_solve(const Eigen::MatrixXd& design, const Eigen::VectorXd& target)
{
  return lad_fit(design, target).coef;
}

} // namespace cata

#endif // CATA_LAD_HPP
