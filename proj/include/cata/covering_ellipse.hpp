#ifndef CATA_COVERING_ELLIPSE_HPP
#define CATA_COVERING_ELLIPSE_HPP

#include "cata/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace cata {

struct EllipseSpec
{
  std::string label;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  /// Major, then minor semi-axis.
  Eigen::Vector2d semi_axes = Eigen::Vector2d::Zero();
  /// Direction of the major axis in radians, in (-pi/2, pi/2].
  double angle = 0.0;
  /// Fraction of the points inside or on the ellipse.
  double coverage = 0.0;
};

/// Ellipse centred at the point mean with axes along the eigenvectors of the
/// point scatter, scaled radially to the smallest size that covers
/// ceil(coverage * n) of the points.
inline EllipseSpec covering_ellipse(const Eigen::MatrixX2d& points, double coverage = 0.95, std::string label = {})
{
  if (!(coverage > 0.0 && coverage <= 1.0)) throw ConfigError("ellipse coverage must lie in (0, 1]");
  const auto n = points.rows();
  if (n < 3) throw NumericalError("degenerate geometry: fewer than 3 points");

  EllipseSpec e;
  e.label = std::move(label);
  e.center = points.colwise().mean().transpose();
  const Eigen::MatrixX2d d = points.rowwise() - e.center.transpose();
  const Eigen::Matrix2d scatter = d.transpose() * d / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(scatter);
  // Eigenvalues ascend: index 1 is the major axis.
  const double major = eig.eigenvalues()(1), minor = eig.eigenvalues()(0);
  if (!(major > 0.0) || minor <= 1e-12 * major) throw NumericalError("degenerate geometry: points are collinear");

  const Eigen::Matrix2d axes = eig.eigenvectors();
  std::vector<double> radius(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d c = axes.transpose() * d.row(i).transpose();
    radius[static_cast<std::size_t>(i)] = std::sqrt(c(0) * c(0) / minor + c(1) * c(1) / major);
  }
  std::vector<double> sorted = radius;
  std::sort(sorted.begin(), sorted.end());
  const auto needed = static_cast<std::size_t>(std::ceil(coverage * static_cast<double>(n) - 1e-9));
  const double scale = sorted[std::max<std::size_t>(needed, 1) - 1];

  e.semi_axes = {scale * std::sqrt(major), scale * std::sqrt(minor)};
  double angle = std::atan2(axes(1, 1), axes(0, 1));
  if (angle <= -std::numbers::pi / 2) angle += std::numbers::pi;
  if (angle > std::numbers::pi / 2) angle -= std::numbers::pi;
  e.angle = angle;
  e.coverage = static_cast<double>(std::count_if(radius.begin(), radius.end(), [&](double r) { return r <= scale; }))
               / static_cast<double>(n);
  return e;
}

} // namespace cata

#endif // CATA_COVERING_ELLIPSE_HPP
