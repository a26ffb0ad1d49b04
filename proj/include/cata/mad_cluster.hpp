#ifndef CATA_MAD_CLUSTER_HPP
#define CATA_MAD_CLUSTER_HPP

#include "cata/core_data.hpp"
#include "cata/error.hpp"
#include "cata/l1_stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace cata {

/// Symmetric, nonnegative, zero-diagonal dissimilarities between labelled items.
struct DistanceMatrix
{
  Labels labels;
  Eigen::MatrixXd values;

  DistanceMatrix() = default;
  DistanceMatrix(Labels l, Eigen::MatrixXd v)
    : labels(std::move(l))
    , values(std::move(v))
  {
    validate();
  }

  std::size_t size() const { return labels.size(); }
  double operator()(std::size_t i, std::size_t j) const
  {
    return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  void validate() const
  {
    const auto n = static_cast<Eigen::Index>(labels.size());
    if (values.rows() != n || values.cols() != n) throw DataError("distance matrix size does not match labels");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (values(i, i) != 0.0) throw DataError("distance matrix diagonal must be zero");
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!(values(i, j) >= 0.0)) throw DataError("distances must be nonnegative");
        if (values(i, j) != values(j, i)) throw DataError("distance matrix must be symmetric");
      }
    }
  }
};

/// Product dissimilarity: the Test 4 statistic for every pair.
inline DistanceMatrix product_distances(const CataTable& table)
{
  const auto P = static_cast<Eigen::Index>(table.n_products());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(P, P);
  for (Eigen::Index i = 0; i < P; ++i) {
    for (Eigen::Index j = i + 1; j < P; ++j) {
      d(i, j) = d(j, i) = test4_statistic(table.values(), i, j);
    }
  }
  return {table.product_labels(), std::move(d)};
}

/// Term dissimilarity: median over products of the absolute difference of
/// the two median-centred columns.
inline DistanceMatrix term_distances(const CataTable& table)
{
  Eigen::MatrixXd centred = table.values();
  centred.rowwise() -= column_medians(table.values()).transpose();
  const auto T = centred.cols();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(T, T);
  std::vector<double> diffs(static_cast<std::size_t>(centred.rows()));
  for (Eigen::Index i = 0; i < T; ++i) {
    for (Eigen::Index j = i + 1; j < T; ++j) {
      for (Eigen::Index p = 0; p < centred.rows(); ++p) {
        diffs[static_cast<std::size_t>(p)] = std::abs(centred(p, i) - centred(p, j));
      }
      d(i, j) = d(j, i) = median(diffs);
    }
  }
  return {table.term_labels(), std::move(d)};
}

struct Merge
{
  /// Cluster ids: leaves are 0..n-1, merge m creates id n+m. `left` is the
  /// side holding the smaller leaf index.
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
};

struct Dendrogram
{
  Labels labels;
  std::vector<Merge> merges;

  std::size_t leaf_count() const { return labels.size(); }
};

/// Agglomerative complete-linkage clustering.
///
/// Ties on the minimal inter-cluster distance go to the pair whose smaller
/// member leaf index is least, then whose larger one is least, where a
/// cluster is identified by its smallest leaf index.
inline Dendrogram complete_linkage(const DistanceMatrix& d)
{
  const std::size_t n = d.size();
  if (n < 2) throw ConfigError("clustering needs at least two items");

  // Active clusters are indexed by their minimum leaf; dist holds the
  // current complete-linkage distances between active representatives.
  Eigen::MatrixXd dist = d.values;
  std::vector<bool> active(n, true);
  std::vector<std::size_t> cluster_id(n);
  std::iota(cluster_id.begin(), cluster_id.end(), std::size_t{0});

  Dendrogram out{d.labels, {}};
  for (std::size_t step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        const double v = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    out.merges.push_back({cluster_id[bi], cluster_id[bj], best});
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const auto ki = static_cast<Eigen::Index>(k);
      const double v = std::max(dist(ki, static_cast<Eigen::Index>(bi)), dist(ki, static_cast<Eigen::Index>(bj)));
      dist(ki, static_cast<Eigen::Index>(bi)) = dist(static_cast<Eigen::Index>(bi), ki) = v;
    }
    active[bj] = false;
    cluster_id[bi] = n + step;
  }
  return out;
}

namespace detail {

inline std::vector<std::vector<std::size_t>> cluster_members(const Dendrogram& dg)
{
  const std::size_t n = dg.leaf_count();
  std::vector<std::vector<std::size_t>> members(n + dg.merges.size());
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  for (std::size_t m = 0; m < dg.merges.size(); ++m) {
    auto& dst = members[n + m];
    dst = members[dg.merges[m].left];
    dst.insert(dst.end(), members[dg.merges[m].right].begin(), members[dg.merges[m].right].end());
    std::sort(dst.begin(), dst.end());
  }
  return members;
}

} // namespace detail

/// Flat partition into k clusters. Cluster numbers start at 1 and follow
/// the smallest leaf index of each cluster.
struct Partition
{
  std::vector<std::size_t> assignment;
  std::vector<Labels> clusters;
};

inline Partition cut(const Dendrogram& dg, std::size_t k)
{
  const std::size_t n = dg.leaf_count();
  if (k < 1 || k > n) throw ConfigError("cluster count must lie in [1, " + std::to_string(n) + "]");
  const auto members = detail::cluster_members(dg);
  // Clusters alive after the first n-k merges.
  const std::size_t kept = n - k;
  std::vector<bool> alive(n + kept, true);
  for (std::size_t m = 0; m < kept; ++m) {
    alive[dg.merges[m].left] = false;
    alive[dg.merges[m].right] = false;
  }
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t id = 0; id < n + kept; ++id) {
    if (alive[id]) groups.push_back(members[id]);
  }
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

  Partition out;
  out.assignment.assign(n, 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Labels names;
    for (std::size_t leaf : groups[g]) {
      out.assignment[leaf] = g + 1;
      names.push_back(dg.labels[leaf]);
    }
    out.clusters.push_back(std::move(names));
  }
  return out;
}

/// Display order of leaves: at each node the subtree holding the smaller
/// leaf index goes first.
inline std::vector<std::size_t> leaf_order(const Dendrogram& dg)
{
  const std::size_t n = dg.leaf_count();
  if (dg.merges.empty()) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
  }
  const auto members = detail::cluster_members(dg);
  std::vector<std::size_t> order;
  std::function<void(std::size_t)> walk = [&](std::size_t id) {
    if (id < n) {
      order.push_back(id);
      return;
    }
    const auto& m = dg.merges[id - n];
    std::size_t a = m.left, b = m.right;
    if (members[b].front() < members[a].front()) std::swap(a, b);
    walk(a);
    walk(b);
  };
  walk(n + dg.merges.size() - 1);
  return order;
}

/// Nested-parenthesis form, e.g. "((A,B):1,C):5", children in leaf_order.
inline std::string to_nested_string(const Dendrogram& dg)
{
  const std::size_t n = dg.leaf_count();
  if (dg.merges.empty()) return n == 1 ? dg.labels[0] : std::string{};
  const auto members = detail::cluster_members(dg);
  std::ostringstream os;
  os.precision(6);
  std::function<void(std::size_t)> walk = [&](std::size_t id) {
    if (id < n) {
      os << dg.labels[id];
      return;
    }
    const auto& m = dg.merges[id - n];
    std::size_t a = m.left, b = m.right;
    if (members[b].front() < members[a].front()) std::swap(a, b);
    os << '(';
    walk(a);
    os << ',';
    walk(b);
    os << "):" << m.height;
  };
  walk(n + dg.merges.size() - 1);
  return os.str();
}

} // namespace cata

#endif // CATA_MAD_CLUSTER_HPP
