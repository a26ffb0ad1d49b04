#ifndef CATA_REPORT_RESULTS_HPP
#define CATA_REPORT_RESULTS_HPP

#include "cata/classical.hpp"
#include "cata/core_data.hpp"
#include "cata/covering_ellipse.hpp"
#include "cata/error.hpp"
#include "cata/fdr.hpp"
#include "cata/l1_pca.hpp"
#include "cata/l1_stats.hpp"
#include "cata/mad_cluster.hpp"
#include "cata/perm_engine.hpp"
#include "cata/report/config.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace cata::report {

inline constexpr int schema_version = 1;
inline constexpr const char* tool_name = "cata";
inline constexpr const char* tool_version = "0.1.0";

/// Configuration echo plus everything needed to repeat the run.
struct Provenance
{
  std::string tool = tool_name;
  std::string version = tool_version;
  std::string command = "all";
  std::string input;
  std::uint64_t seed = 0;
  bool seed_generated = false;
  std::size_t permutations = default_permutations;
  double alpha = 0.05;
  bool control_fdr = true;
  std::vector<int> tests;
  std::size_t product_clusters = 2;
  std::size_t term_clusters = 2;
  std::size_t components = 2;
  std::size_t kmax = 0;
  std::size_t replicates = 1000;
  double coverage = 0.95;
  std::size_t restarts = 5;
  /// Random streams are derived from (seed, stream tag, work item index).
  std::uint32_t permutation_stream = static_cast<std::uint32_t>(Stream::permutation);
  std::uint32_t bootstrap_stream = static_cast<std::uint32_t>(Stream::bootstrap);
  std::uint32_t restart_stream = static_cast<std::uint32_t>(Stream::pca_restart);
};

struct Clustering
{
  DistanceMatrix product_distances;
  DistanceMatrix term_distances;
  Dendrogram products;
  Dendrogram terms;
  Partition product_partition;
  Partition term_partition;
};

struct PcaSection
{
  L1PcaModel model;
  ScreeTable scree;
  std::size_t replicates = 0;
  double coverage = 0.95;
  double loading_scale = 1.0;
  /// One per product; empty when its bootstrap cloud has no area.
  std::vector<std::optional<EllipseSpec>> ellipses;
};

struct Results
{
  int schema = schema_version;
  Provenance provenance;
  std::size_t assessors = 0;
  Labels products;
  Labels terms;
  Eigen::MatrixXi counts;
  std::vector<TermSummary> term_summaries;
  std::optional<TestReports> tests;
  std::optional<Clustering> clustering;
  std::optional<PcaSection> l1pca;
  std::optional<ClassicalReport> classical;
  std::vector<std::string> notes;

  CataTable table() const { return CataTable(counts, assessors, products, terms); }
};

/// Six significant digits, as a double that prints and reparses unchanged.
inline double sig6(double x)
{
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return std::strtod(buf, nullptr);
}

namespace detail {

inline void sig6_all(Eigen::MatrixXd& m)
{
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = sig6(m.data()[i]);
}
inline void sig6_all(Eigen::VectorXd& v)
{
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = sig6(v(i));
}
inline void sig6_all(std::vector<double>& v)
{
  for (double& x : v) x = sig6(x);
}

} // namespace detail

/// Rounds every non-probability number to six significant digits so the
/// in-memory results equal what results.json reloads to. P-values, BH
/// entries and thresholds keep full precision.
inline void quantise(Results& r)
{
  for (auto& s : r.term_summaries) {
    s.median = sig6(s.median);
    s.mad = sig6(s.mad);
  }
  if (r.tests) {
    for (auto& [_, rep] : *r.tests) {
      for (auto& h : rep.rows) h.statistic = sig6(h.statistic);
      if (rep.null) {
        rep.null->observed = sig6(rep.null->observed);
        detail::sig6_all(rep.null->simulated);
      }
    }
  }
  if (r.clustering) {
    auto& c = *r.clustering;
    detail::sig6_all(c.product_distances.values);
    detail::sig6_all(c.term_distances.values);
    for (auto* dg : {&c.products, &c.terms}) {
      for (auto& m : dg->merges) m.height = sig6(m.height);
    }
  }
  if (r.l1pca) {
    auto& p = *r.l1pca;
    auto& m = p.model;
    detail::sig6_all(m.medians);
    detail::sig6_all(m.scores);
    detail::sig6_all(m.loadings);
    detail::sig6_all(m.history);
    m.objective = sig6(m.objective);
    m.total_l1 = sig6(m.total_l1);
    m.prop = sig6(m.prop);
    for (auto& row : p.scree.rows) {
      row.prop = sig6(row.prop);
      row.gain = sig6(row.gain);
    }
    p.loading_scale = sig6(p.loading_scale);
    for (auto& e : p.ellipses) {
      if (!e) continue;
      e->center = {sig6(e->center(0)), sig6(e->center(1))};
      e->semi_axes = {sig6(e->semi_axes(0)), sig6(e->semi_axes(1))};
      e->angle = sig6(e->angle);
      e->coverage = sig6(e->coverage);
    }
  }
  if (r.classical) {
    for (auto& c : r.classical->cochran) {
      if (c.q) c.q = sig6(*c.q);
    }
  }
}

} // namespace cata::report

// JSON mapping. Matrices are arrays of rows; optional values are null.
NLOHMANN_JSON_NAMESPACE_BEGIN

template <class T>
struct adl_serializer<std::optional<T>>
{
  static void to_json(json& j, const std::optional<T>& v)
  {
    if (v) j = *v;
    else j = nullptr;
  }
  static void from_json(const json& j, std::optional<T>& v)
  {
    if (j.is_null()) v.reset();
    else v = j.get<T>();
  }
};

template <>
struct adl_serializer<Eigen::MatrixXd>
{
  static void to_json(json& j, const Eigen::MatrixXd& m)
  {
    j = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      j.push_back(std::move(row));
    }
  }
  static void from_json(const json& j, Eigen::MatrixXd& m)
  {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    m.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols) {
        throw cata::DataError("ragged matrix in results file");
      }
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
      }
    }
  }
};

template <>
struct adl_serializer<Eigen::MatrixXi>
{
  static void to_json(json& j, const Eigen::MatrixXi& m)
  {
    j = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      j.push_back(std::move(row));
    }
  }
  static void from_json(const json& j, Eigen::MatrixXi& m)
  {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    m.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = j.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<int>();
      }
    }
  }
};

template <>
struct adl_serializer<Eigen::VectorXd>
{
  static void to_json(json& j, const Eigen::VectorXd& v)
  {
    j = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  }
  static void from_json(const json& j, Eigen::VectorXd& v)
  {
    v.resize(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  }
};

template <>
struct adl_serializer<Eigen::Vector2d>
{
  static void to_json(json& j, const Eigen::Vector2d& v) { j = json::array({v(0), v(1)}); }
  static void from_json(const json& j, Eigen::Vector2d& v) { v = {j.at(0).get<double>(), j.at(1).get<double>()}; }
};

NLOHMANN_JSON_NAMESPACE_END

namespace cata {

using json = nlohmann::json;

inline void to_json(json& j, const TermSummary& s) { j = {{"term", s.term}, {"median", s.median}, {"mad", s.mad}}; }
inline void from_json(const json& j, TermSummary& s)
{
  j.at("term").get_to(s.term);
  j.at("median").get_to(s.median);
  j.at("mad").get_to(s.mad);
}

inline void to_json(json& j, const FdrResult& r)
{
  j = {{"alpha", r.alpha},
       {"family_size", r.family_size},
       {"critical_value", r.critical_value},
       {"significant", r.significant},
       {"bh_values", r.bh_values},
       {"boundary_tie", r.boundary_tie}};
}
inline void from_json(const json& j, FdrResult& r)
{
  j.at("alpha").get_to(r.alpha);
  j.at("family_size").get_to(r.family_size);
  j.at("critical_value").get_to(r.critical_value);
  j.at("significant").get_to(r.significant);
  j.at("bh_values").get_to(r.bh_values);
  j.at("boundary_tie").get_to(r.boundary_tie);
}

inline void to_json(json& j, const Hypothesis& h)
{
  j = {{"product", h.product}, {"product2", h.product2}, {"term", h.term},   {"statistic", h.statistic},
       {"sign", h.sign},       {"exceed", h.exceed},     {"p_value", h.p_value}, {"bh_value", h.bh_value},
       {"significant", h.significant}};
}
inline void from_json(const json& j, Hypothesis& h)
{
  j.at("product").get_to(h.product);
  j.at("product2").get_to(h.product2);
  j.at("term").get_to(h.term);
  j.at("statistic").get_to(h.statistic);
  j.at("sign").get_to(h.sign);
  j.at("exceed").get_to(h.exceed);
  j.at("p_value").get_to(h.p_value);
  j.at("bh_value").get_to(h.bh_value);
  j.at("significant").get_to(h.significant);
}

inline void to_json(json& j, const NullDistribution& n)
{
  j = {{"test", n.test}, {"observed", n.observed}, {"simulated", n.simulated}};
}
inline void from_json(const json& j, NullDistribution& n)
{
  j.at("test").get_to(n.test);
  j.at("observed").get_to(n.observed);
  j.at("simulated").get_to(n.simulated);
}

inline void to_json(json& j, const TestReport& r)
{
  j = {{"test", r.test},
       {"permutations", r.permutations},
       {"seed", r.seed},
       {"alpha", r.alpha},
       {"fdr_controlled", r.fdr_controlled},
       {"family_size", r.family_size},
       {"critical_value", r.critical_value},
       {"boundary_tie", r.boundary_tie},
       {"significant_count", r.significant_count()},
       {"rows", r.rows},
       {"null", r.null}};
}
inline void from_json(const json& j, TestReport& r)
{
  j.at("test").get_to(r.test);
  j.at("permutations").get_to(r.permutations);
  j.at("seed").get_to(r.seed);
  j.at("alpha").get_to(r.alpha);
  j.at("fdr_controlled").get_to(r.fdr_controlled);
  j.at("family_size").get_to(r.family_size);
  j.at("critical_value").get_to(r.critical_value);
  j.at("boundary_tie").get_to(r.boundary_tie);
  j.at("rows").get_to(r.rows);
  j.at("null").get_to(r.null);
}

inline void to_json(json& j, const DistanceMatrix& d) { j = {{"labels", d.labels}, {"values", d.values}}; }
inline void from_json(const json& j, DistanceMatrix& d)
{
  j.at("labels").get_to(d.labels);
  j.at("values").get_to(d.values);
  d.validate();
}

inline void to_json(json& j, const Merge& m) { j = {{"left", m.left}, {"right", m.right}, {"height", m.height}}; }
inline void from_json(const json& j, Merge& m)
{
  j.at("left").get_to(m.left);
  j.at("right").get_to(m.right);
  j.at("height").get_to(m.height);
}

inline void to_json(json& j, const Dendrogram& d)
{
  j = {{"labels", d.labels}, {"merges", d.merges}, {"nested", to_nested_string(d)}};
}
inline void from_json(const json& j, Dendrogram& d)
{
  j.at("labels").get_to(d.labels);
  j.at("merges").get_to(d.merges);
}

inline void to_json(json& j, const Partition& p) { j = {{"assignment", p.assignment}, {"clusters", p.clusters}}; }
inline void from_json(const json& j, Partition& p)
{
  j.at("assignment").get_to(p.assignment);
  j.at("clusters").get_to(p.clusters);
}

inline void to_json(json& j, const L1PcaModel& m)
{
  j = {{"products", m.products},   {"terms", m.terms},         {"components", m.components},
       {"medians", m.medians},     {"scores", m.scores},       {"loadings", m.loadings},
       {"objective", m.objective}, {"total_l1", m.total_l1},   {"prop", m.prop},
       {"converged", m.converged}, {"degenerate", m.degenerate}, {"iterations", m.iterations},
       {"best_start", m.best_start}};
}
inline void from_json(const json& j, L1PcaModel& m)
{
  j.at("products").get_to(m.products);
  j.at("terms").get_to(m.terms);
  j.at("components").get_to(m.components);
  j.at("medians").get_to(m.medians);
  j.at("scores").get_to(m.scores);
  j.at("loadings").get_to(m.loadings);
  j.at("objective").get_to(m.objective);
  j.at("total_l1").get_to(m.total_l1);
  j.at("prop").get_to(m.prop);
  j.at("converged").get_to(m.converged);
  j.at("degenerate").get_to(m.degenerate);
  j.at("iterations").get_to(m.iterations);
  j.at("best_start").get_to(m.best_start);
}

inline void to_json(json& j, const ScreeRow& r)
{
  j = {{"components", r.components}, {"prop", r.prop}, {"gain", r.gain}, {"converged", r.converged}};
}
inline void from_json(const json& j, ScreeRow& r)
{
  j.at("components").get_to(r.components);
  j.at("prop").get_to(r.prop);
  j.at("gain").get_to(r.gain);
  j.at("converged").get_to(r.converged);
}

inline void to_json(json& j, const EllipseSpec& e)
{
  j = {{"label", e.label},
       {"center", e.center},
       {"semi_axes", e.semi_axes},
       {"angle", e.angle},
       {"coverage", e.coverage}};
}
inline void from_json(const json& j, EllipseSpec& e)
{
  j.at("label").get_to(e.label);
  j.at("center").get_to(e.center);
  j.at("semi_axes").get_to(e.semi_axes);
  j.at("angle").get_to(e.angle);
  j.at("coverage").get_to(e.coverage);
}

inline void to_json(json& j, const CochranResult& c) { j = {{"q", c.q}, {"df", c.df}, {"p_value", c.p_value}}; }
inline void from_json(const json& j, CochranResult& c)
{
  j.at("q").get_to(c.q);
  j.at("df").get_to(c.df);
  j.at("p_value").get_to(c.p_value);
}

inline void to_json(json& j, const McNemarResult& m) { j = {{"b", m.b}, {"c", m.c}, {"p_value", m.p_value}}; }
inline void from_json(const json& j, McNemarResult& m)
{
  j.at("b").get_to(m.b);
  j.at("c").get_to(m.c);
  j.at("p_value").get_to(m.p_value);
}

inline void to_json(json& j, const ClassicalReport& r)
{
  j = {{"alpha", r.alpha},
       {"fdr_controlled", r.fdr_controlled},
       {"cochran", r.cochran},
       {"cochran_fdr", r.cochran_fdr},
       {"cochran_significant", r.cochran_fdr.significant_count()},
       {"mcnemar", r.mcnemar},
       {"mcnemar_fdr", r.mcnemar_fdr},
       {"mcnemar_significant", r.mcnemar_fdr.significant_count()},
       {"mcnemar_uncorrected", r.mcnemar_uncorrected}};
}
inline void from_json(const json& j, ClassicalReport& r)
{
  j.at("alpha").get_to(r.alpha);
  j.at("fdr_controlled").get_to(r.fdr_controlled);
  j.at("cochran").get_to(r.cochran);
  j.at("cochran_fdr").get_to(r.cochran_fdr);
  j.at("mcnemar").get_to(r.mcnemar);
  j.at("mcnemar_fdr").get_to(r.mcnemar_fdr);
  j.at("mcnemar_uncorrected").get_to(r.mcnemar_uncorrected);
}

} // namespace cata

namespace cata::report {

inline void to_json(json& j, const Provenance& p)
{
  j = {{"tool", p.tool},
       {"version", p.version},
       {"command", p.command},
       {"input", p.input},
       {"seed", p.seed},
       {"seed_generated", p.seed_generated},
       {"permutations", p.permutations},
       {"alpha", p.alpha},
       {"control_fdr", p.control_fdr},
       {"tests", p.tests},
       {"product_clusters", p.product_clusters},
       {"term_clusters", p.term_clusters},
       {"components", p.components},
       {"kmax", p.kmax},
       {"replicates", p.replicates},
       {"coverage", p.coverage},
       {"restarts", p.restarts},
       {"streams",
        {{"permutation", p.permutation_stream}, {"bootstrap", p.bootstrap_stream}, {"restart", p.restart_stream}}}};
}
inline void from_json(const json& j, Provenance& p)
{
  j.at("tool").get_to(p.tool);
  j.at("version").get_to(p.version);
  j.at("command").get_to(p.command);
  j.at("input").get_to(p.input);
  j.at("seed").get_to(p.seed);
  j.at("seed_generated").get_to(p.seed_generated);
  j.at("permutations").get_to(p.permutations);
  j.at("alpha").get_to(p.alpha);
  j.at("control_fdr").get_to(p.control_fdr);
  j.at("tests").get_to(p.tests);
  j.at("product_clusters").get_to(p.product_clusters);
  j.at("term_clusters").get_to(p.term_clusters);
  j.at("components").get_to(p.components);
  j.at("kmax").get_to(p.kmax);
  j.at("replicates").get_to(p.replicates);
  j.at("coverage").get_to(p.coverage);
  j.at("restarts").get_to(p.restarts);
  const auto& s = j.at("streams");
  s.at("permutation").get_to(p.permutation_stream);
  s.at("bootstrap").get_to(p.bootstrap_stream);
  s.at("restart").get_to(p.restart_stream);
}

inline void to_json(json& j, const Clustering& c)
{
  j = {{"product_distances", c.product_distances}, {"term_distances", c.term_distances},
       {"products", c.products},                   {"terms", c.terms},
       {"product_partition", c.product_partition}, {"term_partition", c.term_partition}};
}
inline void from_json(const json& j, Clustering& c)
{
  j.at("product_distances").get_to(c.product_distances);
  j.at("term_distances").get_to(c.term_distances);
  j.at("products").get_to(c.products);
  j.at("terms").get_to(c.terms);
  j.at("product_partition").get_to(c.product_partition);
  j.at("term_partition").get_to(c.term_partition);
}

inline void to_json(json& j, const PcaSection& p)
{
  j = {{"model", p.model},
       {"scree", p.scree.rows},
       {"replicates", p.replicates},
       {"coverage", p.coverage},
       {"loading_scale", p.loading_scale},
       {"ellipses", p.ellipses}};
}
inline void from_json(const json& j, PcaSection& p)
{
  j.at("model").get_to(p.model);
  j.at("scree").get_to(p.scree.rows);
  j.at("replicates").get_to(p.replicates);
  j.at("coverage").get_to(p.coverage);
  j.at("loading_scale").get_to(p.loading_scale);
  j.at("ellipses").get_to(p.ellipses);
}

inline json results_to_json(const Results& r)
{
  json tests = nullptr;
  if (r.tests) {
    tests = json::object();
    for (const auto& [k, rep] : *r.tests) tests[std::to_string(k)] = rep;
  }
  return {{"schema_version", r.schema},
          {"provenance", r.provenance},
          {"data", {{"assessors", r.assessors}, {"products", r.products}, {"terms", r.terms}, {"counts", r.counts}}},
          {"table", r.table().values()},
          {"term_summaries", r.term_summaries},
          {"tests", tests},
          {"clustering", r.clustering},
          {"l1pca", r.l1pca},
          {"classical", r.classical},
          {"notes", r.notes}};
}

inline Results results_from_json(const json& j)
{
  Results r;
  try {
    j.at("schema_version").get_to(r.schema);
    if (r.schema != schema_version) {
      throw DataError("unsupported results schema version " + std::to_string(r.schema));
    }
    j.at("provenance").get_to(r.provenance);
    const auto& d = j.at("data");
    d.at("assessors").get_to(r.assessors);
    d.at("products").get_to(r.products);
    d.at("terms").get_to(r.terms);
    d.at("counts").get_to(r.counts);
    j.at("term_summaries").get_to(r.term_summaries);
    if (!j.at("tests").is_null()) {
      TestReports reps;
      for (const auto& [k, v] : j.at("tests").items()) reps.emplace(std::stoi(k), v.get<TestReport>());
      r.tests = std::move(reps);
    }
    j.at("clustering").get_to(r.clustering);
    j.at("l1pca").get_to(r.l1pca);
    j.at("classical").get_to(r.classical);
    j.at("notes").get_to(r.notes);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed results file: ") + e.what());
  }
  return r;
}

inline std::string dump_results(const Results& r) { return results_to_json(r).dump(2) + "\n"; }

inline Results parse_results(const std::string& text)
{
  try {
    return results_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw DataError(std::string("results file is not valid JSON: ") + e.what());
  }
}

} // namespace cata::report

#endif // CATA_REPORT_RESULTS_HPP
