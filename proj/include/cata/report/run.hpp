#ifndef CATA_REPORT_RUN_HPP
#define CATA_REPORT_RUN_HPP

#include "cata/classical.hpp"
#include "cata/core_data.hpp"
#include "cata/covering_ellipse.hpp"
#include "cata/error.hpp"
#include "cata/l1_pca.hpp"
#include "cata/mad_cluster.hpp"
#include "cata/perm_engine.hpp"
#include "cata/report/config.hpp"
#include "cata/report/figures.hpp"
#include "cata/report/results.hpp"
#include "cata/report/summary.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace cata::report {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int data = 1;
inline constexpr int config = 2;
inline constexpr int numerical = 3;
} // namespace exit_code

inline std::uint64_t random_seed()
{
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

/// All computation for one run; touches no files.
inline Results analyse(const CataArray& array, const RunConfig& cfg, std::uint64_t seed, bool seed_generated)
{
  Results r;
  auto& pv = r.provenance;
  pv.command = to_string(cfg.command);
  pv.input = cfg.input.generic_string();
  pv.seed = seed;
  pv.seed_generated = seed_generated;
  pv.permutations = cfg.permutations;
  pv.alpha = cfg.alpha;
  pv.control_fdr = cfg.control_fdr;
  pv.tests.assign(cfg.tests.begin(), cfg.tests.end());
  pv.product_clusters = cfg.product_clusters;
  pv.term_clusters = cfg.term_clusters;
  pv.components = cfg.components;
  pv.replicates = cfg.replicates;
  pv.coverage = cfg.coverage;
  pv.restarts = cfg.restarts;

  const CataTable table = aggregate(array);
  r.assessors = array.n_assessors();
  r.products = array.product_labels();
  r.terms = array.term_labels();
  r.counts = table.counts();
  r.term_summaries = term_summaries(table);
  if (seed_generated) r.notes.push_back("no seed was given; the generated seed is recorded above");

  if (cfg.runs_tests()) {
    PermutationPlan plan;
    plan.permutations = cfg.permutations;
    plan.seed = seed;
    plan.tests = cfg.tests;
    plan.alpha = cfg.alpha;
    plan.control_fdr = cfg.control_fdr;
    plan.workers = cfg.workers;
    r.tests = run_tests(array, plan);
    for (const auto& [test, rep] : *r.tests) {
      if (rep.boundary_tie) {
        r.notes.push_back("Test " + std::to_string(test)
                          + ": a p-value equals its BH entry exactly; the strict comparison excluded it");
      }
    }
  }

  if (cfg.runs_clustering()) {
    Clustering c;
    c.product_distances = product_distances(table);
    c.term_distances = term_distances(table);
    c.products = complete_linkage(c.product_distances);
    c.terms = complete_linkage(c.term_distances);
    c.product_partition = cut(c.products, cfg.product_clusters);
    c.term_partition = cut(c.terms, cfg.term_clusters);
    r.clustering = std::move(c);
  }

  if (cfg.runs_l1pca()) {
    L1PcaOptions opt;
    opt.restarts = cfg.restarts;
    opt.seed = seed;
    const std::size_t limit = std::min(table.n_products(), table.n_terms());
    const std::size_t kmax = cfg.kmax == 0 ? limit : cfg.kmax;
    pv.kmax = kmax;
    PcaSection s;
    s.model = fit(table, cfg.components, opt);
    s.scree = scree(table, kmax, opt, cfg.workers);
    s.replicates = cfg.replicates;
    s.coverage = cfg.coverage;
    if (!s.model.converged) {
      r.notes.push_back("L1-PCA with K = " + std::to_string(cfg.components)
                        + " stopped at the iteration limit before converging");
    }
    if (s.model.components >= 2) {
      const auto clouds = bootstrap_scores(array, s.model, cfg.replicates, seed, cfg.workers);
      for (std::size_t p = 0; p < clouds.clouds.size(); ++p) {
        try {
          s.ellipses.push_back(covering_ellipse(clouds.clouds[p].leftCols(2), cfg.coverage, r.products[p]));
        } catch (const NumericalError& e) {
          s.ellipses.emplace_back();
          r.notes.push_back("no ellipse for " + r.products[p] + ": " + e.what());
        }
      }
      s.loading_scale = cfg.loading_scale >= 0 ? cfg.loading_scale : auto_loading_scale(s.model);
    } else {
      r.notes.push_back("biplot, bootstrap and ellipses need at least two components");
    }
    r.l1pca = std::move(s);
  }

  if (cfg.runs_classical()) r.classical = classical_tests(array, cfg.alpha, cfg.control_fdr);

  quantise(r);
  return r;
}

/// File-name fragment: lower-case letters and digits, other runs become '-'.
inline std::string slug(const std::string& s)
{
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
    else if (!out.empty() && out.back() != '-') out += '-';
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "term" : out;
}

/// Every figure the results support, keyed by file name.
inline std::map<std::string, std::string> render_figures(const Results& r)
{
  std::map<std::string, std::string> out;
  std::optional<DendrogramPair> trees;
  if (r.clustering) trees = DendrogramPair{r.clustering->products, r.clustering->terms};
  const Dendrogram* product_tree = trees ? &trees->products : nullptr;

  if (r.tests) {
    const auto& t = *r.tests;
    if (t.count(1) && t.at(1).null) out["fig2_null_distribution.svg"] = render_null_distribution(*t.at(1).null);
    out["fig3_median_mad.svg"] = render_median_mad(r.term_summaries, t.count(2) ? &t.at(2) : nullptr);
    if (t.count(2) || t.count(3)) {
      out["fig4_heatmap_test2_test3.svg"] = render_term_heatmap(t.count(2) ? &t.at(2) : nullptr,
                                                                t.count(3) ? &t.at(3) : nullptr, r.products, r.terms,
                                                                trees);
    }
    if (t.count(4)) out["fig5_heatmap_test4.svg"] = render_pair_heatmap(t.at(4), r.products, product_tree);
    if (t.count(5)) {
      const int width = static_cast<int>(std::to_string(r.terms.size()).size());
      for (std::size_t k = 0; k < r.terms.size(); ++k) {
        char idx[16];
        std::snprintf(idx, sizeof idx, "%0*zu", width, k + 1);
        out["fig6_test5_" + std::string(idx) + "_" + slug(r.terms[k]) + ".svg"] =
          render_test5_heatmap(t.at(5), r.products, r.terms, k, product_tree);
      }
    }
  }
  if (r.l1pca) {
    const auto& p = *r.l1pca;
    if (p.model.components >= 2) out["fig7_biplot.svg"] = render_biplot(p.model, p.ellipses, p.loading_scale);
    const Eigen::MatrixXd values = r.table().values();
    out["fig8_scree.svg"] = render_scree(p.scree, &p.model, &values);
  }
  return out;
}

/// results.json, summary.txt and the figures, keyed by file name.
inline std::map<std::string, std::string> build_outputs(const Results& r)
{
  auto out = render_figures(r);
  out["results.json"] = dump_results(r);
  out["summary.txt"] = render_summary(r);
  return out;
}

/// Writes every file or none: on failure the files already written are removed.
inline void write_outputs(const std::filesystem::path& dir, const std::map<std::string, std::string>& files)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
  std::vector<fs::path> written;
  for (const auto& [name, content] : files) {
    const fs::path target = dir / name;
    const fs::path tmp = dir / (name + ".tmp");
    std::ofstream f(tmp, std::ios::binary);
    f << content;
    f.close();
    if (!f) {
      fs::remove(tmp, ec);
      for (const auto& w : written) fs::remove(w, ec);
      throw ConfigError("cannot write " + target.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) {
      fs::remove(tmp, ec);
      for (const auto& w : written) fs::remove(w, ec);
      throw ConfigError("cannot write " + target.string());
    }
    written.push_back(target);
  }
}

/// Full run: load, analyse, render, write. Returns the process exit code
/// and reports problems on `err`.
inline int run(const RunConfig& cfg, std::ostream& log = std::cout, std::ostream& err = std::cerr)
{
  try {
    cfg.validate();
    const std::uint64_t seed = cfg.seed ? *cfg.seed : random_seed();
    if (!cfg.seed) {
      err << "WARNING: no --seed given; using generated seed " << seed << " (recorded in results.json)\n";
    }
    const CataArray array = load_cata_array_file(cfg.input);
    const Results results = analyse(array, cfg, seed, !cfg.seed);
    const auto files = build_outputs(results);
    write_outputs(cfg.out, files);
    log << "wrote " << files.size() << " files to " << cfg.out.string() << "\n";
    return exit_code::ok;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return exit_code::data;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return exit_code::config;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return exit_code::numerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::numerical;
  }
}

} // namespace cata::report

#endif // CATA_REPORT_RUN_HPP
