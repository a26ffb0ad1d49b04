#include "cata/report/run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
  using cata::report::Command;
  using cata::report::RunConfig;

  CLI::App app{"Permutation-based analysis of check-all-that-apply data"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string input, out = cfg.out.string();
  std::uint64_t seed = 0;
  std::vector<int> tests;
  bool no_fdr = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", input, "Long-format CSV: assessor,product,term,cited")->required();
    sub->add_option("--out,-o", out, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "Random seed; drawn at random and reported when omitted");
    sub->add_option("--alpha", cfg.alpha, "Significance level")->capture_default_str();
    sub->add_flag("--no-fdr", no_fdr, "Compare p-values with alpha directly, no BH control");
    sub->add_option("--workers", cfg.workers, "Worker threads; 0 uses the hardware count")->capture_default_str();
  };
  auto add_tests = [&](CLI::App* sub) {
    sub->add_option("--b", cfg.permutations, "Number of permutations")->capture_default_str();
    sub->add_option("--tests", tests, "Tests to run, e.g. 1,2,4")->delimiter(',');
  };
  auto add_cluster = [&](CLI::App* sub) {
    sub->add_option("--product-clusters", cfg.product_clusters, "Clusters cut from the product tree")
      ->capture_default_str();
    sub->add_option("--term-clusters", cfg.term_clusters, "Clusters cut from the term tree")->capture_default_str();
  };
  auto add_pca = [&](CLI::App* sub) {
    sub->add_option("--k", cfg.components, "L1-PCA components")->capture_default_str();
    sub->add_option("--kmax", cfg.kmax, "Largest K in the scree table; default min(P, T)");
    sub->add_option("--replicates", cfg.replicates, "Bootstrap replicates")->capture_default_str();
    sub->add_option("--coverage", cfg.coverage, "Ellipse coverage")->capture_default_str();
    sub->add_option("--restarts", cfg.restarts, "L1-PCA starts per fit")->capture_default_str();
    sub->add_option("--loading-scale", cfg.loading_scale, "Loading vector scale in the biplot; 0 hides them");
  };

  auto* analyze = app.add_subcommand("analyze", "Tests 1 to 5 with FDR control");
  auto* cluster = app.add_subcommand("cluster", "MAD complete-linkage clustering");
  auto* l1pca = app.add_subcommand("l1pca", "L1-PCA, scree, bootstrap biplot");
  auto* classical = app.add_subcommand("classical", "Cochran's Q and exact McNemar tests");
  auto* all = app.add_subcommand("all", "Everything");
  for (auto* sub : {analyze, cluster, l1pca, classical, all}) add_common(sub);
  for (auto* sub : {analyze, all}) add_tests(sub);
  for (auto* sub : {analyze, cluster, all}) add_cluster(sub);
  for (auto* sub : {l1pca, all}) add_pca(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cata::report::exit_code::config;
  }

  auto* chosen = app.get_subcommands().front();
  cfg.command = cata::report::command_from_string(chosen->get_name());
  cfg.input = input;
  cfg.out = out;
  if (chosen->count("--seed") > 0) cfg.seed = seed;
  cfg.control_fdr = !no_fdr;
  if (!tests.empty()) cfg.tests = std::set<int>(tests.begin(), tests.end());
  return cata::report::run(cfg);
}
