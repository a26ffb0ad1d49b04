#ifndef CATA_REPORT_CONFIG_HPP
#define CATA_REPORT_CONFIG_HPP

#include "cata/error.hpp"
#include "cata/perm_engine.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>

namespace cata::report {

enum class Command
{
  analyze,
  cluster,
  l1pca,
  classical,
  all,
};

inline std::string to_string(Command c)
{
  switch (c) {
  case Command::analyze: return "analyze";
  case Command::cluster: return "cluster";
  case Command::l1pca: return "l1pca";
  case Command::classical: return "classical";
  case Command::all: return "all";
  }
  return "all";
}

inline Command command_from_string(const std::string& s)
{
  for (auto c : {Command::analyze, Command::cluster, Command::l1pca, Command::classical, Command::all}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("unknown command '" + s + "'");
}

struct RunConfig
{
  Command command = Command::all;
  std::filesystem::path input;
  std::filesystem::path out = "cata_out";
  std::size_t permutations = default_permutations;
  /// Empty means draw one at random and say so.
  std::optional<std::uint64_t> seed;
  double alpha = 0.05;
  bool control_fdr = true;
  std::set<int> tests{1, 2, 3, 4, 5};
  std::size_t product_clusters = 2;
  std::size_t term_clusters = 2;
  std::size_t components = 2;
  /// 0 means min(P, T).
  std::size_t kmax = 0;
  std::size_t replicates = 1000;
  double coverage = 0.95;
  std::size_t restarts = 5;
  /// Negative selects a scale that fits the loadings to the score cloud.
  double loading_scale = -1.0;
  /// Never written to results; outputs do not depend on it.
  std::size_t workers = 0;

  bool runs_tests() const { return command == Command::analyze || command == Command::all; }
  bool runs_clustering() const { return command != Command::l1pca && command != Command::classical; }
  bool runs_l1pca() const { return command == Command::l1pca || command == Command::all; }
  bool runs_classical() const { return command == Command::classical || command == Command::all; }

  /// Checks everything that does not depend on the data.
  void validate() const
  {
    if (input.empty()) throw ConfigError("an input file is required (--input)");
    if (out.empty()) throw ConfigError("an output directory is required (--out)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (tests.empty()) throw ConfigError("at least one test must be requested");
    for (int t : tests) {
      if (t < 1 || t > 5) throw ConfigError("unknown test number " + std::to_string(t));
    }
    if (product_clusters < 1 || term_clusters < 1) throw ConfigError("cluster counts must be at least 1");
    if (components < 1) throw ConfigError("the number of components must be at least 1");
    if (replicates < 1) throw ConfigError("at least one bootstrap replicate is required");
    if (!(coverage > 0.0 && coverage <= 1.0)) throw ConfigError("ellipse coverage must lie in (0, 1]");
    if (restarts < 1) throw ConfigError("at least one L1-PCA start is required");
  }
};

} // namespace cata::report

#endif // CATA_REPORT_CONFIG_HPP
