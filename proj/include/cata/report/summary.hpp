#ifndef CATA_REPORT_SUMMARY_HPP
#define CATA_REPORT_SUMMARY_HPP

#include "cata/report/results.hpp"

#include <cstdio>
#include <sstream>
#include <string>

namespace cata::report {

/// Decimal places needed to show multiples of 1/(B+1), e.g. 4 for B = 9999.
inline int pvalue_decimals(std::size_t permutations)
{
  int d = 0;
  for (double x = static_cast<double>(permutations + 1); x > 1.0; x /= 10.0) ++d;
  return std::max(d, 1);
}

inline std::string format_fixed(double x, int decimals)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

/// Four decimals, or scientific notation when that would print as zero.
inline std::string format_p(double p)
{
  char buf[64];
  if (p > 0 && p < 0.0001) std::snprintf(buf, sizeof buf, "%.2e", p);
  else std::snprintf(buf, sizeof buf, "%.4f", p);
  return buf;
}

inline std::string test_title(int test)
{
  switch (test) {
  case 1: return "Test 1, global";
  case 2: return "Test 2, terms";
  case 3: return "Test 3, product x term cells";
  case 4: return "Test 4, product pairs";
  case 5: return "Test 5, product pairs x terms";
  }
  return "Test " + std::to_string(test);
}

inline std::string render_summary(const Results& r)
{
  const auto& pv = r.provenance;
  std::ostringstream os;
  os << pv.tool << ' ' << pv.version << " - " << pv.command << "\n";
  os << "input: " << pv.input << "\n";
  os << "design: " << r.assessors << " assessors, " << r.products.size() << " products, " << r.terms.size()
     << " terms\n";
  os << "seed: " << pv.seed << (pv.seed_generated ? " (generated; pass --seed to repeat this run)" : "") << "\n";

  if (r.tests) {
    const int dec = pvalue_decimals(pv.permutations);
    os << "\nPermutation tests (B = " << pv.permutations << ", alpha = " << pv.alpha
       << (pv.control_fdr ? ", FDR controlled" : ", no FDR control") << ")\n";
    for (const auto& [test, rep] : *r.tests) {
      os << "  " << test_title(test) << ": ";
      if (test == 1) {
        const auto& h = rep.rows.front();
        os << "statistic " << h.statistic << "%, global test p = " << format_fixed(h.p_value, dec)
           << (h.significant ? " (significant)" : " (not significant)") << "\n";
        continue;
      }
      os << rep.significant_count() << " of " << rep.rows.size() << " significant";
      if (rep.critical_value) {
        os << ", " << (rep.fdr_controlled ? "BH critical value " : "largest significant p ")
           << format_fixed(*rep.critical_value, dec);
      }
      os << "\n";
    }
    if (r.tests->count(2)) {
      os << "  terms significant in Test 2:";
      for (const auto& h : r.tests->at(2).rows) {
        if (h.significant) os << ' ' << r.terms[*h.term];
      }
      os << "\n";
    }
  }

  if (r.clustering) {
    const auto& c = *r.clustering;
    os << "\nComplete-linkage clustering\n";
    auto show = [&](const char* what, const Partition& part) {
      os << "  " << what << ", " << part.clusters.size() << " clusters\n";
      for (std::size_t k = 0; k < part.clusters.size(); ++k) {
        os << "    [" << k + 1 << "] (" << part.clusters[k].size() << ")";
        for (const auto& l : part.clusters[k]) os << ' ' << l;
        os << "\n";
      }
    };
    show("products", c.product_partition);
    show("terms", c.term_partition);
  }

  if (r.l1pca) {
    const auto& p = *r.l1pca;
    const auto& m = p.model;
    os << "\nL1-PCA\n";
    os << "  K = " << m.components << ": prop = " << format_fixed(m.prop, 3)
       << (m.degenerate ? " (degenerate table)" : m.converged ? " (converged)" : " (not converged)") << "\n";
    os << "  scree:\n";
    for (const auto& row : p.scree.rows) {
      os << "    K = " << row.components << "  prop " << format_fixed(row.prop, 3) << "  gain "
         << format_fixed(row.gain, 3) << (row.converged ? "" : "  (not converged)") << "\n";
    }
    if (!p.ellipses.empty()) {
      os << "  bootstrap: " << p.replicates << " replicates, " << format_fixed(100 * p.coverage, 0)
         << "% covering ellipses\n";
    }
  }

  if (r.classical) {
    const auto& c = *r.classical;
    os << "\nClassical tests (alpha = " << c.alpha << (c.fdr_controlled ? ", FDR controlled" : ", no FDR control")
       << ")\n";
    os << "  Cochran's Q: " << c.cochran_fdr.significant_count() << " of " << c.cochran.size()
       << " terms significant";
    if (c.cochran_fdr.critical_value) os << ", critical value " << format_p(*c.cochran_fdr.critical_value);
    os << "\n";
    os << "  McNemar (exact): " << c.mcnemar_fdr.significant_count() << " of " << c.mcnemar.size()
       << " significant" << (c.fdr_controlled ? " with FDR control; " : "; ") << c.mcnemar_uncorrected
       << " at p <= " << c.alpha << " unadjusted\n";
    os << "  significant McNemar pairs per term:\n";
    const auto per = c.mcnemar_per_term(r.terms.size());
    for (std::size_t t = 0; t < r.terms.size(); ++t) os << "    " << r.terms[t] << ": " << per[t] << "\n";
  }

  if (!r.notes.empty()) {
    os << "\nNotes\n";
    for (const auto& n : r.notes) os << "  - " << n << "\n";
  }
  return os.str();
}

} // namespace cata::report

#endif // CATA_REPORT_SUMMARY_HPP
