#ifndef CATA_CORE_DATA_HPP
#define CATA_CORE_DATA_HPP

#include "cata/error.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace cata {

using Labels = std::vector<std::string>;

namespace detail {

inline void require_unique(const Labels& labels, std::string_view what)
{
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw DataError("duplicate " + std::string(what) + " label '" + l + "'");
    }
  }
}

} // namespace detail

/// Three-way binary citation array, assessor x product x term.
///
/// Cells are stored assessor-major so that one assessor's P x T slice is
/// contiguous; permutation and bootstrap work slice by slice.
class CataArray
{
public:
  CataArray(Labels assessors, Labels products, Labels terms, std::vector<std::uint8_t> cells)
    : assessors_(std::move(assessors))
    , products_(std::move(products))
    , terms_(std::move(terms))
    , cells_(std::move(cells))
  {
    if (assessors_.size() < 2) throw DataError("at least 2 assessors are required");
    if (products_.size() < 2) throw DataError("at least 2 products are required");
    if (terms_.empty()) throw DataError("at least 1 term is required");
    detail::require_unique(assessors_, "assessor");
    detail::require_unique(products_, "product");
    detail::require_unique(terms_, "term");
    if (cells_.size() != assessors_.size() * products_.size() * terms_.size()) {
      throw DataError("cell count does not match A*P*T");
    }
    for (auto c : cells_) {
      if (c > 1) throw DataError("cell value is not binary");
    }
  }

  std::size_t n_assessors() const { return assessors_.size(); }
  std::size_t n_products() const { return products_.size(); }
  std::size_t n_terms() const { return terms_.size(); }

  const Labels& assessor_labels() const { return assessors_; }
  const Labels& product_labels() const { return products_; }
  const Labels& term_labels() const { return terms_; }

  std::uint8_t cell(std::size_t a, std::size_t p, std::size_t t) const
  {
    return cells_[index(a, p, t)];
  }

  /// Citations of assessor `a` for product `p`, one entry per term.
  std::span<const std::uint8_t> row(std::size_t a, std::size_t p) const
  {
    return {cells_.data() + index(a, p, 0), terms_.size()};
  }

  /// Copy of this array whose assessor slices are `slices[a]` of the source,
  /// with row `p` of slice a taken from source row `rows[a][p]`.
  CataArray remapped(std::span<const std::size_t> slices,
                     std::span<const std::vector<std::size_t>> rows) const
  {
    std::vector<std::uint8_t> out(cells_.size());
    for (std::size_t a = 0; a < n_assessors(); ++a) {
      for (std::size_t p = 0; p < n_products(); ++p) {
        auto src = row(slices[a], rows[a][p]);
        std::copy(src.begin(), src.end(), out.begin() + static_cast<std::ptrdiff_t>(index(a, p, 0)));
      }
    }
    return CataArray(assessors_, products_, terms_, std::move(out));
  }

  const std::vector<std::uint8_t>& cells() const { return cells_; }

  friend bool operator==(const CataArray&, const CataArray&) = default;

private:
  std::size_t index(std::size_t a, std::size_t p, std::size_t t) const
  {
    return (a * products_.size() + p) * terms_.size() + t;
  }

  Labels assessors_;
  Labels products_;
  Labels terms_;
  std::vector<std::uint8_t> cells_;
};

/// P x T table of citation percentages, e_pt = 100 * count_pt / A.
///
/// The integer counts are kept alongside the percentages. All order
/// comparisons inside the permutation engine run on the count scale, where
/// medians and MADs are exact dyadic rationals.
class CataTable
{
public:
  CataTable(Eigen::MatrixXi counts, std::size_t assessors, Labels products, Labels terms)
    : counts_(std::move(counts))
    , assessors_(assessors)
    , products_(std::move(products))
    , terms_(std::move(terms))
  {
    if (assessors_ == 0) throw DataError("assessor count must be positive");
    if (static_cast<std::size_t>(counts_.rows()) != products_.size()
        || static_cast<std::size_t>(counts_.cols()) != terms_.size()) {
      throw DataError("table dimensions do not match label lists");
    }
    if ((counts_.array() < 0).any() || (counts_.array() > static_cast<int>(assessors_)).any()) {
      throw DataError("citation count outside [0, A]");
    }
    // 100k/A as a single division keeps k=A at exactly 100.
    values_.resize(counts_.rows(), counts_.cols());
    for (Eigen::Index p = 0; p < counts_.rows(); ++p) {
      for (Eigen::Index t = 0; t < counts_.cols(); ++t) {
        values_(p, t) = 100.0 * counts_(p, t) / static_cast<double>(assessors_);
      }
    }
  }

  std::size_t n_products() const { return products_.size(); }
  std::size_t n_terms() const { return terms_.size(); }
  std::size_t n_assessors() const { return assessors_; }

  const Eigen::MatrixXd& values() const { return values_; }
  const Eigen::MatrixXi& counts() const { return counts_; }
  double value(std::size_t p, std::size_t t) const
  {
    return values_(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(t));
  }

  const Labels& product_labels() const { return products_; }
  const Labels& term_labels() const { return terms_; }

private:
  Eigen::MatrixXi counts_;
  Eigen::MatrixXd values_;
  std::size_t assessors_;
  Labels products_;
  Labels terms_;
};

/// Citation counts summed over assessor slices.
inline Eigen::MatrixXi citation_counts(const CataArray& array)
{
  const std::size_t P = array.n_products(), T = array.n_terms();
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(T));
  for (std::size_t a = 0; a < array.n_assessors(); ++a) {
    for (std::size_t p = 0; p < P; ++p) {
      auto r = array.row(a, p);
      for (std::size_t t = 0; t < T; ++t) {
        counts(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(t)) += r[t];
      }
    }
  }
  return counts;
}

inline CataTable aggregate(const CataArray& array)
{
  return CataTable(citation_counts(array), array.n_assessors(), array.product_labels(),
                   array.term_labels());
}

// ---------------------------------------------------------------------------
// Long-format CSV: header `assessor,product,term,cited`, one row per triple.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no)
{
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw DataError("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string trim(std::string_view s)
{
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

struct LabelIndex
{
  Labels labels;
  std::unordered_map<std::string, std::size_t> index;

  std::size_t intern(const std::string& s)
  {
    auto [it, inserted] = index.try_emplace(s, labels.size());
    if (inserted) labels.push_back(s);
    return it->second;
  }
};

} // namespace detail

/// Parse a long-format CATA stream. Labels are ordered by first appearance.
inline CataArray load_cata_array(std::istream& in)
{
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError("empty input: header row is mandatory");
  ++line_no;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  auto header = detail::split_csv_line(line, line_no);
  const std::vector<std::string> expected{"assessor", "product", "term", "cited"};
  if (header.size() != 4) throw DataError("header must be 'assessor,product,term,cited'");
  for (std::size_t i = 0; i < 4; ++i) {
    if (detail::trim(header[i]) != expected[i]) {
      throw DataError("header must be 'assessor,product,term,cited'");
    }
  }

  struct Record
  {
    std::size_t a, p, t;
    std::uint8_t cited;
  };
  detail::LabelIndex assessors, products, terms;
  std::vector<Record> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto f = detail::split_csv_line(line, line_no);
    if (f.size() != 4) {
      throw DataError("line " + std::to_string(line_no) + ": expected 4 fields, got "
                      + std::to_string(f.size()));
    }
    for (auto& x : f) x = detail::trim(x);
    std::uint8_t cited;
    if (f[3] == "0") cited = 0;
    else if (f[3] == "1") cited = 1;
    else {
      throw DataError("line " + std::to_string(line_no) + ": non-binary cited value '" + f[3] + "'");
    }
    records.push_back({assessors.intern(f[0]), products.intern(f[1]), terms.intern(f[2]), cited});
  }

  const std::size_t A = assessors.labels.size(), P = products.labels.size(), T = terms.labels.size();
  if (A < 2) throw DataError("at least 2 assessors are required");
  if (P < 2) throw DataError("at least 2 products are required");

  std::vector<std::uint8_t> cells(A * P * T, 0);
  std::vector<std::uint8_t> present(A * P * T, 0);
  for (const auto& r : records) {
    const std::size_t i = (r.a * P + r.p) * T + r.t;
    if (present[i]) {
      throw DataError("duplicate record for (assessor=" + assessors.labels[r.a] + ", product="
                      + products.labels[r.p] + ", term=" + terms.labels[r.t] + ")");
    }
    present[i] = 1;
    cells[i] = r.cited;
  }
  for (std::size_t a = 0; a < A; ++a) {
    for (std::size_t p = 0; p < P; ++p) {
      for (std::size_t t = 0; t < T; ++t) {
        if (!present[(a * P + p) * T + t]) {
          throw DataError("incomplete design: missing record for (assessor=" + assessors.labels[a]
                          + ", product=" + products.labels[p] + ", term=" + terms.labels[t] + ")");
        }
      }
    }
  }
  return CataArray(std::move(assessors.labels), std::move(products.labels), std::move(terms.labels),
                   std::move(cells));
}

inline CataArray load_cata_array_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path + "'");
  return load_cata_array(in);
}

/// Inverse of load_cata_array: rows in assessor, product, term order.
inline void write_long_format(std::ostream& out, const CataArray& array)
{
  using detail::csv_field;
  out << "assessor,product,term,cited\n";
  for (std::size_t a = 0; a < array.n_assessors(); ++a) {
    for (std::size_t p = 0; p < array.n_products(); ++p) {
      for (std::size_t t = 0; t < array.n_terms(); ++t) {
        out << csv_field(array.assessor_labels()[a]) << ',' << csv_field(array.product_labels()[p])
            << ',' << csv_field(array.term_labels()[t]) << ',' << int(array.cell(a, p, t)) << '\n';
      }
    }
  }
}

/// Wide export: product label, then one percentage column per term.
inline void write_wide_table(std::ostream& out, const CataTable& table)
{
  using detail::csv_field;
  out << "product";
  for (const auto& t : table.term_labels()) out << ',' << csv_field(t);
  out << '\n';
  std::ostringstream cell;
  cell << std::fixed << std::setprecision(1);
  for (std::size_t p = 0; p < table.n_products(); ++p) {
    out << csv_field(table.product_labels()[p]);
    for (std::size_t t = 0; t < table.n_terms(); ++t) {
      cell.str({});
      cell << table.value(p, t);
      out << ',' << cell.str();
    }
    out << '\n';
  }
}

} // namespace cata

#endif // CATA_CORE_DATA_HPP
