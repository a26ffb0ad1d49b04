#ifndef CATA_REPORT_FIGURES_HPP
#define CATA_REPORT_FIGURES_HPP

#include "cata/covering_ellipse.hpp"
#include "cata/error.hpp"
#include "cata/l1_pca.hpp"
#include "cata/l1_stats.hpp"
#include "cata/mad_cluster.hpp"
#include "cata/perm_engine.hpp"
#include "cata/report/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cata::report {

namespace palette {

inline constexpr const char* grey = "#e0e0e0";
inline constexpr const char* ink = "#252525";
inline constexpr const char* axis = "#969696";
// Darkest first: p <= 0.001, p <= 0.01, otherwise significant.
inline constexpr const char* green[3] = {"#006d2c", "#31a354", "#a1d99b"};
inline constexpr const char* blue[3] = {"#08519c", "#3182bd", "#9ecae1"};
inline constexpr const char* red[3] = {"#a50f15", "#de2d26", "#fc9272"};

} // namespace palette

inline int significance_depth(double p) { return p <= 0.001 ? 0 : p <= 0.01 ? 1 : 2; }

/// Heatmap cell for one hypothesis. `sign` selects the blue (positive) or
/// red (negative) family; 0 uses green.
struct Cell
{
  std::string cls;
  std::string fill;
  std::string tip;
};

inline Cell hypothesis_cell(const Hypothesis& h, int sign, const std::string& tip)
{
  char p[32];
  std::snprintf(p, sizeof p, "p = %.4g", h.p_value);
  const std::string full = tip + ", " + p;
  if (!h.significant) return {"cell ns", palette::grey, full};
  const int d = significance_depth(h.p_value);
  if (sign > 0) return {"cell sig pos", palette::blue[d], full};
  if (sign < 0) return {"cell sig neg", palette::red[d], full};
  return {"cell sig", palette::green[d], full};
}

inline Cell diagonal_cell() { return {"cell diag", palette::grey, ""}; }

namespace detail {

struct Grid
{
  std::string title;
  Labels row_labels, col_labels;
  std::vector<std::size_t> row_order, col_order;
  std::vector<Cell> cells; // row-major in original order
  const Dendrogram* row_tree = nullptr;
  const Dendrogram* col_tree = nullptr;
  std::vector<Cell> header; // one per column, original order; empty for none
  std::string header_label;
  std::vector<std::pair<std::string, std::string>> legend;
};

inline std::vector<std::size_t> identity_order(std::size_t n)
{
  std::vector<std::size_t> o(n);
  for (std::size_t i = 0; i < n; ++i) o[i] = i;
  return o;
}

inline double label_extent(const Labels& labels, double size)
{
  double w = 0;
  for (const auto& l : labels) w = std::max(w, svg::text_width(l, size));
  return w;
}

/// Elbow dendrogram. `leaf_pos` maps a leaf to the centre of its cell along
/// the layout axis; heights grow away from `base` by up to `extent` pixels
/// (negative extent grows toward smaller coordinates).
inline void draw_tree(svg::Document& doc, const Dendrogram& dg, const std::vector<double>& leaf_pos, double base,
                      double extent, bool vertical_leaves)
{
  const std::size_t n = dg.leaf_count();
  if (dg.merges.empty()) return;
  double top = 0;
  for (const auto& m : dg.merges) top = std::max(top, m.height);
  if (top <= 0) top = 1;
  std::vector<double> pos(n + dg.merges.size()), hgt(n + dg.merges.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) pos[i] = leaf_pos[i];
  auto depth = [&](double h) { return base + extent * h / top; };
  for (std::size_t m = 0; m < dg.merges.size(); ++m) {
    const auto& mg = dg.merges[m];
    const std::size_t id = n + m;
    pos[id] = (pos[mg.left] + pos[mg.right]) / 2;
    hgt[id] = mg.height;
    const double d = depth(mg.height);
    for (std::size_t child : {mg.left, mg.right}) {
      if (vertical_leaves) doc.line(pos[child], depth(hgt[child]), pos[child], d, palette::ink, 1);
      else doc.line(depth(hgt[child]), pos[child], d, pos[child], palette::ink, 1);
    }
    if (vertical_leaves) doc.line(pos[mg.left], d, pos[mg.right], d, palette::ink, 1);
    else doc.line(d, pos[mg.left], d, pos[mg.right], palette::ink, 1);
  }
}

inline void draw_cell(svg::Document& doc, double x, double y, double size, const Cell& c,
                      const std::string& extra = {})
{
  std::string attrs = "class=\"" + c.cls + "\" stroke=\"#ffffff\" stroke-width=\"0.5\"";
  if (!extra.empty()) attrs += " " + extra;
  if (c.tip.empty()) {
    doc.rect(x, y, size, size, c.fill, attrs);
    return;
  }
  doc.raw("<rect x=\"" + svg::num(x) + "\" y=\"" + svg::num(y) + "\" width=\"" + svg::num(size) + "\" height=\""
          + svg::num(size) + "\" fill=\"" + c.fill + "\" " + attrs + "><title>" + svg::escape(c.tip)
          + "</title></rect>\n");
}

inline std::string draw_grid(const Grid& g)
{
  const double cs = 16, font = 10, tree = 70;
  const std::size_t R = g.row_order.size(), C = g.col_order.size();
  double top = 34;
  if (g.col_tree) top += tree + 4;
  const double header_y = top;
  if (!g.header.empty()) top += cs + 6;
  const double left = 10 + (g.row_tree ? tree + 4 : 0);
  const double grid_right = left + static_cast<double>(C) * cs;
  const double grid_bottom = top + static_cast<double>(R) * cs;
  const double row_label_w = label_extent(g.row_labels, font);
  const double col_label_h = label_extent(g.col_labels, font);
  const double header_w = g.header.empty() ? 0 : svg::text_width(g.header_label, font);
  const double legend_x = grid_right + 8 + std::max(row_label_w, header_w) + 16;
  double legend_w = 0;
  for (const auto& [_, text] : g.legend) legend_w = std::max(legend_w, svg::text_width(text, font));
  const double width =
    std::max(legend_x + 18 + legend_w + 10, 20 + svg::text_width(g.title, 13));
  const double legend_bottom = header_y + 16.0 * static_cast<double>(g.legend.size()) + 10;
  const double height = std::max(grid_bottom + 6 + col_label_h + 10, legend_bottom);

  svg::Document doc(width, height, g.title);
  doc.text(10, 20, g.title, 13, "start", "font-weight=\"bold\"");

  std::vector<double> col_pos(g.col_labels.size()), row_pos(g.row_labels.size());
  for (std::size_t k = 0; k < C; ++k) col_pos[g.col_order[k]] = left + (static_cast<double>(k) + 0.5) * cs;
  for (std::size_t k = 0; k < R; ++k) row_pos[g.row_order[k]] = top + (static_cast<double>(k) + 0.5) * cs;

  if (g.col_tree) draw_tree(doc, *g.col_tree, col_pos, header_y - 4, -tree, true);
  if (g.row_tree) draw_tree(doc, *g.row_tree, row_pos, left - 4, -tree, false);

  if (!g.header.empty()) {
    for (std::size_t k = 0; k < C; ++k) {
      const std::size_t c = g.col_order[k];
      draw_cell(doc, left + static_cast<double>(k) * cs, header_y, cs, g.header[c],
                "data-row=\"header\" data-col=\"" + svg::escape(g.col_labels[c]) + "\"");
    }
    doc.text(grid_right + 4, header_y + cs - 4, g.header_label, font);
  }
  for (std::size_t i = 0; i < R; ++i) {
    const std::size_t r = g.row_order[i];
    for (std::size_t k = 0; k < C; ++k) {
      const std::size_t c = g.col_order[k];
      draw_cell(doc, left + static_cast<double>(k) * cs, top + static_cast<double>(i) * cs, cs,
                g.cells[r * g.col_labels.size() + c],
                "data-row=\"" + svg::escape(g.row_labels[r]) + "\" data-col=\"" + svg::escape(g.col_labels[c]) + "\"");
    }
    doc.text(grid_right + 4, top + static_cast<double>(i) * cs + cs - 4, g.row_labels[r], font);
  }
  for (std::size_t k = 0; k < C; ++k) {
    doc.vtext(left + (static_cast<double>(k) + 0.5) * cs + 3.5, grid_bottom + 4, g.col_labels[g.col_order[k]], font);
  }
  double ly = header_y;
  for (const auto& [fill, text] : g.legend) {
    doc.rect(legend_x, ly, 12, 12, fill, "stroke=\"#bdbdbd\" stroke-width=\"0.5\"");
    doc.text(legend_x + 18, ly + 10, text, font);
    ly += 16;
  }
  return doc.str();
}

inline std::vector<std::pair<std::string, std::string>> green_legend()
{
  return {{palette::green[0], "p <= 0.001"},
          {palette::green[1], "0.001 < p <= 0.01"},
          {palette::green[2], "p > 0.01, significant"},
          {palette::grey, "not significant"}};
}

inline std::vector<std::pair<std::string, std::string>> signed_legend(const std::string& pos, const std::string& neg)
{
  return {{palette::blue[0], pos + ", p <= 0.001"},  {palette::blue[1], pos + ", p <= 0.01"},
          {palette::blue[2], pos + ", p > 0.01"},     {palette::red[0], neg + ", p <= 0.001"},
          {palette::red[1], neg + ", p <= 0.01"},     {palette::red[2], neg + ", p > 0.01"},
          {palette::grey, "not significant"}};
}

inline std::string fmt(const char* f, double x)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

/// Ticks at 1, 2 or 5 times a power of ten, about `count` of them.
inline double nice_step(double span, int count)
{
  if (!(span > 0)) return 1;
  const double raw = span / count;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

/// Multiples of nice_step inside [lo, hi].
inline std::vector<double> ticks(double lo, double hi, int count)
{
  const double step = nice_step(hi - lo, count);
  std::vector<double> out;
  for (double v = std::ceil(lo / step - 1e-9) * step; v <= hi + 1e-9 * step; v += step) {
    out.push_back(std::abs(v) < 1e-9 * step ? 0.0 : v);
  }
  return out;
}

} // namespace detail

/// Dendrogram pair used to order heatmap rows (products) and columns (terms).
struct DendrogramPair
{
  Dendrogram products;
  Dendrogram terms;
};

/// Test 2 header row over a Test 3 product-by-term grid; either may be absent.
inline std::string render_term_heatmap(const TestReport* test2, const TestReport* test3, const Labels& products,
                                       const Labels& terms, const std::optional<DendrogramPair>& clustering = {})
{
  if (!test2 && !test3) throw ConfigError("term heatmap needs Test 2 or Test 3 results");
  detail::Grid g;
  g.title = test3 ? "Tests 2 and 3: p-values by term and product" : "Test 2: p-values by term";
  g.col_labels = terms;
  g.row_labels = test3 ? products : Labels{};
  if (clustering) {
    g.col_order = leaf_order(clustering->terms);
    g.col_tree = &clustering->terms;
    if (test3) {
      g.row_order = leaf_order(clustering->products);
      g.row_tree = &clustering->products;
    }
  } else {
    g.col_order = detail::identity_order(terms.size());
    if (test3) g.row_order = detail::identity_order(products.size());
  }
  if (test2) {
    g.header.resize(terms.size());
    for (const auto& h : test2->rows) g.header[*h.term] = hypothesis_cell(h, 0, "Test 2, " + terms[*h.term]);
    g.header_label = "Test 2";
    g.legend = detail::green_legend();
  }
  if (test3) {
    g.cells.resize(products.size() * terms.size());
    for (const auto& h : test3->rows) {
      g.cells[*h.product * terms.size() + *h.term] =
        hypothesis_cell(h, h.sign, "Test 3, " + products[*h.product] + ", " + terms[*h.term]);
    }
    auto more = detail::signed_legend("above median", "below median");
    if (test2) more.pop_back();
    g.legend.insert(g.legend.end(), more.begin(), more.end());
  }
  return detail::draw_grid(g);
}

/// Symmetric product-by-product grid of Test 4 decisions.
inline std::string render_pair_heatmap(const TestReport& test4, const Labels& products,
                                       const Dendrogram* tree = nullptr)
{
  if (test4.test != 4) throw ConfigError("pair heatmap expects a Test 4 report");
  const std::size_t P = products.size();
  detail::Grid g;
  g.title = "Test 4: p-values for product pairs";
  g.row_labels = g.col_labels = products;
  g.row_order = g.col_order = tree ? leaf_order(*tree) : detail::identity_order(P);
  g.row_tree = g.col_tree = tree;
  g.cells.assign(P * P, diagonal_cell());
  for (const auto& h : test4.rows) {
    const auto i = *h.product, j = *h.product2;
    const auto c = hypothesis_cell(h, 0, "Test 4, " + products[i] + " vs " + products[j]);
    g.cells[i * P + j] = g.cells[j * P + i] = c;
  }
  g.legend = detail::green_legend();
  return detail::draw_grid(g);
}

/// Product-by-product grid of signed Test 5 decisions for one term. Cell
/// (row, column) is blue when the row product is cited more.
inline std::string render_test5_heatmap(const TestReport& test5, const Labels& products, const Labels& terms,
                                        std::size_t term, const Dendrogram* tree = nullptr)
{
  if (test5.test != 5) throw ConfigError("signed pair heatmap expects a Test 5 report");
  if (term >= terms.size()) throw ConfigError("term index out of range");
  const std::size_t P = products.size();
  detail::Grid g;
  g.title = "Test 5: " + terms[term];
  g.row_labels = g.col_labels = products;
  g.row_order = g.col_order = tree ? leaf_order(*tree) : detail::identity_order(P);
  g.row_tree = g.col_tree = tree;
  g.cells.assign(P * P, diagonal_cell());
  for (const auto& h : test5.rows) {
    if (*h.term != term) continue;
    const auto i = *h.product, j = *h.product2;
    g.cells[i * P + j] = hypothesis_cell(h, h.sign, products[i] + " vs " + products[j]);
    g.cells[j * P + i] = hypothesis_cell(h, -h.sign, products[j] + " vs " + products[i]);
  }
  g.legend = detail::signed_legend("row cited more", "row cited less");
  return detail::draw_grid(g);
}

/// Dispatch on the report's test number. Test 5 needs a term and has its
/// own entry point.
inline std::string render_heatmap(const TestReport& report, const Labels& products, const Labels& terms,
                                  const std::optional<DendrogramPair>& clustering = {})
{
  switch (report.test) {
  case 2: return render_term_heatmap(&report, nullptr, products, terms, clustering);
  case 3: return render_term_heatmap(nullptr, &report, products, terms, clustering);
  case 4: return render_pair_heatmap(report, products, clustering ? &clustering->products : nullptr);
  default: throw ConfigError("no heatmap for Test " + std::to_string(report.test) + " here");
  }
}

/// Proportion of the B+1 null values (observed included) at each distinct value.
inline std::string render_null_distribution(const NullDistribution& null)
{
  std::map<double, std::size_t> freq;
  for (double v : null.simulated) ++freq[v];
  ++freq[null.observed];
  const double total = static_cast<double>(null.simulated.size() + 1);
  const double lo = freq.begin()->first, hi = freq.rbegin()->first;
  const double span = hi > lo ? hi - lo : 1.0;
  const double W = 520, H = 340, L = 60, R = 20, T = 40, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  double gap = span;
  for (auto it = freq.begin(); std::next(it) != freq.end(); ++it) gap = std::min(gap, std::next(it)->first - it->first);
  const double bar = std::clamp(0.8 * gap / span * (pw - 40), 3.0, 24.0);
  auto xpos = [&](double v) { return L + 20 + (v - (hi > lo ? lo : lo - 0.5)) / span * (pw - 40); };
  auto ypos = [&](double p) { return T + ph * (1 - p); };

  svg::Document doc(W, H, "Test 1 null distribution");
  doc.text(10, 20, "Test 1: null distribution of the median MAD", 13, "start", "font-weight=\"bold\"");
  doc.line(L, T + ph, L + pw, T + ph, palette::axis);
  doc.line(L, T, L, T + ph, palette::axis);
  for (double p = 0; p <= 1.0001; p += 0.25) {
    doc.line(L - 4, ypos(p), L, ypos(p), palette::axis);
    doc.text(L - 6, ypos(p) + 4, detail::fmt("%.2f", p), 10, "end");
  }
  for (const auto& [v, n] : freq) {
    const double p = static_cast<double>(n) / total;
    const bool observed = v == null.observed;
    const std::string cls = observed ? "bar observed" : "bar";
    doc.rect(xpos(v) - bar / 2, ypos(p), bar, T + ph - ypos(p), observed ? palette::red[1] : palette::blue[2],
             "class=\"" + cls + "\"");
    doc.text(xpos(v), T + ph + 14, detail::fmt("%.4g", v), 10, "middle");
  }
  // The observed bar is often a single count out of B+1 and invisible.
  doc.line(xpos(null.observed), T + 12, xpos(null.observed), T + ph, palette::red[1], 1,
           "class=\"observed\" stroke-dasharray=\"4 3\"");
  doc.text(xpos(null.observed), T + 8, "observed", 10, "middle", "fill=\"" + std::string(palette::red[0]) + "\"");
  doc.text(L + pw / 2, H - 12, "median MAD (%)", 11, "middle");
  doc.vtext(14, T + ph / 2, "proportion", 11, "middle");
  return doc.str();
}

/// Median per term as a wide bar, MAD as a thin bar on top; terms in
/// decreasing median order. MAD bars of terms significant in Test 2 are
/// dark, the rest light grey and marked "ns".
inline std::string render_median_mad(const std::vector<TermSummary>& summaries, const TestReport* test2 = nullptr)
{
  const std::size_t T = summaries.size();
  std::vector<std::size_t> order = detail::identity_order(T);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return summaries[a].median > summaries[b].median; });
  std::vector<int> flag(T, -1);
  if (test2) {
    for (const auto& h : test2->rows) flag[*h.term] = h.significant;
  }
  double top = 0;
  for (const auto& s : summaries) top = std::max(top, s.median + s.mad);
  const double step = detail::nice_step(top, 5);
  top = std::max(step, std::ceil(top / step) * step);

  Labels names;
  for (const auto& s : summaries) names.push_back(s.term);
  const double slot = 18, L = 50, T0 = 40, ph = 260;
  const double W = L + slot * static_cast<double>(T) + 20;
  const double H = T0 + ph + 10 + detail::label_extent(names, 10) + 10;
  auto ypos = [&](double v) { return T0 + ph * (1 - v / top); };

  svg::Document doc(std::max(W, 400.0), H, "Median and MAD per term");
  doc.text(10, 20, "Median citation percentage and MAD per term", 13, "start", "font-weight=\"bold\"");
  doc.line(L, T0, L, T0 + ph, palette::axis);
  doc.line(L, T0 + ph, L + slot * static_cast<double>(T), T0 + ph, palette::axis);
  for (double v = 0; v <= top + 1e-9; v += step) {
    doc.line(L - 4, ypos(v), L, ypos(v), palette::axis);
    doc.text(L - 6, ypos(v) + 4, detail::fmt("%g", v), 10, "end");
  }
  doc.vtext(14, T0 + ph / 2, "citation percentage", 11, "middle");
  for (std::size_t k = 0; k < T; ++k) {
    const auto& s = summaries[order[k]];
    const double x = L + slot * static_cast<double>(k);
    doc.rect(x + 3, ypos(s.median), slot - 6, T0 + ph - ypos(s.median), "#bdbdbd", "class=\"median\"");
    const bool ns = flag[order[k]] == 0;
    doc.rect(x + slot / 2 - 2, ypos(s.median + s.mad), 4, ypos(s.median) - ypos(s.median + s.mad),
             ns ? "#d9d9d9" : "#08306b", ns ? "class=\"mad ns\"" : "class=\"mad\"");
    if (ns) doc.text(x + slot / 2, ypos(s.median + s.mad) - 3, "ns", 8, "middle");
    doc.vtext(x + slot / 2 + 3.5, T0 + ph + 6, s.term, 10);
  }
  return doc.str();
}

/// Default loading scale: the longest loading vector reaches 80% of the
/// largest score coordinate on components 1-2.
inline double auto_loading_scale(const L1PcaModel& model)
{
  if (model.loadings.cols() < 2) return 1.0;
  const double s = model.scores.leftCols(2).cwiseAbs().maxCoeff();
  const double l = model.loadings.leftCols(2).rowwise().norm().maxCoeff();
  if (!(s > 0) || !(l > 0)) return 1.0;
  return 0.8 * s / l;
}

/// Products as points on components 1-2, term loadings as vectors scaled by
/// `loading_scale` (0 omits them), covering ellipses overlaid.
inline std::string render_biplot(const L1PcaModel& model, const std::vector<std::optional<EllipseSpec>>& ellipses,
                                 double loading_scale)
{
  if (model.scores.cols() < 2) throw ConfigError("a biplot needs at least two components");
  if (!(loading_scale >= 0)) throw ConfigError("loading scale must be nonnegative");
  const auto P = model.scores.rows();
  double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
  auto grow = [&](double x, double y) {
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, y);
  };
  for (Eigen::Index p = 0; p < P; ++p) grow(model.scores(p, 0), model.scores(p, 1));
  if (loading_scale > 0) {
    for (Eigen::Index t = 0; t < model.loadings.rows(); ++t) {
      grow(loading_scale * model.loadings(t, 0), loading_scale * model.loadings(t, 1));
    }
  }
  for (const auto& e : ellipses) {
    if (!e) continue;
    const double r = e->semi_axes(0);
    grow(e->center(0) - r, e->center(1) - r);
    grow(e->center(0) + r, e->center(1) + r);
  }
  const double span = std::max({xhi - xlo, yhi - ylo, 1e-9});
  const double pad = 0.08 * span;
  xlo -= pad;
  ylo -= pad;
  const double range = span + 2 * pad;
  const double S = 480, L = 60, T0 = 50;
  const double unit = S / range;
  auto X = [&](double x) { return L + (x - xlo) * unit; };
  auto Y = [&](double y) { return T0 + S - (y - ylo) * unit; };

  svg::Document doc(L + S + 120, T0 + S + 50, "L1-PCA biplot");
  doc.text(10, 20, "L1-PCA biplot (K = " + std::to_string(model.components) + ", prop = " + detail::fmt("%.3f", model.prop) + ")",
           13, "start", "font-weight=\"bold\"");
  doc.rect(L, T0, S, S, "none", "stroke=\"#d9d9d9\"");
  doc.line(X(0), T0, X(0), T0 + S, palette::axis, 1, "stroke-dasharray=\"4 3\"");
  doc.line(L, Y(0), L + S, Y(0), palette::axis, 1, "stroke-dasharray=\"4 3\"");
  for (double v : detail::ticks(xlo, xlo + range, 6)) {
    doc.line(X(v), T0 + S, X(v), T0 + S + 4, palette::axis);
    doc.text(X(v), T0 + S + 15, detail::fmt("%g", v), 10, "middle");
  }
  for (double v : detail::ticks(ylo, ylo + range, 6)) {
    doc.line(L - 4, Y(v), L, Y(v), palette::axis);
    doc.text(L - 6, Y(v) + 4, detail::fmt("%g", v), 10, "end");
  }
  doc.text(L + S / 2, T0 + S + 34, "Component 1 (percentage units)", 11, "middle");
  doc.vtext(20, T0 + S / 2, "Component 2 (percentage units)", 11, "middle");
  for (const auto& e : ellipses) {
    if (!e) continue;
    doc.ellipse(X(e->center(0)), Y(e->center(1)), e->semi_axes(0) * unit, e->semi_axes(1) * unit,
                -e->angle * 180.0 / std::numbers::pi, palette::blue[1], "class=\"ellipse\" stroke-width=\"1\"");
  }
  if (loading_scale > 0) {
    for (Eigen::Index t = 0; t < model.loadings.rows(); ++t) {
      const double x = loading_scale * model.loadings(t, 0), y = loading_scale * model.loadings(t, 1);
      doc.line(X(0), Y(0), X(x), Y(y), "#969696", 0.8, "class=\"loading\"");
      doc.text(X(x), Y(y) - 3, model.terms[static_cast<std::size_t>(t)], 9, "middle", "fill=\"#636363\"");
    }
  }
  for (Eigen::Index p = 0; p < P; ++p) {
    const double x = model.scores(p, 0), y = model.scores(p, 1);
    doc.circle(X(x), Y(y), 3.5, palette::red[1], "class=\"product\"");
    doc.text(X(x) + 5, Y(y) - 5, model.products[static_cast<std::size_t>(p)], 11, "start", "font-weight=\"bold\"");
  }
  return doc.str();
}

/// Panel A: prop (line) and gain (bars) for each K. Panel B, when a model
/// and the table are given: table percentages against the model's
/// reconstruction.
inline std::string render_scree(const ScreeTable& scree, const L1PcaModel* model = nullptr,
                                const Eigen::MatrixXd* values = nullptr)
{
  const bool panel_b = model && values;
  const double pw = 320, ph = 260, L = 55, T0 = 45, gapx = 80;
  const double W = L + pw + 20 + (panel_b ? gapx + pw : 0);
  const double H = T0 + ph + 50;
  svg::Document doc(W, H, "L1-PCA scree");
  doc.text(10, 20, "L1-PCA explained proportion and gain by dimension", 13, "start", "font-weight=\"bold\"");

  const std::size_t n = scree.rows.size();
  double lo = 0;
  for (const auto& r : scree.rows) lo = std::min(lo, r.gain);
  const double hi = 1.0;
  auto Y = [&](double v) { return T0 + ph * (hi - v) / (hi - lo); };
  const double slot = n ? pw / static_cast<double>(n) : pw;
  doc.text(L, T0 - 10, "A", 12, "start", "font-weight=\"bold\"");
  doc.line(L, T0, L, T0 + ph, palette::axis);
  doc.line(L, Y(0), L + pw, Y(0), palette::axis);
  for (double v = 0; v <= 1.0001; v += 0.25) {
    doc.line(L - 4, Y(v), L, Y(v), palette::axis);
    doc.text(L - 6, Y(v) + 4, detail::fmt("%.2f", v), 10, "end");
  }
  std::vector<std::pair<double, double>> line;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& r = scree.rows[k];
    const double cx = L + slot * (static_cast<double>(k) + 0.5);
    const double y0 = Y(std::max(0.0, r.gain)), y1 = Y(std::min(0.0, r.gain));
    doc.rect(cx - slot * 0.3, y0, slot * 0.6, y1 - y0, palette::green[2], "class=\"gain\"");
    line.emplace_back(cx, Y(r.prop));
    doc.text(cx, T0 + ph + 14, std::to_string(r.components), 10, "middle");
  }
  doc.polyline(line, palette::green[0], 1.5);
  for (const auto& [x, y] : line) doc.circle(x, y, 3, palette::green[0], "class=\"prop\"");
  doc.text(L + pw / 2, T0 + ph + 32, "dimension K (bars: gain, line: prop)", 11, "middle");

  if (panel_b) {
    const double L2 = L + pw + gapx;
    const Eigen::MatrixXd rec = model->reconstruct();
    const double vmax = std::max({100.0, rec.maxCoeff(), values->maxCoeff()});
    const double vmin = std::min({0.0, rec.minCoeff(), values->minCoeff()});
    auto X2 = [&](double v) { return L2 + pw * (v - vmin) / (vmax - vmin); };
    auto Y2 = [&](double v) { return T0 + ph * (vmax - v) / (vmax - vmin); };
    doc.text(L2, T0 - 10, "B", 12, "start", "font-weight=\"bold\"");
    doc.rect(L2, T0, pw, ph, "none", "stroke=\"#d9d9d9\"");
    doc.line(X2(vmin), Y2(vmin), X2(vmax), Y2(vmax), palette::axis, 1, "stroke-dasharray=\"4 3\"");
    for (Eigen::Index i = 0; i < values->rows(); ++i) {
      for (Eigen::Index j = 0; j < values->cols(); ++j) {
        doc.circle(X2((*values)(i, j)), Y2(rec(i, j)), 1.8, palette::blue[1], "class=\"point\" fill-opacity=\"0.6\"");
      }
    }
    for (double v : detail::ticks(vmin, vmax, 5)) {
      doc.line(X2(v), T0 + ph, X2(v), T0 + ph + 4, palette::axis);
      doc.text(X2(v), T0 + ph + 15, detail::fmt("%g", v), 10, "middle");
      doc.line(L2 - 4, Y2(v), L2, Y2(v), palette::axis);
      doc.text(L2 - 6, Y2(v) + 4, detail::fmt("%g", v), 10, "end");
    }
    doc.text(L2 + pw / 2, T0 + ph + 32, "CATA table percentage", 11, "middle");
    doc.vtext(L2 - 36, T0 + ph / 2, "reconstructed, K = " + std::to_string(model->components), 11, "middle");
  }
  return doc.str();
}

} // namespace cata::report

#endif // CATA_REPORT_FIGURES_HPP
