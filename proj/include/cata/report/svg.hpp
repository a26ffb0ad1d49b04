#ifndef CATA_REPORT_SVG_HPP
#define CATA_REPORT_SVG_HPP

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace cata::report::svg {

/// Fixed two-decimal coordinates keep the output byte-stable.
inline std::string num(double x)
{
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string escape(const std::string& s)
{
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    case '\'': out += "&apos;"; break;
    default: out += c;
    }
  }
  return out;
}

/// Rough advance width of sans-serif text, for layout only.
inline double text_width(const std::string& s, double size) { return 0.6 * size * static_cast<double>(s.size()); }

class Document
{
public:
  Document(double width, double height, const std::string& title)
  {
    body_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height)
             + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"sans-serif\">\n";
    body_ += "<title>" + escape(title) + "</title>\n";
    body_ += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"#ffffff\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill, const std::string& attrs = {})
  {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h)
             + "\" fill=\"" + fill + "\"" + (attrs.empty() ? "" : " " + attrs) + "/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0,
            const std::string& attrs = {})
  {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2)
             + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\""
             + (attrs.empty() ? "" : " " + attrs) + "/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width = 1.0)
  {
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ += ' ';
      body_ += num(pts[i].first) + "," + num(pts[i].second);
    }
    body_ += "\"/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill, const std::string& attrs = {})
  {
    body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" + fill + "\""
             + (attrs.empty() ? "" : " " + attrs) + "/>\n";
  }

  /// `rotate` in degrees, clockwise as SVG draws it.
  void ellipse(double cx, double cy, double rx, double ry, double rotate, const std::string& stroke,
               const std::string& attrs = {})
  {
    body_ += "<ellipse cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" rx=\"" + num(rx) + "\" ry=\"" + num(ry)
             + "\" transform=\"rotate(" + num(rotate) + " " + num(cx) + " " + num(cy) + ")\" fill=\"none\" stroke=\""
             + stroke + "\"" + (attrs.empty() ? "" : " " + attrs) + "/>\n";
  }

  void text(double x, double y, const std::string& s, double size = 11, const std::string& anchor = "start",
            const std::string& attrs = {})
  {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) + "\" text-anchor=\""
             + anchor + "\"" + (attrs.empty() ? "" : " " + attrs) + ">" + escape(s) + "</text>\n";
  }

  /// Text reading bottom to top, anchored at (x, y).
  void vtext(double x, double y, const std::string& s, double size = 11, const std::string& anchor = "end")
  {
    body_ += "<text transform=\"translate(" + num(x) + "," + num(y) + ") rotate(-90)\" font-size=\"" + num(size)
             + "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
  }

  void raw(const std::string& s) { body_ += s; }

  std::string str() const { return body_ + "</svg>\n"; }

private:
  std::string body_;
};

} // namespace cata::report::svg

#endif // CATA_REPORT_SVG_HPP
