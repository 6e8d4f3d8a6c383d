#pragma once

#include <cstdio>
#include <sstream>
#include <string>

namespace confmu {

// fixed 4-decimal float formatting keeps every rendering byte-stable
inline std::string svg_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

inline std::string svg_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Minimal SVG document builder; emits elements in call order.
class SvgWriter {
 public:
  SvgWriter(double width, double height) : width_(width), height_(height) {}

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none", double stroke_width = 0.0) {
    body_ << "<rect x=\"" << svg_num(x) << "\" y=\"" << svg_num(y) << "\" width=\""
          << svg_num(w) << "\" height=\"" << svg_num(h) << "\" fill=\"" << fill << "\"";
    if (stroke != "none")
      body_ << " stroke=\"" << stroke << "\" stroke-width=\"" << svg_num(stroke_width)
            << "\"";
    body_ << "/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double stroke_width = 1.0) {
    body_ << "<line x1=\"" << svg_num(x1) << "\" y1=\"" << svg_num(y1) << "\" x2=\""
          << svg_num(x2) << "\" y2=\"" << svg_num(y2) << "\" stroke=\"" << stroke
          << "\" stroke-width=\"" << svg_num(stroke_width) << "\"/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& stroke = "none", double stroke_width = 0.0) {
    body_ << "<circle cx=\"" << svg_num(cx) << "\" cy=\"" << svg_num(cy) << "\" r=\""
          << svg_num(r) << "\" fill=\"" << fill << "\"";
    if (stroke != "none")
      body_ << " stroke=\"" << stroke << "\" stroke-width=\"" << svg_num(stroke_width)
            << "\"";
    body_ << "/>\n";
  }

  // anchor: start | middle | end
  void text(double x, double y, const std::string& s, double size,
            const std::string& anchor = "start", const std::string& fill = "#000000",
            const std::string& transform = "") {
    body_ << "<text x=\"" << svg_num(x) << "\" y=\"" << svg_num(y) << "\" font-size=\""
          << svg_num(size) << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor
          << "\" fill=\"" << fill << "\"";
    if (!transform.empty()) body_ << " transform=\"" << transform << "\"";
    body_ << ">" << xml_escape(s) << "</text>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(width_)
        << "\" height=\"" << svg_num(height_) << "\" viewBox=\"0 0 " << svg_num(width_)
        << " " << svg_num(height_) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

}  // namespace confmu
