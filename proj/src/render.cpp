#include "rsd/render.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "rsd/errors.hpp"

namespace rsd {

namespace {

constexpr std::array<const char*, 8> kDepthPalette = {
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a",
    "#66a61e", "#e6ab02", "#a6761d", "#666666",
};
constexpr const char* kSelectedFill = "#2e7d32";

// Shortest round-trip decimal, identical on every IEEE platform.
std::string num(double x) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

struct Mapper {
  Rational x_lo, x_len, y_lo, y_len;
  double width, height;

  double x(const Rational& v) const {
    return ((v - x_lo) / x_len).to_double() * width;
  }
  // SVG y grows downward.
  double y(const Rational& v) const {
    return (Rational(1) - (v - y_lo) / y_len).to_double() * height;
  }
};

void emit_rect(std::ostream& os, double x, double y, double w, double h,
               const std::string& fill, const char* extra = "") {
  os << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
     << num(w) << "\" height=\"" << num(h) << "\" fill=\"" << fill
     << "\" stroke=\"#333333\" stroke-width=\"1\"" << extra << "/>\n";
}

std::string fill_for(const RenderOptions& options, int depth) {
  if (options.color_by == RenderOptions::ColorBy::kind) return kSelectedFill;
  return kDepthPalette[static_cast<std::size_t>(depth) % kDepthPalette.size()];
}

}  // namespace

std::string render_svg(const Decomposition& dec, const RenderOptions& options) {
  std::vector<Rectangle> all;
  for (const SelectedRect& s : dec.selected) all.push_back(s.rect);
  for (const auto& [rect, reason] : dec.residual_leaves) all.push_back(rect);
  if (all.empty()) {
    fail(Errc::precondition, "decomposition has no rectangles to render");
  }
  const int n = all.front().dim();
  if (n > 2) {
    fail(Errc::unsupported_dimension, "render supports dimensions 1 and 2");
  }
  const Rectangle domain = bounding_box(all);

  const double width = options.width;
  const double height = options.height;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
     << "\" height=\"" << options.height << "\" viewBox=\"0 0 "
     << options.width << " " << options.height << "\">\n";
  os << "<defs>\n"
     << "<pattern id=\"hatch\" width=\"8\" height=\"8\" "
        "patternTransform=\"rotate(45)\" patternUnits=\"userSpaceOnUse\">\n"
     << "<rect width=\"8\" height=\"8\" fill=\"#f4f4f4\"/>\n"
     << "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"8\" stroke=\"#999999\" "
        "stroke-width=\"2\"/>\n"
     << "</pattern>\n</defs>\n";

  if (n == 1) {
    // Horizontal bar chart: the domain interval as one band.
    const Rational lo = domain.side(0).lo();
    const Rational len = domain.side(0).length();
    const double bar_top = height / 3.0;
    const double bar_height = height / 3.0;
    const auto map_x = [&](const Rational& v) {
      return ((v - lo) / len).to_double() * width;
    };
    for (const auto& [rect, reason] : dec.residual_leaves) {
      const double x0 = map_x(rect.side(0).lo());
      const double x1 = map_x(rect.side(0).hi());
      emit_rect(os, x0, bar_top, x1 - x0, bar_height, "url(#hatch)");
    }
    for (const SelectedRect& s : dec.selected) {
      const double x0 = map_x(s.rect.side(0).lo());
      const double x1 = map_x(s.rect.side(0).hi());
      emit_rect(os, x0, bar_top, x1 - x0, bar_height,
                fill_for(options, s.depth));
    }
  } else {
    Mapper m{domain.side(0).lo(), domain.side(0).length(),
             domain.side(1).lo(), domain.side(1).length(), width, height};
    for (const auto& [rect, reason] : dec.residual_leaves) {
      const double x0 = m.x(rect.side(0).lo());
      const double x1 = m.x(rect.side(0).hi());
      const double y0 = m.y(rect.side(1).hi());
      const double y1 = m.y(rect.side(1).lo());
      emit_rect(os, x0, y0, x1 - x0, y1 - y0, "url(#hatch)");
    }
    for (const SelectedRect& s : dec.selected) {
      const double x0 = m.x(s.rect.side(0).lo());
      const double x1 = m.x(s.rect.side(0).hi());
      const double y0 = m.y(s.rect.side(1).hi());
      const double y1 = m.y(s.rect.side(1).lo());
      emit_rect(os, x0, y0, x1 - x0, y1 - y0, fill_for(options, s.depth));
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace rsd
