#include "tilt/render.hpp"

#include <functional>
#include <sstream>

namespace tilt {

std::string render_ascii(const Workspace& w) {
  std::vector<std::string> rows(w.height(), std::string(w.width(), '.'));
  auto put = [&](Cell c, char g) { rows[w.height() - 1 - c.y][c.x] = g; };
  for (Cell c : w.obstacles()) put(c, '#');
  for (const auto& p : w.particles())
    for (int k = 0; k < p.size(); ++k) put(p.cell(k), p.label);
  std::string out;
  for (auto& r : rows) out += r + "\n";
  return out;
}

namespace {

const char* kPalette[] = {"#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
                          "#42d4f4", "#f032e6", "#9a6324", "#808000", "#000075"};

const char* colour_for(const std::string& id) {
  return kPalette[std::hash<std::string>{}(id) % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

}  // namespace

std::string render_svg(const Workspace& w, int s) {
  std::ostringstream o;
  const int W = w.width() * s, H = w.height() * s;
  auto px = [&](Cell c) { return c.x * s; };
  auto py = [&](Cell c) { return (w.height() - 1 - c.y) * s; };
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' '
    << H << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  for (Cell c : w.obstacles())
    o << "<rect x=\"" << px(c) << "\" y=\"" << py(c) << "\" width=\"" << s << "\" height=\"" << s << "\" fill=\"black\"/>\n";
  const double r = s * 0.42;
  for (const auto& g : w.goals()) {
    o << "<circle cx=\"" << px(g.cell) + s / 2.0 << "\" cy=\"" << py(g.cell) + s / 2.0 << "\" r=\"" << r
      << "\" fill=\"none\" stroke=\"" << (g.who ? colour_for(*g.who) : "#555555")
      << "\" stroke-width=\"2\" stroke-dasharray=\"4,3\"/>\n";
  }
  for (const auto& p : w.particles()) {
    const char* col = colour_for(p.id);
    if (p.shape == Shape::Unit) {
      o << "<circle cx=\"" << px(p.anchor) + s / 2.0 << "\" cy=\"" << py(p.anchor) + s / 2.0 << "\" r=\"" << r
        << "\" fill=\"" << col << "\"/>\n";
    } else {
      Cell top_left = p.shape == Shape::HDomino ? p.anchor : p.cell(1);
      double wpx = p.shape == Shape::HDomino ? 2 * s : s, hpx = p.shape == Shape::HDomino ? s : 2 * s;
      o << "<rect x=\"" << px(top_left) + s * 0.08 << "\" y=\"" << py(top_left) + s * 0.08 << "\" width=\""
        << wpx - s * 0.16 << "\" height=\"" << hpx - s * 0.16 << "\" rx=\"" << r << "\" fill=\"" << col << "\"/>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace tilt
