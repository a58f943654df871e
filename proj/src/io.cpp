#include "tilt/io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace tilt {

namespace {

using nlohmann::json;

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  return lines;
}

[[noreturn]] void fail_line(std::size_t line, const std::string& msg) {
  throw WorkspaceError("line " + std::to_string(line) + ": " + msg);
}

bool is_unit_glyph(char c) { return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)); }
bool is_domino_glyph(char c) { return std::isupper(static_cast<unsigned char>(c)); }

Workspace parse_twf(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) fail_line(1, "empty input");
  std::istringstream hs(lines[0]);
  std::string magic, ver;
  int w = 0, h = 0;
  if (!(hs >> magic >> ver >> w >> h) || magic != "TWF" || ver != "v1" || w < 1 || h < 1)
    fail_line(1, "expected header 'TWF v1 <width> <height>'");
  if (lines.size() < static_cast<std::size_t>(h) + 1) fail_line(lines.size() + 1, "missing grid rows");

  Workspace ws(w, h);
  std::map<char, std::vector<Cell>> glyphs;
  std::vector<char> glyph_order;
  for (int r = 0; r < h; ++r) {
    const std::string& row = lines[1 + r];
    std::size_t ln = 2 + r;
    if (static_cast<int>(row.size()) != w)
      fail_line(ln, "row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(w));
    int y = h - 1 - r;
    for (int x = 0; x < w; ++x) {
      char c = row[x];
      ws.set_obstacle({x, y}, c == '#');
      if (c == '#' || c == '.') continue;
      if (!is_unit_glyph(c) && !is_domino_glyph(c))
        fail_line(ln, "bad glyph '" + std::string(1, c) + "' at cell (" + std::to_string(x) + "," + std::to_string(y) + ")");
      if (!glyphs.count(c)) glyph_order.push_back(c);
      glyphs[c].push_back({x, y});
    }
  }
  for (char c : glyph_order) {
    auto& cells = glyphs[c];
    Particle p;
    p.id = std::string(1, c);
    p.label = c;
    auto where = [](Cell q) { return "(" + std::to_string(q.x) + "," + std::to_string(q.y) + ")"; };
    if (is_unit_glyph(c)) {
      if (cells.size() != 1) throw WorkspaceError("particle '" + p.id + "' appears more than once, second at cell " + where(cells[1]));
      p.anchor = cells[0];
    } else {
      if (cells.size() != 2)
        throw WorkspaceError("domino '" + p.id + "' must occupy exactly two cells, found " + std::to_string(cells.size()) + " starting at cell " + where(cells[0]));
      Cell a = std::min(cells[0], cells[1], [](Cell l, Cell r) { return std::pair(l.y, l.x) < std::pair(r.y, r.x); });
      Cell b = (a == cells[0]) ? cells[1] : cells[0];
      if (b.y == a.y && b.x == a.x + 1) {
        p.shape = Shape::HDomino;
      } else if (b.x == a.x && b.y == a.y + 1) {
        p.shape = Shape::VDomino;
      } else {
        throw WorkspaceError("domino halves not adjacent for '" + p.id + "' at cells " + where(a) + " and " + where(b));
      }
      p.anchor = a;
    }
    ws.add_particle(std::move(p));
  }
  std::size_t i = 1 + h;
  while (i < lines.size() && lines[i].find_first_not_of(" \t") == std::string::npos) ++i;
  if (i < lines.size()) {
    if (lines[i] != "GOALS") fail_line(i + 1, "expected GOALS section");
    for (++i; i < lines.size(); ++i) {
      if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
      std::istringstream gs(lines[i]);
      std::string who;
      int x, y;
      if (!(gs >> who >> x >> y)) fail_line(i + 1, "expected '<id|*> <x> <y>'");
      Goal g{{x, y}, std::nullopt};
      if (who != "*") g.who = who;
      ws.add_goal(g);
    }
  }
  ws.validate();
  return ws;
}

Cell cell_of(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw WorkspaceError(std::string("bad ") + what + ": expected [x,y]");
  return {j[0].get<int>(), j[1].get<int>()};
}

Workspace parse_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw WorkspaceError(std::string("json: ") + e.what());
  }
  try {
    int w = j.at("width").get<int>(), h = j.at("height").get<int>();
    Workspace ws(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) ws.set_obstacle({x, y}, false);
    for (const auto& o : j.at("obstacles")) {
      Cell c = cell_of(o, "obstacle");
      if (!ws.in_bounds(c)) throw WorkspaceError("obstacle outside workspace at cell (" + std::to_string(c.x) + "," + std::to_string(c.y) + ")");
      ws.set_obstacle(c);
    }
    if (j.contains("particles")) {
      for (const auto& pj : j["particles"]) {
        Particle p;
        p.id = pj.at("id").get<std::string>();
        auto shape = parse_shape(pj.at("shape").get<std::string>());
        if (!shape) throw WorkspaceError("particle '" + p.id + "': unknown shape");
        p.shape = *shape;
        p.anchor = cell_of(pj.at("anchor"), "anchor");
        std::string label = pj.value("label", p.id.substr(0, 1));
        p.label = label.empty() ? '?' : label[0];
        ws.add_particle(std::move(p));
      }
    }
    if (j.contains("goals")) {
      for (const auto& gj : j["goals"]) {
        Goal g{cell_of(gj.at("cell"), "goal cell"), std::nullopt};
        std::string who = gj.at("who").get<std::string>();
        if (who != "any") g.who = who;
        ws.add_goal(g);
      }
    }
    ws.validate();
    return ws;
  } catch (const json::exception& e) {
    throw WorkspaceError(std::string("json: ") + e.what());
  }
}

std::string to_twf(const Workspace& w) {
  std::vector<std::string> rows(w.height(), std::string(w.width(), '.'));
  auto put = [&](Cell c, char g) { rows[w.height() - 1 - c.y][c.x] = g; };
  for (Cell c : w.obstacles()) put(c, '#');
  for (const auto& p : w.particles())
    for (int k = 0; k < p.size(); ++k) put(p.cell(k), p.id[0]);
  std::string out = "TWF v1 " + std::to_string(w.width()) + " " + std::to_string(w.height()) + "\n";
  for (auto& r : rows) out += r + "\n";
  if (!w.goals().empty()) {
    out += "GOALS\n";
    for (const auto& g : w.goals())
      out += (g.who ? *g.who : std::string("*")) + " " + std::to_string(g.cell.x) + " " + std::to_string(g.cell.y) + "\n";
  }
  return out;
}

std::string to_json(const Workspace& w) {
  json j;
  j["width"] = w.width();
  j["height"] = w.height();
  json obs = json::array();
  for (Cell c : w.obstacles()) obs.push_back({c.x, c.y});
  j["obstacles"] = std::move(obs);
  json ps = json::array();
  for (const auto& p : w.particles())
    ps.push_back({{"id", p.id}, {"shape", shape_name(p.shape)}, {"anchor", {p.anchor.x, p.anchor.y}}, {"label", std::string(1, p.label)}});
  j["particles"] = std::move(ps);
  json gs = json::array();
  for (const auto& g : w.goals()) gs.push_back({{"who", g.who ? *g.who : "any"}, {"cell", {g.cell.x, g.cell.y}}});
  j["goals"] = std::move(gs);
  return j.dump() + "\n";
}

}  // namespace

bool twf_representable(const Workspace& w) {
  for (const auto& p : w.particles()) {
    if (p.id.size() != 1 || p.label != p.id[0]) return false;
    if (p.shape == Shape::Unit ? !is_unit_glyph(p.id[0]) : !is_domino_glyph(p.id[0])) return false;
  }
  return true;
}

Workspace parse_workspace(std::string_view text) {
  std::size_t i = text.find_first_not_of(" \t\r\n");
  if (i == std::string_view::npos) throw WorkspaceError("line 1: empty input");
  if (text[i] == '{') return parse_json(text);
  return parse_twf(text.substr(i));
}

std::string serialize_workspace(const Workspace& w, Format f) {
  if (f == Format::Json) return to_json(w);
  if (!twf_representable(w)) throw WorkspaceError("workspace ids are not representable in TWF; use JSON");
  return to_twf(w);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Workspace load_workspace(const std::string& path) { return parse_workspace(read_file(path)); }

}  // namespace tilt
