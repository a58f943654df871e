#include "cli.hpp"

#include <filesystem>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "service.hpp"
#include "tilt/circuit.hpp"
#include "tilt/gates.hpp"
#include "tilt/io.hpp"
#include "tilt/permute.hpp"
#include "tilt/reductions.hpp"
#include "tilt/render.hpp"
#include "tilt/solver.hpp"

namespace tilt::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string size_text(int w, int h) { return std::to_string(w) + "×" + std::to_string(h); }

// Workspace to a file (format from the extension) or to `out` as JSON.
void emit(const Workspace& w, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << serialize_workspace(w, Format::Json);
    return;
  }
  bool twf = std::filesystem::path(path).extension() == ".twf";
  if (twf && !twf_representable(w)) throw WorkspaceError("workspace ids do not fit TWF; write JSON instead");
  write_file(path, serialize_workspace(w, twf ? Format::Twf : Format::Json));
}

// Summary lines go to stdout when the workspace went to a file, else stderr.
std::ostream& notes(const std::string& path, std::ostream& out, std::ostream& err) { return path.empty() ? err : out; }

Permutation perm_arg(const std::string& text) {
  try {
    return permutation_from_json(text);
  } catch (const std::exception& e) {
    throw UsageError("bad permutation '" + text + "': expected a JSON array such as [2,0,1]");
  }
}

MatrixSpec matrix_arg(int n, int rows, int cols) {
  if (rows <= 0 && cols <= 0) rows = 1;
  if (rows <= 0) rows = n / cols;
  if (cols <= 0) cols = n / rows;
  MatrixSpec spec = MatrixSpec::square(rows, cols);
  if (!spec.valid() || spec.n() != n)
    throw UsageError("matrix " + std::to_string(rows) + "x" + std::to_string(cols) + " does not hold " +
                     std::to_string(n) + " elements");
  return spec;
}

std::map<std::string, bool> inputs_arg(const std::string& text) {
  std::map<std::string, bool> in;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    std::string v = eq == std::string::npos ? "" : item.substr(eq + 1);
    if (eq == std::string::npos || (v != "0" && v != "1"))
      throw UsageError("bad input '" + item + "': expected name=0 or name=1");
    in[item.substr(0, eq)] = v == "1";
  }
  return in;
}

std::string report_line(const Gadget& g, const GadgetReport& r) {
  std::string s = (r.ok() ? "OK: " : "FAIL: ") + std::to_string(r.rows_ok) + "/" + std::to_string(r.rows_total) +
                  " rows, area " + size_text(g.workspace.width(), g.workspace.height());
  if (g.max_width > 0) s += " ≤ " + size_text(g.max_width, g.max_height);
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Full-tilt particle workspaces: simulate, solve, generate, compile."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  // sim
  std::string file, moves_text, out_path;
  auto* sim = app.add_subcommand("sim", "Apply a move sequence and report the goals");
  sim->add_option("file", file, "Workspace (TWF or JSON)")->required();
  sim->add_option("--moves", moves_text, "Moves such as r,d,l")->required();
  sim->add_option("--out", out_path, "Write the final workspace here");

  // solve
  std::size_t max_states = kDefaultStateCap;
  auto* solve = app.add_subcommand("solve", "Shortest move sequence reaching the goals");
  solve->add_option("file", file, "Workspace (TWF or JSON)")->required();
  solve->add_option("--max-states", max_states, "State budget")->check(CLI::PositiveNumber);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate workspaces");
  gen->require_subcommand(1);
  std::string perm_text, cw_text, ccw_text, dimacs, assignment;
  std::vector<std::string> perm_list;
  int rows = 0, cols = 0, random_n = 0, random_k = 0, bits = 0;
  std::uint64_t seed = 1;
  bool loaded = false;
  auto* gperm = gen->add_subcommand("permute", "Four-move permutation workspace");
  gperm->add_option("--perm", perm_text, "Permutation as a JSON array");
  gperm->add_option("--random", random_n, "Random permutation of this size");
  gperm->add_option("--seed", seed, "Seed for --random");
  gperm->add_option("--rows", rows, "Matrix rows");
  gperm->add_option("--cols", cols, "Matrix columns");
  gperm->add_option("--out", out_path, "Output file (.twf or .json)");
  auto* gsel = gen->add_subcommand("selector", "Selector workspace storing several permutations");
  gsel->add_option("--perm", perm_list, "Permutation as a JSON array (repeat)");
  gsel->add_option("--random", random_k, "Number of random permutations");
  gsel->add_option("--size", random_n, "Size of the random permutations");
  gsel->add_option("--seed", seed, "Seed for --random");
  gsel->add_option("--rows", rows, "Matrix rows");
  gsel->add_option("--cols", cols, "Matrix columns");
  gsel->add_option("--out", out_path, "Output file");
  auto* gtwo = gen->add_subcommand("two-perm", "Workspace whose CW and CCW cycles realize two permutations");
  gtwo->add_option("--cw", cw_text, "Permutation for u,r,d,l")->required();
  gtwo->add_option("--ccw", ccw_text, "Permutation for r,u,l,d")->required();
  gtwo->add_option("--rows", rows, "Matrix rows");
  gtwo->add_option("--cols", cols, "Matrix columns");
  gtwo->add_option("--out", out_path, "Output file");
  auto* gsat = gen->add_subcommand("3sat", "Workspace for a DIMACS CNF formula");
  gsat->add_option("dimacs", dimacs, "DIMACS file")->required();
  gsat->add_option("--assignment", assignment, "Print the move sequence for an assignment such as TFFT");
  gsat->add_option("--out", out_path, "Output file");
  auto* gcount = gen->add_subcommand("counter", "Closed-loop binary counter");
  gcount->add_option("bits", bits, "Number of bits")->required();
  gcount->add_flag("--workspace", loaded, "Emit the workspace loaded with state 0 instead of the placed circuit");
  gcount->add_option("--out", out_path, "Output file");

  // gadgets
  auto* gadgets = app.add_subcommand("gadgets", "Gate catalog");
  gadgets->require_subcommand(1);
  std::string gname, svg_path, dir;
  auto* glist = gadgets->add_subcommand("list", "List the catalog");
  auto* gcheck = gadgets->add_subcommand("check", "Verify truth tables and invariants");
  gcheck->add_option("name", gname, "Gadget name; all when omitted");
  auto* gshow = gadgets->add_subcommand("show", "Draw a gadget with its ports and truth table");
  gshow->add_option("name", gname, "Gadget name")->required();
  gshow->add_option("--svg", svg_path, "Also write an SVG drawing");
  auto* gexport = gadgets->add_subcommand("export", "Write <name>.twf and <name>.json for the catalog");
  gexport->add_option("dir", dir, "Target directory")->required();

  // compile / run
  std::string netlist;
  bool auto_fo = false;
  int max_width = 1024, max_height = 1024;
  auto* compile = app.add_subcommand("compile", "Compile a netlist into a placed circuit");
  compile->add_option("netlist", netlist, "Netlist file")->required();
  compile->add_flag("--auto-fanout", auto_fo, "Insert FANOUT nodes for signals used more than once");
  compile->add_option("--max-width", max_width, "Workspace width limit")->check(CLI::PositiveNumber);
  compile->add_option("--max-height", max_height, "Workspace height limit")->check(CLI::PositiveNumber);
  compile->add_option("--out", out_path, "Output file");
  std::string inputs_text;
  int evaluations = 1;
  auto* runc = app.add_subcommand("run", "Evaluate a placed circuit");
  runc->add_option("placed", file, "Placed circuit JSON")->required();
  runc->add_option("--inputs", inputs_text, "Input bits such as a=1,b=0")->required();
  runc->add_option("--evaluations", evaluations, "Evaluations to run")->check(CLI::PositiveNumber);

  // render
  int cell_px = 24;
  auto* render = app.add_subcommand("render", "Draw a workspace");
  render->add_option("file", file, "Workspace (TWF or JSON)")->required();
  render->add_option("--svg", svg_path, "Write SVG here instead of printing text");
  render->add_option("--cell", cell_px, "Cell size in pixels")->check(CLI::PositiveNumber);

  // serve
  int port = 8080;
  std::string host = "127.0.0.1", fixtures_dir;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP stepping service for the playground");
  serve_cmd->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--host", host, "Interface to bind");
  serve_cmd->add_option("--fixtures", fixtures_dir, "Directory of extra workspaces to offer");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nrun with --help for usage\n";
    return 2;
  }

  try {
    if (*sim) {
      Workspace w = load_workspace(file);
      MoveSequence ms = parse_moves(moves_text);
      Workspace end = apply_sequence(w, ms);
      out << render_ascii(end);
      out << "moves: " << format_moves(ms) << " (" << ms.size() << ")\n";
      if (end.goals().empty()) {
        out << "goals: none\n";
      } else {
        out << "goals: " << (end.goals_satisfied() ? "satisfied" : "not satisfied") << "\n";
      }
      if (!out_path.empty()) emit(end, out_path, out);
      return 0;
    }
    if (*solve) {
      Workspace w = load_workspace(file);
      if (w.goals().empty()) throw UsageError("workspace has no goals");
      SearchResult r = bfs_shortest_sequence(w, GoalSpec::from_workspace(w), max_states);
      switch (r.status) {
        case SearchStatus::Solved:
          out << "solved in " << r.sequence.size() << " moves: " << format_moves(r.sequence) << " (" << r.explored
              << " states)\n";
          return 0;
        case SearchStatus::Unsolvable:
          out << "unsolvable (exhaustive, " << r.explored << " states)\n";
          return 0;
        case SearchStatus::BudgetExhausted:
          out << "unknown: state budget of " << max_states << " exhausted\n";
          return 1;
      }
    }
    if (*gperm) {
      Permutation p;
      if (!perm_text.empty()) p = perm_arg(perm_text);
      else if (random_n > 0) p = random_permutation(random_n, seed);
      else throw UsageError("gen permute needs --perm or --random");
      auto pw = build_permutation_workspace(matrix_arg(p.size(), rows, cols), p);
      emit(pw.workspace, out_path, out);
      notes(out_path, out, err) << "permutation " << to_json(p) << ": " << pw.tally.total() << " obstacles, moves "
                                << format_moves(pw.moves) << "\n";
      return 0;
    }
    if (*gsel) {
      std::vector<Permutation> perms;
      for (const auto& t : perm_list) perms.push_back(perm_arg(t));
      if (perms.empty()) {
        if (random_k <= 0 || random_n <= 0) throw UsageError("gen selector needs --perm or --random K --size N");
        for (int i = 0; i < random_k; ++i) perms.push_back(random_permutation(random_n, seed + i));
      }
      auto sw = build_selector_workspace(perms, matrix_arg(perms[0].size(), rows, cols));
      emit(sw.workspace, out_path, out);
      for (std::size_t i = 0; i < perms.size(); ++i)
        notes(out_path, out, err) << "permutation " << i << " " << to_json(perms[i]) << ": "
                                  << format_moves(sw.sequences[i]) << "\n";
      return 0;
    }
    if (*gtwo) {
      Permutation cw = perm_arg(cw_text), ccw = perm_arg(ccw_text);
      auto tw = build_two_perm_workspace(cw, ccw, matrix_arg(cw.size(), rows, cols));
      emit(tw.workspace, out_path, out);
      notes(out_path, out, err) << "cw " << format_moves(tw.cw) << ", ccw " << format_moves(tw.ccw) << "\n";
      return 0;
    }
    if (*gsat) {
      CnfFormula f = parse_dimacs(read_file(dimacs));
      SatWorkspace sw = build_3sat_workspace(f);
      emit(sw.workspace, out_path, out);
      auto& note = notes(out_path, out, err);
      note << "3sat: " << f.n << " variables, " << f.m() << " clauses, target (" << sw.target.x << ","
           << sw.target.y << ")\n";
      if (!assignment.empty()) {
        auto a = parse_assignment(assignment, f.n);
        note << "assignment " << format_assignment(a) << " ("
             << (f.evaluate(a) ? "satisfies" : "does not satisfy") << "): "
             << format_moves(assignment_to_sequence(f, a)) << "\n";
      }
      return 0;
    }
    if (*gcount) {
      PlacedCircuit c = build_counter(bits);
      if (loaded) {
        std::map<std::string, bool> zero;
        for (const auto& [name, cells] : c.inputs) zero[name] = false;
        emit(load_circuit(c, zero), out_path, out);
      } else if (out_path.empty()) {
        out << placed_to_json(c);
      } else {
        write_file(out_path, placed_to_json(c));
      }
      notes(out_path, out, err) << "counter: " << bits << " bits, " << c.cycles_per_evaluation
                                << " cycles per count, " << size_text(c.workspace.width(), c.workspace.height())
                                << "\n";
      return 0;
    }
    if (*glist) {
      for (const auto& name : catalog_names()) {
        Gadget g = catalog_gadget(name);
        out << name << "  " << size_text(g.workspace.width(), g.workspace.height()) << "  " << g.inputs().size()
            << " in, " << g.outputs().size() << " out, " << g.truth_table.size() << " rows\n";
      }
      return 0;
    }
    if (*gcheck) {
      std::vector<std::string> names = gname.empty() ? catalog_names() : std::vector<std::string>{gname};
      bool all_ok = true;
      for (const auto& name : names) {
        Gadget g = catalog_gadget(name);
        GadgetReport r = check_gadget(g);
        if (names.size() > 1) out << name << ": ";
        out << report_line(g, r) << "\n";
        for (const auto& f : r.failures) out << "  " << f << "\n";
        all_ok = all_ok && r.ok();
      }
      return all_ok ? 0 : 1;
    }
    if (*gshow) {
      Gadget g = catalog_gadget(gname);
      out << g.name << " " << size_text(g.workspace.width(), g.workspace.height()) << ", clock "
          << format_moves(g.clock) << "\n";
      out << render_ascii(g.workspace);
      for (const auto& p : g.ports)
        out << (p.direction == Port::Direction::Input ? "in  " : "out ") << p.name << " (" << p.cell.x << ","
            << p.cell.y << ")" << (p.preset ? " supply" : "") << "\n";
      std::vector<std::string> in_names, out_names;
      for (const auto* p : g.inputs()) in_names.push_back(p->name);
      for (const auto& s : g.state) in_names.push_back(s.name);
      for (const auto* p : g.outputs()) out_names.push_back(p->name);
      for (const auto& s : g.state) out_names.push_back(s.name + "'");
      for (const auto& n : in_names) out << n << " ";
      out << "|";
      for (const auto& n : out_names) out << " " << n;
      out << "\n";
      for (const auto& row : g.truth_table) {
        for (int v : row.inputs) out << v << " ";
        out << "|";
        for (int v : row.outputs) out << " " << v;
        out << "\n";
      }
      if (!svg_path.empty()) write_file(svg_path, render_svg(g.workspace));
      return 0;
    }
    if (*gexport) {
      std::filesystem::create_directories(dir);
      for (const auto& name : catalog_names()) {
        Gadget g = catalog_gadget(name);
        write_file(dir + "/" + name + ".twf", serialize_workspace(g.workspace, Format::Twf));
        write_file(dir + "/" + name + ".json", gadget_sidecar(g));
        out << "wrote " << name << ".twf, " << name << ".json\n";
      }
      return 0;
    }
    if (*compile) {
      CircuitNetlist n = parse_netlist(read_file(netlist), auto_fo);
      PlaceOptions opt;
      opt.max_width = max_width;
      opt.max_height = max_height;
      PlacedCircuit c = place_and_route(n, opt);
      if (out_path.empty()) out << placed_to_json(c);
      else write_file(out_path, placed_to_json(c));
      notes(out_path, out, err) << "compiled: " << c.stage_count << " stages, " << c.cycles_per_evaluation
                                << " cycles per evaluation, "
                                << size_text(c.workspace.width(), c.workspace.height()) << "\n";
      return 0;
    }
    if (*runc) {
      PlacedCircuit c = placed_from_json(read_file(file));
      auto results = run_circuit(c, inputs_arg(inputs_text), evaluations);
      for (std::size_t e = 0; e < results.size(); ++e) {
        out << e + 1 << ":";
        for (const auto& [name, v] : results[e]) out << " " << name << "=" << v;
        out << "\n";
      }
      return 0;
    }
    if (*render) {
      Workspace w = load_workspace(file);
      if (svg_path.empty()) out << render_ascii(w);
      else write_file(svg_path, render_svg(w, cell_px));
      return 0;
    }
    if (*serve_cmd) {
      Service service(load_fixtures(fixtures_dir));
      auto ready = [&] { out << "serving on http://" << host << ":" << port << "\n" << std::flush; };
      if (!serve(service, host, port, ready)) {
        err << "error: cannot bind " << host << ":" << port << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace tilt::cli
