#include "service.hpp"

#include <filesystem>
#include <random>

#include "httplib.h"
#include "json.hpp"
#include "tilt/circuit.hpp"
#include "tilt/gates.hpp"
#include "tilt/io.hpp"

namespace tilt::cli {

using nlohmann::json;

namespace {

constexpr long long kMaxCycles = 1'000'000;

json state_of(const Workspace& w) { return json::parse(serialize_workspace(w, Format::Json)); }

Response error(int status, const std::string& message) { return {status, json{{"error", message}}.dump()}; }

Response ok(const json& j, int status = 200) { return {status, j.dump()}; }

json history_of(const MoveSequence& h) {
  json a = json::array();
  for (Move m : h) a.push_back(std::string(1, move_token(m)));
  return a;
}

json session_json(const Workspace& w, const MoveSequence& h) {
  return {{"state", state_of(w)}, {"history", history_of(h)}, {"satisfied", w.goals_satisfied()}};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

}  // namespace

std::vector<Fixture> load_fixtures(const std::string& dir) {
  std::vector<Fixture> out;
  for (const auto& name : catalog_names()) {
    Gadget g = catalog_gadget(name);
    out.push_back({name, "gadget", g.workspace, gadget_sidecar(g)});
  }
  PlacedCircuit counter = build_counter(3);
  out.push_back({"counter3", "circuit", load_circuit(counter, {{"q0", false}, {"q1", false}, {"q2", false}}), ""});
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!dir.empty() && fs::is_directory(dir, ec)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir, ec))
      if (e.is_regular_file() && (e.path().extension() == ".twf" || e.path().extension() == ".json"))
        files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      try {
        out.push_back({f.stem().string(), "example", load_workspace(f.string()), ""});
      } catch (const std::exception&) {
        // Not a workspace file.
      }
    }
  }
  return out;
}

Service::Service(std::vector<Fixture> fixtures) : fixtures_(std::move(fixtures)) {
  salt_ = std::random_device{}();
}

std::string Service::next_id() {
  static const char* hex = "0123456789abcdef";
  std::mt19937_64 rng(salt_ ^ (++counter_ * 0x9e3779b97f4a7c15ULL));
  std::string id;
  for (int i = 0; i < 16; ++i) id += hex[rng() & 15];
  return id;
}

std::shared_ptr<Service::Session> Service::find(const std::string& id) {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response Service::handle(const std::string& method, const std::string& path, const std::string& body) {
  auto parts = split_path(path);
  try {
    if (parts.size() == 2 && parts[0] == "api" && parts[1] == "gadgets") {
      if (method != "GET") return error(405, "use GET");
      return gadgets();
    }
    if (parts.size() < 2 || parts[0] != "api" || parts[1] != "sessions") return error(404, "no route for " + path);
    if (parts.size() == 2) {
      if (method != "POST") return error(405, "use POST");
      return create(body);
    }
    auto s = find(parts[2]);
    if (!s) return error(404, "unknown session '" + parts[2] + "'");
    std::lock_guard lock(s->mu);
    if (parts.size() == 3) {
      if (method != "GET") return error(405, "use GET");
      return get(*s, parts[2]);
    }
    if (parts.size() != 4) return error(404, "no route for " + path);
    if (method != "POST") return error(405, "use POST");
    if (parts[3] == "moves") return move(*s, body);
    if (parts[3] == "undo") return undo(*s);
    if (parts[3] == "clock") return clock(*s, body);
    return error(404, "no route for " + path);
  } catch (const json::exception& e) {
    return error(400, std::string("malformed request: ") + e.what());
  } catch (const WorkspaceError& e) {
    return error(400, e.what());
  }
}

Response Service::create(const std::string& body) {
  json req = json::parse(body.empty() ? "{}" : body);
  Workspace w;
  if (req.contains("workspace")) {
    const json& ws = req["workspace"];
    w = parse_workspace(ws.is_string() ? ws.get<std::string>() : ws.dump());
  } else if (req.contains("fixture")) {
    std::string name = req["fixture"].get<std::string>();
    auto it = std::find_if(fixtures_.begin(), fixtures_.end(), [&](const Fixture& f) { return f.name == name; });
    if (it == fixtures_.end()) return error(404, "unknown fixture '" + name + "'");
    w = it->workspace;
  } else {
    return error(400, "expected {\"workspace\": ...} or {\"fixture\": name}");
  }
  w.validate();
  auto s = std::make_shared<Session>();
  s->origin = w;
  s->current = w;
  std::string id;
  {
    std::lock_guard lock(mu_);
    do id = next_id();
    while (sessions_.count(id));
    sessions_[id] = s;
  }
  json j = session_json(s->current, s->history);
  j["id"] = id;
  return ok(j, 201);
}

Response Service::get(Session& s, const std::string& id) {
  json j = session_json(s.current, s.history);
  j["id"] = id;
  return ok(j);
}

Response Service::move(Session& s, const std::string& body) {
  json req = json::parse(body);
  if (!req.contains("move") || !req["move"].is_string()) return error(400, "expected {\"move\": \"u|d|l|r\"}");
  std::string token = req["move"].get<std::string>();
  auto m = parse_move_token(token);
  if (!m) return error(400, "illegal move token '" + token + "'");
  s.current = apply_move(s.current, *m);
  s.history.push_back(*m);
  return ok(session_json(s.current, s.history));
}

Response Service::undo(Session& s) {
  if (s.history.empty()) return error(400, "nothing to undo");
  s.history.pop_back();
  s.current = apply_sequence(s.origin, s.history);
  return ok(session_json(s.current, s.history));
}

Response Service::clock(Session& s, const std::string& body) {
  json req = json::parse(body.empty() ? "{}" : body);
  long long cycles = req.value("cycles", 1LL);
  if (cycles < 0 || cycles > kMaxCycles)
    return error(400, "cycles must be between 0 and " + std::to_string(kMaxCycles));
  Slider slider(s.current);
  auto anchors = slider.anchors_of(s.current);
  for (long long k = 0; k < cycles; ++k)
    for (Move m : kClock) {
      slider.apply(anchors, m);
      s.history.push_back(m);
    }
  for (std::size_t i = 0; i < anchors.size(); ++i) s.current.set_anchor(i, anchors[i]);
  return ok(session_json(s.current, s.history));
}

Response Service::gadgets() const {
  json list = json::array();
  for (const auto& f : fixtures_) {
    json e = {{"name", f.name},
              {"kind", f.kind},
              {"width", f.workspace.width()},
              {"height", f.workspace.height()},
              {"workspace", state_of(f.workspace)}};
    if (!f.sidecar.empty()) e["sidecar"] = json::parse(f.sidecar);
    list.push_back(e);
  }
  return ok(json{{"gadgets", list}});
}

void mount(httplib::Server& server, Service& service) {
  auto route = [&service](const httplib::Request& req, httplib::Response& res) {
    Response r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Get(R"(/api/.*)", route);
  server.Post(R"(/api/.*)", route);
  server.Put(R"(/api/.*)", route);
  server.Delete(R"(/api/.*)", route);
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

bool serve(Service& service, const std::string& host, int port, const std::function<void()>& on_ready) {
  httplib::Server server;
  // Address reuse only: a port another server holds must fail to bind.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });
  mount(server, service);
  if (!server.bind_to_port(host, port)) return false;
  if (on_ready) on_ready();
  return server.listen_after_bind();
}

}  // namespace tilt::cli
