#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <random>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "httplib.h"
#include "json.hpp"
#include "service.hpp"
#include "support.hpp"
#include "tilt/circuit.hpp"
#include "tilt/io.hpp"

using namespace tilt;
using nlohmann::json;
using testsupport::fixture;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool has(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::string tmp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "tilt_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

json state(const Workspace& w) { return json::parse(serialize_workspace(w, Format::Json)); }

json body(const cli::Response& r) { return json::parse(r.body); }

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"sim", fixture("fig2-right.twf")}).code == 2);  // --moves missing
  CHECK(invoke({"run", "x.json", "--inputs", "a=2"}).code != 0);
  CHECK(invoke({"gen", "permute"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("domain errors exit 1") {
  auto r = invoke({"sim", "/nonexistent.twf", "--moves", "r"});
  CHECK(r.code == 1);
  CHECK(has(r.err, "error:"));
  CHECK(invoke({"gadgets", "check", "nosuch"}).code == 1);
  CHECK(invoke({"sim", fixture("fig2-right.twf"), "--moves", "r,x"}).code == 1);
}

TEST_CASE("sim reports goals") {
  auto r = invoke({"sim", fixture("fig2-right.twf"), "--moves", "r,d,ℓ"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "goals: satisfied"));
  r = invoke({"sim", fixture("fig2-right.twf"), "--moves", "r,d"});
  CHECK(has(r.out, "goals: not satisfied"));
  std::string out = tmp_path("sim.json");
  CHECK(invoke({"sim", fixture("fig2-right.twf"), "--moves", "r,d,l", "--out", out}).code == 0);
  Workspace w = load_workspace(out);
  CHECK(w.goals_satisfied());
  CHECK(w == apply_sequence(load_workspace(fixture("fig2-right.twf")), parse_moves("r,d,l")));
}

TEST_CASE("solve") {
  auto r = invoke({"solve", fixture("fig2-right.twf")});
  CHECK(r.code == 0);
  CHECK(has(r.out, "solved in 3 moves: r,d,l"));
  r = invoke({"solve", fixture("fig2-left.twf")});
  CHECK(r.code == 0);
  CHECK(has(r.out, "unsolvable (exhaustive"));
  r = invoke({"solve", fixture("fig2-left.twf"), "--max-states", "2"});
  CHECK(r.code == 1);
  CHECK(has(r.out, "budget"));
}

TEST_CASE("gadgets verbs") {
  auto r = invoke({"gadgets", "check", "fanout2"});
  CHECK(r.code == 0);
  CHECK(r.out == "OK: 2/2 rows, area 15×8 ≤ 15×8\n");
  r = invoke({"gadgets", "check"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "latch: OK: 6/6 rows"));
  r = invoke({"gadgets", "list"});
  CHECK(has(r.out, "fanout3  19×10"));
  r = invoke({"gadgets", "show", "not"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "in  A"));
  std::string dir = tmp_path("gates");
  CHECK(invoke({"gadgets", "export", dir}).code == 0);
  for (const char* name : {"not", "universal", "xor", "fanout2", "fanout3", "fanout4", "latch"}) {
    CAPTURE(name);
    CHECK(read_file(dir + "/" + name + ".twf") == read_file(fixture(std::string("gates/") + name + ".twf")));
    CHECK(read_file(dir + "/" + name + ".json") == read_file(fixture(std::string("gates/") + name + ".json")));
  }
}

TEST_CASE("gen verbs") {
  auto r = invoke({"gen", "permute", "--perm", "[2,0,1,3]", "--rows", "2"});
  CHECK(r.code == 0);
  CHECK(has(r.err, "12 obstacles"));
  Workspace w = parse_workspace(r.out);
  CHECK(w.particles().size() == 4);
  CHECK(invoke({"gen", "permute", "--perm", "[0,0]"}).code == 2);
  CHECK(invoke({"gen", "selector", "--random", "4", "--size", "6", "--seed", "3"}).code == 0);
  CHECK(invoke({"gen", "two-perm", "--cw", "[1,0,2]", "--ccw", "[0,2,1]"}).code == 0);
  r = invoke({"gen", "counter", "1"});
  CHECK(r.code == 1);
}

TEST_CASE("3sat fixtures are regenerated byte for byte") {
  for (const char* name : {"fig7", "contradiction"}) {
    CAPTURE(name);
    auto r = invoke({"gen", "3sat", fixture(std::string("3sat/") + name + ".cnf")});
    CHECK(r.code == 0);
    CHECK(r.out == read_file(fixture(std::string("3sat/") + name + ".json")));
  }
  auto r = invoke({"gen", "3sat", fixture("3sat/fig7.cnf"), "--assignment", "TFFT"});
  CHECK(has(r.err, "(satisfies)"));
  r = invoke({"gen", "3sat", fixture("3sat/fig7.cnf"), "--assignment", "FTFT"});
  CHECK(has(r.err, "(does not satisfy)"));
  CHECK(has(invoke({"solve", fixture("3sat/contradiction.json")}).out, "unsolvable (exhaustive"));
  CHECK(has(invoke({"solve", fixture("3sat/fig7.json")}).out, "solved in"));
}

TEST_CASE("compile and run") {
  std::string placed = tmp_path("ha.json");
  auto r = invoke({"compile", fixture("netlists/half_adder.net"), "--out", placed});
  CHECK(r.code == 0);
  CHECK(has(r.out, "2 stages, 4 cycles"));
  CHECK(read_file(placed) == read_file(fixture("circuits/half_adder.json")));
  for (int a : {0, 1})
    for (int b : {0, 1}) {
      r = invoke({"run", placed, "--inputs", "a=" + std::to_string(a) + ",b=" + std::to_string(b)});
      CHECK(r.code == 0);
      CHECK(r.out == "1: c=" + std::to_string(a & b) + " s=" + std::to_string(a ^ b) + "\n");
    }
  r = invoke({"run", placed, "--inputs", "a=1"});
  CHECK(r.code == 1);
  CHECK(has(r.err, "missing input bit 'b'"));

  std::string multi = tmp_path("multi.net");
  write_file(multi, "INPUT a\nINPUT b\nx = AND a b\ny = XOR a b\nOUTPUT x\nOUTPUT y\n");
  r = invoke({"compile", multi});
  CHECK(r.code == 1);
  CHECK(has(r.err, "signal 'a'"));
  CHECK(invoke({"compile", multi, "--auto-fanout", "--out", tmp_path("multi.json")}).code == 0);
  r = invoke({"compile", fixture("netlists/half_adder.net"), "--max-width", "30"});
  CHECK(r.code == 1);
  CHECK(has(r.err, "unroutable"));

  r = invoke({"run", fixture("circuits/counter3.json"), "--inputs", "q0=0,q1=0,q2=0", "--evaluations", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "1: n0=1 n1=0 n2=0\n2: n0=0 n1=1 n2=0\n3: n0=1 n1=1 n2=0\n");
}

TEST_CASE("netlist fixtures compile") {
  for (int bits : {2, 3, 4}) {
    auto n = parse_netlist(read_file(fixture("netlists/counter" + std::to_string(bits) + ".net")));
    CHECK(format_netlist(n) == format_netlist(counter_netlist(bits)));
  }
  CHECK(read_file(fixture("circuits/counter3-loaded.json")) ==
        serialize_workspace(load_circuit(build_counter(3), {{"q0", false}, {"q1", false}, {"q2", false}}),
                            Format::Json));
}

TEST_CASE("render") {
  auto r = invoke({"render", fixture("fig2-right.twf")});
  CHECK(r.code == 0);
  CHECK(has(r.out, "#"));
  std::string svg = tmp_path("fig.svg");
  CHECK(invoke({"render", fixture("fig2-right.twf"), "--svg", svg}).code == 0);
  CHECK(read_file(svg).rfind("<svg", 0) == 0);
}

TEST_CASE("service: sessions, moves, undo, clock") {
  cli::Service svc(cli::load_fixtures(TILT_FIXTURES));
  Workspace origin = load_workspace(fixture("fig2-right.twf"));
  auto created = svc.handle("POST", "/api/sessions", json{{"workspace", state(origin)}}.dump());
  REQUIRE(created.status == 201);
  std::string id = body(created)["id"];
  CHECK(body(created)["state"] == state(origin));

  auto r = svc.handle("POST", "/api/sessions/" + id + "/moves", R"({"move":"r"})");
  CHECK(r.status == 200);
  CHECK(body(r)["state"] == state(apply_move(origin, Move::Right)));
  svc.handle("POST", "/api/sessions/" + id + "/moves", R"({"move":"d"})");
  r = svc.handle("POST", "/api/sessions/" + id + "/moves", R"({"move":"l"})");
  CHECK(body(r)["satisfied"] == true);
  r = svc.handle("GET", "/api/sessions/" + id, "");
  CHECK(body(r)["history"] == json::array({"r", "d", "l"}));

  for (int i = 0; i < 3; ++i) r = svc.handle("POST", "/api/sessions/" + id + "/undo", "");
  CHECK(body(r)["state"] == state(origin));
  CHECK(svc.handle("POST", "/api/sessions/" + id + "/undo", "").status == 400);

  r = svc.handle("POST", "/api/sessions/" + id + "/clock", R"({"cycles":2})");
  CHECK(body(r)["state"] == state(apply_sequence(origin, {kClock[0], kClock[1], kClock[2], kClock[3], kClock[0],
                                                          kClock[1], kClock[2], kClock[3]})));
  CHECK(body(r)["history"].size() == 8);
  r = svc.handle("POST", "/api/sessions/" + id + "/clock", R"({"cycles":0})");
  CHECK(body(r)["history"].size() == 8);
  CHECK(svc.handle("POST", "/api/sessions/" + id + "/clock", R"({"cycles":-1})").status == 400);

  CHECK(svc.handle("POST", "/api/sessions/" + id + "/moves", R"({"move":"x"})").status == 400);
  CHECK(svc.handle("POST", "/api/sessions/" + id + "/moves", "not json").status == 400);
  CHECK(svc.handle("GET", "/api/sessions/nosuch", "").status == 404);
  CHECK(svc.handle("POST", "/api/sessions/nosuch/moves", R"({"move":"r"})").status == 404);
  CHECK(svc.handle("GET", "/api/nothing", "").status == 404);
  CHECK(svc.handle("POST", "/api/sessions", R"({"workspace":"TWF v1 oops"})").status == 400);
  CHECK(svc.handle("POST", "/api/sessions", R"({"fixture":"nosuch"})").status == 404);
}

TEST_CASE("service: gadget catalog and the counter fixture") {
  cli::Service svc(cli::load_fixtures(TILT_FIXTURES));
  auto r = svc.handle("GET", "/api/gadgets", "");
  REQUIRE(r.status == 200);
  std::map<std::string, json> by_name;
  json catalog = body(r);
  for (const auto& g : catalog["gadgets"]) by_name[g["name"].get<std::string>()] = g;
  REQUIRE(by_name.count("fanout2"));
  CHECK(by_name["fanout2"]["width"] == 15);
  CHECK(by_name["fanout2"]["height"] == 8);
  CHECK(by_name["fanout2"]["sidecar"]["truth_table"].size() == 2);
  CHECK(by_name.count("fig2-right"));
  REQUIRE(by_name.count("counter3"));

  PlacedCircuit c = build_counter(3);
  auto created = svc.handle("POST", "/api/sessions", R"({"fixture":"counter3"})");
  std::string id = body(created)["id"];
  for (int count = 1; count <= 9; ++count) {
    r = svc.handle("POST", "/api/sessions/" + id + "/clock", R"({"cycles":6})");
    Workspace w = parse_workspace(body(r)["state"].dump());
    auto v = read_circuit(c, w);
    int value = v["n0"] + 2 * v["n1"] + 4 * v["n2"];
    CHECK(value == count % 8);
  }
}

TEST_CASE("service: served states equal engine replay") {
  cli::Service svc;
  std::mt19937 rng(5);
  const char* tokens[] = {"u", "d", "l", "r"};
  for (int t = 0; t < 40; ++t) {
    Workspace origin = testsupport::random_workspace(rng);
    auto created = svc.handle("POST", "/api/sessions", json{{"workspace", serialize_workspace(origin, Format::Twf)}}.dump());
    REQUIRE(created.status == 201);
    std::string id = body(created)["id"];
    MoveSequence history;
    for (int k = 0; k < 30; ++k) {
      cli::Response r;
      if (rng() % 5 == 0 && !history.empty()) {
        r = svc.handle("POST", "/api/sessions/" + id + "/undo", "");
        history.pop_back();
      } else {
        int m = static_cast<int>(rng() % 4);
        r = svc.handle("POST", "/api/sessions/" + id + "/moves", json{{"move", tokens[m]}}.dump());
        history.push_back(*parse_move_token(tokens[m]));
      }
      REQUIRE(r.status == 200);
      CHECK(body(r)["state"].dump() == state(apply_sequence(origin, history)).dump());
    }
  }
}

TEST_CASE("service: sessions are isolated under concurrent requests") {
  cli::Service svc;
  Workspace origin = load_workspace(fixture("fig2-right.twf"));
  std::vector<std::string> ids;
  for (int i = 0; i < 8; ++i)
    ids.push_back(body(svc.handle("POST", "/api/sessions", json{{"workspace", state(origin)}}.dump()))["id"]);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&, i] {
      const char* tok = i % 2 ? "l" : "r";
      for (int k = 0; k <= i; ++k) svc.handle("POST", "/api/sessions/" + ids[i] + "/moves", json{{"move", tok}}.dump());
    });
  for (auto& t : threads) t.join();
  for (int i = 0; i < 8; ++i) {
    auto b = body(svc.handle("GET", "/api/sessions/" + ids[i], ""));
    CHECK(b["history"].size() == static_cast<std::size_t>(i + 1));
    CHECK(b["state"] == state(apply_move(origin, i % 2 ? Move::Left : Move::Right)));
  }
}

TEST_CASE("service over HTTP") {
  cli::Service svc(cli::load_fixtures(TILT_FIXTURES));
  httplib::Server server;
  cli::mount(server, svc);
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  Workspace origin = load_workspace(fixture("fig2-right.twf"));
  auto created = client.Post("/api/sessions", json{{"fixture", "fig2-right"}}.dump(), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  std::string id = json::parse(created->body)["id"];
  json st;
  for (const char* m : {"r", "d", "l"}) {
    auto r = client.Post("/api/sessions/" + id + "/moves", json{{"move", m}}.dump(), "application/json");
    REQUIRE(r);
    st = json::parse(r->body);
  }
  CHECK(st["satisfied"] == true);
  CHECK(st["state"] == state(apply_sequence(origin, parse_moves("r,d,l"))));
  auto bad = client.Post("/api/sessions/" + id + "/moves", R"({"move":"q"})", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  auto missing = client.Get("/api/sessions/zzz");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  auto gadgets = client.Get("/api/gadgets");
  REQUIRE(gadgets);
  CHECK(gadgets->status == 200);
  server.stop();
  th.join();
}
