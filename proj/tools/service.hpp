#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tilt/workspace.hpp"

namespace httplib {
class Server;
}

namespace tilt::cli {

struct Response {
  int status = 200;
  std::string body;  // JSON
};

// A named workspace the playground can load.
struct Fixture {
  std::string name;
  std::string kind;  // gadget, circuit or example
  Workspace workspace;
  std::string sidecar;  // gadget sidecar JSON, empty otherwise
};

// Built-in gadgets and the 3-bit counter, plus every .twf/.json workspace
// found directly in `dir` (if it exists).
std::vector<Fixture> load_fixtures(const std::string& dir);

// Session store behind the HTTP interface. Sessions are independent; calls
// on one session are serialized in arrival order.
class Service {
 public:
  explicit Service(std::vector<Fixture> fixtures = {});

  Response handle(const std::string& method, const std::string& path, const std::string& body);

 private:
  struct Session {
    std::mutex mu;
    Workspace origin;
    Workspace current;
    MoveSequence history;
  };

  Response create(const std::string& body);
  Response get(Session& s, const std::string& id);
  Response move(Session& s, const std::string& body);
  Response undo(Session& s);
  Response clock(Session& s, const std::string& body);
  Response gadgets() const;
  std::shared_ptr<Session> find(const std::string& id);
  std::string next_id();

  std::vector<Fixture> fixtures_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  unsigned long long counter_ = 0;
  unsigned long long salt_ = 0;
};

// Routes every /api request of `server` to `service`.
void mount(httplib::Server& server, Service& service);

// Blocks serving `service` over HTTP. Returns false if the port cannot be
// bound; `on_ready` runs once it is.
bool serve(Service& service, const std::string& host, int port, const std::function<void()>& on_ready = {});

}  // namespace tilt::cli
