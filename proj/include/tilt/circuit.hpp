#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tilt/workspace.hpp"

namespace tilt {

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Op { And, Or, Not, Xor, Nand, Nor, Xnor, Fanout };

const char* op_name(Op op);

struct GateNode {
  std::string id;
  Op op = Op::And;
  int copies = 0;  // FANOUT<k>
  std::vector<std::string> operands;
  int line = 0;
};

// Signals are input names, gate ids and fan-out copies "<id>.<j>".
struct CircuitNetlist {
  std::vector<std::string> inputs;
  std::vector<GateNode> gates;
  std::vector<std::string> outputs;
};

// Text format, one statement per line, '#' starts a comment:
//   INPUT <name>
//   <id> = <OP> <operand> [<operand>]
//   <id> = FANOUT<k> <operand>        (defines <id>.1 .. <id>.<k>)
//   OUTPUT <name>
// Operands may be defined later in the text. Throws CircuitError for syntax
// errors, undefined operands, cycles and any signal used more than once
// without a FANOUT. With `insert_fanout` such signals get one instead.
CircuitNetlist parse_netlist(std::string_view text, bool insert_fanout = false);
std::string format_netlist(const CircuitNetlist& n);

// Inserts FANOUT<k> nodes for every signal used k > 1 times.
CircuitNetlist auto_fanout(const CircuitNetlist& n);

// Reference boolean evaluation; returns the OUTPUT values.
std::map<std::string, bool> evaluate_netlist(const CircuitNetlist& n, const std::map<std::string, bool>& inputs);

struct GateCount {
  int fanouts = 0;
  int xors = 0;  // XOR and XNOR
  int ands = 0;  // AND and NAND
  int ors = 0;   // OR and NOR
  int nots = 0;  // rail swaps, no gadget
  bool operator==(const GateCount&) const = default;
};
GateCount count_gates(const CircuitNetlist& n);

// Dual-rail form: every signal is a pair of rails (true, false), exactly one
// of which carries a particle. NOT is a rail swap. Each remaining gate is a
// catalog gadget instance.
struct RailGadget {
  std::string kind;  // universal, xor or fanout<k>
  std::string node;  // netlist id it implements
  std::vector<std::pair<std::string, int>> inputs;   // port -> rail
  std::vector<std::pair<std::string, int>> outputs;  // port -> rail
  int level = 0;
};

struct DualRailCircuit {
  int rails = 0;
  std::vector<RailGadget> gadgets;
  std::vector<std::pair<std::string, std::pair<int, int>>> inputs;   // name -> (true, false)
  std::vector<std::pair<std::string, std::pair<int, int>>> outputs;  // name -> (true, false)
  std::vector<int> supplies;             // constant-1 rails feeding fan-outs
  std::vector<std::vector<int>> waste;   // unused outputs; one rail or a complementary pair
  std::vector<int> dropped;              // rails that never carry a particle
  std::vector<int> ready;                // level at which each rail exists
  int stages = 1;
};
DualRailCircuit lower_to_dual_rail(const CircuitNetlist& n);

struct PlaceOptions {
  int max_width = 1024;
  int max_height = 1024;
  // Closed loop: output `first` is carried back onto input `second` during
  // the last routing cycle, and waste returns as fan-out supply.
  std::map<std::string, std::string> feedback;
};

struct PlacedCircuit {
  Workspace workspace;
  int stage_count = 0;
  int cycles_per_evaluation = 0;
  std::map<std::string, std::pair<Cell, Cell>> inputs;   // (true, false) rail cells
  std::map<std::string, std::pair<Cell, Cell>> outputs;  // (true, false) rail cells
  std::vector<Cell> supplies;  // cells that receive a particle before the first cycle
  bool loop = false;
  GateCount gates;
  int sliders = 0;
  int units = 0;  // 1x1 particles in one evaluation (inputs plus supplies)
  // Column shift of every one-cycle wire (routing and delay blocks).
  std::vector<int> shifts;
  // Cells where every 1x1 particle rests once an evaluation is over: output
  // and waste sinks, or the return header of a closed loop.
  std::vector<Cell> rest;
};

// Gate levels become gate bands, each followed by a routing band; both take
// one clock cycle. Throws CircuitError when a band cannot be routed or the
// workspace outgrows the configured size.
PlacedCircuit place_and_route(const CircuitNetlist& n, const PlaceOptions& opt = {});

// The workspace with input and supply particles placed.
Workspace load_circuit(const PlacedCircuit& c, const std::map<std::string, bool>& inputs);
// Output values; throws CircuitError if some rail pair is not complementary.
std::map<std::string, bool> read_circuit(const PlacedCircuit& c, const Workspace& w);

// Loads the inputs and reads the outputs after every evaluation.
std::vector<std::map<std::string, bool>> run_circuit(const PlacedCircuit& c, const std::map<std::string, bool>& inputs,
                                                     int evaluations);

// Counter with state q0 (least significant) .. q<n-1> and next state
// n0 .. n<n-1>. Each carry is its own AND tree over fanned-out state bits.
CircuitNetlist counter_netlist(int bits);
PlacedCircuit build_counter(int bits);

std::string placed_to_json(const PlacedCircuit& c);
PlacedCircuit placed_from_json(std::string_view text);

}  // namespace tilt
