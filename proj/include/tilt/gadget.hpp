#pragma once

#include <string>
#include <vector>

#include "tilt/workspace.hpp"

namespace tilt {

struct Port {
  enum class Direction { Input, Output };
  std::string name;
  Cell cell;
  Direction direction = Direction::Input;
  bool preset = false;  // input particle already placed in the template (supply)
};

// Internal state carried by one particle, read by where it settles under d.
struct StateBit {
  std::string name;
  std::string particle;
  Cell zero;  // anchor for state 0
  Cell one;   // anchor for state 1
};

struct TruthRow {
  std::vector<int> inputs;
  std::vector<int> outputs;
};

// A workspace template with named cells. Inputs are set by placing a particle
// on the port cell; outputs are read by occupancy after the clock. Truth rows
// list the non-preset inputs then the state bits, and the outputs then the
// next state bits.
struct Gadget {
  std::string name;
  Workspace workspace;
  std::vector<Port> ports;
  MoveSequence clock;
  std::vector<TruthRow> truth_table;
  std::vector<Cell> waste;  // cells where surplus particles end up
  std::vector<std::vector<std::string>> rails;  // groups with exactly one input set
  std::vector<StateBit> state;
  int max_width = 0;  // area bound, 0 when none is claimed
  int max_height = 0;

  const Port& port(const std::string& name) const;
  bool has_port(const std::string& name) const;
  std::vector<const Port*> inputs() const;
  std::vector<const Port*> outputs() const;
};

}  // namespace tilt
