#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tilt/gadget.hpp"
#include "tilt/workspace.hpp"

namespace tilt {

class GadgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Catalog. Every gadget runs under kClock with the dual-rail convention: a
// signal X is the pair of ports X and ~X and exactly one of them holds a
// particle. Inputs sit on the top interior row and every output column is
// open straight down to the bottom ring, so a gadget can be stacked under a
// feeder and over a consumer by punching the ring at those columns.
Gadget not_gate();
Gadget universal_gate();  // AND, NAND, OR, NOR of (A, B)
Gadget xor_gate();        // XOR, XNOR and the constants 1 and 0
Gadget fanout_gate(int n);
Gadget memory_latch();

// Names accepted by catalog_gadget: not, universal, xor, latch and fanout<n>.
std::vector<std::string> catalog_names();
Gadget catalog_gadget(const std::string& name);

// Template plus one particle per set input, with state particles moved to the
// given state. `inputs` follows the truth-row layout of the gadget.
Workspace load_gadget(const Gadget& g, const std::vector<int>& inputs);

// Output occupancy (1x1 particles only) followed by the state read back.
std::vector<int> read_gadget(const Gadget& g, const Workspace& after);

// Places the inputs, runs one clock cycle and reads the outputs.
std::vector<int> evaluate_gadget(const Gadget& g, const std::vector<int>& inputs);

// Sidecar JSON shipped next to a gadget's TWF: name, clock, ports, rails,
// state bits, truth table and area bound.
std::string gadget_sidecar(const Gadget& g);

// Exhaustive check of the stored truth table plus the catalog invariants.
struct GadgetReport {
  int rows_total = 0;
  int rows_ok = 0;
  bool clock_ok = false;
  bool conserved = true;
  bool embedded_ok = true;
  bool area_ok = true;
  std::vector<std::string> failures;
  bool ok() const { return rows_ok == rows_total && clock_ok && conserved && embedded_ok && area_ok; }
};
GadgetReport check_gadget(const Gadget& g);

// The gadget inside a larger frame with the ring punched at every input and
// output column, a feed shaft of `lead` cells above each input and a drain of
// `lead` cells below each output. Offsets map template cells into the frame.
struct Embedding {
  Workspace workspace;
  Cell offset;
  int lead = 0;
};
Embedding embed_gadget(const Gadget& g, int lead = 3);

// Connector between an output column and an input column `offset` cells to
// the right. After one clock cycle a particle on `source` rests on
// `destination`. Through connectors leave the column under the destination
// open, so the next d hands the particle on. Offset 0 builds a sink: the
// particle stays on the cell directly below the source. Offset -1 throws.
struct Connector {
  Workspace workspace;
  Cell source;
  Cell destination;
  bool sink = false;
};
Connector interconnect(int offset);

// Connector placed between two gadgets: `from`'s output port column maps to
// `to`'s input port column shifted by `offset`. The fragment is the full
// stack (from, connector, to) with `to` offset so that the columns line up.
struct Stack {
  Workspace workspace;
  Cell from_offset;
  Cell to_offset;
  Cell source;
  Cell destination;
};
Stack interconnect(const Gadget& from, const std::string& out_port, const Gadget& to, const std::string& in_port,
                   int offset);

}  // namespace tilt
