#pragma once

#include <string>
#include <vector>

#include "tilt/gadget.hpp"
#include "tilt/workspace.hpp"

namespace tilt {

struct Literal {
  int var = 1;  // 1-based
  bool positive = true;
  bool operator==(const Literal&) const = default;
};

using Clause = std::vector<Literal>;

struct CnfFormula {
  int n = 0;
  std::vector<Clause> clauses;

  int m() const { return static_cast<int>(clauses.size()); }
  void validate() const;  // throws std::invalid_argument
  bool evaluate(const std::vector<bool>& assignment) const;
};

// Standard DIMACS: "c" comments, "p cnf n m" header, clauses terminated by 0.
CnfFormula parse_dimacs(const std::string& text);
std::string to_dimacs(const CnfFormula& f);

// Assignments are strings over {T, F}, one character per variable.
std::vector<bool> parse_assignment(const std::string& s, int n);
std::string format_assignment(const std::vector<bool>& a);

enum class Polarity { Positive, Negative };

// A tower of n levels whose particle leaves through port "T" when the i-th
// horizontal choice is l and through "F" when it is r. The standalone gadget
// ends each port in a short drop shaft, "T.drop" and "F.drop". The port the
// polarity selects is listed first among the outputs.
Gadget build_variable_gadget(int i, int n, Polarity polarity = Polarity::Positive);

// Inputs "in1".."in3", output "out". The surplus falls into a sealed room.
Gadget build_or_gadget();

// Inputs "in1".."inm", output "target".
Gadget build_and_gadget(int m);

struct SatWorkspace {
  Workspace workspace;  // carries one unlabeled goal on the target cell
  Cell target;
  int variable_gadgets = 0;
  int or_gadgets = 0;
  int and_inputs = 0;
  std::vector<Cell> waste;
};

SatWorkspace build_3sat_workspace(const CnfFormula& f);

// <d,c1,d,c2,...,d,cn,d,r> followed by the clause and check rounds <d,l,d,r>.
MoveSequence variable_phase(const std::vector<bool>& a);
MoveSequence assignment_to_sequence(const CnfFormula& f, const std::vector<bool>& a);

// Strips moves that cannot change the outcome on the reduction gadgets.
MoveSequence canonicalize_sequence(const MoveSequence& s);

}  // namespace tilt
