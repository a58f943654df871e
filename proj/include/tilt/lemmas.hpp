#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tilt/workspace.hpp"

namespace tilt {

// Executable forms of the two blocking lemmas for 1x1 particles.

// Runs `moves` on `w`, adding a unit particle at `extra` after the first
// `stage` moves. True when `goal` is occupied at the end.
bool occupied_after_insert(const Workspace& w, const MoveSequence& moves, std::size_t stage, Cell extra, Cell goal);

// Runs `moves` with particle `removed` deleted; true when g1 or g2 is occupied.
bool either_occupied_after_delete(const Workspace& w, const MoveSequence& moves, const std::string& removed, Cell g1,
                                  Cell g2);

struct FuzzReport {
  int trials = 0;
  int counterexamples = 0;
  std::string first_counterexample;  // TWF text plus moves, empty when none
};

// Random unit-particle workspaces and sequences. Lemma 7: p reaches g, then
// a particle added at a random free cell and stage never leaves g empty.
FuzzReport fuzz_insert_lemma(std::uint64_t seed, int trials);
// Lemma 8: p1 reaches g1 and p2 reaches g2; deleting either keeps one of
// the goals occupied.
FuzzReport fuzz_delete_lemma(std::uint64_t seed, int trials);

}  // namespace tilt
