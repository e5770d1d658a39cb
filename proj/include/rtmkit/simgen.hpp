#pragma once

#include "rtmkit/lts.hpp"
#include "rtmkit/rtm.hpp"

namespace rtmkit {

// Number of potential menus for branching bound B over an action alphabet
// (tau included) of the given size: sum over k <= B of 2 * |A|^k.
unsigned long long menu_count(int branching_bound, int action_alphabet_size);

// Builds an RTM simulating the finite transition system up to
// divergence-preserving branching bisimilarity. Three fragments: the
// initialisation fragment writes a lookup table of the system (out-table and
// fin-table) and the coded initial state; the state fragment replaces the
// current state code by its menu via table lookup; the step fragment decodes
// the menu into a selection state offering exactly the menu's transitions and
// then rewrites the chosen target code. All internal computations between
// selection states are fully deterministic.
//
// Requires a frontier-free input with branching degree <= branching_bound.
Rtm build_simulator(const FiniteLts& ts, int branching_bound);

// Selection states carry this prefix in the generated machine.
inline const std::string kSelectionStatePrefix = "xi";

// Simulates the parallel composition of two machines by a single RTM: the
// product is explored to the given depth and must be complete (no frontier),
// then fed to build_simulator.
Rtm simulate_parallel(const Rtm& m1, const Rtm& m2, const std::set<std::string>& channels,
                      int depth, int branching_bound);

}  // namespace rtmkit
