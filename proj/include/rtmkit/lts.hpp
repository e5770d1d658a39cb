#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "rtmkit/action.hpp"

namespace rtmkit {

// Generator states are canonical serialized values; exploration assigns them
// dense integer ids in discovery order so emitted files are reproducible.
using State = std::string;
using StateId = std::uint32_t;

struct Step {
    Action action;
    State target;

    auto operator<=>(const Step&) const = default;
};

// A lazy transition system: out and fin must be pure, and out must return a
// finite list. Infinite branching is unrepresentable by construction.
struct LtsGenerator {
    State initial;
    std::function<std::vector<Step>(const State&)> out;
    std::function<bool(const State&)> fin;
};

struct Transition {
    StateId src = 0;
    Action action;
    StateId dst = 0;

    auto operator<=>(const Transition&) const = default;
};

struct FiniteLts {
    std::vector<std::string> state_labels;  // may hold empty strings when loaded from a file
    std::vector<Transition> transitions;    // sorted by (src, action, dst)
    StateId initial = 0;
    std::set<StateId> finals;
    std::set<StateId> frontier;  // reached states whose out-sets were not expanded

    std::size_t num_states() const { return state_labels.size(); }
    bool is_final(StateId s) const { return finals.count(s) != 0; }
    bool is_frontier(StateId s) const { return frontier.count(s) != 0; }
};

// Sorts and deduplicates an out-list into the canonical order.
std::vector<Step> canonical_steps(std::vector<Step> steps);

// Breadth-first closure from the initial state. depth_bound counts observable
// transitions: tau-successors stay within the current level, so the fragment
// at depth k contains exactly the behaviour reachable with at most k visible
// actions (subject to state_bound). A state is in the frontier iff it was
// reached but not expanded. Output is identical across runs.
FiniteLts explore(const LtsGenerator& gen, int depth_bound, int state_bound);

// Max over states of the recorded out-degree.
int branching_degree(const FiniteLts& lts);

// True iff same-action transitions from a state coincide and a tau-transition
// excludes every other outgoing transition of that state.
bool is_deterministic(const FiniteLts& lts);

// Product generator: interleaving outside the channel set, synchronised
// send/receive pairs on channels in the set become tau, finality is the
// conjunction of component finality.
LtsGenerator parallel_compose(const LtsGenerator& g1, const LtsGenerator& g2,
                              const std::set<std::string>& channels);

// All sequences of non-tau actions of length <= max_len along paths from the
// initial state, tau-steps skipped. Contains the empty sequence.
std::set<std::vector<Action>> observable_traces(const FiniteLts& lts, int max_len);

// Wraps an explored fragment back into a generator. Frontier states become
// dead ends; meant for complete (frontier-free) fragments.
LtsGenerator as_generator(const FiniteLts& lts);

// Per-state adjacency index used by the analysis passes.
std::vector<std::vector<std::pair<Action, StateId>>> adjacency(const FiniteLts& lts);

}  // namespace rtmkit
