#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtmkit/lts.hpp"

namespace rtmkit {

inline const std::string kBlank = "_";

// A finite symbol sequence with exactly one marked (head) cell, identified up
// to boundary blanks. normalize() maintains the canonical representative.
struct TapeInstance {
    std::vector<std::string> cells{kBlank};
    std::size_t head = 0;

    bool operator==(const TapeInstance&) const = default;

    std::string read() const { return cells.at(head); }
    std::string serialize() const;  // head cell prefixed with '^'
    static TapeInstance deserialize(const std::string& text);
};

// Strips unmarked boundary blanks; idempotent.
TapeInstance normalize(TapeInstance t);

// Head marker on the right-most symbol of the sequence, or a marked blank for
// the empty sequence. Used for left moves.
TapeInstance place_left(const std::vector<std::string>& symbols);

// Head marker on the left-most symbol; used for right moves.
TapeInstance place_right(const std::vector<std::string>& symbols);

struct RtmRule {
    std::string state;
    std::string read;
    Action action;
    std::string write;
    char move = 'R';  // 'L' or 'R'
    std::string next;

    auto operator<=>(const RtmRule&) const = default;
};

struct Rtm {
    std::vector<std::string> states;
    std::string initial;
    std::set<std::string> finals;
    std::vector<std::string> alphabet;  // data symbols D, blank excluded
    std::vector<RtmRule> rules;

    // Throws std::runtime_error when a rule endpoint, the initial state or a
    // final state is not a member of states, or a move letter is invalid.
    void validate() const;
};

struct Configuration {
    std::string state;
    TapeInstance tape;

    bool operator==(const Configuration&) const = default;

    std::string serialize() const;
    static Configuration deserialize(const std::string& text);
};

// At most one (write, move, next) per action for each (state, read), and a
// tau-rule excludes non-tau rules for the same (state, read).
bool rtm_is_deterministic(const Rtm& m);

// Both transition clauses of the configuration semantics; results normalized
// and in canonical order. Unmatched (state, read) pairs yield an empty list.
std::vector<std::pair<Action, Configuration>> step(const Rtm& m, const Configuration& c);

// Lazy transition system with initial configuration (initial, marked blank).
LtsGenerator semantics(const Rtm& m);

// Fixture machines.
Rtm fig1_left();
Rtm fig1_right();
Rtm counterexample_rtm(int branching_bound);

// Deterministic machine that sends open-delimiter, code+1 ones and the close
// delimiter along the channel, then halts in its final state.
Rtm emitter(unsigned long long code, const std::string& channel);

}  // namespace rtmkit
