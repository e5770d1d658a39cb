#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtmkit/lts.hpp"

namespace rtmkit {

inline const std::string kEndOfInput = "$";  // input head past the last symbol
inline const std::string kNoEmit = "-";

struct PtmRule {
    std::string state;
    std::string read_input;  // data symbol or kEndOfInput
    std::string read_work;   // tape symbol (blank allowed)
    std::string next;
    bool advance_input = false;
    std::string write_work;
    char work_move = 'S';  // 'L', 'R' or 'S'
    std::string emit;      // data symbol or empty for none

    auto operator<=>(const PtmRule&) const = default;
};

// Three semi-infinite tapes: read-only input, read/write work, write-only
// output. The input head only advances, emissions only append.
struct Ptm {
    std::vector<std::string> states;
    std::string initial;
    std::set<std::string> halting;
    std::vector<std::string> alphabet;  // data symbols D, blank excluded
    std::vector<PtmRule> rules;

    void validate() const;
};

using Word = std::vector<std::string>;

struct Macrostep {
    Word input;
    bool diverges = false;
    bool fuel_exhausted = false;  // approximation flag, only with diverges
    Word work;                    // when halting
    Word output;                  // when halting

    auto operator<=>(const Macrostep&) const = default;
};

// All macrosteps of the machine started on the given work-tape contents and
// input: halting computations yield (work', output); a cycle in the
// configuration graph, or exhaustion of the fuel bound, yields divergence.
std::set<Macrostep> macrosteps(const Ptm& m, const Word& work, const Word& input, int fuel);

struct ItsEdge {
    int src = 0;
    Word input;
    bool mu = false;
    Word output;  // empty when mu
    int dst = 0;

    auto operator<=>(const ItsEdge&) const = default;
};

// Interactive transition system: states are work-tape contents reachable from
// the empty word by macrosteps, plus an absorbing divergence state.
struct Its {
    std::vector<std::string> state_names;  // index 0 is the initial state
    int initial = 0;
    int infinity = -1;  // index of the divergence state, or -1
    std::vector<ItsEdge> edges;
    std::vector<std::string> alphabet;

    void validate() const;
};

Its its_of_ptm(const Ptm& m, const std::vector<std::string>& input_alphabet, int max_input_len,
               int fuel);

// The channel encoding of an ITS: input mode appends received symbols, the
// end-of-input hash fires a macrostep, output mode emits and returns to input
// mode, divergence becomes a tau-loop.
LtsGenerator lts_of_its(const Its& its);

// Reverse extraction: macrosteps are read off i?/o! paths; a tau-cycle after
// the input hash yields a divergence edge. Throws when the LTS carries
// actions outside the i?/o!/tau shape or when an input or output cycle makes
// the ITS infinite.
Its its_of_lts(const FiniteLts& l);

// Graph isomorphism respecting the initial state, the divergence state and
// all edge labels.
bool its_isomorphic(const Its& a, const Its& b);

// .ptm text format (mirrors .rtm).
Ptm parse_ptm(const std::string& text);
std::string write_ptm(const Ptm& m);

}  // namespace rtmkit
