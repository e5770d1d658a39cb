#pragma once

#include <optional>
#include <set>
#include <utility>

#include "rtmkit/lts.hpp"

namespace rtmkit {

struct Relation {
    std::set<std::pair<StateId, StateId>> pairs;
};

struct Violation {
    StateId left = 0;
    StateId right = 0;
    int clause = 0;  // 1..4 branching, 5..6 divergence
};

struct BisimVerdict {
    bool related = false;
    Relation witness;  // contains the initial pair when related
    std::optional<Violation> counterexample;
};

// Frontier states mark truncated exploration. Pessimistic treats them as
// opaque horizon tokens: their recorded finality is masked and they receive a
// shared probe action, so "related" certifies equivalence of everything within
// the horizon. Optimistic treats them as wildcards that can match anything, so
// "not related" certifies a genuine difference inside the horizon.
enum class FrontierMode { Pessimistic, Optimistic };

// Branching bisimilarity (clauses 1-4, including the termination clauses) on
// finite fragments, decided by signature-based partition refinement on the
// disjoint union. Set want_witness=false to skip materialising the witness
// relation for very large inputs.
BisimVerdict check_branching(const FiniteLts& l1, const FiniteLts& l2,
                             FrontierMode mode = FrontierMode::Pessimistic,
                             bool want_witness = true);

// Adds the divergence-preservation clauses 5-6. On finite fragments an
// infinite tau-sequence within a class is a tau-cycle through same-class
// states.
BisimVerdict check_dp_branching(const FiniteLts& l1, const FiniteLts& l2,
                                FrontierMode mode = FrontierMode::Pessimistic,
                                bool want_witness = true);

// Checks every pair of the relation against clauses 1-4 (and 5-6 when
// divergence is set) on the given fragments as-is; returns the first
// violation in canonical pair order, clause order 1..6.
std::optional<Violation> verify_relation(const Relation& r, const FiniteLts& l1,
                                         const FiniteLts& l2, bool divergence);

// Independent oracle: greatest-fixpoint computation starting from the full
// relation, repeatedly deleting clause-violating pairs. Throws when the
// combined state count exceeds the small-instance bound.
BisimVerdict brute_force_bisim(const FiniteLts& l1, const FiniteLts& l2, bool divergence);

inline constexpr std::size_t kBruteForceStateBound = 64;

struct DetComputation {
    std::vector<StateId> path;           // from the start state to the endpoint
    std::set<StateId> intermediates;     // every state on the path
};

// The maximal fully deterministic internal computation from a state: each
// state on it (except the endpoint) has exactly one outgoing transition, a
// tau, to the next. Absent when the start state itself branches or acts
// observably. A tau-cycle raises "divergent deterministic computation".
std::optional<DetComputation> fully_deterministic_computation(const FiniteLts& lts, StateId from);

}  // namespace rtmkit
