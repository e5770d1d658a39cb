#pragma once

#include <map>
#include <random>

#include "rtmkit/bisim.hpp"
#include "rtmkit/lts.hpp"

namespace rtmkit::testutil {

inline FiniteLts make_lts(int n, std::vector<std::tuple<int, Action, int>> transitions,
                          int initial = 0, std::set<int> finals = {}, std::set<int> frontier = {}) {
    FiniteLts lts;
    lts.state_labels.assign(n, "");
    for (auto& [s, a, t] : transitions)
        lts.transitions.push_back({static_cast<StateId>(s), a, static_cast<StateId>(t)});
    std::sort(lts.transitions.begin(), lts.transitions.end());
    lts.initial = static_cast<StateId>(initial);
    for (int f : finals) lts.finals.insert(static_cast<StateId>(f));
    for (int f : frontier) lts.frontier.insert(static_cast<StateId>(f));
    return lts;
}

// A generator backed by an explicit table; useful for hand-built fixtures.
inline LtsGenerator table_gen(std::map<std::string, std::vector<Step>> table,
                              std::set<std::string> finals, std::string initial) {
    LtsGenerator gen;
    gen.initial = std::move(initial);
    gen.out = [table](const State& s) {
        auto it = table.find(s);
        return it == table.end() ? std::vector<Step>{} : it->second;
    };
    gen.fin = [finals](const State& s) { return finals.count(s) != 0; };
    return gen;
}

// Random LTS over two visible actions plus tau; used by the oracle-agreement
// and congruence suites.
inline FiniteLts random_lts(std::mt19937& rng, int max_states = 6, double edge_bias = 0.35) {
    std::uniform_int_distribution<int> nstates(1, max_states);
    int n = nstates(rng);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> target(0, n - 1);
    std::vector<Action> actions{Action::tau(), Action::plain("a"), Action::plain("b")};
    std::vector<std::tuple<int, Action, int>> transitions;
    for (int s = 0; s < n; ++s)
        for (const auto& a : actions)
            while (coin(rng) < edge_bias) {
                transitions.push_back({s, a, target(rng)});
                if (transitions.size() > 24) break;
            }
    std::set<int> finals;
    for (int s = 0; s < n; ++s)
        if (coin(rng) < 0.3) finals.insert(s);
    return make_lts(n, std::move(transitions), 0, std::move(finals));
}

}  // namespace rtmkit::testutil
