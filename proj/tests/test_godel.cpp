#include "rtmkit/godel.hpp"

#include <random>

#include "doctest.h"

using namespace rtmkit;

namespace {

// Rule sets compared as sets after renaming states by declaration order.
std::set<std::string> canonical_rules(const Rtm& m) {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < m.states.size(); ++i) index[m.states[i]] = static_cast<int>(i);
    std::set<std::string> out;
    for (const auto& r : m.rules)
        out.insert(std::to_string(index.at(r.state)) + " " + r.read + " " + r.action.label() +
                   " " + r.write + " " + r.move + " " + std::to_string(index.at(r.next)));
    return out;
}

std::set<int> canonical_finals(const Rtm& m) {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < m.states.size(); ++i) index[m.states[i]] = static_cast<int>(i);
    std::set<int> out;
    for (const auto& f : m.finals) out.insert(index.at(f));
    return out;
}

Rtm random_machine(std::mt19937& rng) {
    std::uniform_int_distribution<int> nstates(1, 6);
    int n = nstates(rng);
    Rtm m;
    for (int i = 0; i < n; ++i) m.states.push_back("q" + std::to_string(i));
    m.initial = m.states[rng() % n];
    if (rng() % 2) m.finals.insert(m.states[rng() % n]);
    m.alphabet = {"1", "#"};
    std::vector<std::string> symbols{"_", "1", "#"};
    std::vector<Action> actions{Action::tau(), Action::plain("a"), Action::send("c", "1"),
                                Action::recv("c", "#")};
    std::uniform_int_distribution<int> nrules(0, 8);
    int k = nrules(rng);
    for (int i = 0; i < k; ++i)
        m.rules.push_back({m.states[rng() % n], symbols[rng() % 3], actions[rng() % 4],
                           symbols[rng() % 3], rng() % 2 ? 'L' : 'R', m.states[rng() % n]});
    return m;
}

}  // namespace

TEST_CASE("round-trip on the fixture machines") {
    for (const Rtm& m : {fig1_left(), fig1_right(), counterexample_rtm(2)}) {
        Rtm back = godel_decode(godel_encode(m));
        CHECK(back.states.size() == m.states.size());
        CHECK(canonical_rules(back) == canonical_rules(m));
        CHECK(canonical_finals(back) == canonical_finals(m));
        CHECK(back.alphabet == m.alphabet);
        CHECK(godel_encode(back) == godel_encode(m));
    }
}

TEST_CASE("round-trip on the empty machine") {
    Rtm m;
    m.states = {"only"};
    m.initial = "only";
    Rtm back = godel_decode(godel_encode(m));
    CHECK(back.states.size() == 1);
    CHECK(back.rules.empty());
    CHECK(back.finals.empty());
}

TEST_CASE("zero is not a code") {
    CHECK_THROWS_WITH(godel_decode(0), doctest::Contains("not an RTM code"));
    CHECK_THROWS(godel_decode_str("junk"));
}

TEST_CASE("round-trip identity on random machines") {
    std::mt19937 rng(11);
    for (int i = 0; i < 60; ++i) {
        Rtm m = random_machine(rng);
        Rtm back = godel_decode(godel_encode(m));
        CHECK(canonical_rules(back) == canonical_rules(m));
        CHECK(canonical_finals(back) == canonical_finals(m));
        CHECK(back.states.size() == m.states.size());
        CHECK(m.states[std::distance(
                  back.states.begin(),
                  std::find(back.states.begin(), back.states.end(), back.initial))] == m.initial);
    }
}
