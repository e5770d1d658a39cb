#include "rtmkit/rtm.hpp"

#include "doctest.h"
#include "rtmkit/lts.hpp"
#include "test_util.hpp"

using namespace rtmkit;

namespace {

TapeInstance tape(std::vector<std::string> cells, std::size_t head) {
    TapeInstance t;
    t.cells = std::move(cells);
    t.head = head;
    return t;
}

}  // namespace

TEST_CASE("normalisation strips unmarked boundary blanks") {
    CHECK(normalize(tape({"_", "1", "_"}, 1)) == tape({"1"}, 0));
    CHECK(normalize(tape({"_"}, 0)) == tape({"_"}, 0));  // marked blank retained
    CHECK(normalize(tape({"_", "_", "_", "1"}, 2)) == tape({"_", "1"}, 0));
    SUBCASE("idempotent") {
        std::mt19937 rng(5);
        std::vector<std::string> symbols{"_", "1", "#"};
        for (int i = 0; i < 200; ++i) {
            std::uniform_int_distribution<int> len(1, 7);
            int n = len(rng);
            std::vector<std::string> cells;
            for (int j = 0; j < n; ++j) cells.push_back(symbols[rng() % 3]);
            TapeInstance t = tape(cells, rng() % n);
            CHECK(normalize(normalize(t)) == normalize(t));
        }
    }
}

TEST_CASE("normalize rejects malformed instances") {
    TapeInstance bad;
    bad.cells = {"1"};
    bad.head = 3;
    CHECK_THROWS_WITH(normalize(bad), doctest::Contains("not a tape instance"));
    CHECK_THROWS(TapeInstance::deserialize("1 1"));
    CHECK_THROWS(TapeInstance::deserialize("^1 ^1"));
}

TEST_CASE("head placement helpers") {
    CHECK(place_left({}) == tape({"_"}, 0));
    CHECK(place_left({"1", "#"}) == tape({"1", "#"}, 1));
    CHECK(place_right({"#", "1"}) == tape({"#", "1"}, 0));
    CHECK(place_right({}) == tape({"_"}, 0));
}

TEST_CASE("machine determinism") {
    Rtm empty;
    empty.states = {"s"};
    empty.initial = "s";
    CHECK(rtm_is_deterministic(empty));
    CHECK_FALSE(rtm_is_deterministic(counterexample_rtm(1)));
    CHECK_FALSE(rtm_is_deterministic(counterexample_rtm(3)));
    CHECK(rtm_is_deterministic(fig1_right()));
    CHECK(rtm_is_deterministic(fig1_left()));
    SUBCASE("tau excludes observable rules on the same pair") {
        Rtm m;
        m.states = {"s", "t"};
        m.initial = "s";
        m.rules = {{"s", "_", Action::tau(), "_", 'R', "t"},
                   {"s", "_", Action::plain("a"), "_", 'R', "t"}};
        CHECK_FALSE(rtm_is_deterministic(m));
    }
}

TEST_CASE("step applies both movement clauses") {
    // First internal move of the emitting machine: blank becomes 1, head right.
    Rtm right = fig1_right();
    auto steps = step(right, {"w0", TapeInstance{}});
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].first == Action::tau());
    CHECK(steps[0].second == Configuration{"w1", tape({"1", "_"}, 1)});

    Rtm none;
    none.states = {"s"};
    none.initial = "s";
    CHECK(step(none, {"s", TapeInstance{}}).empty());

    // A left move at the left end lands on a fresh blank, then normalisation
    // trims the old cell it blanked.
    Rtm loop;
    loop.states = {"s"};
    loop.initial = "s";
    loop.rules = {{"s", "_", Action::plain("a"), "_", 'L', "s"}};
    auto looped = step(loop, {"s", TapeInstance{}});
    REQUIRE(looped.size() == 1);
    CHECK(looped[0].second == Configuration{"s", TapeInstance{}});
}

TEST_CASE("semantics of the empty machine") {
    Rtm m;
    m.states = {"s"};
    m.initial = "s";
    m.finals = {"s"};
    FiniteLts lts = explore(semantics(m), 10, 10);
    CHECK(lts.num_states() == 1);
    CHECK(lts.finals == std::set<StateId>{0});
}

TEST_CASE("semantics of the counterexample machine branches at the start") {
    FiniteLts lts = explore(semantics(counterexample_rtm(2)), 1, 100);
    int degree = 0;
    for (const auto& t : lts.transitions)
        if (t.src == lts.initial) ++degree;
    CHECK(degree == 4);
}

TEST_CASE("fixture shapes") {
    CHECK(fig1_right().states.size() == 4);
    CHECK(fig1_right().rules.size() == 6);
    CHECK(fig1_left().states.size() == 6);
    CHECK(fig1_left().rules.size() == 12);
    CHECK(counterexample_rtm(1).states.size() == 4);
    CHECK(counterexample_rtm(1).rules.size() == 3);
}

TEST_CASE("the storing machine replays an even string") {
    // Feed i?1 i?1 i?# by composing with a driver that sends them.
    auto driver = testutil::table_gen({{"d0", {{Action::send("i", "1"), "d1"}}},
                                       {"d1", {{Action::send("i", "1"), "d2"}}},
                                       {"d2", {{Action::send("i", "#"), "d3"}}}},
                                      {"d3"}, "d0");
    auto gen = parallel_compose(semantics(fig1_left()), driver, {"i"});
    FiniteLts lts = explore(gen, 4, 5000);
    auto traces = observable_traces(lts, 4);
    std::vector<Action> expect{Action::send("o", "1"), Action::send("o", "1"),
                               Action::send("o", "#")};
    CHECK(traces.count(expect) == 1);
}

TEST_CASE("semantics out and fin are total on reached configurations") {
    for (const Rtm& m : {fig1_left(), fig1_right(), counterexample_rtm(2)}) {
        auto gen = semantics(m);
        FiniteLts lts = explore(gen, 4, 2000);
        for (StateId s = 0; s < lts.num_states(); ++s) {
            CHECK_NOTHROW(gen.out(lts.state_labels[s]));
            CHECK_NOTHROW(gen.fin(lts.state_labels[s]));
            Configuration c = Configuration::deserialize(lts.state_labels[s]);
            CHECK(normalize(c.tape) == c.tape);
        }
    }
}

TEST_CASE("emitter behaviour") {
    Rtm e0 = emitter(0, "u");
    CHECK(rtm_is_deterministic(e0));
    FiniteLts lts = explore(semantics(e0), 10, 50);
    auto traces = observable_traces(lts, 10);
    std::vector<Action> full{Action::send("u", "["), Action::send("u", "1"),
                             Action::send("u", "]")};
    CHECK(traces.count(full) == 1);
    // The full trace ends in a final configuration.
    CHECK(!lts.finals.empty());

    Rtm e2 = emitter(2, "u");
    FiniteLts lts2 = explore(semantics(e2), 10, 50);
    auto traces2 = observable_traces(lts2, 10);
    std::vector<Action> full2{Action::send("u", "["), Action::send("u", "1"),
                              Action::send("u", "1"), Action::send("u", "1"),
                              Action::send("u", "]")};
    CHECK(traces2.count(full2) == 1);
    for (const auto& tr : traces2) CHECK(tr.size() <= 5);
}
