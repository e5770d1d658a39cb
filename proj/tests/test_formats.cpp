#include "rtmkit/formats.hpp"

#include "doctest.h"
#include "test_util.hpp"

using namespace rtmkit;
using namespace rtmkit::testutil;

TEST_CASE("lts files are written bit-exactly") {
    FiniteLts lts = make_lts(3,
                             {{0, Action::tau(), 1},
                              {1, Action::send("c", "d"), 2},
                              {1, Action::recv("c", "d"), 0},
                              {0, Action::plain("go"), 2}},
                             0, {2}, {1});
    std::string expected =
        "des (0, 4, 3)\n"
        "(0, \"tau\", 1)\n"
        "(0, \"go\", 2)\n"
        "(1, \"c!d\", 2)\n"
        "(1, \"c?d\", 0)\n"
        "final: 2\n"
        "frontier: 1\n";
    CHECK(write_lts(lts) == expected);
    FiniteLts back = parse_lts(expected);
    CHECK(back.transitions == lts.transitions);
    CHECK(back.finals == lts.finals);
    CHECK(back.frontier == lts.frontier);
    CHECK(write_lts(back) == expected);
}

TEST_CASE("empty id lists are allowed") {
    FiniteLts lts = make_lts(1, {});
    std::string text = write_lts(lts);
    CHECK(text == "des (0, 0, 1)\nfinal:\nfrontier:\n");
    FiniteLts back = parse_lts(text);
    CHECK(back.num_states() == 1);
}

TEST_CASE("lts parse errors") {
    CHECK_THROWS_WITH(parse_lts("des (0, 1, 1)\nfinal:\nfrontier:\n"),
                      doctest::Contains("transition count"));
    CHECK_THROWS_WITH(parse_lts("(0, \"a\", 1)\n"), doctest::Contains("des"));
    CHECK_THROWS_WITH(parse_lts("des (0, 1, 2)\n(0, \"a\", 5)\nfinal:\nfrontier:\n"),
                      doctest::Contains("out of range"));
}

TEST_CASE("rtm files round-trip") {
    for (const Rtm& m : {fig1_left(), fig1_right(), counterexample_rtm(2)}) {
        Rtm back = parse_rtm(write_rtm(m));
        CHECK(back.states == m.states);
        CHECK(back.initial == m.initial);
        CHECK(back.finals == m.finals);
        CHECK(back.alphabet == m.alphabet);
        std::set<RtmRule> a(m.rules.begin(), m.rules.end());
        std::set<RtmRule> b(back.rules.begin(), back.rules.end());
        CHECK(a == b);
        CHECK(write_rtm(back) == write_rtm(m));
    }
}

TEST_CASE("rtm parse errors carry line numbers") {
    CHECK_THROWS_WITH(parse_rtm("states: s\ninitial: s\nrule s _ -> tau _ X s\n"),
                      doctest::Contains("line 3"));
    CHECK_THROWS_WITH(parse_rtm("bogus: s\n"), doctest::Contains("line 1"));
    CHECK_THROWS_WITH(parse_rtm("states: s\n"), doctest::Contains("initial"));
    CHECK_THROWS_WITH(parse_rtm("states: s\ninitial: t\n"), doctest::Contains("not declared"));
}
