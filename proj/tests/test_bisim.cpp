#include "rtmkit/bisim.hpp"

#include <random>

#include "doctest.h"
#include "test_util.hpp"

using namespace rtmkit;
using namespace rtmkit::testutil;

namespace {

const Action a = Action::plain("a");
const Action b = Action::plain("b");
const Action t = Action::tau();

FiniteLts a_halt() { return make_lts(2, {{0, a, 1}}, 0, {1}); }

}  // namespace

TEST_CASE("an LTS is related to itself with the identity inside the witness") {
    FiniteLts l = make_lts(3, {{0, a, 1}, {1, b, 2}, {0, t, 0}}, 0, {2});
    auto verdict = check_branching(l, l);
    REQUIRE(verdict.related);
    for (StateId s = 0; s < l.num_states(); ++s) CHECK(verdict.witness.pairs.count({s, s}) == 1);
    CHECK(!verify_relation(verdict.witness, l, l, false).has_value());
}

TEST_CASE("different first actions violate clause 1") {
    FiniteLts l = a_halt();
    FiniteLts r = make_lts(2, {{0, b, 1}}, 0, {1});
    auto verdict = check_branching(l, r);
    REQUIRE_FALSE(verdict.related);
    CHECK(verdict.counterexample->clause == 1);
    CHECK(verdict.counterexample->left == 0);
    CHECK(verdict.counterexample->right == 0);
}

TEST_CASE("inert tau is absorbed") {
    // a.halt + tau.a.halt  vs  a.halt
    FiniteLts l = make_lts(4, {{0, a, 2}, {0, t, 1}, {1, a, 3}}, 0, {2, 3});
    FiniteLts r = a_halt();
    CHECK(check_branching(l, r).related);
    CHECK(check_dp_branching(l, r).related);  // no divergence anywhere
    // Agreement with the oracle.
    CHECK(brute_force_bisim(l, r, false).related);
    CHECK(brute_force_bisim(l, r, true).related);
}

TEST_CASE("divergence sensitivity of the self-loop") {
    // tau-selfloop with an a-exit vs a.halt: branching-related, dp-unrelated.
    FiniteLts l = make_lts(2, {{0, t, 0}, {0, a, 1}}, 0, {1});
    FiniteLts r = a_halt();
    CHECK(check_branching(l, r).related);
    auto dp = check_dp_branching(l, r);
    REQUIRE_FALSE(dp.related);
    CHECK(dp.counterexample->clause == 5);
    CHECK(brute_force_bisim(l, r, false).related);
    CHECK_FALSE(brute_force_bisim(l, r, true).related);
}

TEST_CASE("two identical tau-cycles are dp-related") {
    FiniteLts l = make_lts(2, {{0, t, 1}, {1, t, 0}, {0, a, 1}}, 0);
    CHECK(check_dp_branching(l, l).related);
    CHECK(brute_force_bisim(l, l, true).related);
}

TEST_CASE("tau-divergent vs tau-free is dp-refuted by clause 5") {
    FiniteLts l = make_lts(1, {{0, t, 0}});
    FiniteLts r = make_lts(1, {});
    auto verdict = check_dp_branching(l, r);
    REQUIRE_FALSE(verdict.related);
    CHECK(verdict.counterexample->clause == 5);
    CHECK(check_branching(l, r).related);
    CHECK_FALSE(brute_force_bisim(l, r, true).related);
}

TEST_CASE("verify_relation basics") {
    FiniteLts l = a_halt();
    FiniteLts r = make_lts(2, {}, 0, {});
    SUBCASE("the empty relation is vacuously fine") {
        CHECK(!verify_relation(Relation{}, l, r, true).has_value());
    }
    SUBCASE("a pair whose left side can act and right cannot violates clause 1") {
        Relation rel;
        rel.pairs = {{0, 0}};
        auto v = verify_relation(rel, l, r, false);
        REQUIRE(v.has_value());
        CHECK(v->clause == 1);
    }
    SUBCASE("identity on one LTS") {
        Relation rel;
        rel.pairs = {{0, 0}, {1, 1}};
        CHECK(!verify_relation(rel, l, l, true).has_value());
    }
}

TEST_CASE("fully deterministic internal computations") {
    // tau.tau.a.halt
    FiniteLts l = make_lts(4, {{0, t, 1}, {1, t, 2}, {2, a, 3}}, 0, {3});
    auto comp = fully_deterministic_computation(l, 0);
    REQUIRE(comp.has_value());
    CHECK(comp->path == std::vector<StateId>{0, 1, 2});
    CHECK(comp->intermediates == std::set<StateId>{0, 1, 2});

    // Branching start: absent.
    FiniteLts branchy = make_lts(3, {{0, t, 1}, {0, t, 2}});
    CHECK(!fully_deterministic_computation(branchy, 0).has_value());

    // A cycle is a divergent deterministic computation.
    FiniteLts cyc = make_lts(2, {{0, t, 1}, {1, t, 0}});
    CHECK_THROWS_WITH(fully_deterministic_computation(cyc, 0),
                      doctest::Contains("divergent deterministic computation"));
}

TEST_CASE("intermediate states of a deterministic computation are dp-related to its endpoint") {
    FiniteLts l = make_lts(5, {{0, t, 1}, {1, t, 2}, {2, a, 3}, {2, b, 4}}, 0, {3});
    auto comp = fully_deterministic_computation(l, 0);
    REQUIRE(comp.has_value());
    auto verdict = check_dp_branching(l, l);
    REQUIRE(verdict.related);
    StateId endpoint = comp->path.back();
    for (StateId s : comp->intermediates) CHECK(verdict.witness.pairs.count({s, endpoint}) == 1);
}

TEST_CASE("oracle bound is enforced") {
    FiniteLts big = make_lts(40, {});
    FiniteLts big2 = make_lts(40, {});
    CHECK_THROWS(brute_force_bisim(big, big2, false));
}

TEST_CASE("checkers agree with the oracle on random pairs") {
    std::mt19937 rng(2024);
    for (int round = 0; round < 250; ++round) {
        FiniteLts l = random_lts(rng);
        FiniteLts r = random_lts(rng);
        for (bool divergence : {false, true}) {
            auto main = divergence ? check_dp_branching(l, r) : check_branching(l, r);
            auto oracle = brute_force_bisim(l, r, divergence);
            CAPTURE(round);
            CAPTURE(divergence);
            CHECK(main.related == oracle.related);
            auto opt = divergence ? check_dp_branching(l, r, FrontierMode::Optimistic)
                                  : check_branching(l, r, FrontierMode::Optimistic);
            CHECK(opt.related == oracle.related);
            if (main.related) {
                CHECK(main.witness.pairs.count({l.initial, r.initial}) == 1);
                CHECK(!verify_relation(main.witness, l, r, divergence).has_value());
            }
        }
    }
}

TEST_CASE("dp-related implies branching-related") {
    std::mt19937 rng(99);
    for (int round = 0; round < 120; ++round) {
        FiniteLts l = random_lts(rng);
        FiniteLts r = random_lts(rng);
        if (check_dp_branching(l, r).related) CHECK(check_branching(l, r).related);
    }
}

TEST_CASE("frontier handling") {
    // Identical generators explored to the same horizon stay related under
    // the pessimistic reading; differences beyond the horizon are invisible.
    auto deep1 = table_gen({{"x", {{a, "y"}}}, {"y", {{a, "z1"}}}, {"z1", {{a, "w1"}}}}, {}, "x");
    auto deep2 = table_gen({{"x", {{a, "y"}}}, {"y", {{a, "z2"}}}, {"z2", {{b, "w2"}}}}, {}, "x");
    FiniteLts f1 = explore(deep1, 2, 100);
    FiniteLts f2 = explore(deep2, 2, 100);
    CHECK(check_branching(f1, f2, FrontierMode::Pessimistic).related);
    CHECK(check_branching(f1, f2, FrontierMode::Optimistic).related);
    // Fully explored they differ.
    FiniteLts g1 = explore(deep1, 5, 100);
    FiniteLts g2 = explore(deep2, 5, 100);
    CHECK_FALSE(check_branching(g1, g2, FrontierMode::Optimistic).related);

    // A frontier on one side against a completed system: optimistic gives the
    // benefit of the doubt, pessimistic does not.
    FiniteLts shallow = explore(deep1, 1, 100);
    FiniteLts full = explore(deep1, 10, 100);
    CHECK(check_branching(shallow, full, FrontierMode::Optimistic).related);
    CHECK_FALSE(check_branching(shallow, full, FrontierMode::Pessimistic).related);
}

TEST_CASE("pessimistic relatedness implies optimistic relatedness") {
    std::mt19937 rng(4242);
    for (int round = 0; round < 60; ++round) {
        FiniteLts l = random_lts(rng);
        FiniteLts r = random_lts(rng);
        // Truncate both to create frontiers.
        FiniteLts lf = explore(as_generator(l), 2, 5);
        FiniteLts rf = explore(as_generator(r), 2, 5);
        for (bool divergence : {false, true}) {
            auto pess = divergence ? check_dp_branching(lf, rf, FrontierMode::Pessimistic)
                                   : check_branching(lf, rf, FrontierMode::Pessimistic);
            if (pess.related) {
                auto opt = divergence ? check_dp_branching(lf, rf, FrontierMode::Optimistic)
                                      : check_branching(lf, rf, FrontierMode::Optimistic);
                CHECK(opt.related);
            }
        }
    }
}

TEST_CASE("congruence with respect to parallel composition") {
    std::mt19937 rng(777);
    int related_cases = 0;
    for (int round = 0; round < 60; ++round) {
        FiniteLts l1 = random_lts(rng, 4);
        // A dp-equivalent copy: same structure with permuted state ids.
        FiniteLts l2 = l1;
        FiniteLts k1 = random_lts(rng, 4);
        FiniteLts k2 = k1;
        if (!check_dp_branching(l1, l2).related || !check_dp_branching(k1, k2).related) continue;
        ++related_cases;
        std::set<std::string> channels{};
        FiniteLts c1 = explore(parallel_compose(as_generator(l1), as_generator(k1), channels),
                               1000000, 1000000);
        FiniteLts c2 = explore(parallel_compose(as_generator(l2), as_generator(k2), channels),
                               1000000, 1000000);
        CHECK(check_dp_branching(c1, c2).related);
    }
    CHECK(related_cases > 0);
}
