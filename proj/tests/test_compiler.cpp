#include "rtmkit/compiler.hpp"

#include "doctest.h"
#include "rtmkit/bisim.hpp"

using namespace rtmkit;

namespace {

Rtm empty_final_machine() {
    Rtm m;
    m.states = {"s"};
    m.initial = "s";
    m.finals = {"s"};
    return m;
}

Rtm two_rule_machine() {
    // Performs a then b and halts in a final state; its compiled state space
    // is finite, so the horizon check is exact.
    Rtm m;
    m.states = {"p", "q", "r"};
    m.initial = "p";
    m.finals = {"r"};
    m.rules = {{"p", "_", Action::plain("a"), "_", 'R', "q"},
               {"q", "_", Action::plain("b"), "_", 'L', "r"}};
    return m;
}

Rtm ab_cycle_machine() {
    // a/b cycle on an untouched tape; the compiled expression grows with
    // every pass through the queue, so only horizon checks apply.
    Rtm m;
    m.states = {"p", "q"};
    m.initial = "p";
    m.finals = {"q"};
    m.rules = {{"p", "_", Action::plain("a"), "_", 'R', "q"},
               {"q", "_", Action::plain("b"), "_", 'L', "p"}};
    return m;
}

}  // namespace

TEST_CASE("definitional specification mirrors the machine semantics") {
    for (const Rtm& m : {empty_final_machine(), two_rule_machine(), fig1_right()}) {
        FiniteLts from_machine = explore(semantics(m), 6, 5000);
        FiniteLts from_spec = explore(spec_infinite_of_rtm(m), 6, 5000);
        CHECK(check_dp_branching(from_machine, from_spec).related);
        // Out-sets correspond state by state under the name prefix.
        auto gen_m = semantics(m);
        auto gen_s = spec_infinite_of_rtm(m);
        for (StateId s = 0; s < from_machine.num_states(); ++s) {
            auto mo = gen_m.out(from_machine.state_labels[s]);
            auto so = gen_s.out("N " + from_machine.state_labels[s]);
            REQUIRE(mo.size() == so.size());
            for (std::size_t k = 0; k < mo.size(); ++k) {
                CHECK(mo[k].action == so[k].action);
                CHECK("N " + mo[k].target == so[k].target);
            }
        }
    }
}

TEST_CASE("finite queue specification shape") {
    RecSpec q = queue_finite_spec({"x", "y"});
    CHECK(q.equations.size() == 6);
    for (const auto& [name, body] : q.equations) {
        // Two input summands plus the skip summand.
        int summands = 1;
        PExpr e = body;
        while (e->kind == ProcessExpr::Kind::Choice) {
            ++summands;
            e = e->right;
        }
        CHECK(summands == 3);
        CHECK(e->kind == ProcessExpr::Kind::Skip);
    }
    CHECK(terminates(q, name_ref("Qio_l")));
}

TEST_CASE("finite queue is FIFO") {
    RecSpec q = queue_finite_spec({"x", "y"});
    FiniteLts lts = explore(lts_of(q, name_ref("Qio_l")), 4, 20000);
    auto traces = observable_traces(lts, 4);
    using A = Action;
    CHECK(traces.count({A::recv("i", "x"), A::recv("i", "y"), A::send("o", "x")}) == 1);
    CHECK(traces.count({A::recv("i", "x"), A::recv("i", "y"), A::send("o", "y")}) == 0);
}

TEST_CASE("infinite queue generator") {
    auto gen = queue_infinite_gen({"x"});
    CHECK(gen.fin(""));
    auto steps = gen.out("");
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].action == Action::recv("i", "x"));
}

TEST_CASE("infinite tape generator implements the moves") {
    auto gen = tape_infinite_gen({"_", "1", "#"});
    // Blank tape: reading gives the blank and a left move normalises back.
    auto steps = gen.out(TapeInstance{}.serialize());
    bool saw_read = false, saw_left = false;
    for (const auto& s : steps) {
        if (s.action == Action::send("r", "_")) {
            saw_read = true;
            CHECK(s.target == TapeInstance{}.serialize());
        }
        if (s.action == Action::recv("m", "L")) {
            saw_left = true;
            CHECK(s.target == TapeInstance{}.serialize());
        }
    }
    CHECK(saw_read);
    CHECK(saw_left);
    // Writing a blank over the only symbol erases it.
    TapeInstance one;
    one.cells = {"1", "#"};
    one.head = 0;
    auto steps2 = gen.out(one.serialize());
    for (const auto& s : steps2)
        if (s.action == Action::recv("w", "_")) {
            TapeInstance expect;
            expect.cells = {"_", "#"};
            expect.head = 0;
            CHECK(s.target == expect.serialize());
        }
}

TEST_CASE("tape controller equation census") {
    RecSpec spec = tape_controller_spec({"_", "1", "#"});
    // H_d, HL_d, HR_d, Fwd_d per symbol plus Back and Fwd_@.
    CHECK(spec.equations.size() == 3 * 4 + 2);
    CHECK(spec.equations.count("Back") == 1);
    CHECK(spec.equations.count("Fwd_@") == 1);
    CHECK(spec.equations.count("H__") == 1);
}

TEST_CASE("move computations of the tape controller are deterministic") {
    // <HL_d || queue(dR @ dL)> has a fully deterministic internal computation
    // to <H_dL || queue(d dR @ zL)>.
    std::vector<std::string> data{"_", "1", "#"};
    RecSpec controller = tape_controller_spec(data);
    auto queue_alpha = queue_alphabet_for(data);

    SUBCASE("interior left move") {
        // Tape z1 dL [d] r1: queue contents r1 @ z1 dL, head symbol d=1.
        auto queue = queue_infinite_gen_from(queue_alpha, {"#", "@", "_", "1"});
        auto gen = parallel_compose(lts_of(controller, name_ref("HL_1")), queue, {"i", "o"});
        FiniteLts lts = explore(gen, 1000000, 100000);
        auto comp = fully_deterministic_computation(lts, lts.initial);
        REQUIRE(comp.has_value());
        StateId end = comp->path.back();
        auto adj = adjacency(lts);
        // Endpoint is <H_1 || Q_{1 # @ _}> : offers r!1 among others.
        bool offers_read = false;
        for (const auto& [act, tgt] : adj[end])
            if (act == Action::send("r", "1")) offers_read = true;
        CHECK(offers_read);
        CHECK(lts.state_labels[end].find("H_1") != std::string::npos);
    }
    SUBCASE("left move at the left end restores the queue") {
        // Empty left part: queue contents r1 @ with head d=#.
        auto queue = queue_infinite_gen_from(queue_alpha, {"1", "@"});
        auto gen = parallel_compose(lts_of(controller, name_ref("HL_#")), queue, {"i", "o"});
        FiniteLts lts = explore(gen, 1000000, 100000);
        auto comp = fully_deterministic_computation(lts, lts.initial);
        REQUIRE(comp.has_value());
        StateId end = comp->path.back();
        CHECK(lts.state_labels[end].find("H__") != std::string::npos);
        CHECK(lts.state_labels[end].find("# 1 @") != std::string::npos);
    }
    SUBCASE("right move") {
        auto queue = queue_infinite_gen_from(queue_alpha, {"1", "@"});
        auto gen = parallel_compose(lts_of(controller, name_ref("HR_#")), queue, {"i", "o"});
        FiniteLts lts = explore(gen, 1000000, 100000);
        auto comp = fully_deterministic_computation(lts, lts.initial);
        REQUIRE(comp.has_value());
        StateId end = comp->path.back();
        // New head is 1 (the only right symbol), queue holds @ #.
        CHECK(lts.state_labels[end].find("H_1") != std::string::npos);
        CHECK(lts.state_labels[end].find("@ #") != std::string::npos);
    }
}

TEST_CASE("tape theorem at a small horizon") {
    std::vector<std::string> data{"_", "1"};
    RecSpec controller = tape_controller_spec(data);
    auto queue = queue_infinite_gen_from(queue_alphabet_for(data), {"@"});
    auto finite_side = parallel_compose(lts_of(controller, name_ref("H__")), queue, {"i", "o"});
    auto infinite_side = tape_infinite_gen(data);
    FiniteLts l = explore(infinite_side, 4, 100000);
    FiniteLts r = explore(finite_side, 4, 100000);
    CHECK(check_dp_branching(l, r, FrontierMode::Pessimistic).related);
}

TEST_CASE("control equations") {
    Rtm m = ab_cycle_machine();
    // Two states over the one-symbol tape alphabet: one equation each.
    RecSpec fc = finite_control_spec(m);
    CHECK(fc.equations.size() == 2);
    CHECK(fc.equations.count("C_p__") == 1);
    CHECK(fc.equations.count("C_q__") == 1);
    // Non-final state without matching rules becomes deadlock.
    Rtm dead;
    dead.states = {"s"};
    dead.initial = "s";
    RecSpec fcd = finite_control_spec(dead);
    CHECK(print_expr(fcd.equations.at("C_s__")) == "0");
    // Each control step emits w!, then m!, then reads r?.
    PExpr body = fc.equations.at("C_p__");
    PExpr chain = body;  // single rule, not final: the summand itself
    REQUIRE(chain->kind == ProcessExpr::Kind::Prefix);
    CHECK(chain->action == Action::plain("a"));
    CHECK(chain->left->action == Action::send("w", "_"));
    CHECK(chain->left->left->action == Action::send("m", "R"));
    CHECK(chain->left->left->left->left->action == Action::recv("r", "_"));
}

TEST_CASE("compilation rejects reserved channels and markers") {
    Rtm m;
    m.states = {"s"};
    m.initial = "s";
    m.rules = {{"s", "_", Action::send("r", "1"), "_", 'R', "s"}};
    CHECK_THROWS_WITH(compile_rtm(m), doctest::Contains("reserved channel"));
    Rtm bad;
    bad.states = {"s"};
    bad.initial = "s";
    bad.alphabet = {"@"};
    CHECK_THROWS_WITH(compile_rtm(bad), doctest::Contains("reserved marker"));
}

TEST_CASE("compiling the empty machine yields a single final behaviour") {
    auto [spec, root] = compile_rtm(empty_final_machine());
    FiniteLts compiled = explore(lts_of(spec, root), 10, 10000);
    FiniteLts machine = explore(semantics(empty_final_machine()), 10, 10);
    CHECK(compiled.frontier.empty());
    CHECK(check_dp_branching(machine, compiled).related);
}

TEST_CASE("compiled fixture emits its trace") {
    auto [spec, root] = compile_rtm(fig1_right());
    FiniteLts compiled = explore(lts_of(spec, root), 2, 100000);
    auto traces = observable_traces(compiled, 2);
    CHECK(traces.count({Action::send("i", "1"), Action::send("i", "#")}) == 1);
}

TEST_CASE("compiled two-rule machine matches its semantics exactly") {
    Rtm m = two_rule_machine();
    auto [spec, root] = compile_rtm(m);
    FiniteLts compiled = explore(lts_of(spec, root), 5, 100000);
    FiniteLts machine = explore(semantics(m), 5, 1000);
    CHECK(compiled.frontier.empty());
    CHECK(machine.frontier.empty());
    CHECK(check_dp_branching(machine, compiled, FrontierMode::Pessimistic).related);
}

TEST_CASE("compiled cyclic machine is never refuted under the optimistic reading") {
    Rtm m = ab_cycle_machine();
    auto [spec, root] = compile_rtm(m);
    FiniteLts compiled = explore(lts_of(spec, root), 4, 100000);
    FiniteLts machine = explore(semantics(m), 4, 1000);
    CHECK(check_dp_branching(machine, compiled, FrontierMode::Optimistic).related);
}
