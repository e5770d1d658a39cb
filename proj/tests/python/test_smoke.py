import rtmkit


def test_fixture_exploration_and_traces():
    right = rtmkit.fig1_right()
    lts = rtmkit.explore(rtmkit.semantics(right), 8, 1000)
    assert lts.num_states > 5
    traces = rtmkit.observable_traces(lts, 3)
    assert ["i!1", "i!#", "i!1"] in traces
    assert rtmkit.is_deterministic(lts)


def test_bisim_verdicts():
    a = rtmkit.explore(rtmkit.semantics(rtmkit.fig1_right()), 6, 1000)
    b = rtmkit.explore(rtmkit.semantics(rtmkit.fig1_right()), 6, 1000)
    verdict = rtmkit.check_dp_branching(a, b)
    assert verdict["related"]
    assert (a.initial, b.initial) in set(verdict["witness"])

    left = rtmkit.explore(rtmkit.semantics(rtmkit.fig1_left()), 2, 1000)
    verdict = rtmkit.check_branching(left, a)
    assert not verdict["related"]
    assert verdict["counterexample"][2] in range(1, 7)


def test_compile_and_compare():
    m = rtmkit.parse_rtm(
        "states: s\ninitial: s\nfinal: s\nalphabet:\n"
    )
    text = rtmkit.compile_rtm(m)
    spec, root = rtmkit.parse_tcp(text)
    compiled = rtmkit.explore(rtmkit.lts_of(spec, root), 10, 10000)
    machine = rtmkit.explore(rtmkit.semantics(m), 10, 10)
    assert rtmkit.check_dp_branching(machine, compiled)["related"]


def test_simulator_generation():
    lts = rtmkit.parse_lts(
        'des (0, 2, 3)\n(0, "a", 1)\n(1, "b", 2)\nfinal: 2\nfrontier:\n'
    )
    sim = rtmkit.build_simulator(lts, 2)
    fragment = rtmkit.explore(rtmkit.semantics(sim), 1000000, 100000)
    assert rtmkit.check_dp_branching(lts, fragment)["related"]
    assert rtmkit.rtm_is_deterministic(sim)


def test_godel_roundtrip():
    m = rtmkit.fig1_right()
    code = rtmkit.godel_encode(m)
    assert isinstance(code, int) and code > 0
    back = rtmkit.godel_decode(code)
    assert rtmkit.godel_encode(back) == code


def test_ptm_roundtrip():
    text = (
        "states: run stop\n"
        "initial: run\n"
        "final: stop\n"
        "alphabet: a\n"
        "rule run a _ -> run adv _ S a\n"
        "rule run $ _ -> stop stay _ S -\n"
    )
    ptm = rtmkit.parse_ptm(text)
    its = rtmkit.its_of_ptm(ptm, ["a"], 1, 100)
    fragment = rtmkit.explore(rtmkit.lts_of_its(its), 8, 100000)
    assert rtmkit.its_isomorphic(its, rtmkit.its_of_lts(fragment))
