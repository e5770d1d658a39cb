#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rtmkit/bisim.hpp"
#include "rtmkit/calculus.hpp"
#include "rtmkit/compiler.hpp"
#include "rtmkit/formats.hpp"
#include "rtmkit/godel.hpp"
#include "rtmkit/ptm.hpp"
#include "rtmkit/rtm.hpp"
#include "rtmkit/simgen.hpp"

namespace py = pybind11;
using namespace rtmkit;

namespace {

FrontierMode mode_of(const std::string& name) {
    if (name == "pessimistic") return FrontierMode::Pessimistic;
    if (name == "optimistic") return FrontierMode::Optimistic;
    throw std::invalid_argument("frontier mode must be 'pessimistic' or 'optimistic'");
}

py::dict verdict_dict(const BisimVerdict& v) {
    py::dict d;
    d["related"] = v.related;
    if (v.related) {
        py::list pairs;
        for (const auto& [a, b] : v.witness.pairs) pairs.append(py::make_tuple(a, b));
        d["witness"] = pairs;
    } else {
        d["counterexample"] = py::make_tuple(v.counterexample->left, v.counterexample->right,
                                             v.counterexample->clause);
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(rtmkit, m) {
    m.doc() = "reactive Turing machine toolkit";

    py::class_<FiniteLts>(m, "FiniteLts")
        .def_property_readonly("num_states",
                               [](const FiniteLts& l) { return l.num_states(); })
        .def_readonly("initial", &FiniteLts::initial)
        .def_property_readonly("finals",
                               [](const FiniteLts& l) {
                                   return std::vector<StateId>(l.finals.begin(), l.finals.end());
                               })
        .def_property_readonly("frontier",
                               [](const FiniteLts& l) {
                                   return std::vector<StateId>(l.frontier.begin(),
                                                               l.frontier.end());
                               })
        .def_property_readonly("state_labels",
                               [](const FiniteLts& l) { return l.state_labels; })
        .def_property_readonly("transitions",
                               [](const FiniteLts& l) {
                                   py::list out;
                                   for (const auto& t : l.transitions)
                                       out.append(py::make_tuple(t.src, t.action.label(), t.dst));
                                   return out;
                               })
        .def("__str__", [](const FiniteLts& l) { return write_lts(l); });

    py::class_<LtsGenerator>(m, "LtsGenerator")
        .def_property_readonly("initial", [](const LtsGenerator& g) { return g.initial; })
        .def("out",
             [](const LtsGenerator& g, const std::string& state) {
                 py::list steps;
                 for (const auto& s : g.out(state))
                     steps.append(py::make_tuple(s.action.label(), s.target));
                 return steps;
             })
        .def("fin", [](const LtsGenerator& g, const std::string& state) { return g.fin(state); });

    py::class_<Rtm>(m, "Rtm")
        .def_property_readonly("states", [](const Rtm& r) { return r.states; })
        .def_property_readonly("initial", [](const Rtm& r) { return r.initial; })
        .def_property_readonly("num_rules", [](const Rtm& r) { return r.rules.size(); })
        .def("__str__", [](const Rtm& r) { return write_rtm(r); });

    m.def("explore", &explore, py::arg("generator"), py::arg("depth"), py::arg("states"));
    m.def("branching_degree", &branching_degree);
    m.def("is_deterministic", &is_deterministic);
    m.def("parallel_compose",
          [](const LtsGenerator& a, const LtsGenerator& b, const std::set<std::string>& channels) {
              return parallel_compose(a, b, channels);
          });
    m.def("observable_traces", [](const FiniteLts& l, int max_len) {
        py::list out;
        for (const auto& trace : observable_traces(l, max_len)) {
            py::list t;
            for (const auto& a : trace) t.append(a.label());
            out.append(t);
        }
        return out;
    });

    m.def("parse_rtm", &parse_rtm);
    m.def("write_rtm", &write_rtm);
    m.def("parse_lts", &parse_lts);
    m.def("write_lts", &write_lts);
    m.def("semantics", &semantics);
    m.def("rtm_is_deterministic", &rtm_is_deterministic);
    m.def("fig1_left", &fig1_left);
    m.def("fig1_right", &fig1_right);
    m.def("counterexample_rtm", &counterexample_rtm);
    m.def("emitter", &emitter);
    m.def("godel_encode", [](const Rtm& r) {
        return py::cast(godel_encode_str(r)).attr("__int__")();
    });
    m.def("godel_decode", [](const py::int_& code) {
        return godel_decode_str(py::str(code).cast<std::string>());
    });

    m.def(
        "check_branching",
        [](const FiniteLts& a, const FiniteLts& b, const std::string& frontier, bool witness) {
            return verdict_dict(check_branching(a, b, mode_of(frontier), witness));
        },
        py::arg("left"), py::arg("right"), py::arg("frontier") = "pessimistic",
        py::arg("witness") = true);
    m.def(
        "check_dp_branching",
        [](const FiniteLts& a, const FiniteLts& b, const std::string& frontier, bool witness) {
            return verdict_dict(check_dp_branching(a, b, mode_of(frontier), witness));
        },
        py::arg("left"), py::arg("right"), py::arg("frontier") = "pessimistic",
        py::arg("witness") = true);
    m.def("brute_force_bisim", [](const FiniteLts& a, const FiniteLts& b, bool divergence) {
        return verdict_dict(brute_force_bisim(a, b, divergence));
    });
    m.def("verify_relation",
          [](const std::vector<std::pair<StateId, StateId>>& pairs, const FiniteLts& a,
             const FiniteLts& b, bool divergence) -> py::object {
              Relation r;
              r.pairs.insert(pairs.begin(), pairs.end());
              auto v = verify_relation(r, a, b, divergence);
              if (!v) return py::none();
              return py::make_tuple(v->left, v->right, v->clause);
          });

    py::class_<RecSpec>(m, "RecSpec");
    m.def("parse_tcp", [](const std::string& text) {
        auto [spec, root] = parse_tcp(text);
        return py::make_tuple(spec, print_expr(root));
    });
    m.def("write_tcp", [](const RecSpec& spec, const std::string& root) {
        return write_tcp(spec, parse_expr_text(root));
    });
    m.def("lts_of", [](const RecSpec& spec, const std::string& root) {
        return lts_of(spec, parse_expr_text(root));
    });

    m.def("spec_infinite_of_rtm", &spec_infinite_of_rtm);
    m.def("queue_finite_spec", &queue_finite_spec);
    m.def("queue_infinite_gen", &queue_infinite_gen);
    m.def("tape_infinite_gen", &tape_infinite_gen);
    m.def("tape_controller_spec", &tape_controller_spec);
    m.def("finite_control_spec", &finite_control_spec);
    m.def("compile_rtm", [](const Rtm& r) {
        auto [spec, root] = compile_rtm(r);
        return write_tcp(spec, root);
    });

    m.def("menu_count", &menu_count);
    m.def("build_simulator", &build_simulator);
    m.def("simulate_parallel", &simulate_parallel);

    py::class_<Its>(m, "Its")
        .def_property_readonly("num_states",
                               [](const Its& i) { return i.state_names.size(); })
        .def_readonly("infinity", &Its::infinity)
        .def_property_readonly("edges", [](const Its& i) {
            py::list out;
            for (const auto& e : i.edges)
                out.append(py::make_tuple(e.src, e.input, e.mu, e.output, e.dst));
            return out;
        });
    m.def("parse_ptm", &parse_ptm);
    m.def("write_ptm", &write_ptm);
    m.def("its_of_ptm", &its_of_ptm);
    m.def("lts_of_its", &lts_of_its);
    m.def("its_of_lts", &its_of_lts);
    m.def("its_isomorphic", &its_isomorphic);
}
