#include "rtmkit/rtm.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rtmkit {

std::string TapeInstance::serialize() const {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ' ';
        if (i == head) out += '^';
        out += cells[i];
    }
    return out;
}

TapeInstance TapeInstance::deserialize(const std::string& text) {
    TapeInstance t;
    t.cells.clear();
    std::istringstream in(text);
    std::string tok;
    std::optional<std::size_t> head;
    while (in >> tok) {
        if (tok[0] == '^') {
            if (head) throw std::runtime_error("not a tape instance: two head markers");
            head = t.cells.size();
            tok = tok.substr(1);
        }
        if (tok.empty()) throw std::runtime_error("not a tape instance: empty cell");
        t.cells.push_back(tok);
    }
    if (!head || t.cells.empty()) throw std::runtime_error("not a tape instance: no head marker");
    t.head = *head;
    return t;
}

TapeInstance normalize(TapeInstance t) {
    if (t.head >= t.cells.size()) throw std::runtime_error("not a tape instance: head out of range");
    std::size_t begin = 0;
    while (begin < t.head && t.cells[begin] == kBlank) ++begin;
    std::size_t end = t.cells.size();
    while (end > t.head + 1 && t.cells[end - 1] == kBlank) --end;
    t.cells = {t.cells.begin() + begin, t.cells.begin() + end};
    t.head -= begin;
    return t;
}

TapeInstance place_left(const std::vector<std::string>& symbols) {
    TapeInstance t;
    if (symbols.empty()) return t;
    t.cells = symbols;
    t.head = symbols.size() - 1;
    return t;
}

TapeInstance place_right(const std::vector<std::string>& symbols) {
    TapeInstance t;
    if (symbols.empty()) return t;
    t.cells = symbols;
    t.head = 0;
    return t;
}

void Rtm::validate() const {
    std::set<std::string> known(states.begin(), states.end());
    if (known.size() != states.size()) throw std::runtime_error("duplicate state name");
    if (!known.count(initial)) throw std::runtime_error("initial state '" + initial + "' not declared");
    for (const auto& f : finals)
        if (!known.count(f)) throw std::runtime_error("final state '" + f + "' not declared");
    for (const auto& r : rules) {
        if (!known.count(r.state)) throw std::runtime_error("rule source '" + r.state + "' not declared");
        if (!known.count(r.next)) throw std::runtime_error("rule target '" + r.next + "' not declared");
        if (r.move != 'L' && r.move != 'R') throw std::runtime_error("rule move must be L or R");
        if (r.action.kind == ActionKind::Frontier) throw std::runtime_error("reserved action in rule");
    }
}

std::string Configuration::serialize() const { return state + " " + tape.serialize(); }

Configuration Configuration::deserialize(const std::string& text) {
    auto space = text.find(' ');
    if (space == std::string::npos) throw std::runtime_error("malformed configuration");
    return {text.substr(0, space), TapeInstance::deserialize(text.substr(space + 1))};
}

bool rtm_is_deterministic(const Rtm& m) {
    for (std::size_t i = 0; i < m.rules.size(); ++i) {
        for (std::size_t j = i + 1; j < m.rules.size(); ++j) {
            const RtmRule& a = m.rules[i];
            const RtmRule& b = m.rules[j];
            if (a.state != b.state || a.read != b.read) continue;
            if (a == b) continue;  // duplicated rule text
            if (a.action == b.action) return false;
            if (a.action.is_tau() || b.action.is_tau()) return false;
        }
    }
    return true;
}

std::vector<std::pair<Action, Configuration>> step(const Rtm& m, const Configuration& c) {
    std::vector<std::pair<Action, Configuration>> result;
    const std::string symbol = c.tape.read();
    std::vector<std::string> left(c.tape.cells.begin(), c.tape.cells.begin() + c.tape.head);
    std::vector<std::string> right(c.tape.cells.begin() + c.tape.head + 1, c.tape.cells.end());
    for (const RtmRule& r : m.rules) {
        if (r.state != c.state || r.read != symbol) continue;
        TapeInstance next;
        if (r.move == 'L') {
            next = place_left(left);
            next.cells.push_back(r.write);
            next.cells.insert(next.cells.end(), right.begin(), right.end());
        } else {
            TapeInstance tail = place_right(right);
            next.cells = left;
            next.cells.push_back(r.write);
            next.head = next.cells.size() + tail.head;
            next.cells.insert(next.cells.end(), tail.cells.begin(), tail.cells.end());
        }
        result.push_back({r.action, {r.next, normalize(next)}});
    }
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second.serialize() < b.second.serialize();
    });
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

LtsGenerator semantics(const Rtm& m) {
    m.validate();
    LtsGenerator gen;
    gen.initial = Configuration{m.initial, TapeInstance{}}.serialize();
    gen.out = [m](const State& s) {
        std::vector<Step> steps;
        for (auto& [a, c] : step(m, Configuration::deserialize(s)))
            steps.push_back({a, c.serialize()});
        return steps;  // step() already emits canonical order
    };
    gen.fin = [m](const State& s) {
        return m.finals.count(Configuration::deserialize(s).state) != 0;
    };
    return gen;
}

Rtm fig1_left() {
    Rtm m;
    m.states = {"in", "back", "even", "odd", "wipe", "put"};
    m.initial = "in";
    m.alphabet = {"1", "#"};
    m.rules = {
        {"in", kBlank, Action::recv("i", "1"), "1", 'R', "in"},
        {"in", kBlank, Action::recv("i", "#"), "#", 'L', "back"},
        {"back", "1", Action::tau(), "1", 'L', "back"},
        {"back", kBlank, Action::tau(), kBlank, 'R', "even"},
        {"even", "1", Action::tau(), "1", 'R', "odd"},
        {"odd", "1", Action::tau(), "1", 'R', "even"},
        {"odd", "#", Action::tau(), kBlank, 'L', "wipe"},
        {"wipe", "1", Action::tau(), kBlank, 'L', "wipe"},
        {"wipe", kBlank, Action::tau(), kBlank, 'R', "in"},
        {"even", "#", Action::tau(), kBlank, 'L', "put"},
        {"put", "1", Action::send("o", "1"), kBlank, 'L', "put"},
        {"put", kBlank, Action::send("o", "#"), kBlank, 'R', "in"},
    };
    m.validate();
    return m;
}

Rtm fig1_right() {
    Rtm m;
    m.states = {"w0", "w1", "w2", "w3"};
    m.initial = "w0";
    m.alphabet = {"1", "#"};
    m.rules = {
        {"w0", kBlank, Action::tau(), "1", 'R', "w1"},
        {"w1", kBlank, Action::tau(), kBlank, 'L', "w2"},
        {"w2", "1", Action::tau(), "1", 'L', "w2"},
        {"w2", kBlank, Action::tau(), kBlank, 'R', "w3"},
        {"w3", "1", Action::send("i", "1"), "1", 'R', "w3"},
        {"w3", kBlank, Action::send("i", "#"), "1", 'R', "w1"},
    };
    m.validate();
    return m;
}

Rtm counterexample_rtm(int branching_bound) {
    if (branching_bound < 1) throw std::invalid_argument("counterexample_rtm: B must be >= 1");
    Rtm m;
    m.states = {"up"};
    m.initial = "up";
    m.finals = {"n0"};
    for (int i = 0; i <= branching_bound + 1; ++i) {
        std::string name = "n" + std::to_string(i);
        m.states.push_back(name);
        m.rules.push_back({"up", kBlank, Action::plain("a"), kBlank, 'R', name});
    }
    m.validate();
    return m;
}

Rtm emitter(unsigned long long code, const std::string& channel) {
    constexpr unsigned long long kMaxEmitterCode = 1'000'000;
    if (code > kMaxEmitterCode) throw std::runtime_error("emitter: code too large to materialise");
    Rtm m;
    m.alphabet = {"1", "[", "]"};
    auto state_name = [](unsigned long long i) { return "e" + std::to_string(i); };
    m.states.push_back("open");
    m.rules.push_back({"open", kBlank, Action::send(channel, "["), kBlank, 'R', state_name(0)});
    for (unsigned long long i = 0; i <= code; ++i) {
        m.states.push_back(state_name(i));
        m.rules.push_back(
            {state_name(i), kBlank, Action::send(channel, "1"), kBlank, 'R', state_name(i + 1)});
    }
    m.states.push_back(state_name(code + 1));
    m.states.push_back("done");
    m.rules.push_back({state_name(code + 1), kBlank, Action::send(channel, "]"), kBlank, 'R', "done"});
    m.initial = "open";
    m.finals = {"done"};
    m.validate();
    return m;
}

}  // namespace rtmkit
