#include "rtmkit/ptm.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rtmkit/formats.hpp"
#include "rtmkit/rtm.hpp"

namespace rtmkit {

namespace {

std::string join_word(const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += w[i];
    }
    return out;
}

Word split_word(const std::string& text) {
    std::istringstream in(text);
    Word w;
    std::string tok;
    while (in >> tok) w.push_back(tok);
    return w;
}

}  // namespace

void Ptm::validate() const {
    std::set<std::string> known(states.begin(), states.end());
    if (known.size() != states.size()) throw std::runtime_error("duplicate state name");
    if (!known.count(initial)) throw std::runtime_error("initial state not declared");
    for (const auto& h : halting)
        if (!known.count(h)) throw std::runtime_error("halting state not declared");
    for (const auto& r : rules) {
        if (!known.count(r.state) || !known.count(r.next))
            throw std::runtime_error("rule endpoint not declared");
        if (r.work_move != 'L' && r.work_move != 'R' && r.work_move != 'S')
            throw std::runtime_error("work move must be L, R or S");
        if (r.read_input == kEndOfInput && r.advance_input)
            throw std::runtime_error("cannot advance past the end of the input");
    }
}

namespace {

struct PtmConfig {
    std::string state;
    std::size_t input_pos = 0;
    Word work;  // without trailing blanks
    std::size_t head = 0;

    auto operator<=>(const PtmConfig&) const = default;
};

Word trim_work(Word w) {
    while (!w.empty() && w.back() == kBlank) w.pop_back();
    return w;
}

std::vector<PtmConfig> ptm_successors(const Ptm& m, const PtmConfig& c, const Word& input,
                                      std::vector<std::string>* emits) {
    std::vector<PtmConfig> result;
    const std::string in_sym = c.input_pos < input.size() ? input[c.input_pos] : kEndOfInput;
    const std::string work_sym = c.head < c.work.size() ? c.work[c.head] : kBlank;
    for (const auto& r : m.rules) {
        if (r.state != c.state || r.read_input != in_sym || r.read_work != work_sym) continue;
        PtmConfig next = c;
        next.state = r.next;
        if (r.advance_input) ++next.input_pos;
        if (next.head >= next.work.size()) next.work.resize(next.head + 1, kBlank);
        next.work[next.head] = r.write_work;
        if (r.work_move == 'L') {
            if (next.head > 0) --next.head;  // semi-infinite: clamp at the left end
        } else if (r.work_move == 'R') {
            ++next.head;
        }
        next.work = trim_work(next.work);
        result.push_back(next);
        if (emits) emits->push_back(r.emit);
    }
    return result;
}

}  // namespace

std::set<Macrostep> macrosteps(const Ptm& m, const Word& work, const Word& input, int fuel) {
    if (fuel < 1) throw std::invalid_argument("macrosteps: fuel must be >= 1");
    m.validate();
    std::set<Macrostep> result;
    PtmConfig start{m.initial, 0, trim_work(work), 0};

    // Pass one, output-blind: reachable configuration graph within fuel,
    // cycle detection, fuel-exhaustion flag.
    std::map<PtmConfig, int> ids;
    std::vector<PtmConfig> configs;
    std::vector<std::vector<int>> succ;
    std::deque<std::pair<int, int>> work_q;  // (id, depth)
    bool fuel_out = false;
    auto intern = [&](const PtmConfig& c) {
        auto it = ids.find(c);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(configs.size());
        ids.emplace(c, id);
        configs.push_back(c);
        succ.emplace_back();
        return id;
    };
    intern(start);
    work_q.push_back({0, 0});
    std::vector<bool> expanded;
    expanded.push_back(false);
    std::size_t qi = 0;
    while (qi < work_q.size()) {
        auto [id, depth] = work_q[qi++];
        if (expanded[id]) continue;
        if (depth >= fuel || static_cast<int>(configs.size()) > fuel) {
            fuel_out = true;
            continue;
        }
        expanded[id] = true;
        const PtmConfig c = configs[id];
        if (m.halting.count(c.state)) continue;  // macrostep ends here
        for (const auto& next : ptm_successors(m, c, input, nullptr)) {
            int nid = intern(next);
            while (expanded.size() < configs.size()) expanded.push_back(false);
            succ[id].push_back(nid);
            work_q.push_back({nid, depth + 1});
        }
    }
    // Any cycle among the expanded configurations witnesses divergence.
    {
        std::vector<int> colour(configs.size(), 0);
        bool cycle = false;
        for (std::size_t root = 0; root < configs.size() && !cycle; ++root) {
            if (colour[root]) continue;
            std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(root), 0}};
            colour[root] = 1;
            while (!stack.empty() && !cycle) {
                auto& [v, i] = stack.back();
                if (i < succ[v].size()) {
                    int w = succ[v][i++];
                    if (colour[w] == 1) {
                        cycle = true;
                    } else if (colour[w] == 0) {
                        colour[w] = 1;
                        stack.push_back({w, 0});
                    }
                } else {
                    colour[v] = 2;
                    stack.pop_back();
                }
            }
        }
        if (cycle) {
            Macrostep div;
            div.input = input;
            div.diverges = true;
            result.insert(div);
        } else if (fuel_out) {
            Macrostep div;
            div.input = input;
            div.diverges = true;
            div.fuel_exhausted = true;
            result.insert(div);
        }
    }

    // Pass two, with outputs: halting results. Bounded by the same fuel.
    std::set<std::pair<PtmConfig, Word>> seen;
    std::deque<std::pair<PtmConfig, Word>> q;
    q.push_back({start, {}});
    seen.insert(q.front());
    int steps_budget = fuel;
    while (!q.empty()) {
        auto [c, out] = q.front();
        q.pop_front();
        if (m.halting.count(c.state)) {
            Macrostep ms;
            ms.input = input;
            ms.work = c.work;
            ms.output = out;
            result.insert(ms);
            continue;
        }
        if (static_cast<int>(seen.size()) > steps_budget) {
            bool have_div = std::any_of(result.begin(), result.end(),
                                        [](const Macrostep& ms) { return ms.diverges; });
            if (!have_div) {
                Macrostep div;
                div.input = input;
                div.diverges = true;
                div.fuel_exhausted = true;
                result.insert(div);
            }
            break;
        }
        std::vector<std::string> emits;
        auto nexts = ptm_successors(m, c, input, &emits);
        for (std::size_t i = 0; i < nexts.size(); ++i) {
            Word next_out = out;
            if (!emits[i].empty()) next_out.push_back(emits[i]);
            auto key = std::make_pair(nexts[i], next_out);
            if (seen.insert(key).second) q.push_back(key);
        }
    }
    return result;
}

void Its::validate() const {
    for (const auto& e : edges) {
        if (e.src < 0 || e.src >= static_cast<int>(state_names.size()) || e.dst < 0 ||
            e.dst >= static_cast<int>(state_names.size()))
            throw std::runtime_error("ITS edge endpoint out of range");
        if (e.mu && e.dst != infinity)
            throw std::runtime_error("divergence edge must target the divergence state");
        if (!e.mu && e.dst == infinity && infinity >= 0)
            throw std::runtime_error("edges into the divergence state must carry mu");
        if (e.src == infinity)
            throw std::runtime_error("the divergence state has no outgoing edges");
        if (e.mu && !e.output.empty())
            throw std::runtime_error("divergence edges carry no output word");
    }
}

Its its_of_ptm(const Ptm& m, const std::vector<std::string>& input_alphabet, int max_input_len,
               int fuel) {
    if (max_input_len < 0 || fuel < 1) throw std::invalid_argument("its_of_ptm: bad bounds");
    m.validate();

    std::vector<Word> inputs{{}};
    {
        std::vector<Word> layer{{}};
        for (int len = 1; len <= max_input_len; ++len) {
            std::vector<Word> next;
            for (const auto& w : layer)
                for (const auto& d : input_alphabet) {
                    Word grown = w;
                    grown.push_back(d);
                    next.push_back(grown);
                }
            inputs.insert(inputs.end(), next.begin(), next.end());
            layer = std::move(next);
        }
    }

    Its its;
    its.alphabet = input_alphabet;
    std::map<std::string, int> ids;
    auto intern = [&](const Word& w) {
        std::string name = join_word(w);
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(its.state_names.size());
        ids.emplace(name, id);
        its.state_names.push_back(name);
        return id;
    };
    intern({});
    std::deque<int> queue{0};
    std::set<int> processed;
    bool needs_infinity = false;
    std::vector<ItsEdge> edges;
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        if (!processed.insert(id).second) continue;
        Word w = split_word(its.state_names[id]);
        for (const auto& wi : inputs) {
            for (const auto& ms : macrosteps(m, w, wi, fuel)) {
                if (ms.diverges) {
                    needs_infinity = true;
                    edges.push_back({id, wi, true, {}, -1});
                } else {
                    int dst = intern(ms.work);
                    if (!processed.count(dst)) queue.push_back(dst);
                    edges.push_back({id, wi, false, ms.output, dst});
                }
            }
        }
    }
    if (needs_infinity) {
        its.infinity = static_cast<int>(its.state_names.size());
        its.state_names.push_back("<infinity>");
        for (auto& e : edges)
            if (e.mu) e.dst = its.infinity;
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    its.edges = std::move(edges);
    its.validate();
    return its;
}

LtsGenerator lts_of_its(const Its& its) {
    its.validate();
    LtsGenerator gen;
    gen.initial = "i " + std::to_string(its.initial);
    auto edges = its.edges;
    auto alphabet = its.alphabet;
    gen.out = [edges, alphabet](const State& s) {
        std::vector<Step> steps;
        auto toks = split_word(s);
        const std::string mode = toks[0];
        int idx = std::stoi(toks[1]);
        Word buffer(toks.begin() + 2, toks.end());
        if (mode == "i") {
            for (const auto& d : alphabet) {
                Word grown = buffer;
                grown.push_back(d);
                steps.push_back({Action::recv("i", d),
                                 "i " + std::to_string(idx) +
                                     (grown.empty() ? "" : " " + join_word(grown))});
            }
            for (const auto& e : edges) {
                if (e.src != idx || e.input != buffer) continue;
                if (e.mu)
                    steps.push_back({Action::recv("i", "#"), "omu " + std::to_string(e.dst)});
                else
                    steps.push_back({Action::recv("i", "#"),
                                     "o " + std::to_string(e.dst) +
                                         (e.output.empty() ? "" : " " + join_word(e.output))});
            }
        } else if (mode == "o") {
            if (!buffer.empty()) {
                Word rest(buffer.begin() + 1, buffer.end());
                steps.push_back({Action::send("o", buffer.front()),
                                 "o " + std::to_string(idx) +
                                     (rest.empty() ? "" : " " + join_word(rest))});
            } else {
                steps.push_back({Action::send("o", "#"), "i " + std::to_string(idx)});
            }
        } else {  // omu: the divergence loop
            steps.push_back({Action::tau(), s});
        }
        return canonical_steps(std::move(steps));
    };
    gen.fin = [](const State&) { return false; };
    return gen;
}

Its its_of_lts(const FiniteLts& l) {
    for (const auto& t : l.transitions) {
        bool ok = t.action.is_tau() ||
                  (t.action.kind == ActionKind::Recv && t.action.channel == "i") ||
                  (t.action.kind == ActionKind::Send && t.action.channel == "o");
        if (!ok)
            throw std::runtime_error("action '" + t.action.label() +
                                     "' outside the i?/o!/tau shape");
    }
    auto adj = adjacency(l);

    // tau-divergence: states that can reach a tau-cycle by tau-steps.
    std::vector<bool> tau_diverges(l.num_states(), false);
    {
        std::vector<bool> alive(l.num_states(), true);
        bool changed = true;
        while (changed) {
            changed = false;
            for (StateId v = 0; v < l.num_states(); ++v) {
                if (!alive[v]) continue;
                bool has = false;
                for (const auto& [a, w] : adj[v])
                    if (a.is_tau() && alive[w]) has = true;
                if (!has) {
                    alive[v] = false;
                    changed = true;
                }
            }
        }
        tau_diverges = alive;
    }

    // Enumerate output phases: from a state, all o!-words ending in o!#.
    struct Extracted {
        Word output;
        StateId dst;
    };
    auto outputs_from = [&](StateId start) {
        std::vector<Extracted> outs;
        std::deque<std::pair<StateId, Word>> q{{start, {}}};
        std::set<std::pair<StateId, Word>> seen{{start, {}}};
        while (!q.empty()) {
            auto [s, word] = q.front();
            q.pop_front();
            if (word.size() > l.num_states())
                throw std::runtime_error("output cycle: the induced ITS is infinite");
            for (const auto& [a, t] : adj[s]) {
                if (a.kind != ActionKind::Send) continue;
                if (a.datum == "#") {
                    outs.push_back({word, t});
                } else {
                    Word grown = word;
                    grown.push_back(a.datum);
                    if (seen.insert({t, grown}).second) q.push_back({t, grown});
                }
            }
        }
        return outs;
    };

    std::map<StateId, int> ids;
    Its its;
    auto intern = [&](StateId s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(its.state_names.size());
        ids.emplace(s, id);
        its.state_names.push_back("s" + std::to_string(s));
        return id;
    };
    intern(l.initial);
    std::set<std::string> data;
    std::deque<StateId> queue{l.initial};
    std::set<StateId> processed;
    bool needs_infinity = false;
    std::vector<ItsEdge> edges;
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        if (!processed.insert(s).second) continue;
        int sid = ids.at(s);
        // Input phases: all i?-words ending in i?#.
        std::deque<std::pair<StateId, Word>> q{{s, {}}};
        std::set<std::pair<StateId, Word>> seen{{s, {}}};
        while (!q.empty()) {
            auto [at, word] = q.front();
            q.pop_front();
            if (word.size() > l.num_states())
                throw std::runtime_error("input cycle: the induced ITS is infinite");
            for (const auto& [a, t] : adj[at]) {
                if (a.kind != ActionKind::Recv) continue;
                if (a.datum == "#") {
                    for (const auto& ext : outputs_from(t)) {
                        int dst = intern(ext.dst);
                        edges.push_back({sid, word, false, ext.output, dst});
                        for (const auto& d : ext.output) data.insert(d);
                        if (!processed.count(ext.dst)) queue.push_back(ext.dst);
                    }
                    if (tau_diverges[t]) {
                        needs_infinity = true;
                        edges.push_back({sid, word, true, {}, -1});
                    }
                } else {
                    Word grown = word;
                    grown.push_back(a.datum);
                    data.insert(a.datum);
                    if (seen.insert({t, grown}).second) q.push_back({t, grown});
                }
            }
        }
    }
    if (needs_infinity) {
        its.infinity = static_cast<int>(its.state_names.size());
        its.state_names.push_back("<infinity>");
        for (auto& e : edges)
            if (e.mu) e.dst = its.infinity;
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    its.edges = std::move(edges);
    its.alphabet.assign(data.begin(), data.end());
    its.validate();
    return its;
}

bool its_isomorphic(const Its& a, const Its& b) {
    if (a.state_names.size() != b.state_names.size()) return false;
    if ((a.infinity >= 0) != (b.infinity >= 0)) return false;
    if (a.edges.size() != b.edges.size()) return false;
    int n = static_cast<int>(a.state_names.size());

    // Edge labels as comparable keys.
    using Label = std::tuple<Word, bool, Word>;
    auto out_labels = [](const Its& its, int s) {
        std::vector<std::pair<Label, int>> out;
        for (const auto& e : its.edges)
            if (e.src == s) out.push_back({{e.input, e.mu, e.output}, e.dst});
        std::sort(out.begin(), out.end());
        return out;
    };
    std::vector<std::vector<std::pair<Label, int>>> out_a(n), out_b(n);
    std::vector<std::multiset<Label>> in_a(n), in_b(n);
    for (int s = 0; s < n; ++s) {
        out_a[s] = out_labels(a, s);
        out_b[s] = out_labels(b, s);
    }
    for (const auto& e : a.edges) in_a[e.dst].insert({e.input, e.mu, e.output});
    for (const auto& e : b.edges) in_b[e.dst].insert({e.input, e.mu, e.output});

    std::vector<int> map_ab(n, -1), map_ba(n, -1);
    auto compatible = [&](int x, int y) {
        if (x == a.initial && y != b.initial) return false;
        if (y == b.initial && x != a.initial) return false;
        if ((x == a.infinity) != (y == b.infinity)) return false;
        if (out_a[x].size() != out_b[y].size()) return false;
        if (in_a[x] != in_b[y]) return false;
        std::multiset<Label> la, lb;
        for (const auto& [l, d] : out_a[x]) la.insert(l);
        for (const auto& [l, d] : out_b[y]) lb.insert(l);
        return la == lb;
    };

    // Backtracking over states in a fixed order; edge consistency is checked
    // against already-mapped endpoints.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    auto consistent = [&]() {
        for (const auto& e : a.edges) {
            if (map_ab[e.src] < 0 || map_ab[e.dst] < 0) continue;
            bool found = false;
            for (const auto& f : b.edges)
                if (f.src == map_ab[e.src] && f.dst == map_ab[e.dst] && f.input == e.input &&
                    f.mu == e.mu && f.output == e.output) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
        return true;
    };
    auto search = [&](auto&& self, int k) -> bool {
        if (k == n) return consistent();
        int x = order[k];
        for (int y = 0; y < n; ++y) {
            if (map_ba[y] >= 0 || !compatible(x, y)) continue;
            map_ab[x] = y;
            map_ba[y] = x;
            if (consistent() && self(self, k + 1)) return true;
            map_ab[x] = -1;
            map_ba[y] = -1;
        }
        return false;
    };
    return search(search, 0);
}

Ptm parse_ptm(const std::string& text) {
    Ptm m;
    bool saw_states = false, saw_initial = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks[0] == "states:") {
            m.states.assign(toks.begin() + 1, toks.end());
            saw_states = true;
        } else if (toks[0] == "initial:") {
            if (toks.size() != 2) throw ParseError("initial: expects one state", lineno);
            m.initial = toks[1];
            saw_initial = true;
        } else if (toks[0] == "final:") {
            m.halting.insert(toks.begin() + 1, toks.end());
        } else if (toks[0] == "alphabet:") {
            m.alphabet.assign(toks.begin() + 1, toks.end());
        } else if (toks[0] == "rule") {
            if (toks.size() != 10 || toks[4] != "->")
                throw ParseError(
                    "rule expects: rule <state> <in> <work> -> <state> <adv|stay> <write> <L|R|S> "
                    "<emit|->",
                    lineno);
            PtmRule r;
            r.state = toks[1];
            r.read_input = toks[2];
            r.read_work = toks[3];
            r.next = toks[5];
            if (toks[6] != "adv" && toks[6] != "stay")
                throw ParseError("expected adv or stay", lineno);
            r.advance_input = toks[6] == "adv";
            r.write_work = toks[7];
            if (toks[8] != "L" && toks[8] != "R" && toks[8] != "S")
                throw ParseError("work move must be L, R or S", lineno);
            r.work_move = toks[8][0];
            r.emit = toks[9] == kNoEmit ? "" : toks[9];
            m.rules.push_back(r);
        } else {
            throw ParseError("unknown directive '" + toks[0] + "'", lineno);
        }
    }
    if (!saw_states || !saw_initial) throw ParseError("missing states:/initial:", 1);
    try {
        m.validate();
    } catch (const std::exception& e) {
        throw ParseError(e.what(), 1);
    }
    return m;
}

std::string write_ptm(const Ptm& m) {
    std::ostringstream out;
    out << "states:";
    for (const auto& s : m.states) out << ' ' << s;
    out << "\ninitial: " << m.initial << "\nfinal:";
    for (const auto& s : m.halting) out << ' ' << s;
    out << "\nalphabet:";
    for (const auto& s : m.alphabet) out << ' ' << s;
    out << '\n';
    for (const auto& r : m.rules)
        out << "rule " << r.state << ' ' << r.read_input << ' ' << r.read_work << " -> " << r.next
            << ' ' << (r.advance_input ? "adv" : "stay") << ' ' << r.write_work << ' '
            << r.work_move << ' ' << (r.emit.empty() ? kNoEmit : r.emit) << '\n';
    return out.str();
}

}  // namespace rtmkit
