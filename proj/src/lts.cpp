#include "rtmkit/lts.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace rtmkit {

std::vector<Step> canonical_steps(std::vector<Step> steps) {
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    return steps;
}

FiniteLts explore(const LtsGenerator& gen, int depth_bound, int state_bound) {
    if (depth_bound < 0) throw std::invalid_argument("explore: depth_bound must be >= 0");
    if (state_bound < 1) throw std::invalid_argument("explore: state_bound must be >= 1");

    FiniteLts out;
    std::unordered_map<State, StateId> ids;
    std::vector<State> values;
    std::vector<bool> expanded;

    auto intern = [&](const State& s) -> StateId {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        StateId id = static_cast<StateId>(values.size());
        ids.emplace(s, id);
        values.push_back(s);
        expanded.push_back(false);
        if (gen.fin(s)) out.finals.insert(id);
        return id;
    };

    StateId init = intern(gen.initial);
    out.initial = init;

    // Level-synchronised BFS: a level is fully tau-closed before the next
    // (observable) level starts, so the level of a state is its least number
    // of visible actions from the initial state. Expansion stops permanently
    // at the first budget refusal, which keeps explore monotone in both
    // budgets.
    std::deque<StateId> current{init};
    std::deque<StateId> next;
    int level = 0;
    bool stopped = false;
    while (!stopped && (!current.empty() || !next.empty())) {
        if (current.empty()) {
            current.swap(next);
            ++level;
            continue;
        }
        StateId s = current.front();
        current.pop_front();
        if (expanded[s]) continue;
        if (level >= depth_bound || values.size() >= static_cast<std::size_t>(state_bound)) {
            stopped = true;
            break;
        }
        expanded[s] = true;
        for (const Step& step : canonical_steps(gen.out(values[s]))) {
            StateId t = intern(step.target);
            out.transitions.push_back({s, step.action, t});
            if (!expanded[t]) {
                if (step.action.is_tau())
                    current.push_back(t);
                else
                    next.push_back(t);
            }
        }
    }

    out.state_labels = values;
    for (StateId s = 0; s < values.size(); ++s)
        if (!expanded[s]) out.frontier.insert(s);
    std::sort(out.transitions.begin(), out.transitions.end());
    out.transitions.erase(std::unique(out.transitions.begin(), out.transitions.end()),
                          out.transitions.end());
    return out;
}

std::vector<std::vector<std::pair<Action, StateId>>> adjacency(const FiniteLts& lts) {
    std::vector<std::vector<std::pair<Action, StateId>>> adj(lts.num_states());
    for (const Transition& t : lts.transitions) adj[t.src].emplace_back(t.action, t.dst);
    return adj;
}

int branching_degree(const FiniteLts& lts) {
    std::vector<int> degree(lts.num_states(), 0);
    for (const Transition& t : lts.transitions) ++degree[t.src];
    int best = 0;
    for (int d : degree) best = std::max(best, d);
    return best;
}

bool is_deterministic(const FiniteLts& lts) {
    auto adj = adjacency(lts);
    for (const auto& steps : adj) {
        bool has_tau = false;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (steps[i].first.is_tau()) has_tau = true;
            for (std::size_t j = i + 1; j < steps.size(); ++j)
                if (steps[i].first == steps[j].first) return false;
        }
        if (has_tau && steps.size() > 1) return false;
    }
    return true;
}

namespace {

// Pair states are serialized with a length prefix so composition nests.
State pair_state(const State& a, const State& b) {
    return std::to_string(a.size()) + ":" + a + b;
}

std::pair<State, State> split_pair(const State& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw std::runtime_error("malformed product state");
    std::size_t len = std::stoul(s.substr(0, colon));
    std::string rest = s.substr(colon + 1);
    if (len > rest.size()) throw std::runtime_error("malformed product state");
    return {rest.substr(0, len), rest.substr(len)};
}

}  // namespace

LtsGenerator parallel_compose(const LtsGenerator& g1, const LtsGenerator& g2,
                              const std::set<std::string>& channels) {
    LtsGenerator product;
    product.initial = pair_state(g1.initial, g2.initial);
    auto blocked = [channels](const Action& a) {
        return a.is_comm() && channels.count(a.channel) != 0;
    };
    product.out = [g1, g2, blocked](const State& s) {
        auto [s1, s2] = split_pair(s);
        std::vector<Step> o1 = g1.out(s1);
        std::vector<Step> o2 = g2.out(s2);
        std::vector<Step> result;
        for (const Step& a : o1)
            if (!blocked(a.action)) result.push_back({a.action, pair_state(a.target, s2)});
        for (const Step& b : o2)
            if (!blocked(b.action)) result.push_back({b.action, pair_state(s1, b.target)});
        for (const Step& a : o1) {
            if (!blocked(a.action)) continue;
            for (const Step& b : o2) {
                if (!blocked(b.action)) continue;
                bool matched = a.action.channel == b.action.channel &&
                               a.action.datum == b.action.datum &&
                               a.action.kind != b.action.kind;
                if (matched) result.push_back({Action::tau(), pair_state(a.target, b.target)});
            }
        }
        return canonical_steps(std::move(result));
    };
    product.fin = [g1, g2](const State& s) {
        auto [s1, s2] = split_pair(s);
        return g1.fin(s1) && g2.fin(s2);
    };
    return product;
}

std::set<std::vector<Action>> observable_traces(const FiniteLts& lts, int max_len) {
    auto adj = adjacency(lts);
    std::set<std::vector<Action>> traces;
    std::set<std::pair<StateId, std::vector<Action>>> seen;
    std::deque<std::pair<StateId, std::vector<Action>>> work;
    work.push_back({lts.initial, {}});
    seen.insert(work.front());
    while (!work.empty()) {
        auto [s, trace] = work.front();
        work.pop_front();
        traces.insert(trace);
        for (const auto& [a, t] : adj[s]) {
            std::vector<Action> next_trace = trace;
            if (!a.is_tau()) {
                if (static_cast<int>(trace.size()) >= max_len) continue;
                next_trace.push_back(a);
            }
            auto key = std::make_pair(t, next_trace);
            if (seen.insert(key).second) work.push_back(key);
        }
    }
    return traces;
}

LtsGenerator as_generator(const FiniteLts& lts) {
    auto adj = adjacency(lts);
    std::vector<bool> fin(lts.num_states(), false);
    for (StateId s : lts.finals) fin[s] = true;
    LtsGenerator gen;
    gen.initial = std::to_string(lts.initial);
    gen.out = [adj](const State& s) {
        StateId id = static_cast<StateId>(std::stoul(s));
        std::vector<Step> steps;
        for (const auto& [a, t] : adj.at(id)) steps.push_back({a, std::to_string(t)});
        return canonical_steps(std::move(steps));
    };
    gen.fin = [fin](const State& s) { return fin.at(std::stoul(s)); };
    return gen;
}

}  // namespace rtmkit
