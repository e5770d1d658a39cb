#include "rtmkit/bisim.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace rtmkit {

namespace {

constexpr int kTick = -1;  // finality reachable through inert tau
constexpr int kDiv = -2;   // in-block divergence

// Disjoint union of both fragments with the pessimistic frontier transform
// applied, tau-SCCs contracted and inert single-tau chains collapsed.
struct UnionGraph {
    int n = 0;                                          // contracted node count
    std::vector<std::vector<std::pair<int, int>>> out;  // (action code, target), sorted
    std::vector<bool> final_;
    std::vector<bool> divergent;
    std::vector<int> order;  // reverse-topological over tau-edges
    std::vector<int> node_of_original;
    int left_count = 0;  // original states of l1 come first
};

std::vector<std::vector<std::pair<int, int>>> raw_union_edges(const FiniteLts& l1,
                                                              const FiniteLts& l2,
                                                              std::map<Action, int>& codes,
                                                              bool with_probe, int& total) {
    int n1 = static_cast<int>(l1.num_states());
    int n2 = static_cast<int>(l2.num_states());
    total = n1 + n2;
    int sink = -1;
    bool any_frontier = !l1.frontier.empty() || !l2.frontier.empty();
    if (with_probe && any_frontier) sink = total++;

    std::set<Action> actions;
    for (const auto& t : l1.transitions) actions.insert(t.action);
    for (const auto& t : l2.transitions) actions.insert(t.action);
    if (sink >= 0) actions.insert(Action::frontier_probe());
    int next_code = 1;  // 0 is reserved for tau
    codes.clear();
    codes[Action::tau()] = 0;
    for (const auto& a : actions)
        if (!a.is_tau()) codes[a] = next_code++;

    std::vector<std::vector<std::pair<int, int>>> edges(total);
    for (const auto& t : l1.transitions) edges[t.src].emplace_back(codes.at(t.action), t.dst);
    for (const auto& t : l2.transitions)
        edges[n1 + t.src].emplace_back(codes.at(t.action), n1 + t.dst);
    if (sink >= 0) {
        int probe = codes.at(Action::frontier_probe());
        for (StateId s : l1.frontier) edges[s].emplace_back(probe, sink);
        for (StateId s : l2.frontier) edges[n1 + s].emplace_back(probe, sink);
    }
    for (auto& e : edges) {
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
    }
    return edges;
}

// Tarjan over tau-edges only.
std::vector<int> tau_sccs(const std::vector<std::vector<std::pair<int, int>>>& edges, int n,
                          std::vector<bool>& nontrivial) {
    std::vector<int> scc(n, -1), low(n), num(n, -1), stack;
    std::vector<bool> on_stack(n, false);
    int counter = 0, scc_count = 0;
    // Iterative Tarjan to avoid deep recursion on long tau-chains.
    struct Frame {
        int v;
        std::size_t edge;
    };
    for (int root = 0; root < n; ++root) {
        if (num[root] >= 0) continue;
        std::vector<Frame> frames{{root, 0}};
        num[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            bool descended = false;
            while (f.edge < edges[f.v].size()) {
                auto [code, w] = edges[f.v][f.edge++];
                if (code != 0) continue;
                if (num[w] < 0) {
                    num[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[f.v] = std::min(low[f.v], num[w]);
            }
            if (descended) continue;
            if (low[f.v] == num[f.v]) {
                int id = scc_count++;
                int w;
                int members = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    scc[w] = id;
                    ++members;
                } while (w != f.v);
                if (members > 1) nontrivial[id] = true;
            }
            int v = f.v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
    }
    nontrivial.resize(scc_count);
    return scc;
}

UnionGraph build_union(const FiniteLts& l1, const FiniteLts& l2, bool with_probe,
                       std::map<Action, int>& codes) {
    int total = 0;
    auto edges = raw_union_edges(l1, l2, codes, with_probe, total);
    int n1 = static_cast<int>(l1.num_states());

    std::vector<bool> final_raw(total, false);
    for (StateId s : l1.finals) final_raw[s] = true;
    for (StateId s : l2.finals) final_raw[n1 + s] = true;
    if (with_probe) {
        // Frontier finality is beyond the horizon; mask it.
        for (StateId s : l1.frontier) final_raw[s] = false;
        for (StateId s : l2.frontier) final_raw[n1 + s] = false;
    }

    std::vector<bool> self_tau(total, false);
    for (int v = 0; v < total; ++v)
        for (auto [code, w] : edges[v])
            if (code == 0 && w == v) self_tau[v] = true;

    std::vector<bool> nontrivial(total, false);
    std::vector<int> scc = tau_sccs(edges, total, nontrivial);
    int scc_count = static_cast<int>(nontrivial.size());

    std::vector<bool> scc_final(scc_count, false), scc_div(scc_count, false);
    for (int v = 0; v < total; ++v) {
        if (final_raw[v]) scc_final[scc[v]] = true;
        if (self_tau[v]) scc_div[scc[v]] = true;
    }
    for (int c = 0; c < scc_count; ++c)
        if (nontrivial[c]) scc_div[c] = true;

    std::vector<std::vector<std::pair<int, int>>> scc_edges(scc_count);
    for (int v = 0; v < total; ++v)
        for (auto [code, w] : edges[v]) {
            if (code == 0 && scc[v] == scc[w]) continue;  // absorbed by the SCC
            scc_edges[scc[v]].emplace_back(code, scc[w]);
        }
    for (auto& e : scc_edges) {
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
    }

    // Collapse fully deterministic internal steps: a non-final, non-divergent
    // node whose entire behaviour is one tau-step is equivalent to its
    // successor.
    std::vector<int> rep(scc_count, -1);
    auto resolve = [&](auto&& self, int v) -> int {
        if (rep[v] >= 0) return rep[v];
        rep[v] = v;  // guard against unexpected cycles
        if (!scc_final[v] && !scc_div[v] && scc_edges[v].size() == 1 &&
            scc_edges[v][0].first == 0 && scc_edges[v][0].second != v)
            rep[v] = self(self, scc_edges[v][0].second);
        return rep[v];
    };
    for (int v = 0; v < scc_count; ++v) resolve(resolve, v);

    std::vector<int> dense(scc_count, -1);
    int n = 0;
    for (int v = 0; v < scc_count; ++v)
        if (rep[v] == v) dense[v] = n++;

    UnionGraph g;
    g.n = n;
    g.out.assign(n, {});
    g.final_.assign(n, false);
    g.divergent.assign(n, false);
    g.left_count = n1;
    g.node_of_original.assign(total, 0);
    for (int v = 0; v < total; ++v) g.node_of_original[v] = dense[rep[scc[v]]];
    for (int c = 0; c < scc_count; ++c) {
        if (rep[c] != c) continue;
        int v = dense[c];
        g.final_[v] = scc_final[c];
        g.divergent[v] = scc_div[c];
        for (auto [code, w] : scc_edges[c]) {
            int t = dense[rep[w]];
            if (code == 0 && t == v) continue;  // collapsed inert step
            g.out[v].emplace_back(code, t);
        }
        std::sort(g.out[v].begin(), g.out[v].end());
        g.out[v].erase(std::unique(g.out[v].begin(), g.out[v].end()), g.out[v].end());
    }

    // Reverse topological order over tau-edges (acyclic after contraction):
    // successors first, so inert signatures can be inherited in one sweep.
    std::vector<int> indegree(n, 0);
    for (int v = 0; v < n; ++v)
        for (auto [code, w] : g.out[v])
            if (code == 0) ++indegree[w];
    std::deque<int> ready;
    for (int v = 0; v < n; ++v)
        if (indegree[v] == 0) ready.push_back(v);
    std::vector<int> topo;
    topo.reserve(n);
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        topo.push_back(v);
        for (auto [code, w] : g.out[v])
            if (code == 0 && --indegree[w] == 0) ready.push_back(w);
    }
    if (static_cast<int>(topo.size()) != n)
        throw std::logic_error("tau-graph not acyclic after contraction");
    g.order.assign(topo.rbegin(), topo.rend());
    return g;
}

std::vector<int> refine(const UnionGraph& g, bool divergence) {
    std::vector<int> block(g.n, 0);
    int blocks = 1;
    std::vector<std::vector<std::pair<int, int>>> sig(g.n);
    while (true) {
        for (int v : g.order) {
            auto& s = sig[v];
            s.clear();
            if (g.final_[v]) s.emplace_back(kTick, 0);
            if (divergence && g.divergent[v]) s.emplace_back(kDiv, 0);
            for (auto [code, w] : g.out[v]) {
                if (code == 0 && block[w] == block[v])
                    s.insert(s.end(), sig[w].begin(), sig[w].end());
                else
                    s.emplace_back(code, block[w]);
            }
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
        }
        std::map<std::pair<int, std::vector<std::pair<int, int>>>, int> groups;
        for (int v = 0; v < g.n; ++v) groups.emplace(std::make_pair(block[v], sig[v]), 0);
        int next = 0;
        for (auto& [key, id] : groups) id = next++;
        for (int v = 0; v < g.n; ++v) block[v] = groups.at({block[v], sig[v]});
        if (next == blocks) break;
        blocks = next;
    }
    return block;
}

// ---- Honest clause evaluation on the fragments as given (verify_relation,
// ---- counterexample extraction).

struct ClauseContext {
    std::vector<std::vector<std::pair<Action, StateId>>> adj1, adj2;
    std::vector<std::vector<StateId>> tau_reach1, tau_reach2;  // reflexive-transitive
    const FiniteLts* l1 = nullptr;
    const FiniteLts* l2 = nullptr;
};

std::vector<std::vector<StateId>> tau_closure(
    const std::vector<std::vector<std::pair<Action, StateId>>>& adj) {
    std::vector<std::vector<StateId>> reach(adj.size());
    for (StateId s = 0; s < adj.size(); ++s) {
        std::vector<bool> seen(adj.size(), false);
        std::deque<StateId> work{s};
        seen[s] = true;
        while (!work.empty()) {
            StateId v = work.front();
            work.pop_front();
            reach[s].push_back(v);
            for (const auto& [a, w] : adj[v])
                if (a.is_tau() && !seen[w]) {
                    seen[w] = true;
                    work.push_back(w);
                }
        }
        std::sort(reach[s].begin(), reach[s].end());
    }
    return reach;
}

ClauseContext make_context(const FiniteLts& l1, const FiniteLts& l2) {
    ClauseContext ctx;
    ctx.adj1 = adjacency(l1);
    ctx.adj2 = adjacency(l2);
    ctx.tau_reach1 = tau_closure(ctx.adj1);
    ctx.tau_reach2 = tau_closure(ctx.adj2);
    ctx.l1 = &l1;
    ctx.l2 = &l2;
    return ctx;
}

using PairSet = std::set<std::pair<StateId, StateId>>;

bool related(const PairSet& r, StateId a, StateId b) { return r.count({a, b}) != 0; }

// Clause 1 (and 2 with sides swapped): every step of s1 is matched by
// s2 =tau*=> s2'' -(a)-> s2' with s1 R s2'' and s1' R s2'.
bool clause_step(const ClauseContext& ctx, const PairSet& r, bool swapped, StateId s1, StateId s2) {
    const auto& adj_from = swapped ? ctx.adj2 : ctx.adj1;
    const auto& adj_to = swapped ? ctx.adj1 : ctx.adj2;
    const auto& reach_to = swapped ? ctx.tau_reach1 : ctx.tau_reach2;
    auto rel = [&](StateId x, StateId y) { return swapped ? related(r, y, x) : related(r, x, y); };
    for (const auto& [a, t1] : adj_from[s1]) {
        bool matched = false;
        for (StateId mid : reach_to[s2]) {
            if (!rel(s1, mid)) continue;
            if (a.is_tau() && rel(t1, mid)) {
                matched = true;
                break;
            }
            for (const auto& [b, t2] : adj_to[mid]) {
                if (b == a && rel(t1, t2)) {
                    matched = true;
                    break;
                }
            }
            if (matched) break;
        }
        if (!matched) return false;
    }
    return true;
}

// Clause 3 (and 4 swapped): if s1 is final, s2 reaches a related final state
// by tau-steps.
bool clause_term(const ClauseContext& ctx, const PairSet& r, bool swapped, StateId s1, StateId s2) {
    const FiniteLts& from = swapped ? *ctx.l2 : *ctx.l1;
    const FiniteLts& to = swapped ? *ctx.l1 : *ctx.l2;
    const auto& reach_to = swapped ? ctx.tau_reach1 : ctx.tau_reach2;
    auto rel = [&](StateId x, StateId y) { return swapped ? related(r, y, x) : related(r, x, y); };
    if (!from.is_final(s1)) return true;
    for (StateId mid : reach_to[s2])
        if (to.is_final(mid) && rel(s1, mid)) return true;
    return false;
}

// States of Z with an infinite tau-run staying inside Z: those that can reach
// a tau-cycle of Z within Z.
std::vector<bool> divergent_within(const std::vector<std::vector<std::pair<Action, StateId>>>& adj,
                                   const std::vector<bool>& in_z) {
    std::size_t n = adj.size();
    // A state is on such a run iff it has a tau-successor in Z that is on one,
    // computed as the greatest fixpoint of "has a tau-successor in the set".
    std::vector<bool> alive = in_z;
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId v = 0; v < n; ++v) {
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
    return alive;
}

// Clause 5 (and 6 swapped): an infinite tau-sequence from s1 through states
// related to s2 must be answered by s2 =tau+=> s2' related to a state of the
// sequence.
bool clause_div(const ClauseContext& ctx, const PairSet& r, bool swapped, StateId s1, StateId s2) {
    const auto& adj_from = swapped ? ctx.adj2 : ctx.adj1;
    const auto& adj_to = swapped ? ctx.adj1 : ctx.adj2;
    const auto& reach_to = swapped ? ctx.tau_reach1 : ctx.tau_reach2;
    auto rel = [&](StateId x, StateId y) { return swapped ? related(r, y, x) : related(r, x, y); };

    std::vector<bool> in_z(adj_from.size(), false);
    for (StateId x = 0; x < adj_from.size(); ++x) in_z[x] = rel(x, s2);
    if (!in_z[s1]) return true;  // the hypothesis needs s1 related to s2
    std::vector<bool> alive = divergent_within(adj_from, in_z);
    if (!alive[s1]) return true;  // no infinite sequence from s1 within Z

    // States that can occur on such a sequence from s1.
    std::vector<bool> on_run(adj_from.size(), false);
    std::deque<StateId> work{s1};
    on_run[s1] = true;
    while (!work.empty()) {
        StateId v = work.front();
        work.pop_front();
        for (const auto& [a, w] : adj_from[v])
            if (a.is_tau() && alive[w] && !on_run[w]) {
                on_run[w] = true;
                work.push_back(w);
            }
    }
    // tau-plus reachable states of s2: closure after a genuine first step.
    std::vector<bool> plus(adj_to.size(), false);
    for (const auto& [a, w] : adj_to[s2])
        if (a.is_tau())
            for (StateId m : reach_to[w]) plus[m] = true;
    for (StateId mid = 0; mid < adj_to.size(); ++mid) {
        if (!plus[mid]) continue;
        for (StateId x = 0; x < adj_from.size(); ++x)
            if (on_run[x] && rel(x, mid)) return true;
    }
    return false;
}

int first_violated_clause(const ClauseContext& ctx, const PairSet& r, StateId s1, StateId s2,
                          bool divergence) {
    if (!clause_step(ctx, r, false, s1, s2)) return 1;
    if (!clause_step(ctx, r, true, s2, s1)) return 2;
    if (!clause_term(ctx, r, false, s1, s2)) return 3;
    if (!clause_term(ctx, r, true, s2, s1)) return 4;
    if (divergence) {
        if (!clause_div(ctx, r, false, s1, s2)) return 5;
        if (!clause_div(ctx, r, true, s2, s1)) return 6;
    }
    return 0;
}

}  // namespace

std::optional<Violation> verify_relation(const Relation& r, const FiniteLts& l1,
                                         const FiniteLts& l2, bool divergence) {
    for (const auto& [a, b] : r.pairs) {
        if (a >= l1.num_states() || b >= l2.num_states())
            throw std::invalid_argument("relation endpoint out of range");
    }
    ClauseContext ctx = make_context(l1, l2);
    for (const auto& [a, b] : r.pairs) {
        int clause = first_violated_clause(ctx, r.pairs, a, b, divergence);
        if (clause != 0) return Violation{a, b, clause};
    }
    return std::nullopt;
}

namespace {

BisimVerdict refine_check(const FiniteLts& l1, const FiniteLts& l2, bool divergence,
                          bool want_witness) {
    std::map<Action, int> codes;
    UnionGraph g = build_union(l1, l2, /*with_probe=*/true, codes);
    std::vector<int> block = refine(g, divergence);

    int n1 = static_cast<int>(l1.num_states());
    auto block_of_left = [&](StateId s) { return block[g.node_of_original[s]]; };
    auto block_of_right = [&](StateId s) { return block[g.node_of_original[n1 + s]]; };

    BisimVerdict verdict;
    verdict.related = block_of_left(l1.initial) == block_of_right(l2.initial);
    if (verdict.related) {
        if (want_witness) {
            std::map<int, std::pair<std::vector<StateId>, std::vector<StateId>>> by_block;
            for (StateId s = 0; s < l1.num_states(); ++s)
                by_block[block_of_left(s)].first.push_back(s);
            for (StateId s = 0; s < l2.num_states(); ++s)
                by_block[block_of_right(s)].second.push_back(s);
            for (const auto& [b, sides] : by_block)
                for (StateId a : sides.first)
                    for (StateId c : sides.second) verdict.witness.pairs.insert({a, c});
        }
        return verdict;
    }

    // The maximal relation plus the initial pair violates some clause at the
    // initial pair; report the first one. Clause evaluation happens on the
    // probe-transformed fragments so frontier masking is reflected.
    FiniteLts t1 = l1;
    FiniteLts t2 = l2;
    for (StateId s : t1.frontier) t1.finals.erase(s);
    for (StateId s : t2.frontier) t2.finals.erase(s);
    auto add_probes = [](FiniteLts& l) {
        if (l.frontier.empty()) return;
        StateId sink = static_cast<StateId>(l.num_states());
        l.state_labels.push_back("<sink>");
        for (StateId s : l.frontier) l.transitions.push_back({s, Action::frontier_probe(), sink});
        std::sort(l.transitions.begin(), l.transitions.end());
    };
    add_probes(t1);
    add_probes(t2);
    PairSet pairs;
    for (StateId s = 0; s < l1.num_states(); ++s)
        for (StateId t = 0; t < l2.num_states(); ++t)
            if (block_of_left(s) == block_of_right(t)) pairs.insert({s, t});
    pairs.insert({l1.initial, l2.initial});
    ClauseContext ctx = make_context(t1, t2);
    int clause = first_violated_clause(ctx, pairs, l1.initial, l2.initial, divergence);
    if (clause == 0) throw std::logic_error("refinement refuted but no clause violation found");
    verdict.counterexample = Violation{l1.initial, l2.initial, clause};
    return verdict;
}

// Generous fixpoint for the optimistic frontier reading: pairs touching a
// frontier state are never deleted, a tau-path to a frontier state satisfies
// any matching obligation, and only definite in-relation tau-cycles count as
// divergence hypotheses.
BisimVerdict optimistic_check(const FiniteLts& l1, const FiniteLts& l2, bool divergence) {
    std::size_t n1 = l1.num_states(), n2 = l2.num_states();
    if (n1 * n2 > 4'000'000)
        throw std::runtime_error("optimistic check too large for the pairwise fixpoint");
    ClauseContext ctx = make_context(l1, l2);

    std::vector<bool> to_frontier1(n1, false), to_frontier2(n2, false);
    for (StateId s = 0; s < n1; ++s)
        for (StateId m : ctx.tau_reach1[s])
            if (l1.is_frontier(m)) to_frontier1[s] = true;
    for (StateId s = 0; s < n2; ++s)
        for (StateId m : ctx.tau_reach2[s])
            if (l2.is_frontier(m)) to_frontier2[s] = true;

    PairSet r;
    for (StateId a = 0; a < n1; ++a)
        for (StateId b = 0; b < n2; ++b) r.insert({a, b});

    int dropped_clause = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = r.begin(); it != r.end();) {
            auto [a, b] = *it;
            if (l1.is_frontier(a) || l2.is_frontier(b)) {
                ++it;
                continue;
            }
            int clause = 0;
            if (!clause_step(ctx, r, false, a, b) && !to_frontier2[b]) clause = 1;
            else if (!clause_step(ctx, r, true, b, a) && !to_frontier1[a]) clause = 2;
            else if (!clause_term(ctx, r, false, a, b) && !to_frontier2[b]) clause = 3;
            else if (!clause_term(ctx, r, true, b, a) && !to_frontier1[a]) clause = 4;
            else if (divergence && !clause_div(ctx, r, false, a, b) && !to_frontier2[b]) clause = 5;
            else if (divergence && !clause_div(ctx, r, true, b, a) && !to_frontier1[a]) clause = 6;
            if (clause != 0) {
                if (a == l1.initial && b == l2.initial) dropped_clause = clause;
                it = r.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }

    BisimVerdict verdict;
    verdict.related = related(r, l1.initial, l2.initial);
    if (verdict.related)
        verdict.witness.pairs = std::move(r);
    else
        verdict.counterexample = Violation{l1.initial, l2.initial, dropped_clause};
    return verdict;
}

BisimVerdict check_impl(const FiniteLts& l1, const FiniteLts& l2, bool divergence,
                        FrontierMode mode, bool want_witness) {
    if (mode == FrontierMode::Pessimistic) return refine_check(l1, l2, divergence, want_witness);
    // Pessimistic success implies optimistic success, and the refinement
    // scales much better, so try it first.
    BisimVerdict pess = refine_check(l1, l2, divergence, want_witness);
    if (pess.related) return pess;
    return optimistic_check(l1, l2, divergence);
}

}  // namespace

BisimVerdict check_branching(const FiniteLts& l1, const FiniteLts& l2, FrontierMode mode,
                             bool want_witness) {
    return check_impl(l1, l2, /*divergence=*/false, mode, want_witness);
}

BisimVerdict check_dp_branching(const FiniteLts& l1, const FiniteLts& l2, FrontierMode mode,
                                bool want_witness) {
    return check_impl(l1, l2, /*divergence=*/true, mode, want_witness);
}

BisimVerdict brute_force_bisim(const FiniteLts& l1, const FiniteLts& l2, bool divergence) {
    std::size_t n1 = l1.num_states(), n2 = l2.num_states();
    if (n1 + n2 > kBruteForceStateBound)
        throw std::runtime_error("brute_force_bisim: instance exceeds the small-instance bound");

    // Deliberately direct translation of the definition; kept free of the
    // machinery used by the main checkers.
    auto adj1 = adjacency(l1);
    auto adj2 = adjacency(l2);
    auto reach = [](const std::vector<std::vector<std::pair<Action, StateId>>>& adj) {
        std::vector<std::vector<StateId>> out(adj.size());
        for (StateId s = 0; s < adj.size(); ++s) {
            std::vector<bool> seen(adj.size(), false);
            std::vector<StateId> work{s};
            seen[s] = true;
            while (!work.empty()) {
                StateId v = work.back();
                work.pop_back();
                out[s].push_back(v);
                for (const auto& [a, w] : adj[v])
                    if (a.is_tau() && !seen[w]) {
                        seen[w] = true;
                        work.push_back(w);
                    }
            }
        }
        return out;
    };
    auto taustar1 = reach(adj1);
    auto taustar2 = reach(adj2);

    std::vector<std::vector<bool>> rel(n1, std::vector<bool>(n2, true));

    auto match_step = [&](bool swapped, StateId s1, StateId s2) {
        const auto& from = swapped ? adj2 : adj1;
        const auto& to = swapped ? adj1 : adj2;
        const auto& closure = swapped ? taustar1 : taustar2;
        auto in_rel = [&](StateId x, StateId y) { return swapped ? rel[y][x] : rel[x][y]; };
        for (const auto& [a, t1] : from[s1]) {
            bool ok = false;
            for (StateId mid : closure[s2]) {
                if (!in_rel(s1, mid)) continue;
                if (a.is_tau() && in_rel(t1, mid)) {
                    ok = true;
                    break;
                }
                for (const auto& [b, t2] : to[mid])
                    if (b == a && in_rel(t1, t2)) {
                        ok = true;
                        break;
                    }
                if (ok) break;
            }
            if (!ok) return false;
        }
        return true;
    };
    auto match_term = [&](bool swapped, StateId s1, StateId s2) {
        const FiniteLts& from = swapped ? l2 : l1;
        const FiniteLts& to = swapped ? l1 : l2;
        const auto& closure = swapped ? taustar1 : taustar2;
        auto in_rel = [&](StateId x, StateId y) { return swapped ? rel[y][x] : rel[x][y]; };
        if (!from.is_final(s1)) return true;
        for (StateId mid : closure[s2])
            if (to.is_final(mid) && in_rel(s1, mid)) return true;
        return false;
    };
    auto match_div = [&](bool swapped, StateId s1, StateId s2) {
        const auto& from = swapped ? adj2 : adj1;
        const auto& closure = swapped ? taustar1 : taustar2;
        auto in_rel = [&](StateId x, StateId y) { return swapped ? rel[y][x] : rel[x][y]; };
        std::size_t nf = from.size();
        std::vector<bool> alive(nf, false);
        for (StateId x = 0; x < nf; ++x) alive[x] = in_rel(x, s2);
        if (!alive[s1]) return true;
        bool shrunk = true;
        while (shrunk) {
            shrunk = false;
            for (StateId x = 0; x < nf; ++x) {
                if (!alive[x]) continue;
                bool succ = false;
                for (const auto& [a, w] : from[x])
                    if (a.is_tau() && alive[w]) succ = true;
                if (!succ) {
                    alive[x] = false;
                    shrunk = true;
                }
            }
        }
        if (!alive[s1]) return true;
        std::vector<bool> on_run(nf, false);
        std::vector<StateId> work{s1};
        on_run[s1] = true;
        while (!work.empty()) {
            StateId v = work.back();
            work.pop_back();
            for (const auto& [a, w] : from[v])
                if (a.is_tau() && alive[w] && !on_run[w]) {
                    on_run[w] = true;
                    work.push_back(w);
                }
        }
        // tau-plus successors of s2.
        const auto& to_adj = swapped ? adj1 : adj2;
        std::vector<bool> plus(to_adj.size(), false);
        for (const auto& [a, w] : to_adj[s2])
            if (a.is_tau())
                for (StateId m : closure[w]) plus[m] = true;
        for (StateId mid = 0; mid < to_adj.size(); ++mid) {
            if (!plus[mid]) continue;
            for (StateId x = 0; x < nf; ++x)
                if (on_run[x] && alive[x] && in_rel(x, mid)) return true;
        }
        return false;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId a = 0; a < n1; ++a)
            for (StateId b = 0; b < n2; ++b) {
                if (!rel[a][b]) continue;
                bool ok = match_step(false, a, b) && match_step(true, b, a) &&
                          match_term(false, a, b) && match_term(true, b, a);
                if (ok && divergence) ok = match_div(false, a, b) && match_div(true, b, a);
                if (!ok) {
                    rel[a][b] = false;
                    changed = true;
                }
            }
    }

    BisimVerdict verdict;
    verdict.related = rel[l1.initial][l2.initial];
    if (verdict.related) {
        for (StateId a = 0; a < n1; ++a)
            for (StateId b = 0; b < n2; ++b)
                if (rel[a][b]) verdict.witness.pairs.insert({a, b});
        return verdict;
    }
    PairSet pairs;
    for (StateId a = 0; a < n1; ++a)
        for (StateId b = 0; b < n2; ++b)
            if (rel[a][b]) pairs.insert({a, b});
    pairs.insert({l1.initial, l2.initial});
    ClauseContext ctx = make_context(l1, l2);
    int clause = first_violated_clause(ctx, pairs, l1.initial, l2.initial, divergence);
    verdict.counterexample = Violation{l1.initial, l2.initial, clause == 0 ? 1 : clause};
    return verdict;
}

std::optional<DetComputation> fully_deterministic_computation(const FiniteLts& lts, StateId from) {
    auto adj = adjacency(lts);
    if (from >= lts.num_states()) throw std::invalid_argument("state out of range");
    if (adj[from].size() != 1 || !adj[from][0].first.is_tau()) return std::nullopt;
    DetComputation comp;
    StateId cur = from;
    comp.path.push_back(cur);
    comp.intermediates.insert(cur);
    while (adj[cur].size() == 1 && adj[cur][0].first.is_tau()) {
        StateId next = adj[cur][0].second;
        if (comp.intermediates.count(next))
            throw std::runtime_error("divergent deterministic computation");
        comp.path.push_back(next);
        comp.intermediates.insert(next);
        cur = next;
    }
    return comp;
}

}  // namespace rtmkit
