#include "rtmkit/simgen.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace rtmkit {

unsigned long long menu_count(int branching_bound, int action_alphabet_size) {
    if (branching_bound < 0 || action_alphabet_size < 1)
        throw std::invalid_argument("menu_count: bad arguments");
    unsigned long long total = 0;
    unsigned long long power = 1;
    for (int k = 0; k <= branching_bound; ++k) {
        total += 2 * power;
        if (k < branching_bound) {
            if (power > (1ULL << 50)) throw std::overflow_error("menu_count overflow");
            power *= static_cast<unsigned long long>(action_alphabet_size);
        }
    }
    return total;
}

namespace {

// Tape symbols of the generated machine. Primed variants of the copyable
// table symbols act as the copy cursor, '*' as the record cursor.
const std::string kOne = "1";
const std::string kOpen = "[";
const std::string kClose = "]";
const std::string kSep = "|";
const std::string kHash = "#";
const std::string kRecord = ";";
const std::string kCursor = "*";

std::string primed(const std::string& s) { return "'" + s; }

struct Builder {
    std::set<std::string> states;
    std::set<RtmRule> rules;

    void rule(const std::string& from, const std::string& read, const Action& act,
              const std::string& write, char move, const std::string& to) {
        states.insert(from);
        states.insert(to);
        rules.insert({from, read, act, write, move, to});
    }
    void tau(const std::string& from, const std::string& read, const std::string& write, char move,
             const std::string& to) {
        rule(from, read, Action::tau(), write, move, to);
    }
};

std::string joined_codes(const std::vector<int>& codes) {
    std::string out;
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (i) out += 'x';
        out += std::to_string(codes[i]);
    }
    return out;
}

}  // namespace

Rtm build_simulator(const FiniteLts& ts, int branching_bound) {
    if (!ts.frontier.empty())
        throw std::runtime_error("build_simulator: input has frontier states");
    if (branching_degree(ts) > branching_bound)
        throw std::runtime_error("build_simulator: branching degree exceeds the bound");
    if (ts.num_states() == 0) throw std::invalid_argument("build_simulator: empty system");

    // Action codes: tau is 0, the rest in canonical order.
    std::set<Action> action_set;
    for (const auto& t : ts.transitions) action_set.insert(t.action);
    std::vector<Action> action_table{Action::tau()};
    for (const auto& a : action_set)
        if (!a.is_tau()) action_table.push_back(a);
    std::map<Action, int> action_code;
    for (std::size_t i = 0; i < action_table.size(); ++i) action_code[action_table[i]] = i;

    auto adj = adjacency(ts);
    struct MenuEntry {
        int action_code;
        StateId target;
    };
    std::vector<std::vector<MenuEntry>> menus(ts.num_states());
    for (StateId s = 0; s < ts.num_states(); ++s) {
        auto steps = adj[s];
        std::sort(steps.begin(), steps.end());
        for (const auto& [a, t] : steps) menus[s].push_back({action_code.at(a), t});
    }

    // Table layout: [ ;rec_0 ;rec_1 ... ;rec_{N-1} ] code(initial)
    // with rec_s = F |A_1 |A_2 ... |A_k # T_1 |T_2 ... |T_k, numbers unary.
    std::vector<std::string> tape;
    auto unary = [&tape](int n) {
        for (int i = 0; i <= n; ++i) tape.push_back(kOne);
    };
    tape.push_back(kOpen);
    for (StateId s = 0; s < ts.num_states(); ++s) {
        tape.push_back(kRecord);
        unary(ts.is_final(s) ? 1 : 0);
        for (const auto& e : menus[s]) {
            tape.push_back(kSep);
            unary(e.action_code);
        }
        tape.push_back(kHash);
        bool first = true;
        for (const auto& e : menus[s]) {
            if (!first) tape.push_back(kSep);
            unary(static_cast<int>(e.target));
            first = false;
        }
    }
    tape.push_back(kClose);
    unary(static_cast<int>(ts.initial));

    Builder b;
    const std::vector<std::string> table_syms = {kOne, kSep, kHash, kRecord};

    // --- Initialisation fragment: write the table, walk back to ']'.
    for (std::size_t j = 0; j < tape.size(); ++j) {
        std::string cur = j == 0 ? std::string("I0") : "I" + std::to_string(j);
        std::string next = j + 1 == tape.size() ? std::string("retI") : "I" + std::to_string(j + 1);
        b.tau(cur, kBlank, tape[j], 'R', next);
    }
    b.tau("retI", kBlank, kBlank, 'L', "retI");
    b.tau("retI", kOne, kOne, 'L', "retI");
    b.tau("retI", kClose, kClose, 'L', "scanL");

    // --- State fragment: locate the current record, copy it behind ']'.
    for (const auto& x : table_syms) b.tau("scanL", x, x, 'L', "scanL");
    b.tau("scanL", kOpen, kOpen, 'R', "mark");
    b.tau("mark", kRecord, kCursor, 'R', "toR");
    for (const auto& x : table_syms) b.tau("toR", x, x, 'R', "toR");
    b.tau("toR", kClose, kClose, 'R', "skipB");
    b.tau("skipB", kBlank, kBlank, 'R', "skipB");
    b.tau("skipB", kOne, kOne, 'R', "toEnd");
    b.tau("toEnd", kOne, kOne, 'R', "toEnd");
    b.tau("toEnd", kBlank, kBlank, 'L', "atLast");
    b.tau("atLast", kOne, kOne, 'L', "peek");
    b.tau("peek", kOne, kOne, 'R', "era");        // at least two 1s: decrement
    b.tau("peek", kBlank, kBlank, 'R', "fin1");   // single 1 left
    b.tau("peek", kClose, kClose, 'R', "fin1");
    b.tau("era", kOne, kBlank, 'L', "retL");
    for (const auto& x : table_syms) b.tau("retL", x, x, 'L', "retL");
    b.tau("retL", kBlank, kBlank, 'L', "retL");
    b.tau("retL", kClose, kClose, 'L', "retL");
    b.tau("retL", kCursor, kRecord, 'R', "adv");
    for (const auto& x : {kOne, kSep, kHash}) b.tau("adv", x, x, 'R', "adv");
    b.tau("adv", kRecord, kCursor, 'R', "toR");
    b.tau("fin1", kOne, kBlank, 'L', "retC");
    for (const auto& x : table_syms) b.tau("retC", x, x, 'L', "retC");
    b.tau("retC", kBlank, kBlank, 'L', "retC");
    b.tau("retC", kClose, kClose, 'L', "retC");
    b.tau("retC", kCursor, kRecord, 'R', "copy");

    for (const auto& y : {kOne, kSep, kHash}) {
        b.tau("copy", y, primed(y), 'R', "cw_" + y);
        for (const auto& x : table_syms) b.tau("cw_" + y, x, x, 'R', "cw_" + y);
        b.tau("cw_" + y, kClose, kClose, 'R', "cd_" + y);
        for (const auto& z : {kOne, kSep, kHash}) b.tau("cd_" + y, z, z, 'R', "cd_" + y);
        b.tau("cd_" + y, kBlank, y, 'L', "cback");
        b.tau("cback", primed(y), y, 'R', "copy");
    }
    for (const auto& x : table_syms) b.tau("cback", x, x, 'L', "cback");
    b.tau("cback", kClose, kClose, 'L', "cback");
    b.tau("cback", kBlank, kBlank, 'L', "cback");
    b.tau("copy", kRecord, kRecord, 'R', "cdone");
    for (const auto& x : table_syms) b.tau("cdone", x, x, 'R', "cdone");
    b.tau("cdone", kClose, kClose, 'R', "dec0");
    b.tau("copy", kClose, kClose, 'R', "dec0");

    // --- Step fragment, part one: decode the menu into a selection state.
    std::set<std::pair<int, std::vector<int>>> seen_menus;
    for (StateId s = 0; s < ts.num_states(); ++s) {
        int flag = ts.is_final(s) ? 1 : 0;
        std::vector<int> codes;
        for (const auto& e : menus[s]) codes.push_back(e.action_code);
        if (!seen_menus.insert({flag, codes}).second) continue;

        std::string xi = kSelectionStatePrefix + std::to_string(flag) + "_" + joined_codes(codes);
        b.tau("dec0", kOne, kBlank, 'R', "dec1");
        std::string after_flag;  // state after the flag digits are consumed
        if (flag == 0) {
            after_flag = "dec1";
        } else {
            b.tau("dec1", kOne, kBlank, 'R', "dec2");
            after_flag = "dec2";
        }
        std::string wb = "wb" + std::to_string(flag) + "_" + joined_codes(codes);
        if (codes.empty()) {
            b.tau(after_flag, kHash, kBlank, 'L', wb);
        } else {
            std::vector<int> done;
            std::string cur = after_flag;
            for (std::size_t idx = 0; idx < codes.size(); ++idx) {
                std::string base = "dc" + std::to_string(flag) + "_" + joined_codes(done) + "_";
                b.tau(cur, kSep, kBlank, 'R', base + "0");
                for (int c = 0; c <= codes[idx]; ++c)
                    b.tau(base + std::to_string(c), kOne, kBlank, 'R',
                          base + std::to_string(c + 1));
                done.push_back(codes[idx]);
                cur = base + std::to_string(codes[idx] + 1);
            }
            b.tau(cur, kHash, kBlank, 'L', wb);
        }
        b.tau(wb, kBlank, kBlank, 'L', wb);
        b.tau(wb, kClose, kClose, 'R', xi);

        // The selection state: final iff the flag is set, one transition per
        // menu entry.
        b.states.insert(xi);
        for (std::size_t idx = 0; idx < codes.size(); ++idx)
            b.rule(xi, kBlank, action_table[codes[idx]], kBlank, 'R',
                   "RS" + std::to_string(idx + 1));
    }

    // --- Step fragment, part two: keep the i-th target, erase the rest.
    int max_k = 0;
    for (const auto& m : menus) max_k = std::max(max_k, static_cast<int>(m.size()));
    for (int i = 1; i <= max_k; ++i) {
        std::string rs = "RS" + std::to_string(i);
        b.tau(rs, kBlank, kBlank, 'R', rs);
        if (i == 1) {
            b.tau(rs, kOne, kOne, 'R', "keep");
        } else {
            b.tau(rs, kOne, kBlank, 'R', "E" + std::to_string(i) + "_1");
            for (int j = 1; j < i; ++j) {
                std::string e = "E" + std::to_string(i) + "_" + std::to_string(j);
                b.tau(e, kOne, kBlank, 'R', e);
                std::string after = j + 1 == i ? std::string("keep")
                                               : "E" + std::to_string(i) + "_" +
                                                     std::to_string(j + 1);
                b.tau(e, kSep, kBlank, 'R', after);
            }
        }
    }
    if (max_k > 0) {
        b.tau("keep", kOne, kOne, 'R', "keep");
        b.tau("keep", kSep, kBlank, 'R', "zap");
        b.tau("keep", kBlank, kBlank, 'L', "retK");
        b.tau("zap", kOne, kBlank, 'R', "zap");
        b.tau("zap", kSep, kBlank, 'R', "zap");
        b.tau("zap", kBlank, kBlank, 'L', "retK");
        b.tau("retK", kBlank, kBlank, 'L', "retK");
        b.tau("retK", kOne, kOne, 'L', "retK");
        b.tau("retK", kClose, kClose, 'L', "scanL");
    }

    Rtm m;
    m.initial = "I0";
    b.states.insert("I0");
    for (const auto& s : b.states) m.states.push_back(s);
    for (const auto& s : b.states)
        if (s.rfind(kSelectionStatePrefix + "1", 0) == 0) m.finals.insert(s);
    m.rules.assign(b.rules.begin(), b.rules.end());
    std::set<std::string> alphabet(tape.begin(), tape.end());
    for (const auto& y : {kOne, kSep, kHash}) alphabet.insert(primed(y));
    alphabet.insert(kCursor);
    alphabet.erase(kBlank);
    m.alphabet.assign(alphabet.begin(), alphabet.end());
    m.validate();
    return m;
}

Rtm simulate_parallel(const Rtm& m1, const Rtm& m2, const std::set<std::string>& channels,
                      int depth, int branching_bound) {
    FiniteLts product =
        explore(parallel_compose(semantics(m1), semantics(m2), channels), depth, 200000);
    if (!product.frontier.empty())
        throw std::runtime_error("simulate_parallel: product not finite within budget");
    return build_simulator(product, branching_bound);
}

}  // namespace rtmkit
