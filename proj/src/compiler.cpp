#include "rtmkit/compiler.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rtmkit {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

std::vector<std::string> tape_alphabet_of(const Rtm& m) {
    std::vector<std::string> alphabet = m.alphabet;
    alphabet.push_back(kBlank);
    return sorted_unique(std::move(alphabet));
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

std::vector<std::string> split_tokens(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

std::string control_name(const std::string& state, const std::string& symbol) {
    return "C_" + state + "_" + symbol;
}

std::string head_name(const std::string& symbol) { return "H_" + symbol; }

LtsGenerator spec_infinite_of_rtm(const Rtm& m) {
    m.validate();
    // One name per configuration, defined as the sum of its outgoing steps
    // plus a skip summand at final configurations; realised lazily.
    LtsGenerator gen;
    gen.initial = "N " + Configuration{m.initial, TapeInstance{}}.serialize();
    gen.out = [m](const State& s) {
        Configuration c = Configuration::deserialize(s.substr(2));
        std::vector<Step> steps;
        for (auto& [a, next] : step(m, c)) steps.push_back({a, "N " + next.serialize()});
        return steps;
    };
    gen.fin = [m](const State& s) {
        return m.finals.count(Configuration::deserialize(s.substr(2)).state) != 0;
    };
    return gen;
}

RecSpec queue_finite_spec(const std::vector<std::string>& alphabet) {
    const std::string i = channel_role::kQueueIn;
    const std::string o = channel_role::kQueueOut;
    const std::string l = channel_role::kQueueAux;
    auto data = sorted_unique(alphabet);
    RecSpec spec;
    const std::string chans[3] = {i, o, l};
    for (const auto& j : chans)
        for (const auto& k : chans) {
            if (j == k) continue;
            std::string p;
            for (const auto& c : chans)
                if (c != j && c != k) p = c;
            std::vector<PExpr> summands;
            for (const auto& d : data) {
                PExpr cell = choice(skip(), prefix(Action::send(k, d), name_ref("Q" + p + k + "_" + j)));
                PExpr inner = par({p}, name_ref("Q" + j + p + "_" + k), cell);
                summands.push_back(prefix(Action::recv(j, d), inner));
            }
            spec.equations["Q" + j + k + "_" + p] = sum_right(summands, /*plus_skip=*/true);
        }
    return spec;
}

LtsGenerator queue_infinite_gen_from(const std::vector<std::string>& alphabet,
                                     const std::vector<std::string>& contents) {
    auto data = sorted_unique(alphabet);
    LtsGenerator gen;
    gen.initial = join_tokens(contents);
    gen.out = [data](const State& s) {
        auto items = split_tokens(s);
        std::vector<Step> steps;
        for (const auto& d : data) {
            std::vector<std::string> grown{d};
            grown.insert(grown.end(), items.begin(), items.end());
            steps.push_back({Action::recv(channel_role::kQueueIn, d), join_tokens(grown)});
        }
        if (!items.empty()) {
            std::string oldest = items.back();
            std::vector<std::string> rest(items.begin(), items.end() - 1);
            steps.push_back({Action::send(channel_role::kQueueOut, oldest), join_tokens(rest)});
        }
        return canonical_steps(std::move(steps));
    };
    gen.fin = [](const State&) { return true; };
    return gen;
}

LtsGenerator queue_infinite_gen(const std::vector<std::string>& alphabet) {
    return queue_infinite_gen_from(alphabet, {});
}

LtsGenerator tape_infinite_gen(const std::vector<std::string>& alphabet) {
    auto data = sorted_unique(alphabet);
    if (std::find(data.begin(), data.end(), kBlank) == data.end())
        throw std::invalid_argument("tape alphabet must contain the blank symbol");
    LtsGenerator gen;
    gen.initial = TapeInstance{}.serialize();
    gen.out = [data](const State& s) {
        TapeInstance t = TapeInstance::deserialize(s);
        std::vector<std::string> left(t.cells.begin(), t.cells.begin() + t.head);
        std::vector<std::string> right(t.cells.begin() + t.head + 1, t.cells.end());
        const std::string& d = t.cells[t.head];
        std::vector<Step> steps;
        steps.push_back({Action::send(channel_role::kRead, d), t.serialize()});
        for (const auto& e : data) {
            TapeInstance written = t;
            written.cells[written.head] = e;
            steps.push_back({Action::recv(channel_role::kWrite, e), normalize(written).serialize()});
        }
        TapeInstance moved_left = place_left(left);
        moved_left.cells.push_back(d);
        moved_left.cells.insert(moved_left.cells.end(), right.begin(), right.end());
        steps.push_back(
            {Action::recv(channel_role::kMove, "L"), normalize(moved_left).serialize()});
        TapeInstance tail = place_right(right);
        TapeInstance moved_right;
        moved_right.cells = left;
        moved_right.cells.push_back(d);
        moved_right.head = moved_right.cells.size() + tail.head;
        moved_right.cells.insert(moved_right.cells.end(), tail.cells.begin(), tail.cells.end());
        steps.push_back(
            {Action::recv(channel_role::kMove, "R"), normalize(moved_right).serialize()});
        return canonical_steps(std::move(steps));
    };
    gen.fin = [](const State&) { return true; };
    return gen;
}

RecSpec tape_controller_spec(const std::vector<std::string>& alphabet) {
    const std::string i = channel_role::kQueueIn;
    const std::string o = channel_role::kQueueOut;
    const std::string r = channel_role::kRead;
    const std::string w = channel_role::kWrite;
    const std::string mv = channel_role::kMove;
    auto data = sorted_unique(alphabet);
    if (std::find(data.begin(), data.end(), kBlank) == data.end())
        throw std::invalid_argument("tape alphabet must contain the blank symbol");

    RecSpec spec;
    const std::string fwd_end = "Fwd_" + kEndMarker;
    for (const auto& d : data) {
        // H_d: serve the head cell, accept writes, dispatch moves.
        std::vector<PExpr> head;
        head.push_back(prefix(Action::send(r, d), name_ref(head_name(d))));
        for (const auto& e : data)
            head.push_back(prefix(Action::recv(w, e), name_ref(head_name(e))));
        head.push_back(prefix(Action::recv(mv, "L"), name_ref("HL_" + d)));
        head.push_back(prefix(Action::recv(mv, "R"), name_ref("HR_" + d)));
        spec.equations[head_name(d)] = sum_right(head, /*plus_skip=*/true);

        // HL_d: push the head cell behind the queue, pull the next one; at
        // the left end restore the queue with a full rotation.
        std::vector<PExpr> pulls;
        for (const auto& e : data)
            pulls.push_back(prefix(Action::recv(o, e), name_ref(head_name(e))));
        pulls.push_back(prefix(Action::recv(o, kEndMarker),
                               prefix(Action::send(i, kRotationMarker),
                                      prefix(Action::send(i, kEndMarker), name_ref("Back")))));
        spec.equations["HL_" + d] =
            prefix(Action::send(i, d), sum_right(pulls, /*plus_skip=*/false));

        // HR_d: mark a rotation, push the head cell, then forward one cell at
        // a time until the marker comes around.
        std::vector<PExpr> first;
        for (const auto& e : data)
            first.push_back(prefix(Action::recv(o, e), name_ref("Fwd_" + e)));
        first.push_back(prefix(Action::recv(o, kEndMarker), name_ref(fwd_end)));
        spec.equations["HR_" + d] =
            prefix(Action::send(i, kRotationMarker),
                   prefix(Action::send(i, d), sum_right(first, /*plus_skip=*/false)));

        // Fwd_d: one-cell delay line.
        std::vector<PExpr> fwd;
        for (const auto& e : data)
            fwd.push_back(prefix(Action::recv(o, e),
                                 prefix(Action::send(i, d), name_ref("Fwd_" + e))));
        fwd.push_back(prefix(Action::recv(o, kEndMarker),
                             prefix(Action::send(i, d), name_ref(fwd_end))));
        fwd.push_back(prefix(Action::recv(o, kRotationMarker), name_ref(head_name(d))));
        spec.equations["Fwd_" + d] = sum_right(fwd, /*plus_skip=*/false);
    }

    std::vector<PExpr> fwd_bot;
    for (const auto& e : data)
        fwd_bot.push_back(prefix(Action::recv(o, e),
                                 prefix(Action::send(i, kEndMarker), name_ref("Fwd_" + e))));
    fwd_bot.push_back(prefix(Action::recv(o, kRotationMarker),
                             prefix(Action::send(i, kEndMarker), name_ref(head_name(kBlank)))));
    spec.equations[fwd_end] = sum_right(fwd_bot, /*plus_skip=*/false);

    std::vector<PExpr> back;
    for (const auto& d : data)
        back.push_back(
            prefix(Action::recv(o, d), prefix(Action::send(i, d), name_ref("Back"))));
    back.push_back(prefix(Action::recv(o, kRotationMarker), name_ref(head_name(kBlank))));
    spec.equations["Back"] = sum_right(back, /*plus_skip=*/false);
    return spec;
}

RecSpec finite_control_spec(const Rtm& m) {
    m.validate();
    const std::string r = channel_role::kRead;
    const std::string w = channel_role::kWrite;
    const std::string mv = channel_role::kMove;
    auto data = tape_alphabet_of(m);

    RecSpec spec;
    for (const auto& s : m.states) {
        for (const auto& d : data) {
            std::vector<RtmRule> matching;
            for (const auto& rule : m.rules)
                if (rule.state == s && rule.read == d) matching.push_back(rule);
            std::sort(matching.begin(), matching.end());
            std::vector<PExpr> summands;
            for (const auto& rule : matching) {
                std::vector<PExpr> reads;
                for (const auto& f : data)
                    reads.push_back(
                        prefix(Action::recv(r, f), name_ref(control_name(rule.next, f))));
                PExpr chain =
                    prefix(rule.action,
                           prefix(Action::send(w, rule.write),
                                  prefix(Action::send(mv, std::string(1, rule.move)),
                                         sum_right(reads, /*plus_skip=*/false))));
                summands.push_back(chain);
            }
            spec.equations[control_name(s, d)] =
                sum_right(summands, /*plus_skip=*/m.finals.count(s) != 0);
        }
    }
    return spec;
}

std::vector<std::string> queue_alphabet_for(const std::vector<std::string>& tape_alphabet) {
    std::vector<std::string> q = tape_alphabet;
    q.push_back(kEndMarker);
    q.push_back(kRotationMarker);
    return sorted_unique(std::move(q));
}

PExpr tape_assembly(const std::vector<std::string>& alphabet) {
    const std::string i = channel_role::kQueueIn;
    const std::string o = channel_role::kQueueOut;
    const std::string l = channel_role::kQueueAux;
    (void)alphabet;
    // The finite queue holding just the end marker: the state the empty
    // two-channel queue reaches after receiving it.
    PExpr cell = choice(skip(), prefix(Action::send(o, kEndMarker), name_ref("Q" + l + o + "_" + i)));
    PExpr queue_with_end = par({l}, name_ref("Q" + i + l + "_" + o), cell);
    return par({i, o}, name_ref(head_name(kBlank)), queue_with_end);
}

std::pair<RecSpec, PExpr> compile_rtm(const Rtm& m) {
    m.validate();
    const std::set<std::string> reserved = {channel_role::kRead,     channel_role::kWrite,
                                            channel_role::kMove,     channel_role::kQueueIn,
                                            channel_role::kQueueOut, channel_role::kQueueAux};
    for (const auto& rule : m.rules)
        if (rule.action.is_comm() && reserved.count(rule.action.channel))
            throw std::runtime_error("reserved channel '" + rule.action.channel +
                                     "' used by machine action");
    auto data = tape_alphabet_of(m);
    for (const auto& d : data)
        if (d == kEndMarker || d == kRotationMarker)
            throw std::runtime_error("reserved marker symbol '" + d + "' in tape alphabet");

    RecSpec spec = finite_control_spec(m);
    std::size_t control_count = spec.equations.size();
    if (control_count != m.states.size() * data.size())
        throw std::runtime_error("state/symbol naming collision in control equations");
    RecSpec tape = tape_controller_spec(data);
    RecSpec queue = queue_finite_spec(queue_alphabet_for(data));
    for (auto& [name, body] : tape.equations)
        if (!spec.equations.emplace(name, body).second)
            throw std::runtime_error("naming collision at equation " + name);
    for (auto& [name, body] : queue.equations)
        if (!spec.equations.emplace(name, body).second)
            throw std::runtime_error("naming collision at equation " + name);

    PExpr root = par({channel_role::kRead, channel_role::kWrite, channel_role::kMove},
                     name_ref(control_name(m.initial, kBlank)), tape_assembly(data));
    return {std::move(spec), root};
}

}  // namespace rtmkit
