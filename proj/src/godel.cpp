#include "rtmkit/godel.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace rtmkit {

namespace {

mpz_class cantor_pair(const mpz_class& a, const mpz_class& b) {
    mpz_class s = a + b;
    return s * (s + 1) / 2 + b;
}

std::pair<mpz_class, mpz_class> cantor_unpair(const mpz_class& z) {
    mpz_class w = (sqrt(8 * z + 1) - 1) / 2;
    mpz_class t = w * (w + 1) / 2;
    mpz_class b = z - t;
    mpz_class a = w - b;
    return {a, b};
}

mpz_class encode_string(const std::string& s) {
    mpz_class code = 0;
    for (auto it = s.rbegin(); it != s.rend(); ++it)
        code = code * 257 + (static_cast<unsigned char>(*it) + 1);
    return code;
}

std::string decode_string(mpz_class code) {
    std::string out;
    while (code > 0) {
        mpz_class digit = code % 257;
        if (digit == 0) throw std::runtime_error("not an RTM code");
        out += static_cast<char>(digit.get_ui() - 1);
        code /= 257;
    }
    return out;
}

mpz_class encode_list(const std::vector<mpz_class>& xs) {
    mpz_class code = 0;
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) code = cantor_pair(*it, code) + 1;
    return code;
}

std::vector<mpz_class> decode_list(mpz_class code) {
    std::vector<mpz_class> xs;
    while (code > 0) {
        auto [head, tail] = cantor_unpair(code - 1);
        xs.push_back(head);
        code = tail;
    }
    return xs;
}

mpz_class encode_action(const Action& a) {
    return cantor_pair(static_cast<int>(a.kind),
                       cantor_pair(encode_string(a.channel), encode_string(a.datum)));
}

Action decode_action(const mpz_class& code) {
    auto [kind, rest] = cantor_unpair(code);
    auto [chan, datum] = cantor_unpair(rest);
    if (kind < 0 || kind > 3) throw std::runtime_error("not an RTM code");
    Action a;
    a.kind = static_cast<ActionKind>(kind.get_ui());
    a.channel = decode_string(chan);
    a.datum = decode_string(datum);
    bool ok = true;
    switch (a.kind) {
        case ActionKind::Tau:
            ok = a.channel.empty() && a.datum.empty();
            break;
        case ActionKind::Plain:
            ok = !a.channel.empty() && a.datum.empty();
            break;
        case ActionKind::Send:
        case ActionKind::Recv:
            ok = !a.channel.empty() && !a.datum.empty();
            break;
        default:
            ok = false;
    }
    if (!ok) throw std::runtime_error("not an RTM code");
    return a;
}

std::string checked_symbol(const std::string& s) {
    if (s.empty()) throw std::runtime_error("not an RTM code");
    for (char c : s)
        if (std::isspace(static_cast<unsigned char>(c)) || !std::isprint(static_cast<unsigned char>(c)))
            throw std::runtime_error("not an RTM code");
    return s;
}

}  // namespace

mpz_class godel_encode(const Rtm& m) {
    m.validate();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < m.states.size(); ++i) index[m.states[i]] = i;

    std::vector<mpz_class> final_codes;
    {
        std::vector<std::size_t> idx;
        for (const auto& f : m.finals) idx.push_back(index.at(f));
        std::sort(idx.begin(), idx.end());
        for (auto i : idx) final_codes.emplace_back(static_cast<unsigned long>(i));
    }
    std::vector<mpz_class> alphabet_codes;
    for (const auto& s : m.alphabet) alphabet_codes.push_back(encode_string(s));

    std::vector<mpz_class> rule_codes;
    for (const auto& r : m.rules) {
        mpz_class code = cantor_pair(
            static_cast<unsigned long>(index.at(r.state)),
            cantor_pair(encode_string(r.read),
                        cantor_pair(encode_action(r.action),
                                    cantor_pair(encode_string(r.write),
                                                cantor_pair(r.move == 'L' ? 0 : 1,
                                                            static_cast<unsigned long>(
                                                                index.at(r.next)))))));
        rule_codes.push_back(code);
    }
    std::sort(rule_codes.begin(), rule_codes.end());
    rule_codes.erase(std::unique(rule_codes.begin(), rule_codes.end()), rule_codes.end());

    mpz_class body = cantor_pair(
        static_cast<unsigned long>(m.states.size()),
        cantor_pair(static_cast<unsigned long>(index.at(m.initial)),
                    cantor_pair(encode_list(final_codes),
                                cantor_pair(encode_list(alphabet_codes), encode_list(rule_codes)))));
    return body + 1;
}

Rtm godel_decode(const mpz_class& code) {
    if (code <= 0) throw std::runtime_error("not an RTM code");
    auto [n_states, rest1] = cantor_unpair(code - 1);
    auto [initial, rest2] = cantor_unpair(rest1);
    auto [finals_code, rest3] = cantor_unpair(rest2);
    auto [alphabet_code, rules_code] = cantor_unpair(rest3);

    if (n_states <= 0 || n_states > 100000) throw std::runtime_error("not an RTM code");
    std::size_t n = n_states.get_ui();
    Rtm m;
    for (std::size_t i = 0; i < n; ++i) m.states.push_back("s" + std::to_string(i));
    if (initial >= n_states) throw std::runtime_error("not an RTM code");
    m.initial = m.states[initial.get_ui()];
    for (const auto& f : decode_list(finals_code)) {
        if (f >= n_states) throw std::runtime_error("not an RTM code");
        m.finals.insert(m.states[f.get_ui()]);
    }
    for (const auto& a : decode_list(alphabet_code))
        m.alphabet.push_back(checked_symbol(decode_string(a)));
    for (const auto& rc : decode_list(rules_code)) {
        auto [state, r1] = cantor_unpair(rc);
        auto [read, r2] = cantor_unpair(r1);
        auto [action, r3] = cantor_unpair(r2);
        auto [write, r4] = cantor_unpair(r3);
        auto [move, next] = cantor_unpair(r4);
        if (state >= n_states || next >= n_states || move > 1)
            throw std::runtime_error("not an RTM code");
        RtmRule rule;
        rule.state = m.states[state.get_ui()];
        rule.read = checked_symbol(decode_string(read));
        rule.action = decode_action(action);
        rule.write = checked_symbol(decode_string(write));
        rule.move = move == 0 ? 'L' : 'R';
        rule.next = m.states[next.get_ui()];
        m.rules.push_back(rule);
    }
    m.validate();
    return m;
}

std::string godel_encode_str(const Rtm& m) { return godel_encode(m).get_str(); }

Rtm godel_decode_str(const std::string& code) {
    mpz_class z;
    if (z.set_str(code, 10) != 0) throw std::runtime_error("not an RTM code");
    return godel_decode(z);
}

}  // namespace rtmkit
