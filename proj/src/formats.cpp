#include "rtmkit/formats.hpp"

#include <fstream>
#include <sstream>

namespace rtmkit {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

}  // namespace

Rtm parse_rtm(const std::string& text) {
    Rtm m;
    bool saw_states = false, saw_initial = false;
    auto lines = split_lines(text);
    for (int ln = 0; ln < static_cast<int>(lines.size()); ++ln) {
        auto toks = tokens_of(lines[ln]);
        if (toks.empty()) continue;
        const int lineno = ln + 1;
        if (toks[0] == "states:") {
            m.states.assign(toks.begin() + 1, toks.end());
            saw_states = true;
        } else if (toks[0] == "initial:") {
            if (toks.size() != 2) throw ParseError("initial: expects one state", lineno);
            m.initial = toks[1];
            saw_initial = true;
        } else if (toks[0] == "final:") {
            m.finals.insert(toks.begin() + 1, toks.end());
        } else if (toks[0] == "alphabet:") {
            m.alphabet.assign(toks.begin() + 1, toks.end());
        } else if (toks[0] == "rule") {
            if (toks.size() != 8 || toks[3] != "->")
                throw ParseError("rule expects: rule <state> <read> -> <action> <write> <L|R> <state>",
                                 lineno);
            RtmRule r;
            r.state = toks[1];
            r.read = toks[2];
            try {
                r.action = Action::parse_label(toks[4]);
            } catch (const std::exception& e) {
                throw ParseError(e.what(), lineno);
            }
            r.write = toks[5];
            if (toks[6] != "L" && toks[6] != "R") throw ParseError("move must be L or R", lineno);
            r.move = toks[6][0];
            r.next = toks[7];
            m.rules.push_back(r);
        } else {
            throw ParseError("unknown directive '" + toks[0] + "'", lineno);
        }
    }
    if (!saw_states) throw ParseError("missing states: line", 1);
    if (!saw_initial) throw ParseError("missing initial: line", 1);
    try {
        m.validate();
    } catch (const std::exception& e) {
        throw ParseError(e.what(), 1);
    }
    return m;
}

std::string write_rtm(const Rtm& m) {
    std::ostringstream out;
    out << "states:";
    for (const auto& s : m.states) out << ' ' << s;
    out << "\ninitial: " << m.initial << "\nfinal:";
    for (const auto& s : m.finals) out << ' ' << s;
    out << "\nalphabet:";
    for (const auto& s : m.alphabet) out << ' ' << s;
    out << '\n';
    for (const auto& r : m.rules)
        out << "rule " << r.state << ' ' << r.read << " -> " << r.action.label() << ' ' << r.write
            << ' ' << r.move << ' ' << r.next << '\n';
    return out.str();
}

FiniteLts parse_lts(const std::string& text) {
    FiniteLts lts;
    auto lines = split_lines(text);
    std::size_t n_states = 0, n_transitions = 0;
    bool saw_des = false, saw_final = false, saw_frontier = false;
    for (int ln = 0; ln < static_cast<int>(lines.size()); ++ln) {
        const std::string& line = lines[ln];
        const int lineno = ln + 1;
        if (line.empty()) continue;
        if (line.rfind("des", 0) == 0) {
            unsigned init = 0;
            unsigned long nt = 0, ns = 0;
            if (std::sscanf(line.c_str(), "des (%u, %lu, %lu)", &init, &nt, &ns) != 3)
                throw ParseError("malformed des header", lineno);
            lts.initial = init;
            n_transitions = nt;
            n_states = ns;
            saw_des = true;
        } else if (line[0] == '(') {
            unsigned src = 0, dst = 0;
            auto q1 = line.find('"');
            auto q2 = line.rfind('"');
            if (q1 == std::string::npos || q2 <= q1)
                throw ParseError("malformed transition line", lineno);
            std::string label = line.substr(q1 + 1, q2 - q1 - 1);
            if (std::sscanf(line.c_str(), "(%u,", &src) != 1 ||
                std::sscanf(line.c_str() + q2 + 1, ", %u)", &dst) != 1)
                throw ParseError("malformed transition line", lineno);
            Action a;
            try {
                a = Action::parse_label(label);
            } catch (const std::exception& e) {
                throw ParseError(e.what(), lineno);
            }
            lts.transitions.push_back({src, a, dst});
        } else if (line.rfind("final:", 0) == 0) {
            for (const auto& tok : tokens_of(line.substr(6))) lts.finals.insert(std::stoul(tok));
            saw_final = true;
        } else if (line.rfind("frontier:", 0) == 0) {
            for (const auto& tok : tokens_of(line.substr(9))) lts.frontier.insert(std::stoul(tok));
            saw_frontier = true;
        } else {
            throw ParseError("unrecognised line", lineno);
        }
    }
    if (!saw_des) throw ParseError("missing des header", 1);
    if (!saw_final || !saw_frontier) throw ParseError("missing final:/frontier: lines", 1);
    if (lts.transitions.size() != n_transitions)
        throw ParseError("transition count does not match header", 1);
    lts.state_labels.assign(n_states, "");
    for (const auto& t : lts.transitions)
        if (t.src >= n_states || t.dst >= n_states)
            throw ParseError("transition endpoint out of range", 1);
    if (lts.initial >= n_states && n_states > 0) throw ParseError("initial state out of range", 1);
    for (StateId s : lts.finals)
        if (s >= n_states) throw ParseError("final state out of range", 1);
    for (StateId s : lts.frontier)
        if (s >= n_states) throw ParseError("frontier state out of range", 1);
    std::sort(lts.transitions.begin(), lts.transitions.end());
    return lts;
}

std::string write_lts(const FiniteLts& lts) {
    std::ostringstream out;
    out << "des (" << lts.initial << ", " << lts.transitions.size() << ", " << lts.num_states()
        << ")\n";
    for (const auto& t : lts.transitions)
        out << '(' << t.src << ", \"" << t.action.label() << "\", " << t.dst << ")\n";
    out << "final:";
    for (StateId s : lts.finals) out << ' ' << s;
    out << "\nfrontier:";
    for (StateId s : lts.frontier) out << ' ' << s;
    out << '\n';
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

}  // namespace rtmkit
