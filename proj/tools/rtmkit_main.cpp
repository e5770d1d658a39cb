#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rtmkit/bisim.hpp"
#include "rtmkit/calculus.hpp"
#include "rtmkit/compiler.hpp"
#include "rtmkit/formats.hpp"
#include "rtmkit/godel.hpp"
#include "rtmkit/ptm.hpp"
#include "rtmkit/rtm.hpp"
#include "rtmkit/simgen.hpp"

namespace {

using namespace rtmkit;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInputError = 2;

struct Budgets {
    int depth = 12;
    int states = 20000;
};

void add_budgets(CLI::App* cmd, Budgets& budgets) {
    cmd->add_option("--depth", budgets.depth, "observable-depth bound");
    cmd->add_option("--states", budgets.states, "state-count bound");
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-")
        std::cout << content;
    else
        write_file(out_path, content);
}

std::set<std::string> parse_channels(const std::string& text) {
    std::set<std::string> channels;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) channels.insert(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) channels.insert(cur);
    return channels;
}

int run_bisim(const std::string& left, const std::string& right, bool divergence,
              const std::string& frontier) {
    FiniteLts l = parse_lts(read_file(left));
    FiniteLts r = parse_lts(read_file(right));
    FrontierMode mode =
        frontier == "optimistic" ? FrontierMode::Optimistic : FrontierMode::Pessimistic;
    BisimVerdict verdict =
        divergence ? check_dp_branching(l, r, mode) : check_branching(l, r, mode);
    if (verdict.related) {
        std::cout << "related\n";
        std::size_t shown = 0;
        for (const auto& [a, b] : verdict.witness.pairs) {
            if (++shown > 10000) {
                std::cout << "... (" << verdict.witness.pairs.size() << " pairs)\n";
                break;
            }
            std::cout << a << ' ' << b << '\n';
        }
        return kExitOk;
    }
    std::cout << "not related: pair (" << verdict.counterexample->left << ", "
              << verdict.counterexample->right << ") violates clause "
              << verdict.counterexample->clause << '\n';
    return kExitNegative;
}

int run_repl(const std::string& machine_path) {
    Rtm m = parse_rtm(read_file(machine_path));
    Configuration c{m.initial, TapeInstance{}};
    for (;;) {
        std::cout << "state: " << c.state << "   tape: " << c.tape.serialize()
                  << (m.finals.count(c.state) ? "   (final)" : "") << '\n';
        auto steps = step(m, c);
        if (steps.empty()) {
            std::cout << "no transitions enabled\n";
            return kExitOk;
        }
        for (std::size_t i = 0; i < steps.size(); ++i)
            std::cout << "  " << (i + 1) << ") " << steps[i].first.label() << " -> "
                      << steps[i].second.serialize() << '\n';
        std::cout << "step (1-" << steps.size() << ") or quit> " << std::flush;
        std::string line;
        if (!std::getline(std::cin, line)) return kExitOk;
        if (line == "quit" || line == "q") return kExitOk;
        try {
            std::size_t pick = std::stoul(line);
            if (pick < 1 || pick > steps.size()) throw std::out_of_range("menu");
            c = steps[pick - 1].second;
        } catch (const std::exception&) {
            std::cout << "invalid selection\n";
        }
    }
}

std::string show_its(const Its& its) {
    std::ostringstream out;
    out << "its (" << its.initial << ", " << its.edges.size() << ", " << its.state_names.size()
        << ")\n";
    for (std::size_t i = 0; i < its.state_names.size(); ++i)
        out << "state " << i << ": "
            << (static_cast<int>(i) == its.infinity ? "<infinity>"
                                                    : "work '" + its.state_names[i] + "'")
            << '\n';
    for (const auto& e : its.edges) {
        out << '(' << e.src << ", \"";
        for (std::size_t k = 0; k < e.input.size(); ++k) out << (k ? " " : "") << e.input[k];
        out << '/';
        if (e.mu) {
            out << "mu";
        } else {
            for (std::size_t k = 0; k < e.output.size(); ++k) out << (k ? " " : "") << e.output[k];
        }
        out << "\", " << e.dst << ")\n";
    }
    return out.str();
}

int sufficient_depth(const Its& its) {
    std::size_t depth = 2;
    for (const auto& e : its.edges)
        depth = std::max(depth, e.input.size() + e.output.size() + 2);
    return static_cast<int>(depth) + 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reactive Turing machine toolkit"};
    app.require_subcommand(1);

    // rtm-explore
    auto* rtm_explore = app.add_subcommand("rtm-explore", "explore a machine's transition system");
    std::string machine_path, out_path, left_path, right_path, spec_path, lts_path;
    Budgets budgets;
    rtm_explore->add_option("--machine", machine_path)->required();
    rtm_explore->add_option("--out", out_path);
    add_budgets(rtm_explore, budgets);

    auto* bisim_cmd = app.add_subcommand("bisim", "compare two explored fragments");
    bool divergence = false;
    std::string frontier = "pessimistic";
    bisim_cmd->add_option("--left", left_path)->required();
    bisim_cmd->add_option("--right", right_path)->required();
    bisim_cmd->add_flag("--divergence", divergence);
    bisim_cmd->add_option("--frontier", frontier)
        ->check(CLI::IsMember({"pessimistic", "optimistic"}));

    auto* compile_cmd = app.add_subcommand("compile", "compile a machine to a specification");
    compile_cmd->add_option("--machine", machine_path)->required();
    compile_cmd->add_option("--out", out_path);

    auto* simgen_cmd = app.add_subcommand("simgen", "build a simulator machine for a finite LTS");
    int bound = 3;
    simgen_cmd->add_option("--lts", lts_path)->required();
    simgen_cmd->add_option("--bound", bound)->required();
    simgen_cmd->add_option("--out", out_path);

    auto* compose_cmd = app.add_subcommand("compose", "explore a parallel composition");
    std::string channels_text;
    compose_cmd->add_option("--left", left_path)->required();
    compose_cmd->add_option("--right", right_path)->required();
    compose_cmd->add_option("--channels", channels_text);
    compose_cmd->add_option("--out", out_path);
    add_budgets(compose_cmd, budgets);

    auto* calc_cmd = app.add_subcommand("calc-explore", "explore a specification");
    calc_cmd->add_option("--spec", spec_path)->required();
    calc_cmd->add_option("--out", out_path);
    add_budgets(calc_cmd, budgets);

    auto* ptm_its_cmd = app.add_subcommand("ptm-its", "interactive transition system of a PTM");
    int fuel = 10000, max_input_len = 2;
    ptm_its_cmd->add_option("--machine", machine_path)->required();
    ptm_its_cmd->add_option("--fuel", fuel);
    ptm_its_cmd->add_option("--max-input-len", max_input_len);
    ptm_its_cmd->add_option("--out", out_path);

    auto* ptm_rt_cmd = app.add_subcommand("ptm-roundtrip", "check the channel-encoding round-trip");
    ptm_rt_cmd->add_option("--machine", machine_path)->required();
    ptm_rt_cmd->add_option("--fuel", fuel);
    ptm_rt_cmd->add_option("--max-input-len", max_input_len);

    auto* godel_cmd = app.add_subcommand("godel", "machine coding");
    auto* encode_cmd = godel_cmd->add_subcommand("encode");
    encode_cmd->add_option("--machine", machine_path)->required();
    encode_cmd->add_option("--out", out_path);
    auto* decode_cmd = godel_cmd->add_subcommand("decode");
    std::string code_text, code_file;
    decode_cmd->add_option("--code", code_text);
    decode_cmd->add_option("--code-file", code_file);
    decode_cmd->add_option("--out", out_path);
    godel_cmd->require_subcommand(1);

    auto* repl_cmd = app.add_subcommand("rtm-repl", "step a machine interactively");
    repl_cmd->add_option("--machine", machine_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (rtm_explore->parsed()) {
            Rtm m = parse_rtm(read_file(machine_path));
            emit(out_path, write_lts(explore(semantics(m), budgets.depth, budgets.states)));
            return kExitOk;
        }
        if (bisim_cmd->parsed()) return run_bisim(left_path, right_path, divergence, frontier);
        if (compile_cmd->parsed()) {
            Rtm m = parse_rtm(read_file(machine_path));
            auto [spec, root] = compile_rtm(m);
            emit(out_path, write_tcp(spec, root));
            return kExitOk;
        }
        if (simgen_cmd->parsed()) {
            FiniteLts ts = parse_lts(read_file(lts_path));
            emit(out_path, write_rtm(build_simulator(ts, bound)));
            return kExitOk;
        }
        if (compose_cmd->parsed()) {
            Rtm l = parse_rtm(read_file(left_path));
            Rtm r = parse_rtm(read_file(right_path));
            auto gen = parallel_compose(semantics(l), semantics(r), parse_channels(channels_text));
            emit(out_path, write_lts(explore(gen, budgets.depth, budgets.states)));
            return kExitOk;
        }
        if (calc_cmd->parsed()) {
            auto [spec, root] = parse_tcp(read_file(spec_path));
            emit(out_path, write_lts(explore(lts_of(spec, root), budgets.depth, budgets.states)));
            return kExitOk;
        }
        if (ptm_its_cmd->parsed()) {
            Ptm m = parse_ptm(read_file(machine_path));
            emit(out_path, show_its(its_of_ptm(m, m.alphabet, max_input_len, fuel)));
            return kExitOk;
        }
        if (ptm_rt_cmd->parsed()) {
            Ptm m = parse_ptm(read_file(machine_path));
            Its its = its_of_ptm(m, m.alphabet, max_input_len, fuel);
            FiniteLts fragment = explore(lts_of_its(its), sufficient_depth(its), 1000000);
            bool ok = its_isomorphic(its, its_of_lts(fragment));
            std::cout << (ok ? "isomorphic\n" : "not isomorphic\n");
            return ok ? kExitOk : kExitNegative;
        }
        if (encode_cmd->parsed()) {
            Rtm m = parse_rtm(read_file(machine_path));
            emit(out_path, godel_encode_str(m) + "\n");
            return kExitOk;
        }
        if (decode_cmd->parsed()) {
            if (code_text.empty() && code_file.empty())
                throw std::runtime_error("decode needs --code or --code-file");
            std::string code = code_text.empty() ? read_file(code_file) : code_text;
            while (!code.empty() && (code.back() == '\n' || code.back() == '\r')) code.pop_back();
            emit(out_path, write_rtm(godel_decode_str(code)));
            return kExitOk;
        }
        if (repl_cmd->parsed()) return run_repl(machine_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}
