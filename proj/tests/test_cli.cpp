#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "rtmkit/formats.hpp"
#include "rtmkit/rtm.hpp"

using namespace rtmkit;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args, const std::string& stdin_text = "") {
    std::string cmd = std::string(RTMKIT_CLI_PATH) + " " + args + " 2>&1";
    if (!stdin_text.empty()) {
        write_file("cli_stdin.txt", stdin_text);
        cmd = cmd + " < cli_stdin.txt";
    }
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

}  // namespace

TEST_CASE("explore, compose and bisim drive the exit-code scheme") {
    write_file("right.rtm", write_rtm(fig1_right()));
    write_file("left.rtm", write_rtm(fig1_left()));

    auto explore_run = run("rtm-explore --machine right.rtm --depth 8 --out right.lts");
    CHECK(explore_run.exit_code == 0);
    auto again = run("rtm-explore --machine right.rtm --depth 8 --out right2.lts");
    CHECK(again.exit_code == 0);
    CHECK(read_file("right.lts") == read_file("right2.lts"));

    auto same = run("bisim --left right.lts --right right2.lts --divergence");
    CHECK(same.exit_code == 0);
    CHECK(same.output.find("related") == 0);

    auto compose_run =
        run("compose --left left.rtm --right right.rtm --channels i --depth 6 --out prod.lts");
    CHECK(compose_run.exit_code == 0);
    auto different = run("bisim --left right.lts --right prod.lts");
    CHECK(different.exit_code == 1);
    CHECK(different.output.find("clause") != std::string::npos);

    auto missing = run("bisim --left nonexistent.lts --right right.lts");
    CHECK(missing.exit_code == 2);
    write_file("broken.rtm", "states s\n");
    CHECK(run("rtm-explore --machine broken.rtm --out x.lts").exit_code == 2);
}

TEST_CASE("compile feeds calc-explore and the comparison closes the loop") {
    Rtm m;
    m.states = {"s"};
    m.initial = "s";
    m.finals = {"s"};
    write_file("empty.rtm", write_rtm(m));
    CHECK(run("compile --machine empty.rtm --out empty.tcp").exit_code == 0);
    CHECK(run("calc-explore --spec empty.tcp --depth 10 --out compiled.lts").exit_code == 0);
    CHECK(run("rtm-explore --machine empty.rtm --depth 10 --out machine.lts").exit_code == 0);
    auto verdict = run("bisim --left machine.lts --right compiled.lts --divergence");
    CHECK(verdict.exit_code == 0);
}

TEST_CASE("godel encode and decode round-trip through files") {
    write_file("right.rtm", write_rtm(fig1_right()));
    CHECK(run("godel encode --machine right.rtm --out code.txt").exit_code == 0);
    CHECK(run("godel decode --code-file code.txt --out back.rtm").exit_code == 0);
    CHECK(run("godel encode --machine back.rtm --out code2.txt").exit_code == 0);
    CHECK(read_file("code.txt") == read_file("code2.txt"));
    CHECK(run("godel decode --code 0 --out junk.rtm").exit_code == 2);
}

TEST_CASE("simgen emits a runnable machine file") {
    write_file("chain.lts", "des (0, 2, 3)\n(0, \"a\", 1)\n(1, \"b\", 2)\nfinal: 2\nfrontier:\n");
    CHECK(run("simgen --lts chain.lts --bound 2 --out sim.rtm").exit_code == 0);
    auto explored = run("rtm-explore --machine sim.rtm --depth 10 --states 100000 --out sim.lts");
    CHECK(explored.exit_code == 0);
}

TEST_CASE("the repl lists a menu and steps") {
    write_file("right.rtm", write_rtm(fig1_right()));
    auto repl = run("rtm-repl --machine right.rtm", "1\nquit\n");
    CHECK(repl.exit_code == 0);
    CHECK(repl.output.find("state: w0") != std::string::npos);
    CHECK(repl.output.find("1) tau") != std::string::npos);
    CHECK(repl.output.find("state: w1") != std::string::npos);
}

TEST_CASE("ptm subcommands") {
    std::string text =
        "states: run stop\ninitial: run\nfinal: stop\nalphabet: a\n"
        "rule run a _ -> run adv _ S a\n"
        "rule run $ _ -> stop stay _ S -\n";
    write_file("echo.ptm", text);
    auto its = run("ptm-its --machine echo.ptm --max-input-len 1");
    CHECK(its.exit_code == 0);
    CHECK(its.output.find("its (") == 0);
    CHECK(run("ptm-roundtrip --machine echo.ptm --max-input-len 1").exit_code == 0);
}
