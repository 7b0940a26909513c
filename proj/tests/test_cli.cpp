// The exactlift binary end to end: exit codes, report format, diagnostics,
// fault injection, budgets and determinism.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

struct Run {
    int exit = -1;
    std::string out;
    std::vector<json> lines;
};

Run run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + (env.empty() ? "" : " ") + "\"" EXACTLIFT_EXE "\" " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::istringstream in(r.out);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] == '{') r.lines.push_back(json::parse(line));
    return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = std::string(EXACTLIFT_TMP) + "/" + name;
    std::ofstream(path) << text;
    return path;
}

const json* result(const Run& r, const std::string& key) {
    for (const auto& l : r.lines)
        if (l.contains("result") && l["result"] == key) return &l["value"];
    return nullptr;
}

size_t failing_checks(const Run& r, const std::string& prefix = "") {
    size_t n = 0;
    for (const auto& l : r.lines)
        if (l.contains("check") && !l["pass"].get<bool>() && l["check"].get<std::string>().rfind(prefix, 0) == 0) ++n;
    return n;
}

}  // namespace

TEST_CASE("exit codes: passing commands") {
    for (const char* args : {"quiver euler kronecker4 1,1 1,1", "quiver moduli-dim kronecker4 1,1", "rep schur kronecker-generic",
                             "rep perp kronecker-perp kronecker-generic", "ainfty lift-alg --fixture F1",
                             "ainfty lift-alg --fixture matrix", "ainfty lift-mod --fixture F3-faithful",
                             "ainfty nullhomotopy --fixture F3-faithful --map zero", "ainfty lift-structure --fixture F4",
                             "hoch condition --algebra matrix2 --bimodule regular --mode lift_object"}) {
        CAPTURE(args);
        Run r = run(args);
        CHECK(r.exit == 0);
        REQUIRE(!r.lines.empty());
        CHECK(r.lines.back()["status"] == "pass");
    }
}

TEST_CASE("exit codes: negative verdicts are 2") {
    for (const char* args : {"lift counterexample --quiver threeloop", "lift counterexample --quiver kronecker4",
                             "ainfty lift-alg --fixture F2", "ainfty lift-mod --fixture F3",
                             "ainfty lift-structure --fixture F2-module"}) {
        CAPTURE(args);
        Run r = run(args);
        CHECK(r.exit == 2);
        REQUIRE(!r.lines.empty());
        CHECK(r.lines.back()["status"] == "obstructed");
        CHECK(r.lines.back().contains("verdict"));
        CHECK(failing_checks(r) == 0);
    }
}

TEST_CASE("exit codes: bad input is 1") {
    for (const char* args : {"quiver euler nosuch 1 1", "quiver euler kronecker4 1,1", "rep end /nonexistent/file.json",
                             "ainfty lift-alg --fixture nosuch", "--inject-fault nosuch quiver euler kronecker4 1,1 1,1"}) {
        CAPTURE(args);
        Run r = run(args);
        CHECK(r.exit == 1);
    }
}

TEST_CASE("report lines are sorted-key JSON with a schema header") {
    Run r = run("quiver euler kronecker4 1,1 1,1");
    REQUIRE(r.lines.size() >= 3);
    CHECK(r.lines.front()["schema"] == "exactlift.report/1");
    CHECK(r.lines.front()["command"] == "quiver euler");
    const json* v = result(r, "euler_form");
    REQUIRE(v);
    CHECK(*v == -2);
    std::istringstream in(r.out);
    for (std::string line; std::getline(in, line);) CHECK(json::parse(line).dump() == line);
}

TEST_CASE("malformed input reports line and column") {
    SUBCASE("syntax error") {
        Run r = run("lift test --input " + write_temp("syntax.json", "{\"u\": [1,\n  2"));
        CHECK(r.exit == 1);
        REQUIRE(r.lines.size() >= 2);
        const json& e = r.lines[1];
        CHECK(e["line"] == 2);
        CHECK(e["column"] == 4);
    }
    SUBCASE("schema error at a key") {
        Run r = run("lift test --input " + write_temp("schema.json", "{\"u\": \"threeloop-generic\",\n  \"v\": 3,\n \"phi21\": []}"));
        CHECK(r.exit == 1);
        const json& e = r.lines[1];
        CHECK(e["line"] == 2);
        CHECK(e["column"] == 3);
        CHECK(e["message"].get<std::string>().find("/v") != std::string::npos);
    }
    SUBCASE("bad entry inside a nested array") {
        std::string text = "{\"u\": \"threeloop-generic\",\n \"v\": \"threeloop-generic\",\n \"phi21\": [[1, 2],\n   [3, \"q\"]]}";
        Run r = run("lift test --input " + write_temp("entry.json", text));
        CHECK(r.exit == 1);
        const json& e = r.lines[1];
        CHECK(e["line"] == 4);
        CHECK(e["column"] == 8);
    }
}

TEST_CASE("suspension-sign fault only breaks the A-infinity checks") {
    Run clean = run("ainfty check --algebra massey");
    Run broken = run("--inject-fault suspension-sign ainfty check --algebra massey");
    CHECK(clean.exit == 0);
    CHECK(broken.exit == 3);

    Run others = run("--inject-fault suspension-sign suite reproduce-paper --only 1 --only 2 --only 4 --only 7 --only 8 --only 9");
    CHECK(others.exit == 0);
    CHECK(failing_checks(others) == 0);
    Run ainfty = run("--inject-fault suspension-sign suite reproduce-paper --only 10");
    CHECK(ainfty.exit == 3);
    CHECK(failing_checks(ainfty, "block 10") > 0);
}

TEST_CASE("arity budget from the environment") {
    Run r = run("suite reproduce-paper --only 10", "EXACTLIFT_MAX_ARITY=3");
    CHECK(r.exit == 0);
    CHECK(r.out.find("verified to arity 3") != std::string::npos);
    CHECK(r.out.find("verified to arity 5") == std::string::npos);

    Run over = run("ainfty lift-alg --fixture F1 --arity 5", "EXACTLIFT_MAX_ARITY=3");
    CHECK(over.exit == 1);
}

TEST_CASE("reports are deterministic and seed dependent") {
    Run a = run("--seed 0 suite reproduce-paper --only 3 --only 6");
    Run b = run("--seed 0 suite reproduce-paper --only 3 --only 6");
    Run c = run("--seed 1 suite reproduce-paper --only 3 --only 6");
    CHECK(!a.out.empty());
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
}
