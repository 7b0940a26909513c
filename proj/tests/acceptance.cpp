// Acceptance gate: one PASS/FAIL line per criterion. Criteria 1-10 run the
// suite blocks in-process at arity 5; criterion 11 runs the CLI twice.

#include <array>
#include <cstdio>
#include <iostream>
#include <string>

#include "suite.hpp"

namespace {

struct Limit {
    int id;
    double seconds;
};

constexpr std::array<Limit, 10> limits{{{1, 1}, {2, 1}, {3, 30}, {4, 5}, {5, 30}, {6, 60}, {7, 10}, {8, 10}, {9, 60}, {10, 120}}};

bool capture(const std::string& cmd, std::string& out, int& status) {
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return false;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    status = pclose(p);
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    std::string exe = argc > 1 ? argv[1] : EXACTLIFT_EXE;
    int failures = 0;
    for (const auto& [id, limit] : limits) {
        cli::SuiteOptions opt;
        opt.seed = 0;
        opt.arity = 5;
        cli::SuiteBlock b = cli::run_suite_block(id, opt);
        bool ok = b.pass() && b.seconds < limit;
        size_t bad = 0;
        for (const auto& r : b.rows) bad += !r.pass;
        std::printf("criterion %2d %-22s %s  (%zu rows, %zu failing, %.2fs, limit %.0fs)\n", id, b.name.c_str(),
                    ok ? "PASS" : "FAIL", b.rows.size(), bad, b.seconds, limit);
        for (const auto& r : b.rows)
            if (!r.pass) std::printf("    failing row: %s %s\n", r.key.c_str(), r.facts.dump().c_str());
        std::fflush(stdout);
        failures += !ok;
    }

    std::string cmd = "\"" + exe + "\" --seed 0 suite reproduce-paper 2>/dev/null";
    std::string first, second;
    int s1 = 0, s2 = 0;
    bool ran = capture(cmd, first, s1) && capture(cmd, second, s2);
    bool same = ran && !first.empty() && first == second;
    std::printf("criterion 11 %-22s %s  (%zu bytes per report)\n", "determinism", same ? "PASS" : "FAIL", first.size());
    failures += !same;

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
