#pragma once

// Command reports. The "report" format is line-delimited JSON with sorted
// keys: a header line echoing the command, one line per result, one line per
// verification, and a closing status line. Nothing time-dependent goes into
// it, so two runs with the same inputs and seed are byte-identical; timings
// go to stderr on request. The "summary" format renders the same content for
// people.

#include <chrono>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace cli {

using json = nlohmann::json;

constexpr const char* report_schema = "exactlift.report/1";

enum Exit : int { exit_ok = 0, exit_invalid = 1, exit_obstructed = 2, exit_check_failed = 3 };

class Report {
public:
    Report(std::string command, std::vector<std::string> args);

    void result(const std::string& key, json value);
    void check(const std::string& name, bool pass, json detail = nullptr);
    // a negative mathematical answer (obstructed, none found); exit 2 when all checks pass
    void verdict(const std::string& v, bool negative);

    bool all_pass() const;
    int exit_code() const;
    void emit(std::ostream& out, const std::string& format) const;
    double seconds() const;

private:
    std::string command_;
    std::vector<std::string> args_;
    std::vector<std::pair<std::string, json>> results_;
    struct Check {
        std::string name;
        bool pass;
        json detail;
    };
    std::vector<Check> checks_;
    std::optional<std::string> verdict_;
    bool negative_ = false;
    std::chrono::steady_clock::time_point start_;
};

// scalar text for json output
std::string render(const json& v);

}  // namespace cli
