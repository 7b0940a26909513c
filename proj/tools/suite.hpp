#pragma once

// The reproduction suite: ten blocks of exact checks over the worked examples
// and the randomized property families. Shared by `suite reproduce-paper`
// and the acceptance binary.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace cli {

using json = nlohmann::json;

struct SuiteRow {
    std::string key;
    bool pass = false;
    json facts = json::object();
};

struct SuiteBlock {
    int id = 0;
    std::string name;
    std::vector<SuiteRow> rows;
    double seconds = 0;  // wall time, never written to reports
    bool pass() const;
};

struct SuiteOptions {
    std::uint64_t seed = 0;
    // target arity of the A-infinity block; 0 means the configured budget
    int arity = 0;
};

int suite_block_count();
std::string suite_block_name(int id);
SuiteBlock run_suite_block(int id, const SuiteOptions& opt);

}  // namespace cli
