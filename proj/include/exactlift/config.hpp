#pragma once

#include <cstdint>

namespace xl {

// Process-wide limits. EXACTLIFT_MAX_ARITY and EXACTLIFT_ENUM_BUDGET override
// the defaults; they are read once.
struct Budgets {
    int max_arity = 5;
    std::uint64_t enumeration = 2'000'000;
};

Budgets budgets_from_env();
const Budgets& default_budgets();

// Deliberate defects for negative-control runs. Off unless a caller turns
// them on; nothing in the library sets them.
struct Faults {
    // drop the Koszul part of the bar-construction sign (keeps only the overall -1)
    bool suspension_sign = false;
};

Faults& faults();

}  // namespace xl
