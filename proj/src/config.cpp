#include "exactlift/config.hpp"

#include <cstdlib>
#include <string>

#include "exactlift/error.hpp"

namespace xl {

namespace {

std::uint64_t read_env(const char* name, std::uint64_t fallback, std::uint64_t lo) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    try {
        size_t used = 0;
        unsigned long long x = std::stoull(v, &used);
        if (used != std::string(v).size() || x < lo) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be an integer >= " + std::to_string(lo));
    }
}

}  // namespace

Budgets budgets_from_env() {
    Budgets b;
    b.max_arity = int(read_env("EXACTLIFT_MAX_ARITY", std::uint64_t(b.max_arity), 1));
    b.enumeration = read_env("EXACTLIFT_ENUM_BUDGET", b.enumeration, 1);
    return b;
}

const Budgets& default_budgets() {
    static const Budgets b = budgets_from_env();
    return b;
}

Faults& faults() {
    static Faults f;
    return f;
}

}  // namespace xl
