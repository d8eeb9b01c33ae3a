#pragma once

#include <stdexcept>
#include <string>

namespace cofcheck {

// Malformed specification data: unknown identifiers, non-total transition
// tables, values outside a declared domain.
struct spec_error : std::runtime_error {
    explicit spec_error(const std::string& what) : std::runtime_error(what) {}
};

// API misuse: stepping a halted process, querying an instance that was never
// invoked, and similar caller-side contract violations.
struct usage_error : std::logic_error {
    explicit usage_error(const std::string& what) : std::logic_error(what) {}
};

// Exploration exceeded its configuration budget. Carries partial statistics.
struct budget_error : std::runtime_error {
    budget_error(const std::string& what, std::size_t states_seen)
        : std::runtime_error(what), states_seen(states_seen) {}
    std::size_t states_seen;
};

} // namespace cofcheck
