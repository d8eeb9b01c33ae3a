#pragma once

#include "cofcheck/execution.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace cofcheck {

// Fluent construction of process automata. States are declared on first
// mention; every mentioned state must end up with an action, a halt, or be
// the target of a branch only.
class process_builder {
public:
    explicit process_builder(std::string name) { ps_.name = std::move(name); }

    process_builder& write(const std::string& state, const std::string& reg,
                           const std::string& value, const std::string& next) {
        touch(state);
        touch(next);
        ps_.pending[state] = {mem_action::write, reg, value};
        ps_.on_write[state] = next;
        return *this;
    }

    process_builder& read(const std::string& state, const std::string& reg,
                          std::map<std::string, std::string> branches) {
        touch(state);
        for (const auto& [v, next] : branches) touch(next);
        ps_.pending[state] = {mem_action::read, reg, ""};
        ps_.on_read[state] = std::move(branches);
        return *this;
    }

    // Read whose outcome is ignored: every value leads to the same state.
    process_builder& read_any(const std::string& state, const std::string& reg,
                              const std::vector<std::string>& domain, const std::string& next) {
        std::map<std::string, std::string> branches;
        for (const auto& v : domain) branches[v] = next;
        return read(state, reg, std::move(branches));
    }

    process_builder& respond(const std::string& state, const std::string& response) {
        touch(state);
        ps_.response[state] = response;
        return *this;
    }

    process_builder& halt(const std::string& state) {
        touch(state);
        return *this;
    }

    process_builder& input(const std::string& value, const std::string& initial_state,
                           std::vector<std::string> operations, bool repeat = false) {
        touch(initial_state);
        ps_.inputs[value] = {initial_state, std::move(operations), repeat};
        return *this;
    }

    process_spec build() const { return ps_; }

private:
    void touch(const std::string& state) {
        if (std::find(ps_.local_states.begin(), ps_.local_states.end(), state) ==
            ps_.local_states.end())
            ps_.local_states.push_back(state);
    }

    process_spec ps_;
};

} // namespace cofcheck
