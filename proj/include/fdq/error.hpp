#pragma once

#include <stdexcept>
#include <string>

namespace fdq {

/// Violation of an operation precondition (dimension/cap mismatch, bad input type).
struct contract_violation : std::invalid_argument {
    explicit contract_violation(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A derived jet was requested beyond the order supported by its inputs.
/// Carries the order that would have been needed.
struct jet_underflow : std::runtime_error {
    int needed;
    explicit jet_underflow(const std::string& what_, int needed_)
        : std::runtime_error(what_ + " (needed jet order " + std::to_string(needed_) + ")"),
          needed(needed_) {}
};

/// A fixed-point solve could not be completed within the configured weight cap.
struct cap_underflow : std::runtime_error {
    explicit cap_underflow(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed external input (JSON schema, expression grammar, CLI flags).
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fdq
