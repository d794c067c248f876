#pragma once

#include <stdexcept>
#include <string>

namespace fkg {

// Bad user-supplied data: malformed JSON, invariant violations, wrong arity.
// CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A cap or enumeration budget was exceeded. Always an explicit refusal,
// never a silent truncation. CLI maps this to exit code 3.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// An internal cross-check failed (e.g. the branching identity did not hold).
// This signals an engine bug, not bad input. CLI maps this to exit code 1.
class EngineBug : public std::logic_error {
public:
    explicit EngineBug(const std::string& what) : std::logic_error(what) {}
};

} // namespace fkg
