#pragma once

#include <stdexcept>
#include <string>

namespace scadasim {

// Precondition / dimension violations. These are programming or
// configuration errors, not runtime conditions to recover from.
class ContractViolation : public std::logic_error {
 public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Numeric failures: non-finite results, solver divergence.
class NumericError : public std::runtime_error {
 public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// System-identification failures (rank deficiency, no excitation).
class IdentificationError : public std::runtime_error {
 public:
    explicit IdentificationError(const std::string& what) : std::runtime_error(what) {}
};

// Scenario / file / CLI errors, always carrying path or key context.
class IoError : public std::runtime_error {
 public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scadasim
