#pragma once

#include <stdexcept>
#include <string>

namespace comlab {

// Point outside a family's validity region, non-spacelike slice point,
// zero quasi-local mass, ... CLI maps these to exit code 3.
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed configuration (JSON schema violations, bad flags). Exit code 2.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A family produced a non-positive-definite metric or similar: a bug in the
// family implementation, not a user error.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace comlab
