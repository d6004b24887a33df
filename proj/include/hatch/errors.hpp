#pragma once

#include <stdexcept>
#include <string>

namespace hatch {

// Spending budget that is already exhausted. Policies gate on b > 0, so
// reaching this from the public policy API is a bug in the caller or policy.
class budget_violation : public std::logic_error {
 public:
  explicit budget_violation(const std::string& what) : std::logic_error(what) {}
};

// API used against its contract (e.g. feedback for a round that never ran).
class contract_violation : public std::logic_error {
 public:
  explicit contract_violation(const std::string& what) : std::logic_error(what) {}
};

// Malformed or incompatible on-disk artifact (snapshot, event log, config).
class format_error : public std::runtime_error {
 public:
  explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem-level failure (missing file, unwritable directory).
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hatch
