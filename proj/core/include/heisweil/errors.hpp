#pragma once

#include <stdexcept>
#include <string>

namespace heisweil {

/// Invalid or unsupported input (CLI exit code 2).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// An enumeration or materialization bound was exceeded (CLI exit code 3).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal consistency check failed. Indicates a bug, never bad input.
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw DomainError(msg);
}

inline void check_invariant(bool cond, const std::string& msg) {
  if (!cond) throw InvariantError(msg);
}

}  // namespace heisweil
