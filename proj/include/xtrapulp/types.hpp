#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace xtrapulp {

// Dense 0-based global vertex identifier.
using vid_t = std::uint64_t;
// Task-local vertex index: owned vertices first, then ghosts.
using lid_t = std::uint32_t;
// Part label; -1 marks "unassigned" during initialization.
using part_t = std::int32_t;

inline constexpr part_t kNoPart = -1;

/// Malformed user input: bad edge list line, out-of-range ID, wrong length.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter combination (p > n, T > n, I_tot = 0, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violation of the message-passing protocol between simulated tasks.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace xtrapulp
