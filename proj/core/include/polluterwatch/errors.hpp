#pragma once

#include <stdexcept>
#include <string>

namespace pw {

// Bad configuration discovered at startup (unknown timezone, invalid
// thresholds, missing calendar in event_days mode, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or unwritable file / stream.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fatal format violation in a structured input file (calendar, status,
// labelled, score files). The message names the offending line.
struct FileFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pw
