#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polluterwatch/time.hpp"

namespace pw {

// IANA timezone backed by the system zoneinfo database (TZif files).
// Only the transition table is read; that covers the data range this
// engine targets. Offsets are seconds east of UTC.
class TimeZone {
 public:
  // Loads a zone by IANA name ("UTC", "Australia/Adelaide", ...) from
  // $TZDIR or /usr/share/zoneinfo. Throws ConfigError for unknown names
  // or unreadable zone files.
  static TimeZone load(const std::string& iana_name);

  std::int32_t utc_offset_at(UnixSeconds t) const;

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::vector<std::int64_t> transitions_;  // sorted transition instants
  std::vector<std::int32_t> offsets_;      // offset in force from transitions_[i]
  std::int32_t first_offset_ = 0;          // in force before any transition
};

}  // namespace pw
