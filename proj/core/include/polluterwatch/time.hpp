#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pw {

// Seconds since the Unix epoch, UTC. All stream timestamps collapse to this.
using UnixSeconds = std::int64_t;

// A calendar date, represented as days since the Unix epoch.
using Date = std::chrono::sys_days;

// Parses "YYYY-MM-DDTHH:MM:SS" with optional fractional seconds (truncated)
// and optional "Z" / "+HH:MM" / "-HHMM" offset suffix; a missing suffix means
// UTC. A space is accepted in place of 'T'. Returns nullopt on anything else.
std::optional<UnixSeconds> parse_iso8601(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(UnixSeconds t);

// Parses "YYYY-MM-DD"; validates the calendar (leap years included).
std::optional<Date> parse_date(std::string_view text);

std::string format_date(Date d);

// Local calendar date of a UTC instant shifted by a fixed offset (seconds
// east of UTC). Floor semantics, exact for pre-1970 instants too.
Date civil_date(UnixSeconds t, std::int32_t utc_offset_seconds);

// Fractional years between two instants using 365.25-day years.
double years_between(UnixSeconds from, UnixSeconds to);

}  // namespace pw
