#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cspm {

/// UTC instant with one-second resolution.
using Instant = std::chrono::sys_seconds;

/// Calendar day (UTC), counted from 1970-01-01.
using Day = std::int32_t;

inline Day utc_day(Instant t) {
    return static_cast<Day>(std::chrono::floor<std::chrono::days>(t).time_since_epoch().count());
}

// Accepted forms:
//   2014-07-17T10:00:00Z   2014-07-17 10:00:00   2014-07-17T10:00:00.123456
//   2014-07-17T12:00:00+02:00   2014-07-17
// Fractional seconds are truncated. Strings without an offset are UTC.
std::optional<Instant> try_parse_instant(std::string_view text);

/// Throws InvalidTimestamp.
Instant parse_instant(std::string_view text);

/// Formats as YYYY-MM-DDTHH:MM:SSZ.
std::string format_instant(Instant t);

}  // namespace cspm
