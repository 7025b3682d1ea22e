#pragma once

// Decimal-as-string and RFC 3339 helpers used by every JSON and CSV codec.

#include <chrono>
#include <string>
#include <string_view>

namespace wxbits {

// Shortest string that parses back to the same double ("0.11", "72",
// "0.008333333333333333"). Throws DomainError on non-finite input.
std::string format_decimal(double value);
// Strict: the whole string must be a finite decimal number.
double parse_decimal(std::string_view text);

using UtcTime = std::chrono::sys_seconds;
using UtcDay = std::chrono::sys_days;

// "YYYY-MM-DDTHH:MM:SSZ"; nothing else is accepted.
UtcTime parse_utc_time(std::string_view text);
std::string format_utc_time(UtcTime t);
// "YYYY-MM-DD".
UtcDay parse_utc_day(std::string_view text);
std::string format_utc_day(UtcDay day);

}  // namespace wxbits
