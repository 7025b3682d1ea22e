#include "wxbits/text.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "wxbits/error.hpp"

namespace wxbits {

std::string format_decimal(double value) {
  WXBITS_REQUIRE(std::isfinite(value), ErrorCode::DomainError,
                 "cannot format a non-finite decimal");
  if (value == 0.0) return "0";  // drops the sign of -0
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw Error(ErrorCode::Internal, "to_chars failed");
  return std::string(buf.data(), end);
}

double parse_decimal(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  WXBITS_REQUIRE(ec == std::errc{} && ptr == last && std::isfinite(value) &&
                     !text.empty(),
                 ErrorCode::ParseError,
                 "not a decimal number: '" + std::string(text) + "'");
  return value;
}

namespace {

bool parse_fixed_int(std::string_view text, std::size_t pos, std::size_t len,
                     int& out) {
  if (pos + len > text.size()) return false;
  out = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
    out = out * 10 + (text[i] - '0');
  }
  return true;
}

bool parse_day_prefix(std::string_view text, std::chrono::year_month_day& ymd) {
  int y = 0, m = 0, d = 0;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return false;
  if (!parse_fixed_int(text, 0, 4, y) || !parse_fixed_int(text, 5, 2, m) ||
      !parse_fixed_int(text, 8, 2, d)) {
    return false;
  }
  ymd = std::chrono::year{y} / std::chrono::month{static_cast<unsigned>(m)} /
        std::chrono::day{static_cast<unsigned>(d)};
  return ymd.ok();
}

}  // namespace

UtcDay parse_utc_day(std::string_view text) {
  std::chrono::year_month_day ymd{};
  WXBITS_REQUIRE(text.size() == 10 && parse_day_prefix(text, ymd),
                 ErrorCode::ParseError,
                 "expected YYYY-MM-DD, got '" + std::string(text) + "'");
  return UtcDay{ymd};
}

std::string format_utc_day(UtcDay day) {
  const std::chrono::year_month_day ymd{day};
  std::array<char, 16> buf{};
  std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf.data();
}

UtcTime parse_utc_time(std::string_view text) {
  std::chrono::year_month_day ymd{};
  int hh = 0, mm = 0, ss = 0;
  const bool ok = text.size() == 20 && parse_day_prefix(text, ymd) &&
                  text[10] == 'T' && text[13] == ':' && text[16] == ':' &&
                  text[19] == 'Z' && parse_fixed_int(text, 11, 2, hh) &&
                  parse_fixed_int(text, 14, 2, mm) &&
                  parse_fixed_int(text, 17, 2, ss) && hh < 24 && mm < 60 &&
                  ss < 60;
  WXBITS_REQUIRE(ok, ErrorCode::ParseError,
                 "expected RFC 3339 UTC time YYYY-MM-DDTHH:MM:SSZ, got '" +
                     std::string(text) + "'");
  return UtcTime{UtcDay{ymd}} + std::chrono::hours{hh} +
         std::chrono::minutes{mm} + std::chrono::seconds{ss};
}

std::string format_utc_time(UtcTime t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::hh_mm_ss hms{t - day};
  std::array<char, 16> buf{};
  std::snprintf(buf.data(), buf.size(), "T%02d:%02d:%02dZ",
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return format_utc_day(day) + buf.data();
}

}  // namespace wxbits
