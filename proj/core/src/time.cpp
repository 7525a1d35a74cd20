#include "polluterwatch/time.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace pw {

namespace {

bool parse_fixed_int(std::string_view text, std::size_t pos, std::size_t len,
                     int& out) {
  if (pos + len > text.size()) return false;
  int value = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (!std::isdigit(c)) return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

std::optional<Date> make_date(int y, int mo, int d) {
  std::chrono::year_month_day ymd{std::chrono::year{y},
                                  std::chrono::month{unsigned(mo)},
                                  std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd};
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  int y = 0, mo = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!parse_fixed_int(text, 0, 4, y) || !parse_fixed_int(text, 5, 2, mo) ||
      !parse_fixed_int(text, 8, 2, d)) {
    return std::nullopt;
  }
  return make_date(y, mo, d);
}

std::optional<UnixSeconds> parse_iso8601(std::string_view text) {
  // YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|±HH[:]MM]
  if (text.size() < 19) return std::nullopt;
  auto date = parse_date(text.substr(0, 10));
  if (!date) return std::nullopt;
  char sep = text[10];
  if (sep != 'T' && sep != 't' && sep != ' ') return std::nullopt;
  int h = 0, mi = 0, s = 0;
  if (text[13] != ':' || text[16] != ':') return std::nullopt;
  if (!parse_fixed_int(text, 11, 2, h) || !parse_fixed_int(text, 14, 2, mi) ||
      !parse_fixed_int(text, 17, 2, s)) {
    return std::nullopt;
  }
  if (h > 23 || mi > 59 || s > 60) return std::nullopt;
  if (s == 60) s = 59;  // leap second: clamp

  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      ++digits;
    }
    if (digits == 0) return std::nullopt;
  }

  std::int64_t offset = 0;
  if (pos < text.size()) {
    char c = text[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      int oh = 0, om = 0;
      ++pos;
      if (!parse_fixed_int(text, pos, 2, oh)) return std::nullopt;
      pos += 2;
      if (pos < text.size() && text[pos] == ':') ++pos;
      if (pos < text.size()) {
        if (!parse_fixed_int(text, pos, 2, om)) return std::nullopt;
        pos += 2;
      }
      if (oh > 18 || om > 59) return std::nullopt;
      offset = std::int64_t(oh) * 3600 + std::int64_t(om) * 60;
      if (c == '-') offset = -offset;
    } else {
      return std::nullopt;
    }
  }
  if (pos != text.size()) return std::nullopt;

  std::int64_t days = date->time_since_epoch().count();
  return days * 86400 + h * 3600 + mi * 60 + s - offset;
}

std::string format_iso8601(UnixSeconds t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  std::chrono::year_month_day ymd{Date{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()),
                int(rem / 3600), int((rem / 60) % 60), int(rem % 60));
  return buf;
}

std::string format_date(Date d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

Date civil_date(UnixSeconds t, std::int32_t utc_offset_seconds) {
  std::int64_t shifted = t + utc_offset_seconds;
  std::int64_t days = shifted / 86400;
  if (shifted % 86400 < 0) days -= 1;  // floor for pre-epoch instants
  return Date{std::chrono::days{days}};
}

double years_between(UnixSeconds from, UnixSeconds to) {
  return double(to - from) / (365.25 * 86400.0);
}

}  // namespace pw
