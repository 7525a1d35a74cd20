#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "polluterwatch/time.hpp"

namespace pw {

using UserId = std::string;

enum class City { Adelaide, Brisbane, Melbourne, Perth, Sydney, Australia };

inline constexpr std::array<City, 6> kAllCities = {
    City::Adelaide, City::Brisbane, City::Melbourne,
    City::Perth,    City::Sydney,   City::Australia};

std::optional<City> parse_city(std::string_view name);
std::string_view city_name(City city);

struct UserSnapshot {
  std::string screen_name;
  std::string display_name;
  std::int64_t followers_count = 0;  // in-degree
  std::int64_t friends_count = 0;    // out-degree
  bool verified = false;
  UnixSeconds account_created_at = 0;
};

// One streamed tweet with its embedded user snapshot — the only raw input.
struct TweetRecord {
  std::string tweet_id;
  std::string user_id;
  UnixSeconds created_at = 0;
  std::string text;
  std::vector<std::string> urls;  // canonical, deduplicated, input order kept
  std::vector<std::string> hashtags;
  City city = City::Australia;
  UserSnapshot user;
  // Raw URL strings seen before canonicalization. May exceed urls.size()
  // when a URL failed to canonicalize; such tweets still count as
  // URL-bearing for diversity purposes.
  std::int32_t raw_url_count = 0;

  bool has_url_content() const {
    return raw_url_count > 0 || !urls.empty();
  }
};

// Ground-truth event dates per city (GSR).
struct EventCalendar {
  std::map<City, std::set<Date>> entries;

  void add(City city, Date date) { entries[city].insert(date); }

  bool contains(City city, Date date) const {
    auto it = entries.find(city);
    return it != entries.end() && it->second.count(date) > 0;
  }

  bool empty() const { return entries.empty(); }

  // CSV with header "city,date". Throws FileFormatError naming the line
  // on malformed rows.
  static EventCalendar from_csv(std::istream& in);
};

void write_calendar_csv(const EventCalendar& calendar, std::ostream& out);

// Unicode scalar values in a UTF-8 string (continuation bytes not counted).
std::size_t unicode_scalar_count(std::string_view utf8);

}  // namespace pw
