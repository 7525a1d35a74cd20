#include "polluterwatch/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "polluterwatch/errors.hpp"

namespace pw {

namespace {

using json = nlohmann::ordered_json;

bool host_char_ok(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '.' || c == '-' || c == ':';
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

const std::regex kUrlInText(R"((https?://[^\s<>"']+))", std::regex::icase);
const std::regex kHashtagInText(R"(#(\w+))");

struct FieldError {
  std::string reason;
};

std::string require_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FieldError{std::string("missing field '") + key + "'"};
  if (!it->is_string())
    throw FieldError{std::string("field '") + key + "' must be a string"};
  return it->get<std::string>();
}

std::int64_t optional_count(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return 0;
  if (!it->is_number_integer() && !it->is_number_unsigned())
    throw FieldError{std::string("field '") + key + "' must be an integer"};
  std::int64_t v = it->get<std::int64_t>();
  if (v < 0) throw FieldError{std::string("field '") + key + "' must be nonnegative"};
  return v;
}

TweetRecord parse_record(const json& obj) {
  TweetRecord rec;
  rec.tweet_id = require_string(obj, "tweet_id");
  if (rec.tweet_id.empty()) throw FieldError{"field 'tweet_id' is empty"};
  rec.user_id = require_string(obj, "user_id");
  if (rec.user_id.empty()) throw FieldError{"field 'user_id' is empty"};

  auto created = parse_iso8601(require_string(obj, "created_at"));
  if (!created) throw FieldError{"field 'created_at' is not an ISO-8601 timestamp"};
  rec.created_at = *created;

  auto city = parse_city(require_string(obj, "city"));
  if (!city) throw FieldError{"field 'city' is not a known city"};
  rec.city = *city;

  if (auto it = obj.find("text"); it != obj.end()) {
    if (!it->is_string()) throw FieldError{"field 'text' must be a string"};
    rec.text = it->get<std::string>();
  }

  // Structured fields win; regex extraction from text is the fallback for
  // streams that omit them.
  std::vector<std::string> raw_urls;
  if (auto it = obj.find("urls"); it != obj.end()) {
    if (!it->is_array()) throw FieldError{"field 'urls' must be an array"};
    for (const auto& u : *it) {
      if (!u.is_string()) throw FieldError{"field 'urls' must hold strings"};
      raw_urls.push_back(u.get<std::string>());
    }
  } else {
    auto begin = std::sregex_iterator(rec.text.begin(), rec.text.end(), kUrlInText);
    for (auto it2 = begin; it2 != std::sregex_iterator(); ++it2)
      raw_urls.push_back(it2->str());
  }
  rec.raw_url_count = std::int32_t(raw_urls.size());
  std::unordered_set<std::string> seen;
  for (const auto& raw : raw_urls) {
    if (auto canonical = canonicalize_url(raw);
        canonical && seen.insert(*canonical).second) {
      rec.urls.push_back(*canonical);
    }
  }

  if (auto it = obj.find("hashtags"); it != obj.end()) {
    if (!it->is_array()) throw FieldError{"field 'hashtags' must be an array"};
    for (const auto& h : *it) {
      if (!h.is_string()) throw FieldError{"field 'hashtags' must hold strings"};
      std::string tag = h.get<std::string>();
      if (!tag.empty() && tag.front() == '#') tag.erase(tag.begin());
      if (!tag.empty()) rec.hashtags.push_back(lowercase(std::move(tag)));
    }
  } else {
    auto begin =
        std::sregex_iterator(rec.text.begin(), rec.text.end(), kHashtagInText);
    for (auto it2 = begin; it2 != std::sregex_iterator(); ++it2)
      rec.hashtags.push_back(lowercase((*it2)[1].str()));
  }

  auto user_it = obj.find("user");
  if (user_it == obj.end() || !user_it->is_object())
    throw FieldError{"missing field 'user'"};
  const json& user = *user_it;
  rec.user.screen_name = require_string(user, "screen_name");
  if (auto it = user.find("display_name"); it != user.end()) {
    if (!it->is_string()) throw FieldError{"field 'display_name' must be a string"};
    rec.user.display_name = it->get<std::string>();
  }
  rec.user.followers_count = optional_count(user, "followers_count");
  rec.user.friends_count = optional_count(user, "friends_count");
  if (auto it = user.find("verified"); it != user.end()) {
    if (!it->is_boolean()) throw FieldError{"field 'verified' must be a boolean"};
    rec.user.verified = it->get<bool>();
  }
  auto account_created = parse_iso8601(require_string(user, "account_created_at"));
  if (!account_created)
    throw FieldError{"field 'account_created_at' is not an ISO-8601 timestamp"};
  rec.user.account_created_at = *account_created;
  if (rec.user.account_created_at > rec.created_at)
    throw FieldError{"account_created_at is after the tweet's created_at"};

  return rec;
}

}  // namespace

std::optional<std::string> canonicalize_url(std::string_view raw) {
  if (raw.empty()) return std::nullopt;

  // Strip scheme ("http://", "ftp://", ...) or a bare "//".
  std::string_view rest = raw;
  if (auto pos = rest.find("://"); pos != std::string_view::npos) {
    std::string_view scheme = rest.substr(0, pos);
    bool scheme_ok = !scheme.empty() &&
                     std::isalpha(static_cast<unsigned char>(scheme[0]));
    for (char c : scheme) {
      unsigned char u = static_cast<unsigned char>(c);
      if (!std::isalnum(u) && c != '+' && c != '-' && c != '.') scheme_ok = false;
    }
    if (!scheme_ok) return std::nullopt;
    rest = rest.substr(pos + 3);
  } else if (rest.substr(0, 2) == "//") {
    rest = rest.substr(2);
  }

  // Cut query/fragment early so their contents never affect host parsing.
  if (auto pos = rest.find_first_of("?#"); pos != std::string_view::npos)
    rest = rest.substr(0, pos);

  std::string_view host = rest;
  std::string_view path;
  if (auto pos = rest.find('/'); pos != std::string_view::npos) {
    host = rest.substr(0, pos);
    path = rest.substr(pos);
  }
  if (auto at = host.rfind('@'); at != std::string_view::npos)
    host = host.substr(at + 1);  // drop userinfo

  if (host.empty()) return std::nullopt;
  for (char c : host)
    if (!host_char_ok(c)) return std::nullopt;
  // Require a dot-separated name or a host:port; lone words are not URLs.
  if (host.find('.') == std::string_view::npos &&
      host.find(':') == std::string_view::npos) {
    return std::nullopt;
  }
  if (host.front() == '.' || host.front() == '-') return std::nullopt;

  std::string canonical = lowercase(std::string(host));
  canonical += path;
  while (canonical.size() > host.size() && canonical.back() == '/')
    canonical.pop_back();
  return canonical;
}

IngestResult parse_stream(std::istream& source, const IngestConfig& config) {
  if (source.fail()) throw IoError("input stream is not readable");

  IngestResult result;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      result.errors.push_back({line_no, "not a JSON object"});
      continue;
    }
    try {
      TweetRecord rec = parse_record(obj);
      if (config.deduplicate_tweet_ids && !seen_ids.insert(rec.tweet_id).second) {
        result.errors.push_back(
            {line_no, "duplicate tweet_id '" + rec.tweet_id + "' (kept first)"});
        continue;
      }
      result.records.push_back(std::move(rec));
    } catch (const FieldError& e) {
      result.errors.push_back({line_no, e.reason});
    }
  }
  if (source.bad()) throw IoError("read failure on input stream");
  return result;
}

void write_error_log(const std::vector<ParseError>& errors, std::ostream& out) {
  for (const auto& e : errors) out << e.line_no << '\t' << e.reason << '\n';
}

Date active_day(UnixSeconds created_at, const TimeZone& tz) {
  return civil_date(created_at, tz.utc_offset_at(created_at));
}

Date active_day(const TweetRecord& record, const TimeZone& tz) {
  return active_day(record.created_at, tz);
}

std::string serialize_record(const TweetRecord& record) {
  json obj;
  obj["tweet_id"] = record.tweet_id;
  obj["user_id"] = record.user_id;
  obj["created_at"] = format_iso8601(record.created_at);
  obj["text"] = record.text;
  obj["urls"] = record.urls;
  obj["hashtags"] = record.hashtags;
  obj["city"] = std::string(city_name(record.city));
  obj["user"] = {
      {"screen_name", record.user.screen_name},
      {"display_name", record.user.display_name},
      {"followers_count", record.user.followers_count},
      {"friends_count", record.user.friends_count},
      {"verified", record.user.verified},
      {"account_created_at", format_iso8601(record.user.account_created_at)},
  };
  return obj.dump();
}

}  // namespace pw
