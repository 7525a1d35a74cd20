#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "polluterwatch/tweet.hpp"
#include "polluterwatch/tz.hpp"

namespace pw {

struct IngestConfig {
  // Streams can replay; keep the first occurrence of a tweet_id and log
  // the rest.
  bool deduplicate_tweet_ids = true;
};

struct ParseError {
  std::size_t line_no = 0;  // 1-based
  std::string reason;
};

struct IngestResult {
  std::vector<TweetRecord> records;
  std::vector<ParseError> errors;
};

// Parses line-delimited JSON records. Well-formed lines become records in
// input order; malformed lines are logged with their line number and
// skipped. An unreadable stream throws IoError.
IngestResult parse_stream(std::istream& source, const IngestConfig& config = {});

// One line per error: "<line_no>\t<reason>".
void write_error_log(const std::vector<ParseError>& errors, std::ostream& out);

// Scheme dropped, host lowercased, query/fragment dropped, trailing slashes
// stripped, path case preserved. nullopt when no recognizable host.
std::optional<std::string> canonicalize_url(std::string_view raw);

// Local calendar date of the tweet in the given timezone.
Date active_day(const TweetRecord& record, const TimeZone& tz);
Date active_day(UnixSeconds created_at, const TimeZone& tz);

// Inverse of parse_stream for one record: a single JSON line (no newline).
// parse_stream(serialize_record(r)) reproduces r field for field.
std::string serialize_record(const TweetRecord& record);

}  // namespace pw
