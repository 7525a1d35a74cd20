#pragma once

// Hand-built record fixtures shared across the test suites.

#include <string>
#include <vector>

#include "polluterwatch/time.hpp"
#include "polluterwatch/tweet.hpp"

namespace fixtures {

inline pw::UnixSeconds ts(const std::string& iso) {
  auto t = pw::parse_iso8601(iso);
  if (!t) throw std::runtime_error("fixture timestamp: " + iso);
  return *t;
}

inline pw::Date day(const std::string& iso) {
  auto d = pw::parse_date(iso);
  if (!d) throw std::runtime_error("fixture date: " + iso);
  return *d;
}

struct RecordBuilder {
  pw::TweetRecord record;

  RecordBuilder(std::string tweet_id, std::string user_id,
                const std::string& created_at) {
    record.tweet_id = std::move(tweet_id);
    record.user_id = std::move(user_id);
    record.created_at = ts(created_at);
    record.city = pw::City::Melbourne;
    record.user.screen_name = record.user_id;
    record.user.display_name = record.user_id;
    record.user.account_created_at = ts("2010-01-01T00:00:00Z");
  }

  RecordBuilder& city(pw::City c) {
    record.city = c;
    return *this;
  }

  RecordBuilder& urls(std::vector<std::string> canonical) {
    record.urls = std::move(canonical);
    record.raw_url_count = std::int32_t(record.urls.size());
    return *this;
  }

  // A URL-bearing tweet whose URL failed canonicalization.
  RecordBuilder& unparseable_url() {
    record.raw_url_count += 1;
    return *this;
  }

  RecordBuilder& created_account(const std::string& iso) {
    record.user.account_created_at = ts(iso);
    return *this;
  }

  RecordBuilder& screen_name(std::string name) {
    record.user.screen_name = std::move(name);
    return *this;
  }

  RecordBuilder& display_name(std::string name) {
    record.user.display_name = std::move(name);
    return *this;
  }

  RecordBuilder& followers(std::int64_t n) {
    record.user.followers_count = n;
    return *this;
  }

  RecordBuilder& verified(bool v = true) {
    record.user.verified = v;
    return *this;
  }

  operator pw::TweetRecord() const { return record; }
};

}  // namespace fixtures
