#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "polluterwatch/tweet.hpp"

namespace pw {

// Labelled synthetic stream with planted content-polluter behaviour:
// bots share a small URL pool with near-identical diversity scores, a
// co-tweeting day schedule, one creation-date burst and a small name pool;
// legitimate users follow heavy-tailed activity and a Zipf URL popularity.
struct SynthConfig {
  std::uint64_t seed = 42;
  int n_legit_users = 2000;
  int n_bots = 100;
  int n_bot_urls = 5;
  int legit_url_pool = 400;
  int days = 60;
  int event_day_stride = 7;  // every stride-th day is a calendar event day

  double bot_cotweet_rate = 0.9;   // P(bot active | shared bot day)
  int bot_active_days = 24;        // size of the shared bot schedule
  double legit_tweet_rate = 0.4;   // mean tweets/user/day before weighting
  double legit_url_probability = 0.55;  // P(a legit tweet carries a URL)
  double second_url_probability = 0.05; // P(a URL tweet carries two)

  // Per-bot total tweet budget. 0 = derive from bot_tweet_fraction_target;
  // always rounded to a multiple of n_bot_urls so per-URL diversity scores
  // come out identical. bot_budget_noise = 1 re-adds the ±1 jitter.
  int bot_tweet_budget = 0;
  double bot_tweet_fraction_target = 0.07;
  int bot_budget_noise = 0;

  std::string burst_date = "2012-04-07";
  int burst_name_pool = 12;
  double burst_fraction = 1.0;  // bots created exactly on burst_date

  double bot_age_mean_years = 2.9;  // non-burst bots
  double bot_age_sd_years = 0.3;
  double legit_age_mean_years = 4.2;
  double legit_age_sd_years = 1.0;

  double url_zipf_exponent = 1.2;   // legit URL popularity
  double user_weight_exponent = 0.8;  // heavy tail across legit users
  double max_tweets_per_day = 8.0;    // activity cap (media accounts)
  double media_fraction = 0.01;       // verified high-follower news accounts

  std::string start_date = "2015-01-01";

  void validate() const;  // throws ConfigError
};

struct SynthStats {
  std::int64_t total_tweets = 0;
  std::int64_t bot_tweets = 0;
  double bot_tweet_fraction = 0.0;
};

struct SynthOutput {
  std::vector<TweetRecord> records;  // chronological
  std::map<UserId, bool> is_bot;     // ground truth, covers every user
  EventCalendar calendar;
  SynthStats stats;
};

// Deterministic for a fixed seed, including across repeated runs.
SynthOutput generate(const SynthConfig& config);

// Writers using exactly the ingest input schema.
void write_stream_jsonl(const SynthOutput& output, std::ostream& out);
void write_ground_truth_csv(const SynthOutput& output, std::ostream& out);

}  // namespace pw
