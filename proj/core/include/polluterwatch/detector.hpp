#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "polluterwatch/diversity.hpp"
#include "polluterwatch/graph.hpp"
#include "polluterwatch/tweet.hpp"

namespace pw {

enum class Signal { bot_url_link, dense_cluster, creation_burst };

std::string_view signal_name(Signal signal);

struct Evidence {
  Signal signal;
  std::string detail;
};

struct FlaggedAccount {
  UserId user_id;
  std::set<Signal> signals;        // never empty
  std::vector<Evidence> evidence;  // one entry per contributing URL/cluster/burst
  double account_age_years = 0.0;
  int name_length = 0;  // screen_name, unicode scalar values
  bool verified = false;
};

struct CorpusSummary {
  std::int64_t total_tweets = 0;
  std::int64_t flagged_tweet_count = 0;
  double flagged_tweet_fraction = 0.0;
};

struct DetectionReport {
  std::vector<FlaggedAccount> flagged;  // sorted by user_id
  CorpusSummary corpus_summary;

  std::set<UserId> flagged_ids() const;
};

struct DetectorConfig {
  // dense_cluster fires only above this mean internal multiplicity
  // (strictly), and only for clusters containing a bot_url-linked member.
  // Whole-city communities sit near 3 shared days per pair on typical
  // windows; coordinated rings run far higher, so 5 separates them.
  double dense_multiplicity_threshold = 5.0;
  // Media exemption: verified accounts and accounts above this
  // follower-count percentile never receive the dense_cluster signal.
  double follower_exemption_percentile = 0.99;
  // Accounts-per-day threshold for annotating creation bursts.
  int burst_min_count = 5;
};

struct CreationBurst {
  Date creation_date{};
  std::int64_t account_count = 0;
  std::int64_t unique_name_count = 0;  // case-insensitive display names
  std::vector<UserId> member_ids;      // sorted
};

// bot_url_link: member of any bot_url-labelled table. dense_cluster:
// corroborating only — requires a bot-linked member in the cluster and
// skips media-exempt accounts. creation_burst annotates accounts that are
// already flagged. Flagging is monotone in evidence.
DetectionReport flag_accounts(std::span<const UrlVerdict> verdicts,
                              const std::map<std::string, UrlDiversityTable>& tables,
                              std::span<const DenseComponent> clusters,
                              const CoTweetMultigraph& graph,
                              std::span<const TweetRecord> records,
                              const DetectorConfig& config = {});

// Distinct accounts grouped by UTC creation date; dates with >= min_count
// accounts, largest burst first.
std::vector<CreationBurst> creation_bursts(std::span<const TweetRecord> records,
                                           int min_count);

struct PopulationSummary {
  std::int64_t account_count = 0;
  double mean_age_years = 0.0;
  double mean_screen_name_length = 0.0;
  double mean_display_name_length = 0.0;
  std::int64_t verified_count = 0;
};

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t count = 0;
};

struct ComparisonStats {
  PopulationSummary flagged;
  PopulationSummary legitimate;
  std::vector<HistogramBin> age_hist_flagged;     // 0.5-year bins
  std::vector<HistogramBin> age_hist_legitimate;
  std::vector<HistogramBin> name_hist_flagged;    // 1-character bins
  std::vector<HistogramBin> name_hist_legitimate;
};

// Account-age / name-length / verified comparison between the flagged and
// the remaining population. as_of must not precede any account creation.
ComparisonStats population_stats(const std::set<UserId>& flagged,
                                 std::span<const TweetRecord> records,
                                 UnixSeconds as_of);

// "user_id,signals,evidence,account_age_years,name_length,verified"
void write_report_csv(const DetectionReport& report, std::ostream& out);

// "population,bin_start,bin_end,count"
void write_age_histogram_csv(const ComparisonStats& stats, std::ostream& out);
void write_name_histogram_csv(const ComparisonStats& stats, std::ostream& out);

// Per-population means, both name variants included.
void write_population_csv(const ComparisonStats& stats, std::ostream& out);

}  // namespace pw
