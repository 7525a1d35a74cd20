#include "polluterwatch/detector.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "polluterwatch/csv.hpp"

namespace pw {

namespace {

// Last snapshot wins, matching dataset_stats.
std::unordered_map<UserId, UserSnapshot> latest_snapshots(
    std::span<const TweetRecord> records) {
  std::unordered_map<UserId, UserSnapshot> snapshots;
  for (const auto& rec : records) snapshots[rec.user_id] = rec.user;
  return snapshots;
}

std::string lowercase_copy(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return out;
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values,
                                    double bin_width) {
  std::vector<HistogramBin> bins;
  if (values.empty()) return bins;
  double max_value = *std::max_element(values.begin(), values.end());
  std::size_t bin_count = std::size_t(std::floor(max_value / bin_width)) + 1;
  bins.resize(bin_count);
  for (std::size_t i = 0; i < bin_count; ++i) {
    bins[i].lo = double(i) * bin_width;
    bins[i].hi = double(i + 1) * bin_width;
  }
  for (double v : values) {
    auto i = std::min(bin_count - 1, std::size_t(std::floor(v / bin_width)));
    bins[i].count += 1;
  }
  return bins;
}

}  // namespace

std::string_view signal_name(Signal signal) {
  switch (signal) {
    case Signal::bot_url_link: return "bot_url_link";
    case Signal::dense_cluster: return "dense_cluster";
    case Signal::creation_burst: return "creation_burst";
  }
  return "bot_url_link";
}

std::set<UserId> DetectionReport::flagged_ids() const {
  std::set<UserId> ids;
  for (const auto& account : flagged) ids.insert(account.user_id);
  return ids;
}

DetectionReport flag_accounts(std::span<const UrlVerdict> verdicts,
                              const std::map<std::string, UrlDiversityTable>& tables,
                              std::span<const DenseComponent> clusters,
                              const CoTweetMultigraph& graph,
                              std::span<const TweetRecord> records,
                              const DetectorConfig& config) {
  std::map<UserId, FlaggedAccount> flagged;
  auto touch = [&flagged](const UserId& user) -> FlaggedAccount& {
    auto [it, inserted] = flagged.try_emplace(user);
    if (inserted) it->second.user_id = user;
    return it->second;
  };

  // Primary signal: membership in any bot_url table.
  for (const auto& verdict : verdicts) {
    if (verdict.label != UrlLabel::bot_url) continue;
    auto table_it = tables.find(verdict.url);
    if (table_it == tables.end())
      throw std::invalid_argument("flag_accounts: verdict for URL '" +
                                  verdict.url + "' has no diversity table");
    for (const auto& [user, triple] : table_it->second.users) {
      auto& account = touch(user);
      account.signals.insert(Signal::bot_url_link);
      account.evidence.push_back(
          {Signal::bot_url_link,
           "url=" + verdict.url + " u_k=" + std::to_string(triple.u_k)});
    }
  }

  auto snapshots = latest_snapshots(records);

  // Media exemption threshold: follower count at the configured percentile
  // over distinct accounts (nearest-rank).
  std::int64_t follower_cutoff = std::numeric_limits<std::int64_t>::max();
  if (!snapshots.empty()) {
    std::vector<std::int64_t> followers;
    followers.reserve(snapshots.size());
    for (const auto& [user, snap] : snapshots)
      followers.push_back(snap.followers_count);
    std::sort(followers.begin(), followers.end());
    auto rank = std::size_t(std::ceil(config.follower_exemption_percentile *
                                      double(followers.size())));
    rank = std::clamp<std::size_t>(rank, 1, followers.size());
    follower_cutoff = followers[rank - 1];
  }
  auto exempt = [&](const UserId& user) {
    auto it = snapshots.find(user);
    if (it == snapshots.end()) return false;
    return it->second.verified || it->second.followers_count > follower_cutoff;
  };

  // Corroborating signal: dense co-tweeting cluster, only when the cluster
  // already contains a bot-linked member (temporal evidence alone also
  // catches newsrooms).
  for (const auto& cluster : clusters) {
    if (cluster.mean_multiplicity <= config.dense_multiplicity_threshold)
      continue;
    bool has_bot_member = false;
    for (auto node : cluster.members) {
      auto it = flagged.find(graph.users[node]);
      if (it != flagged.end() &&
          it->second.signals.count(Signal::bot_url_link)) {
        has_bot_member = true;
        break;
      }
    }
    if (!has_bot_member) continue;
    std::string detail = "community=" + std::to_string(cluster.community_id) +
                         " size=" + std::to_string(cluster.members.size()) +
                         " mean_multiplicity=" +
                         format_double(cluster.mean_multiplicity);
    for (auto node : cluster.members) {
      const UserId& user = graph.users[node];
      if (exempt(user)) continue;
      auto& account = touch(user);
      account.signals.insert(Signal::dense_cluster);
      account.evidence.push_back({Signal::dense_cluster, detail});
    }
  }

  // Annotate creation bursts among the accounts already flagged.
  {
    std::vector<TweetRecord> flagged_records;
    for (const auto& rec : records)
      if (flagged.count(rec.user_id)) flagged_records.push_back(rec);
    for (const auto& burst :
         creation_bursts(flagged_records, config.burst_min_count)) {
      std::string detail =
          "created=" + format_date(burst.creation_date) +
          " count=" + std::to_string(burst.account_count) +
          " unique_names=" + std::to_string(burst.unique_name_count);
      for (const auto& user : burst.member_ids) {
        auto& account = touch(user);
        account.signals.insert(Signal::creation_burst);
        account.evidence.push_back({Signal::creation_burst, detail});
      }
    }
  }

  DetectionReport report;
  UnixSeconds as_of = 0;
  for (const auto& rec : records) as_of = std::max(as_of, rec.created_at);
  for (auto& [user, account] : flagged) {
    if (auto it = snapshots.find(user); it != snapshots.end()) {
      account.account_age_years =
          years_between(it->second.account_created_at, as_of);
      account.name_length = int(unicode_scalar_count(it->second.screen_name));
      account.verified = it->second.verified;
    }
    report.flagged.push_back(std::move(account));
  }

  report.corpus_summary.total_tweets = std::int64_t(records.size());
  std::unordered_set<std::string_view> flagged_ids;
  for (const auto& account : report.flagged) flagged_ids.insert(account.user_id);
  for (const auto& rec : records)
    if (flagged_ids.count(rec.user_id)) report.corpus_summary.flagged_tweet_count++;
  report.corpus_summary.flagged_tweet_fraction =
      report.corpus_summary.total_tweets == 0
          ? 0.0
          : double(report.corpus_summary.flagged_tweet_count) /
                double(report.corpus_summary.total_tweets);
  return report;
}

std::vector<CreationBurst> creation_bursts(std::span<const TweetRecord> records,
                                           int min_count) {
  if (min_count < 2)
    throw std::invalid_argument("creation_bursts: min_count must be >= 2");

  auto snapshots = latest_snapshots(records);
  std::map<Date, std::vector<UserId>> by_date;
  for (const auto& [user, snap] : snapshots)
    by_date[civil_date(snap.account_created_at, 0)].push_back(user);

  std::vector<CreationBurst> bursts;
  for (auto& [date, members] : by_date) {
    if (std::int64_t(members.size()) < min_count) continue;
    std::sort(members.begin(), members.end());
    std::unordered_set<std::string> names;
    for (const auto& user : members)
      names.insert(lowercase_copy(snapshots[user].display_name));
    CreationBurst burst;
    burst.creation_date = date;
    burst.account_count = std::int64_t(members.size());
    burst.unique_name_count = std::int64_t(names.size());
    burst.member_ids = std::move(members);
    bursts.push_back(std::move(burst));
  }
  std::sort(bursts.begin(), bursts.end(),
            [](const CreationBurst& a, const CreationBurst& b) {
              if (a.account_count != b.account_count)
                return a.account_count > b.account_count;
              return a.creation_date < b.creation_date;
            });
  return bursts;
}

ComparisonStats population_stats(const std::set<UserId>& flagged,
                                 std::span<const TweetRecord> records,
                                 UnixSeconds as_of) {
  auto snapshots = latest_snapshots(records);
  for (const auto& [user, snap] : snapshots)
    if (snap.account_created_at > as_of)
      throw std::invalid_argument(
          "population_stats: as_of precedes an account creation");

  std::vector<double> ages_f, ages_l, names_f, names_l;
  ComparisonStats stats;
  for (const auto& [user, snap] : snapshots) {
    bool is_flagged = flagged.count(user) > 0;
    PopulationSummary& pop = is_flagged ? stats.flagged : stats.legitimate;
    double age = years_between(snap.account_created_at, as_of);
    double screen_len = double(unicode_scalar_count(snap.screen_name));
    pop.account_count += 1;
    pop.mean_age_years += age;
    pop.mean_screen_name_length += screen_len;
    pop.mean_display_name_length +=
        double(unicode_scalar_count(snap.display_name));
    pop.verified_count += snap.verified ? 1 : 0;
    (is_flagged ? ages_f : ages_l).push_back(age);
    (is_flagged ? names_f : names_l).push_back(screen_len);
  }
  for (PopulationSummary* pop : {&stats.flagged, &stats.legitimate}) {
    if (pop->account_count == 0) continue;
    pop->mean_age_years /= double(pop->account_count);
    pop->mean_screen_name_length /= double(pop->account_count);
    pop->mean_display_name_length /= double(pop->account_count);
  }
  stats.age_hist_flagged = histogram(ages_f, 0.5);
  stats.age_hist_legitimate = histogram(ages_l, 0.5);
  stats.name_hist_flagged = histogram(names_f, 1.0);
  stats.name_hist_legitimate = histogram(names_l, 1.0);
  return stats;
}

void write_report_csv(const DetectionReport& report, std::ostream& out) {
  out << "user_id,signals,evidence,account_age_years,name_length,verified\n";
  for (const auto& account : report.flagged) {
    std::string signals;
    for (Signal s : account.signals) {
      if (!signals.empty()) signals.push_back('|');
      signals += signal_name(s);
    }
    std::string evidence;
    for (const auto& e : account.evidence) {
      if (!evidence.empty()) evidence.push_back('|');
      evidence += std::string(signal_name(e.signal)) + ":" + e.detail;
    }
    out << csv::escape(account.user_id) << ',' << signals << ','
        << csv::escape(evidence) << ',' << format_double(account.account_age_years)
        << ',' << account.name_length << ','
        << (account.verified ? "true" : "false") << '\n';
  }
}

namespace {

void write_histogram(const std::vector<HistogramBin>& flagged,
                     const std::vector<HistogramBin>& legitimate,
                     std::ostream& out) {
  out << "population,bin_start,bin_end,count\n";
  for (const auto& bin : flagged)
    out << "flagged," << format_double(bin.lo) << ',' << format_double(bin.hi)
        << ',' << bin.count << '\n';
  for (const auto& bin : legitimate)
    out << "legitimate," << format_double(bin.lo) << ',' << format_double(bin.hi)
        << ',' << bin.count << '\n';
}

}  // namespace

void write_age_histogram_csv(const ComparisonStats& stats, std::ostream& out) {
  write_histogram(stats.age_hist_flagged, stats.age_hist_legitimate, out);
}

void write_name_histogram_csv(const ComparisonStats& stats, std::ostream& out) {
  write_histogram(stats.name_hist_flagged, stats.name_hist_legitimate, out);
}

void write_population_csv(const ComparisonStats& stats, std::ostream& out) {
  out << "population,accounts,mean_age_years,mean_screen_name_length,"
         "mean_display_name_length,verified_count\n";
  auto row = [&out](const char* name, const PopulationSummary& pop) {
    out << name << ',' << pop.account_count << ','
        << format_double(pop.mean_age_years) << ','
        << format_double(pop.mean_screen_name_length) << ','
        << format_double(pop.mean_display_name_length) << ','
        << pop.verified_count << '\n';
  };
  row("flagged", stats.flagged);
  row("legitimate", stats.legitimate);
}

}  // namespace pw
