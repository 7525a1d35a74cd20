#include "polluterwatch/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "polluterwatch/csv.hpp"

namespace pw {

std::vector<double> UrlDiversityTable::diversity_scores() const {
  std::vector<double> scores;
  scores.reserve(users.size());
  for (const auto& [user, triple] : users) scores.push_back(double(triple.u_d));
  return scores;
}

std::string_view url_label_name(UrlLabel label) {
  switch (label) {
    case UrlLabel::legitimate: return "legitimate";
    case UrlLabel::bot_url: return "bot_url";
    case UrlLabel::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

std::vector<std::string> top_k_urls(std::span<const TweetRecord> records,
                                    std::size_t k) {
  if (k < 1) throw std::invalid_argument("top_k_urls: k must be >= 1");
  std::unordered_map<std::string, std::int64_t> mentions;
  for (const auto& rec : records)
    for (const auto& url : rec.urls)  // already distinct per tweet
      mentions[url] += 1;

  std::vector<std::pair<std::string, std::int64_t>> ranked(mentions.begin(),
                                                           mentions.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > k) ranked.resize(k);

  std::vector<std::string> urls;
  urls.reserve(ranked.size());
  for (auto& [url, count] : ranked) urls.push_back(std::move(url));
  return urls;
}

std::map<std::string, UrlDiversityTable> diversity_tables(
    std::span<const TweetRecord> records, std::span<const std::string> urls) {
  std::unordered_set<std::string_view> wanted(urls.begin(), urls.end());

  // One corpus pass: per-user URL-bearing tweet count and per-(user, url)
  // mention counts restricted to the wanted set.
  std::unordered_map<UserId, std::int64_t> url_tweets;
  std::unordered_map<UserId, std::unordered_map<std::string_view, std::int64_t>>
      mentions;
  for (const auto& rec : records) {
    if (rec.has_url_content()) url_tweets[rec.user_id] += 1;
    for (const auto& url : rec.urls) {
      if (auto it = wanted.find(url); it != wanted.end())
        mentions[rec.user_id][*it] += 1;
    }
  }

  std::map<std::string, UrlDiversityTable> tables;
  for (const auto& url : urls) {
    auto& table = tables[url];
    table.url = url;
  }
  for (const auto& [user, per_url] : mentions) {
    for (const auto& [url, u_k] : per_url) {
      DiversityTriple triple;
      triple.u_all = url_tweets[user];
      triple.u_k = u_k;
      triple.u_d = triple.u_all - triple.u_k;
      tables[std::string(url)].users.emplace(user, triple);
    }
  }
  return tables;
}

UrlDiversityTable diversity_table(std::span<const TweetRecord> records,
                                  const std::string& url) {
  std::vector<std::string> one{url};
  auto tables = diversity_tables(records, one);
  return std::move(tables.at(url));
}

double gini(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("gini: empty score list");
  std::vector<double> sorted(scores.begin(), scores.end());
  for (double s : sorted)
    if (s < 0.0) throw std::invalid_argument("gini: negative score");
  std::sort(sorted.begin(), sorted.end());

  double n = double(sorted.size());
  double total = 0.0;
  double weighted = 0.0;  // sum of (2i - n - 1) * x_(i), i 1-based
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    total += sorted[i];
    weighted += (2.0 * double(i + 1) - n - 1.0) * sorted[i];
  }
  if (total == 0.0) return 0.0;  // complete equality by convention
  return weighted / (n * total);
}

RankSizeFit rank_size_fit(std::span<const double> scores) {
  if (scores.size() < 2)
    throw std::invalid_argument("rank_size_fit: need at least two scores");

  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  RankSizeFit fit;
  // Identical inputs have zero response variance; the flat fit explains
  // nothing and R² is 0 by definition.
  if (sorted.front() == sorted.back()) return fit;

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] <= 0.0) continue;  // log undefined; zeros excluded
    double x = std::log(double(i + 1));
    double y = std::log(sorted[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++n;
  }
  if (n < 2) return fit;

  double dn = double(n);
  double ss_xx = sxx - sx * sx / dn;
  double ss_xy = sxy - sx * sy / dn;
  double ss_yy = syy - sy * sy / dn;
  // Relative guard: equal positive scores leave ss_yy at rounding noise.
  if (ss_yy <= 1e-12 * std::max(1.0, syy) || ss_xx <= 0.0) return fit;

  double slope = ss_xy / ss_xx;
  double intercept = (sy - slope * sx) / dn;
  fit.exponent = -slope;
  fit.coefficient = std::exp(intercept);
  double r2 = (ss_xy * ss_xy) / (ss_xx * ss_yy);
  fit.r_squared = std::clamp(r2, 0.0, 1.0);
  return fit;
}

UrlVerdict classify_url(const UrlDiversityTable& table,
                        const DiversityThresholds& thresholds) {
  UrlVerdict verdict;
  verdict.url = table.url;
  verdict.n = table.n();
  if (verdict.n == 0) return verdict;  // no evidence either way

  auto scores = table.diversity_scores();
  verdict.gini = gini(scores);
  verdict.r_squared = scores.size() >= 2 ? rank_size_fit(scores).r_squared : 0.0;

  bool low_gini = verdict.gini < thresholds.gini_threshold;
  bool low_r2 = verdict.r_squared < thresholds.r2_threshold;
  if (verdict.n >= thresholds.min_users && low_gini && low_r2)
    verdict.label = UrlLabel::bot_url;
  else if (!low_gini && !low_r2)
    verdict.label = UrlLabel::legitimate;
  else
    verdict.label = UrlLabel::indeterminate;
  return verdict;
}

void write_verdict_csv(std::span<const UrlVerdict> verdicts, std::ostream& out) {
  out << "url,n,gini,r_squared,label\n";
  char buf[64];
  for (const auto& v : verdicts) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f", v.n, v.gini, v.r_squared);
    out << csv::escape(v.url) << ',' << buf << ',' << url_label_name(v.label)
        << '\n';
  }
}

void write_diversity_csv(const std::map<std::string, UrlDiversityTable>& tables,
                         std::ostream& out) {
  out << "url,user_id,u_all,u_k,u_d\n";
  for (const auto& [url, table] : tables)
    for (const auto& [user, triple] : table.users)
      out << csv::escape(url) << ',' << csv::escape(user) << ',' << triple.u_all
          << ',' << triple.u_k << ',' << triple.u_d << '\n';
}

}  // namespace pw
