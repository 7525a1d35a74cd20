#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "polluterwatch/tweet.hpp"

namespace pw {

// (u_all, u_k, u_d) for one user against one URL.
struct DiversityTriple {
  std::int64_t u_all = 0;  // tweets containing any URL
  std::int64_t u_k = 0;    // tweets mentioning the URL in question
  std::int64_t u_d = 0;    // u_all - u_k
};

struct UrlDiversityTable {
  std::string url;  // canonical
  std::map<UserId, DiversityTriple> users;

  std::size_t n() const { return users.size(); }
  std::vector<double> diversity_scores() const;  // u_d values, user-id order
};

struct DiversityThresholds {
  double gini_threshold = 0.4;  // tau_G
  double r2_threshold = 0.5;    // tau_R
  std::size_t min_users = 5;    // n_min
};

enum class UrlLabel { legitimate, bot_url, indeterminate };

std::string_view url_label_name(UrlLabel label);

struct UrlVerdict {
  std::string url;
  double gini = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;
  UrlLabel label = UrlLabel::indeterminate;
};

// URLs by total tweet-mention count, descending; ties lexicographic.
// A tweet mentions a URL at most once regardless of repetitions.
std::vector<std::string> top_k_urls(std::span<const TweetRecord> records,
                                    std::size_t k);

// Tables for several URLs in one corpus pass. Users appear in a table only
// with u_k >= 1; triples are computed over the user's full record set.
std::map<std::string, UrlDiversityTable> diversity_tables(
    std::span<const TweetRecord> records, std::span<const std::string> urls);

UrlDiversityTable diversity_table(std::span<const TweetRecord> records,
                                  const std::string& url);

// Eq.-style Gini over nonnegative scores; 0 when the total is 0. Throws
// std::invalid_argument for an empty list or a negative entry. Computed
// with the O(n log n) sorted form; equality with the double sum is a
// tested invariant.
double gini(std::span<const double> scores);

struct RankSizeFit {
  double r_squared = 0.0;
  double exponent = 0.0;     // b in s(r) = a * r^-b
  double coefficient = 0.0;  // a
};

// Log-log least squares of score against rank (descending order, ranks
// 1..n), zero scores excluded. R² = 0 when all scores are equal or fewer
// than two positive scores remain. Throws std::invalid_argument when the
// input has fewer than two entries.
RankSizeFit rank_size_fit(std::span<const double> scores);

UrlVerdict classify_url(const UrlDiversityTable& table,
                        const DiversityThresholds& thresholds);

// "url,n,gini,r_squared,label"
void write_verdict_csv(std::span<const UrlVerdict> verdicts, std::ostream& out);

// "url,user_id,u_all,u_k,u_d" — distribution dump for external plotting.
void write_diversity_csv(const std::map<std::string, UrlDiversityTable>& tables,
                         std::ostream& out);

}  // namespace pw
