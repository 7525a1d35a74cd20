#include "polluterwatch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "polluterwatch/csv.hpp"
#include "polluterwatch/errors.hpp"

namespace pw {

CorpusStats dataset_stats(std::span<const TweetRecord> records) {
  CorpusStats stats;
  std::map<City, std::unordered_map<UserId, UserSnapshot>> users_by_city;
  std::map<City, std::unordered_set<std::string>> urls_by_city;

  for (const auto& rec : records) {
    stats[rec.city].tweet_count += 1;
    users_by_city[rec.city][rec.user_id] = rec.user;  // last snapshot wins
    for (const auto& url : rec.urls) urls_by_city[rec.city].insert(url);
  }

  for (auto& [city, city_stats] : stats) {
    const auto& users = users_by_city[city];
    city_stats.unique_user_count = std::int64_t(users.size());
    city_stats.unique_url_count = std::int64_t(urls_by_city[city].size());
    double followers = 0.0, friends = 0.0;
    for (const auto& [user, snap] : users) {
      followers += double(snap.followers_count);
      friends += double(snap.friends_count);
      city_stats.verified_count += snap.verified ? 1 : 0;
    }
    if (!users.empty()) {
      city_stats.mean_followers = followers / double(users.size());
      city_stats.mean_friends = friends / double(users.size());
    }
  }
  return stats;
}

void write_corpus_stats_csv(const CorpusStats& stats, std::ostream& out) {
  out << "city,tweets,unique_users,unique_urls,mean_followers,mean_friends,"
         "verified\n";
  char buf[64];
  for (const auto& [city, s] : stats) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", s.mean_followers, s.mean_friends);
    out << city_name(city) << ',' << s.tweet_count << ',' << s.unique_user_count
        << ',' << s.unique_url_count << ',' << buf << ',' << s.verified_count
        << '\n';
  }
}

namespace {

std::optional<AccountLabel> parse_label(std::string_view text) {
  if (text == "bot") return AccountLabel::bot;
  if (text == "legitimate") return AccountLabel::legitimate;
  return std::nullopt;
}

}  // namespace

LabelledDataset load_labelled_csv(std::istream& in) {
  LabelledDataset dataset;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = csv::split_line(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "user_id") continue;
    if (fields.size() != 5)
      throw FileFormatError(
          "labelled line " + std::to_string(line_no) +
          ": expected user_id,label_1,label_2,label_3,predicted");

    auto predicted = parse_label(fields[4]);
    if (!predicted)
      throw FileFormatError("labelled line " + std::to_string(line_no) +
                            ": bad predicted label '" + fields[4] + "'");

    // 2-of-3 majority; anything outside {bot, legitimate} abstains.
    int bot_votes = 0, legit_votes = 0;
    for (int i = 1; i <= 3; ++i) {
      if (auto label = parse_label(fields[i])) {
        (*label == AccountLabel::bot ? bot_votes : legit_votes) += 1;
      }
    }
    if (bot_votes < 2 && legit_votes < 2) {
      dataset.dropped_no_majority += 1;
      continue;
    }
    dataset.rows.push_back({fields[0],
                            bot_votes >= 2 ? AccountLabel::bot
                                           : AccountLabel::legitimate,
                            *predicted});
  }
  return dataset;
}

double accuracy(std::span<const LabelledAccount> labels) {
  if (labels.empty()) throw std::invalid_argument("accuracy: empty label list");
  std::int64_t correct = 0;
  for (const auto& row : labels)
    if (row.human_label == row.predicted_label) ++correct;
  return double(correct) / double(labels.size());
}

double binomial_significance(std::int64_t successes, std::int64_t trials,
                             double null_p) {
  if (trials < 1) throw std::invalid_argument("binomial: trials must be >= 1");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("binomial: successes out of range");
  if (!(null_p > 0.0 && null_p < 1.0))
    throw std::invalid_argument("binomial: null_p must be in (0,1)");
  if (successes == 0) return 1.0;

  // P[X >= s] as a log-space sum of exact binomial terms.
  long double log_p = logl(static_cast<long double>(null_p));
  long double log_q = log1pl(static_cast<long double>(-null_p));
  long double lgamma_n1 = lgammal(static_cast<long double>(trials) + 1.0L);
  long double total = 0.0L;
  for (std::int64_t k = successes; k <= trials; ++k) {
    long double log_term =
        lgamma_n1 - lgammal(static_cast<long double>(k) + 1.0L) -
        lgammal(static_cast<long double>(trials - k) + 1.0L) +
        static_cast<long double>(k) * log_p +
        static_cast<long double>(trials - k) * log_q;
    total += expl(log_term);
  }
  return double(std::min(total, 1.0L));
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  // Lentz continued fraction for I_x(a,b); converges fast when
  // x < (a+1)/(a+b+2), otherwise use the symmetry I_x(a,b) = 1-I_{1-x}(b,a).
  auto contfrac = [](double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 1e-15;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
      double m2 = 2.0 * m;
      double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
      d = 1.0 + aa * d;
      if (std::fabs(d) < tiny) d = tiny;
      c = 1.0 + aa / c;
      if (std::fabs(c) < tiny) c = tiny;
      d = 1.0 / d;
      h *= d * c;
      aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
      d = 1.0 + aa * d;
      if (std::fabs(d) < tiny) d = tiny;
      c = 1.0 + aa / c;
      if (std::fabs(c) < tiny) c = tiny;
      d = 1.0 / d;
      double delta = d * c;
      h *= delta;
      if (std::fabs(delta - 1.0) < eps) break;
    }
    return h;
  };

  double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                     a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(log_front) * contfrac(a, b, x) / a;
  return 1.0 - std::exp(log_front) * contfrac(b, a, 1.0 - x) / b;
}

namespace {

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;  // n-1 denominator
  std::size_t n = 0;
};

SampleMoments moments(std::span<const double> sample) {
  SampleMoments m;
  m.n = sample.size();
  if (m.n == 0) return m;
  for (double v : sample) m.mean += v;
  m.mean /= double(m.n);
  if (m.n < 2) return m;
  for (double v : sample) m.variance += (v - m.mean) * (v - m.mean);
  m.variance /= double(m.n - 1);
  return m;
}

}  // namespace

WelchResult welch_t_test(std::span<const double> sample_a,
                         std::span<const double> sample_b) {
  if (sample_a.size() < 2 || sample_b.size() < 2)
    throw std::invalid_argument("welch_t_test: need >= 2 elements per sample");
  SampleMoments a = moments(sample_a);
  SampleMoments b = moments(sample_b);
  if (a.variance <= 0.0 || b.variance <= 0.0)
    throw std::invalid_argument("welch_t_test: degenerate (zero-variance) sample");
  double se_a = a.variance / double(a.n);
  double se_b = b.variance / double(b.n);

  WelchResult result;
  double se = std::sqrt(se_a + se_b);
  result.t_statistic = (a.mean - b.mean) / se;
  result.degrees_of_freedom =
      (se_a + se_b) * (se_a + se_b) /
      (se_a * se_a / double(a.n - 1) + se_b * se_b / double(b.n - 1));
  double t2 = result.t_statistic * result.t_statistic;
  double df = result.degrees_of_freedom;
  result.p_two_sided =
      t2 == 0.0 ? 1.0 : regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t2));
  return result;
}

ProportionTTest proportion_t_test(std::int64_t successes, std::int64_t trials,
                                  double null_p) {
  if (trials < 2)
    throw std::invalid_argument("proportion_t_test: trials must be >= 2");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("proportion_t_test: successes out of range");
  double n = double(trials);
  double p_hat = double(successes) / n;
  double variance = p_hat * (1.0 - p_hat) * n / (n - 1.0);  // sample var of 0/1s
  ProportionTTest result;
  if (variance <= 0.0) {
    // Degenerate all-0 or all-1 vector: report the sign, p collapses.
    result.t_statistic = p_hat > null_p ? std::numeric_limits<double>::infinity()
                         : p_hat < null_p
                             ? -std::numeric_limits<double>::infinity()
                             : 0.0;
    result.p_one_sided = p_hat > null_p ? 0.0 : 1.0;
    return result;
  }
  result.t_statistic = (p_hat - null_p) / std::sqrt(variance / n);
  double df = n - 1.0;
  double t2 = result.t_statistic * result.t_statistic;
  double tail =
      0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t2));
  result.p_one_sided = result.t_statistic >= 0.0 ? tail : 1.0 - tail;
  return result;
}

StatusSummary account_status_report(std::istream& statuses,
                                    const std::set<UserId>& flagged) {
  StatusSummary summary;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(statuses, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = csv::split_line(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "user_id") continue;
    if (fields.size() != 2)
      throw FileFormatError("status line " + std::to_string(line_no) +
                            ": expected user_id,code");
    AccountState state;
    if (fields[1].empty())
      state = AccountState::active;
    else if (fields[1] == "63")
      state = AccountState::suspended;
    else if (fields[1] == "50")
      state = AccountState::deleted;
    else
      throw FileFormatError("status line " + std::to_string(line_no) +
                            ": unknown status code '" + fields[1] + "'");
    if (!flagged.count(fields[0])) continue;
    switch (state) {
      case AccountState::active: summary.active_count += 1; break;
      case AccountState::suspended: summary.suspended_count += 1; break;
      case AccountState::deleted: summary.deleted_count += 1; break;
    }
  }
  return summary;
}

ExternalScoreSummary summarize_external_scores(
    std::istream& scores, const std::set<UserId>& flagged,
    std::span<const LabelledAccount> labelled) {
  std::unordered_map<UserId, double> score_of;
  ExternalScoreSummary summary;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(scores, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = csv::split_line(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "user_id") continue;
    if (fields.size() != 2) {
      summary.rejected_rows += 1;
      continue;
    }
    double value = 0.0;
    try {
      std::size_t consumed = 0;
      value = std::stod(fields[1], &consumed);
      if (consumed != fields[1].size()) throw std::invalid_argument("trail");
    } catch (const std::exception&) {
      summary.rejected_rows += 1;
      continue;
    }
    if (value < 0.0 || value > 1.0) {
      summary.rejected_rows += 1;
      continue;
    }
    score_of[fields[0]] = value;
  }

  double sum = 0.0;
  std::vector<double> covered_scores;
  for (const auto& user : flagged) {
    auto it = score_of.find(user);
    if (it == score_of.end()) continue;
    covered_scores.push_back(it->second);
    sum += it->second;
  }
  summary.covered = std::int64_t(covered_scores.size());
  summary.has_coverage = summary.covered > 0;
  if (summary.has_coverage) {
    summary.mean = sum / double(summary.covered);
    if (summary.covered > 1) {
      double ss = 0.0;
      for (double v : covered_scores)
        ss += (v - summary.mean) * (v - summary.mean);
      summary.sd = std::sqrt(ss / double(summary.covered - 1));
    }
  }

  for (const auto& row : labelled) {
    if (!flagged.count(row.user_id)) continue;
    auto it = score_of.find(row.user_id);
    if (it == score_of.end()) continue;
    bool above = it->second > 0.5;
    if (row.human_label == AccountLabel::bot) {
      summary.tp_total += 1;
      summary.tp_above_half += above ? 1 : 0;
    } else {
      summary.fp_total += 1;
      summary.fp_above_half += above ? 1 : 0;
    }
  }
  if (summary.tp_total > 0)
    summary.tp_fraction_above_half =
        double(summary.tp_above_half) / double(summary.tp_total);
  if (summary.fp_total > 0)
    summary.fp_fraction_above_half =
        double(summary.fp_above_half) / double(summary.fp_total);
  return summary;
}

}  // namespace pw
