#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "polluterwatch/tweet.hpp"

namespace pw {

struct CityStats {
  std::int64_t tweet_count = 0;
  std::int64_t unique_user_count = 0;
  std::int64_t unique_url_count = 0;
  double mean_followers = 0.0;
  double mean_friends = 0.0;
  std::int64_t verified_count = 0;
};

using CorpusStats = std::map<City, CityStats>;

// Exact per-city counts; user-level values deduplicated by user_id with
// the last snapshot winning.
CorpusStats dataset_stats(std::span<const TweetRecord> records);

void write_corpus_stats_csv(const CorpusStats& stats, std::ostream& out);

enum class AccountLabel { bot, legitimate };

struct LabelledAccount {
  UserId user_id;
  AccountLabel human_label;      // 2-of-3 majority over hand-labellers
  AccountLabel predicted_label;  // this engine's verdict
};

struct LabelledDataset {
  std::vector<LabelledAccount> rows;
  std::int64_t dropped_no_majority = 0;  // rows without a 2-of-3 majority
};

// CSV "user_id,label_1,label_2,label_3,predicted"; labeller entries other
// than bot/legitimate count as abstentions. Throws FileFormatError on a
// malformed row, naming the line.
LabelledDataset load_labelled_csv(std::istream& in);

// Fraction of rows where predicted matches the human majority. Throws
// std::invalid_argument on an empty list.
double accuracy(std::span<const LabelledAccount> labels);

// Exact one-sided binomial tail P[X >= successes] under
// Binomial(trials, null_p), log-space arithmetic. Throws
// std::invalid_argument on violated preconditions.
double binomial_significance(std::int64_t successes, std::int64_t trials,
                             double null_p);

// One-sample t test of a success proportion against null_p (the paper's
// wording), one-sided. Secondary to binomial_significance.
struct ProportionTTest {
  double t_statistic = 0.0;
  double p_one_sided = 1.0;
};
ProportionTTest proportion_t_test(std::int64_t successes, std::int64_t trials,
                                  double null_p);

struct WelchResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_two_sided = 1.0;
};

// Welch's unequal-variance t test, p-value via the regularized incomplete
// beta function. Requires >= 2 elements per sample and nonzero variance in
// at least one sample; throws std::invalid_argument otherwise.
WelchResult welch_t_test(std::span<const double> sample_a,
                         std::span<const double> sample_b);

// Regularized incomplete beta I_x(a, b); exposed for the stats oracles.
double regularized_incomplete_beta(double a, double b, double x);

enum class AccountState { active, suspended, deleted };

struct StatusSummary {
  std::int64_t suspended_count = 0;  // code 63
  std::int64_t deleted_count = 0;    // code 50
  std::int64_t active_count = 0;     // empty code
};

// CSV "user_id,code" with code in {63, 50, empty}; counts rows whose
// user_id is in the flagged set. Unknown codes are fatal, with line number.
StatusSummary account_status_report(std::istream& statuses,
                                    const std::set<UserId>& flagged);

struct ExternalScoreSummary {
  std::int64_t covered = 0;  // flagged accounts with a score
  double mean = 0.0;
  double sd = 0.0;  // sample (n-1) standard deviation
  std::int64_t tp_total = 0;  // flagged AND human-labelled bot, with a score
  std::int64_t fp_total = 0;  // flagged AND human-labelled legitimate, with a score
  std::int64_t tp_above_half = 0;
  std::int64_t fp_above_half = 0;
  double tp_fraction_above_half = 0.0;
  double fp_fraction_above_half = 0.0;
  std::int64_t rejected_rows = 0;  // malformed or out-of-range scores
  bool has_coverage = false;       // false marks the zero-coverage case
};

// CSV "user_id,score" with scores in [0,1]; out-of-range rows are rejected
// and counted, not fatal.
ExternalScoreSummary summarize_external_scores(
    std::istream& scores, const std::set<UserId>& flagged,
    std::span<const LabelledAccount> labelled);

}  // namespace pw
