#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "polluterwatch/diversity.hpp"

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

using namespace pw;
using fixtures::RecordBuilder;

namespace {

// n records for one user, each mentioning the given canonical URLs.
void add_tweets(std::vector<TweetRecord>& records, const std::string& user,
                int count, std::vector<std::string> urls) {
  for (int i = 0; i < count; ++i) {
    std::string id = user + "_" + std::to_string(records.size());
    records.push_back(
        RecordBuilder(id, user, "2015-06-01T10:00:00Z").urls(urls));
  }
}

}  // namespace

TEST_CASE("top_k_urls: empty corpus, ties, truncation") {
  std::vector<TweetRecord> records;
  CHECK(top_k_urls(records, 20).empty());

  add_tweets(records, "u1", 5, {"a.com/x"});
  add_tweets(records, "u2", 3, {"b.com/x"});
  add_tweets(records, "u3", 3, {"c.com/x"});
  auto top2 = top_k_urls(records, 2);
  REQUIRE(top2.size() == 2);
  CHECK(top2[0] == "a.com/x");
  CHECK(top2[1] == "b.com/x");  // tie with c broken lexicographically

  std::vector<TweetRecord> many;
  for (int i = 0; i < 30; ++i)
    add_tweets(many, "u" + std::to_string(i), i + 1,
               {"site" + std::to_string(i) + ".com/x"});
  CHECK(top_k_urls(many, 20).size() == 20);
}

TEST_CASE("diversity_table: triple arithmetic") {
  std::vector<TweetRecord> records;
  add_tweets(records, "u1", 7, {"k.com/x"});
  add_tweets(records, "u1", 3, {"other.com/y"});
  add_tweets(records, "u2", 4, {"other.com/y"});  // never tweets k

  auto table = diversity_table(records, "k.com/x");
  REQUIRE(table.n() == 1);
  const auto& triple = table.users.at("u1");
  CHECK(triple.u_all == 10);
  CHECK(triple.u_k == 7);
  CHECK(triple.u_d == 3);
  CHECK(table.users.count("u2") == 0);
}

TEST_CASE("diversity_table: repeated url in one tweet counts once") {
  // Ingest deduplicates per tweet, so a double mention is a single entry.
  std::vector<TweetRecord> records;
  add_tweets(records, "u1", 1, {"k.com/x"});
  auto table = diversity_table(records, "k.com/x");
  CHECK(table.users.at("u1").u_k == 1);
  CHECK(table.users.at("u1").u_all == 1);
}

TEST_CASE("diversity_table: multi-url tweet raises u_all once") {
  std::vector<TweetRecord> records;
  add_tweets(records, "u1", 1, {"k.com/x", "other.com/y"});
  auto table = diversity_table(records, "k.com/x");
  CHECK(table.users.at("u1").u_all == 1);
  CHECK(table.users.at("u1").u_k == 1);
  CHECK(table.users.at("u1").u_d == 0);
}

TEST_CASE("diversity_table: failed canonicalization counts toward u_all only") {
  std::vector<TweetRecord> records;
  add_tweets(records, "u1", 2, {"k.com/x"});
  records.push_back(
      RecordBuilder("t_bad", "u1", "2015-06-01T12:00:00Z").unparseable_url());
  auto table = diversity_table(records, "k.com/x");
  CHECK(table.users.at("u1").u_all == 3);
  CHECK(table.users.at("u1").u_k == 2);
}

TEST_CASE("diversity_table: sum of u_k equals the url's mention count") {
  std::mt19937 rng(99);
  std::vector<TweetRecord> records;
  std::int64_t mentions = 0;
  for (int u = 0; u < 20; ++u) {
    std::string user = "user" + std::to_string(u);
    int k_tweets = int(rng() % 5);
    mentions += k_tweets;
    add_tweets(records, user, k_tweets, {"k.com/x"});
    add_tweets(records, user, int(rng() % 5), {"other.com/y"});
  }
  auto table = diversity_table(records, "k.com/x");
  std::int64_t total = 0;
  for (const auto& [user, triple] : table.users) total += triple.u_k;
  CHECK(total == mentions);
}

TEST_CASE("gini: worked examples") {
  CHECK(gini(std::vector<double>{5, 5, 5}) == 0.0);
  CHECK(gini(std::vector<double>{0, 0, 10}) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(gini(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK(gini(std::vector<double>{7}) == 0.0);
}

TEST_CASE("gini: errors") {
  CHECK_THROWS_AS(gini({}), std::invalid_argument);
  CHECK_THROWS_AS(gini(std::vector<double>{1, -2}), std::invalid_argument);
}

TEST_CASE("gini: scale and permutation invariance, 1 - 1/n bound") {
  std::vector<double> xs{0, 1, 4, 2, 9, 4};
  double base = gini(xs);

  std::vector<double> scaled;
  for (double x : xs) scaled.push_back(3.5 * x);
  CHECK(gini(scaled) == doctest::Approx(base).epsilon(1e-12));

  std::vector<double> shuffled{9, 0, 4, 1, 4, 2};
  CHECK(gini(shuffled) == doctest::Approx(base).epsilon(1e-12));

  std::vector<double> extreme{0, 0, 0, 0, 0, 1};
  CHECK(gini(extreme) == doctest::Approx(1.0 - 1.0 / 6.0).epsilon(1e-12));
  CHECK(base <= 1.0 - 1.0 / 6.0);
}

TEST_CASE("gini: sorted form equals the double-sum oracle on small lists") {
  // Spot sample here; the acceptance suite sweeps the full space.
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> xs(1 + rng() % 8);
    for (auto& x : xs) x = double(rng() % 6);
    CHECK(gini(xs) == doctest::Approx(oracle::gini_double_sum(xs)).epsilon(1e-12));
  }
}

TEST_CASE("rank_size_fit: perfect power law") {
  std::vector<double> scores;
  for (int r = 1; r <= 50; ++r) scores.push_back(100.0 * std::pow(r, -1.2));
  auto fit = rank_size_fit(scores);
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.exponent == doctest::Approx(1.2).epsilon(1e-9));
  CHECK(fit.coefficient == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("rank_size_fit: all-equal scores give R^2 = 0") {
  std::vector<double> equal(10, 4.0);
  CHECK(rank_size_fit(equal).r_squared == 0.0);

  // Equal positives padded with zeros: same zero-variance response.
  std::vector<double> padded{4, 4, 4, 0, 0};
  CHECK(rank_size_fit(padded).r_squared == 0.0);
}

TEST_CASE("rank_size_fit: errors and zero handling") {
  CHECK_THROWS_AS(rank_size_fit({}), std::invalid_argument);
  CHECK_THROWS_AS(rank_size_fit(std::vector<double>{1.0}), std::invalid_argument);

  std::vector<double> one_positive{5, 0, 0};
  CHECK(rank_size_fit(one_positive).r_squared == 0.0);
  std::vector<double> zeros{0, 0, 0};
  CHECK(rank_size_fit(zeros).r_squared == 0.0);
}

TEST_CASE("rank_size_fit matches an independent least-squares oracle") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> noise(0.7, 1.3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> scores;
    for (int r = 1; r <= 40; ++r)
      scores.push_back(200.0 * std::pow(r, -1.4) * noise(rng));
    auto fit = rank_size_fit(scores);
    CHECK(fit.r_squared ==
          doctest::Approx(oracle::loglog_r_squared(scores)).epsilon(1e-9));
  }
}

namespace {

UrlDiversityTable table_with_scores(const std::vector<std::int64_t>& u_ds) {
  UrlDiversityTable table;
  table.url = "k.com/x";
  for (std::size_t i = 0; i < u_ds.size(); ++i) {
    DiversityTriple triple;
    triple.u_k = 1;
    triple.u_d = u_ds[i];
    triple.u_all = triple.u_k + triple.u_d;
    char name[16];
    std::snprintf(name, sizeof name, "u%03zu", i);
    table.users.emplace(name, triple);
  }
  return table;
}

}  // namespace

TEST_CASE("classify_url: the paper's anchor shapes") {
  DiversityThresholds thresholds;  // tau_G=0.4, tau_R=0.5, n_min=5

  // Heavy-tailed diversity: the legitimate signature.
  std::vector<std::int64_t> legit;
  for (int r = 1; r <= 40; ++r)
    legit.push_back(std::int64_t(std::lround(200.0 * std::pow(r, -1.5))));
  auto legit_verdict = classify_url(table_with_scores(legit), thresholds);
  CHECK(legit_verdict.gini >= 0.4);
  CHECK(legit_verdict.r_squared >= 0.5);
  CHECK(legit_verdict.label == UrlLabel::legitimate);

  // Identical diversity: the bot signature.
  auto bot_verdict = classify_url(
      table_with_scores(std::vector<std::int64_t>(40, 24)), thresholds);
  CHECK(bot_verdict.gini == 0.0);
  CHECK(bot_verdict.r_squared == 0.0);
  CHECK(bot_verdict.label == UrlLabel::bot_url);

  // Mixed signals stay indeterminate.
  std::vector<std::int64_t> mixed;
  for (int r = 1; r <= 40; ++r)
    mixed.push_back(std::int64_t(std::lround(200.0 * std::pow(r, -1.5))));
  DiversityThresholds strict = thresholds;
  strict.gini_threshold = 0.99;  // high gini bar: gini low but r2 high
  auto verdict = classify_url(table_with_scores(mixed), strict);
  CHECK(verdict.label == UrlLabel::indeterminate);
}

TEST_CASE("classify_url: small and empty tables") {
  DiversityThresholds thresholds;
  auto empty = classify_url(table_with_scores({}), thresholds);
  CHECK(empty.n == 0);
  CHECK(empty.label == UrlLabel::indeterminate);

  // One user: gini 0, r2 0, but below n_min.
  auto single = classify_url(table_with_scores({4}), thresholds);
  CHECK(single.n == 1);
  CHECK(single.label == UrlLabel::indeterminate);
}

TEST_CASE("classify_url: below n_min never labels bot_url") {
  DiversityThresholds thresholds;
  auto verdict = classify_url(table_with_scores({3, 3, 3}), thresholds);
  CHECK(verdict.gini == 0.0);
  CHECK(verdict.label == UrlLabel::indeterminate);
}

TEST_CASE("classification is monotone in gini") {
  // Squeezing the score spread toward equality lowers gini (r2 already low)
  // and must never move a verdict from bot_url toward legitimate.
  DiversityThresholds thresholds;
  double previous_gini = 1.0;
  bool seen_bot = false;
  for (int spread : {6, 4, 2, 1, 0}) {
    std::vector<std::int64_t> scores(30, 20);
    for (int i = 0; i < spread; ++i) scores[std::size_t(i)] += 12;
    auto verdict = classify_url(table_with_scores(scores), thresholds);
    CHECK(verdict.gini <= previous_gini + 1e-12);
    if (seen_bot) CHECK(verdict.label != UrlLabel::legitimate);
    if (verdict.label == UrlLabel::bot_url) seen_bot = true;
    previous_gini = verdict.gini;
  }
  CHECK(seen_bot);

  auto flat = classify_url(table_with_scores(std::vector<std::int64_t>(20, 9)),
                           thresholds);
  std::vector<std::int64_t> tail;
  for (int r = 1; r <= 20; ++r)
    tail.push_back(std::int64_t(std::lround(300.0 * std::pow(r, -1.6))));
  auto heavy = classify_url(table_with_scores(tail), thresholds);
  CHECK(flat.gini < heavy.gini);
  CHECK(flat.label == UrlLabel::bot_url);
  CHECK(heavy.label == UrlLabel::legitimate);
}

TEST_CASE("verdict and diversity csv formats") {
  std::vector<UrlVerdict> verdicts(1);
  verdicts[0].url = "k.com/x";
  verdicts[0].n = 3;
  verdicts[0].gini = 0.25;
  verdicts[0].r_squared = 0.5;
  verdicts[0].label = UrlLabel::indeterminate;
  std::ostringstream out;
  write_verdict_csv(verdicts, out);
  CHECK(out.str() ==
        "url,n,gini,r_squared,label\nk.com/x,3,0.250000,0.500000,indeterminate\n");

  std::map<std::string, UrlDiversityTable> tables;
  tables["k.com/x"] = table_with_scores({2});
  std::ostringstream dump;
  write_diversity_csv(tables, dump);
  CHECK(dump.str() == "url,user_id,u_all,u_k,u_d\nk.com/x,u000,3,1,2\n");
}
