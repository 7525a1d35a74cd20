#include "polluterwatch/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <vector>

#include "polluterwatch/errors.hpp"
#include "polluterwatch/ingest.hpp"

namespace pw {

namespace {

// All sampling goes through explicit formulas on raw mt19937_64 output so
// streams are reproducible independent of standard-library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return double(engine_() >> 11) * 0x1.0p-53;
  }

  std::int64_t uniform_int(std::int64_t n) {  // [0, n)
    return n <= 1 ? 0 : std::int64_t(engine_() % std::uint64_t(n));
  }

  double normal(double mean, double sd) {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  std::int64_t poisson(double lambda) {  // Knuth; lambda stays small here
    if (lambda <= 0.0) return 0;
    double limit = std::exp(-lambda);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::mt19937_64 engine_;
};

// Inverse-CDF sampler over r^-s weights, r = 1..size.
class ZipfSampler {
 public:
  ZipfSampler(int size, double exponent) : cumulative_(std::size_t(size)) {
    double total = 0.0;
    for (int r = 0; r < size; ++r) {
      total += std::pow(double(r + 1), -exponent);
      cumulative_[std::size_t(r)] = total;
    }
    for (auto& c : cumulative_) c /= total;
  }

  int sample(Rng& rng) const {
    double u = rng.uniform();
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) return int(cumulative_.size()) - 1;
    return int(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

constexpr std::array<City, 5> kHomeCities = {City::Adelaide, City::Brisbane,
                                             City::Melbourne, City::Perth,
                                             City::Sydney};

const char* const kScreenPrefixes[] = {"aus", "syd", "melb", "bris",
                                       "perth", "adl", "oz", "down_under"};
const char* const kScreenMiddles[] = {"watcher", "local", "voice", "daily",
                                      "life",    "fan",   "views", "chat"};
const char* const kFirstNames[] = {"Alex", "Sam",  "Jordan", "Casey",
                                   "Riley", "Morgan", "Taylor", "Jamie"};
const char* const kLastNames[] = {"Nguyen", "Smith", "Chen", "Walker",
                                  "Patel",  "Brown", "Singh", "Kelly"};
const char* const kBotAdjectives[] = {"Breaking", "True", "Real", "Daily",
                                      "Patriot",  "First", "Free", "United"};
const char* const kBotNouns[] = {"News AU",   "Aussie Voice", "Oz Report",
                                 "Headlines", "Watch",        "Bulletin",
                                 "Dispatch",  "Insider"};
const char* const kHashtags[] = {"auspol", "protest", "rally",  "march",
                                 "unrest", "strike",  "reform", "vote"};
const char* const kLegitTexts[] = {
    "Crowds gathering in the CBD again today",
    "March planned for this weekend, stay safe everyone",
    "Traffic blocked near the square because of the rally",
    "Speaking up matters, see you at the protest",
    "Live updates from the demonstration downtown",
    "Council meeting turned heated tonight",
};
const char* const kBotTexts[] = {
    "You won't believe what they are hiding from you",
    "The truth they don't want you to read",
    "SHOCKING report every Australian must see",
    "Read this before it gets taken down",
};

std::string two_digits(std::int64_t v, int width) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%0*lld", width, (long long)v);
  return buf;
}

struct PendingTweet {
  UnixSeconds created_at;
  std::int64_t sequence;  // draw order, breaks timestamp ties
  TweetRecord record;
};

}  // namespace

void SynthConfig::validate() const {
  auto positive = [](long v, const char* what) {
    if (v <= 0) throw ConfigError(std::string("synth: ") + what + " must be positive");
  };
  positive(n_legit_users, "n_legit_users");
  if (n_bots < 0) throw ConfigError("synth: n_bots must be >= 0");
  positive(n_bot_urls, "n_bot_urls");
  positive(legit_url_pool, "legit_url_pool");
  positive(days, "days");
  positive(event_day_stride, "event_day_stride");
  positive(bot_active_days, "bot_active_days");
  positive(burst_name_pool, "burst_name_pool");
  for (double p : {bot_cotweet_rate, legit_url_probability,
                   second_url_probability, burst_fraction, media_fraction,
                   bot_tweet_fraction_target}) {
    if (p < 0.0 || p > 1.0)
      throw ConfigError("synth: probabilities must be in [0,1]");
  }
  if (legit_tweet_rate <= 0.0 || max_tweets_per_day <= 0.0)
    throw ConfigError("synth: tweet rates must be positive");
  if (!parse_date(start_date)) throw ConfigError("synth: bad start_date");
  if (!parse_date(burst_date)) throw ConfigError("synth: bad burst_date");
  if (bot_budget_noise < 0 || bot_budget_noise > 1)
    throw ConfigError("synth: bot_budget_noise must be 0 or 1");
}

SynthOutput generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);

  Date start = *parse_date(config.start_date);
  UnixSeconds start_s = UnixSeconds(start.time_since_epoch().count()) * 86400;
  UnixSeconds end_s = start_s + UnixSeconds(config.days) * 86400;
  Date burst_day = *parse_date(config.burst_date);
  UnixSeconds burst_s = UnixSeconds(burst_day.time_since_epoch().count()) * 86400;
  // Accounts must exist before their first possible tweet.
  double min_age_years = double(config.days + 2) * 86400 / (365.25 * 86400.0);

  SynthOutput output;
  for (int d = 0; d < config.days; d += config.event_day_stride) {
    Date date = start + std::chrono::days{d};
    for (City city : kHomeCities) output.calendar.add(city, date);
  }

  struct UserSpec {
    UserId id;
    City city;
    UserSnapshot snapshot;
    double tweets_per_day = 0.0;  // legit only
    bool is_bot = false;
    bool is_media = false;
  };
  std::vector<UserSpec> users;
  users.reserve(std::size_t(config.n_legit_users + config.n_bots));

  // Heavy-tailed activity weights across legitimate users; the top slice
  // doubles as verified media accounts.
  int n_media = int(std::ceil(config.media_fraction * config.n_legit_users));
  std::vector<double> weights(std::size_t(config.n_legit_users));
  double weight_sum = 0.0;
  for (int i = 0; i < config.n_legit_users; ++i) {
    weights[std::size_t(i)] =
        std::pow(double(i + 1), -config.user_weight_exponent);
    weight_sum += weights[std::size_t(i)];
  }
  double mean_weight = weight_sum / double(config.n_legit_users);

  int n_event_days = 0;
  for (int d = 0; d < config.days; d += config.event_day_stride) ++n_event_days;
  const double event_boost = 1.5;

  double expected_legit_tweets = 0.0;
  for (int i = 0; i < config.n_legit_users; ++i) {
    UserSpec user;
    user.id = "u" + two_digits(i, 5);
    user.city = kHomeCities[std::size_t(i) % kHomeCities.size()];
    user.is_media = i < n_media;
    user.tweets_per_day =
        std::min(config.max_tweets_per_day,
                 config.legit_tweet_rate * weights[std::size_t(i)] / mean_weight);
    expected_legit_tweets +=
        user.tweets_per_day * double(config.days - n_event_days) +
        std::min(user.tweets_per_day * event_boost, config.max_tweets_per_day) *
            double(n_event_days);

    double age = std::max(config.legit_age_sd_years > 0.0
                              ? rng.normal(config.legit_age_mean_years,
                                           config.legit_age_sd_years)
                              : config.legit_age_mean_years,
                          min_age_years);
    user.snapshot.account_created_at =
        end_s - UnixSeconds(age * 365.25 * 86400.0);

    if (user.is_media) {
      user.snapshot.screen_name = "au_news_wire_" + two_digits(i, 2);
      user.snapshot.display_name =
          std::string(kBotNouns[std::size_t(i) % 8]) + " Official";
      user.snapshot.followers_count = 30000 + rng.uniform_int(200000);
      user.snapshot.friends_count = 500 + rng.uniform_int(2000);
      user.snapshot.verified = true;
    } else {
      user.snapshot.screen_name =
          std::string(kScreenPrefixes[rng.uniform_int(8)]) + "_" +
          kScreenMiddles[rng.uniform_int(8)] + "_" +
          std::to_string(rng.uniform_int(1000));
      user.snapshot.display_name =
          std::string(kFirstNames[rng.uniform_int(8)]) + " " +
          kLastNames[rng.uniform_int(8)];
      user.snapshot.followers_count =
          std::int64_t(std::exp(rng.normal(5.5, 1.2)));
      user.snapshot.friends_count =
          std::int64_t(std::exp(rng.normal(5.8, 1.0)));
      user.snapshot.verified = rng.uniform() < 0.01;
    }
    users.push_back(std::move(user));
  }

  for (int j = 0; j < config.n_bots; ++j) {
    UserSpec bot;
    bot.is_bot = true;
    bot.id = "u" + two_digits(config.n_legit_users + j, 5);
    bot.city = City::Melbourne;  // one coordinated ring, one city
    bot.snapshot.screen_name = "au_feed_" + two_digits(j, 3);
    int pool = config.burst_name_pool;
    int name_index = int(rng.uniform_int(pool));
    bot.snapshot.display_name =
        std::string(kBotAdjectives[std::size_t(name_index) % 8]) + " " +
        kBotNouns[(std::size_t(name_index) / 8) % 8];
    bot.snapshot.followers_count = 50 + rng.uniform_int(300);
    bot.snapshot.friends_count = 400 + rng.uniform_int(1200);
    bot.snapshot.verified = false;

    if (rng.uniform() < config.burst_fraction) {
      bot.snapshot.account_created_at = burst_s + rng.uniform_int(86400);
    } else {
      double age = std::max(config.bot_age_sd_years > 0.0
                                ? rng.normal(config.bot_age_mean_years,
                                             config.bot_age_sd_years)
                                : config.bot_age_mean_years,
                            min_age_years);
      bot.snapshot.account_created_at =
          end_s - UnixSeconds(age * 365.25 * 86400.0);
    }
    users.push_back(std::move(bot));
  }

  for (const auto& user : users) output.is_bot[user.id] = user.is_bot;

  // Shared bot schedule: the co-tweeting fingerprint.
  std::vector<int> all_days(std::size_t(config.days));
  std::iota(all_days.begin(), all_days.end(), 0);
  for (std::size_t i = all_days.size(); i > 1; --i)
    std::swap(all_days[i - 1], all_days[std::size_t(rng.uniform_int(std::int64_t(i)))]);
  int schedule_size = std::min(config.bot_active_days, config.days);
  std::vector<int> bot_schedule(all_days.begin(), all_days.begin() + schedule_size);
  std::sort(bot_schedule.begin(), bot_schedule.end());

  // Per-bot budget: an exact multiple of the URL pool makes per-URL
  // diversity scores identical across bots (the Fig.-3(c) signature).
  std::int64_t budget = config.bot_tweet_budget;
  if (budget <= 0 && config.n_bots > 0) {
    double target = config.bot_tweet_fraction_target;
    double total = target >= 1.0 ? 0.0
                                 : target / (1.0 - target) * expected_legit_tweets;
    budget = std::int64_t(std::llround(total / double(config.n_bots)));
  }
  if (config.n_bots > 0) {
    std::int64_t urls = config.n_bot_urls;
    budget = std::max<std::int64_t>(urls, (budget + urls / 2) / urls * urls);
  }

  // URL pools: canonical forms, disjoint between populations.
  std::vector<std::string> legit_urls;
  legit_urls.reserve(std::size_t(config.legit_url_pool));
  for (int r = 0; r < config.legit_url_pool; ++r)
    legit_urls.push_back("ausnews" + two_digits(r, 3) + ".com.au/story");
  std::vector<std::string> bot_urls;
  bot_urls.reserve(std::size_t(config.n_bot_urls));
  for (int q = 0; q < config.n_bot_urls; ++q)
    bot_urls.push_back("political-truth" + std::to_string(q) + ".net/exposed");
  ZipfSampler url_sampler(config.legit_url_pool, config.url_zipf_exponent);

  std::vector<PendingTweet> pending;
  std::int64_t sequence = 0;

  auto push_tweet = [&](const UserSpec& user, int day, const std::string& text,
                        std::vector<std::string> urls) {
    PendingTweet t;
    t.created_at = start_s + UnixSeconds(day) * 86400 + rng.uniform_int(86400);
    t.sequence = sequence++;
    t.record.user_id = user.id;
    t.record.created_at = t.created_at;
    t.record.text = text;
    t.record.city = user.city;
    t.record.user = user.snapshot;
    t.record.raw_url_count = std::int32_t(urls.size());
    std::sort(urls.begin(), urls.end());
    urls.erase(std::unique(urls.begin(), urls.end()), urls.end());
    t.record.urls = std::move(urls);
    t.record.hashtags.push_back(kHashtags[rng.uniform_int(8)]);
    if (rng.uniform() < 0.3)
      t.record.hashtags.push_back(kHashtags[rng.uniform_int(8)]);
    pending.push_back(std::move(t));
  };

  std::set<Date> event_days;
  for (const auto& [city, dates] : output.calendar.entries)
    for (Date d : dates) event_days.insert(d);

  for (const auto& user : users) {
    if (user.is_bot) continue;
    for (int day = 0; day < config.days; ++day) {
      double rate = user.tweets_per_day;
      if (event_days.count(start + std::chrono::days{day})) rate *= event_boost;
      std::int64_t count = rng.poisson(std::min(rate, config.max_tweets_per_day));
      for (std::int64_t t = 0; t < count; ++t) {
        std::vector<std::string> urls;
        if (rng.uniform() < config.legit_url_probability) {
          urls.push_back(legit_urls[std::size_t(url_sampler.sample(rng))]);
          if (rng.uniform() < config.second_url_probability)
            urls.push_back(legit_urls[std::size_t(url_sampler.sample(rng))]);
        }
        push_tweet(user, day, kLegitTexts[rng.uniform_int(6)], std::move(urls));
      }
    }
  }

  std::int64_t bot_tweets = 0;
  for (int j = 0; j < config.n_bots; ++j) {
    const UserSpec& bot = users[std::size_t(config.n_legit_users + j)];
    std::vector<int> active;
    for (int day : bot_schedule)
      if (rng.uniform() < config.bot_cotweet_rate) active.push_back(day);
    if (active.empty()) active.push_back(bot_schedule.front());

    std::int64_t my_budget = budget;
    if (config.bot_budget_noise > 0) my_budget += rng.uniform_int(3) - 1;
    for (std::int64_t t = 0; t < my_budget; ++t) {
      int day = active[std::size_t(t) % active.size()];
      std::vector<std::string> urls{
          bot_urls[std::size_t((j + t) % config.n_bot_urls)]};
      push_tweet(bot, day, kBotTexts[rng.uniform_int(4)], std::move(urls));
      ++bot_tweets;
    }
  }

  std::sort(pending.begin(), pending.end(),
            [](const PendingTweet& a, const PendingTweet& b) {
              if (a.created_at != b.created_at) return a.created_at < b.created_at;
              return a.sequence < b.sequence;
            });
  output.records.reserve(pending.size());
  for (std::size_t i = 0; i < pending.size(); ++i) {
    pending[i].record.tweet_id = "t" + two_digits(std::int64_t(i), 8);
    output.records.push_back(std::move(pending[i].record));
  }

  output.stats.total_tweets = std::int64_t(output.records.size());
  output.stats.bot_tweets = bot_tweets;
  output.stats.bot_tweet_fraction =
      output.stats.total_tweets == 0
          ? 0.0
          : double(bot_tweets) / double(output.stats.total_tweets);
  return output;
}

void write_stream_jsonl(const SynthOutput& output, std::ostream& out) {
  for (const auto& rec : output.records) out << serialize_record(rec) << '\n';
}

void write_ground_truth_csv(const SynthOutput& output, std::ostream& out) {
  out << "user_id,label\n";
  for (const auto& [user, is_bot] : output.is_bot)
    out << user << ',' << (is_bot ? "bot" : "legitimate") << '\n';
}

}  // namespace pw
