// polluterwatch: streaming content-polluter detection over tweet files.
// Subcommands: detect, graph, gini, eval, synth.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "polluterwatch/csv.hpp"
#include "polluterwatch/errors.hpp"
#include "polluterwatch/ingest.hpp"
#include "polluterwatch/pipeline.hpp"
#include "polluterwatch/stats.hpp"
#include "polluterwatch/synth.hpp"

namespace fs = std::filesystem;
using namespace pw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 2;   // I/O or parse-fatal
constexpr int kExitUsage = 64;  // bad flags or configuration

struct Options {
  std::string input;
  std::string calendar;
  std::string out = "out";
  std::string truth;
  std::string since, until;

  PipelineConfig pipeline;
  SynthConfig synth;

  // eval inputs
  std::string report;
  std::string labelled;
  std::string status;
  std::string scores;

  std::vector<std::string> url_filter;  // gini
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_input(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw IoError(std::string("cannot read ") + what + " file: " + path);
  return in;
}

void write_config_echo(CLI::App& app, const fs::path& out_dir) {
  auto echo = open_output(out_dir / "config.echo");
  echo << app.config_to_str(true, true);
}

struct LoadedStream {
  std::vector<TweetRecord> records;
  std::vector<ParseError> errors;
};

LoadedStream load_stream(const Options& options) {
  auto in = open_input(options.input, "input");
  auto result = parse_stream(in);
  LoadedStream loaded{std::move(result.records), std::move(result.errors)};

  if (!options.since.empty() || !options.until.empty()) {
    std::optional<Date> since = options.since.empty()
                                    ? std::nullopt
                                    : parse_date(options.since);
    std::optional<Date> until = options.until.empty()
                                    ? std::nullopt
                                    : parse_date(options.until);
    if ((!options.since.empty() && !since) || (!options.until.empty() && !until))
      throw ConfigError("--since/--until must be YYYY-MM-DD dates");
    std::vector<TweetRecord> window;
    for (auto& rec : loaded.records) {
      Date day = civil_date(rec.created_at, 0);
      if (since && day < *since) continue;
      if (until && day > *until) continue;
      window.push_back(std::move(rec));
    }
    loaded.records = std::move(window);
  }
  return loaded;
}

std::optional<EventCalendar> load_calendar(const Options& options) {
  if (options.calendar.empty()) return std::nullopt;
  auto in = open_input(options.calendar, "calendar");
  return EventCalendar::from_csv(in);
}

std::map<UserId, bool> load_truth(const std::string& path) {
  auto in = open_input(path, "ground-truth");
  std::map<UserId, bool> truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = csv::split_line(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "user_id") continue;
    if (fields.size() != 2 || (fields[1] != "bot" && fields[1] != "legitimate"))
      throw FileFormatError("truth line " + std::to_string(line_no) +
                            ": expected user_id,bot|legitimate");
    truth[fields[0]] = fields[1] == "bot";
  }
  return truth;
}

std::set<UserId> load_report_ids(const std::string& path) {
  auto in = open_input(path, "report");
  std::set<UserId> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = csv::split_line(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "user_id") continue;
    if (!fields.empty() && !fields[0].empty()) ids.insert(fields[0]);
  }
  return ids;
}

std::string fraction_string(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int cmd_detect(CLI::App& app, const Options& options) {
  fs::create_directories(options.out);
  auto loaded = load_stream(options);
  auto result = run_detection(loaded.records, options.pipeline);

  {
    auto out = open_output(fs::path(options.out) / "verdicts.csv");
    write_verdict_csv(result.verdicts, out);
  }
  {
    auto out = open_output(fs::path(options.out) / "diversity.csv");
    write_diversity_csv(result.tables, out);
  }
  {
    auto out = open_output(fs::path(options.out) / "report.csv");
    write_report_csv(result.report, out);
  }
  {
    auto out = open_output(fs::path(options.out) / "population.csv");
    write_population_csv(result.population, out);
  }
  {
    auto out = open_output(fs::path(options.out) / "age_histogram.csv");
    write_age_histogram_csv(result.population, out);
  }
  {
    auto out = open_output(fs::path(options.out) / "name_length_histogram.csv");
    write_name_histogram_csv(result.population, out);
  }
  {
    auto out = open_output(fs::path(options.out) / "corpus_stats.csv");
    write_corpus_stats_csv(dataset_stats(loaded.records), out);
  }
  {
    auto out = open_output(fs::path(options.out) / "errors.log");
    write_error_log(loaded.errors, out);
  }

  std::ostringstream summary;
  summary << "total_tweets=" << result.report.corpus_summary.total_tweets << '\n'
          << "parse_errors=" << loaded.errors.size() << '\n'
          << "top_urls=" << result.top_urls.size() << '\n'
          << "flagged_accounts=" << result.report.flagged.size() << '\n'
          << "flagged_tweet_count="
          << result.report.corpus_summary.flagged_tweet_count << '\n'
          << "flagged_tweet_fraction="
          << fraction_string(result.report.corpus_summary.flagged_tweet_fraction)
          << '\n';
  if (!options.truth.empty()) {
    auto truth = load_truth(options.truth);
    auto score = score_against_truth(result.report.flagged_ids(), truth);
    summary << "precision=" << fraction_string(score.precision) << '\n'
            << "recall=" << fraction_string(score.recall) << '\n';
  }
  {
    auto out = open_output(fs::path(options.out) / "summary.txt");
    out << summary.str();
  }
  std::cout << summary.str();
  write_config_echo(app, options.out);
  return kExitOk;
}

int cmd_graph(CLI::App& app, const Options& options) {
  fs::create_directories(options.out);
  auto loaded = load_stream(options);
  auto calendar = load_calendar(options);
  TimeZone tz = TimeZone::load(options.pipeline.timezone);

  auto write_mode = [&](const char* prefix, BipartiteMode mode,
                        const EventCalendar* events) {
    auto bipartite = build_bipartite(loaded.records, mode, tz, events);
    auto graph = project(bipartite);
    auto partition = louvain(graph, options.pipeline.louvain_seed,
                             options.pipeline.resolution);
    auto dot = open_output(fs::path(options.out) /
                           (std::string(prefix) + "_graph.dot"));
    export_dot(graph, partition, dot);
    auto edges = open_output(fs::path(options.out) /
                             (std::string(prefix) + "_edges.csv"));
    write_edge_csv(graph, edges);
    auto nodes = open_output(fs::path(options.out) /
                             (std::string(prefix) + "_nodes.csv"));
    write_node_csv(graph, partition, nodes);
  };

  write_mode("allday", BipartiteMode::all_days, nullptr);
  if (calendar) {
    write_mode("eventday", BipartiteMode::event_days, &*calendar);
  } else {
    std::cerr << "warning: no calendar given, writing all-days outputs only\n";
  }
  {
    auto out = open_output(fs::path(options.out) / "errors.log");
    write_error_log(loaded.errors, out);
  }
  write_config_echo(app, options.out);
  return kExitOk;
}

int cmd_gini(CLI::App& app, const Options& options) {
  fs::create_directories(options.out);
  auto loaded = load_stream(options);

  std::vector<std::string> urls;
  if (options.url_filter.empty()) {
    urls = top_k_urls(loaded.records, options.pipeline.top_k);
  } else {
    for (const auto& raw : options.url_filter) {
      auto canonical = canonicalize_url(raw);
      urls.push_back(canonical ? *canonical : raw);
    }
  }
  auto tables = diversity_tables(loaded.records, urls);
  std::vector<UrlVerdict> verdicts;
  verdicts.reserve(urls.size());
  for (const auto& url : urls)
    verdicts.push_back(classify_url(tables.at(url), options.pipeline.thresholds));

  {
    auto out = open_output(fs::path(options.out) / "verdicts.csv");
    write_verdict_csv(verdicts, out);
  }
  {
    auto out = open_output(fs::path(options.out) / "diversity.csv");
    write_diversity_csv(tables, out);
  }
  write_verdict_csv(verdicts, std::cout);
  write_config_echo(app, options.out);
  return kExitOk;
}

int cmd_eval(CLI::App& app, const Options& options) {
  fs::create_directories(options.out);
  std::ostringstream summary;

  std::optional<std::set<UserId>> report_ids;
  if (!options.report.empty()) report_ids = load_report_ids(options.report);

  LabelledDataset labelled;
  if (!options.labelled.empty()) {
    auto in = open_input(options.labelled, "labelled");
    labelled = load_labelled_csv(in);
    summary << "[labelled]\n"
            << "rows=" << labelled.rows.size() << '\n'
            << "dropped_no_majority=" << labelled.dropped_no_majority << '\n';
    double acc = 0.0, binomial_p = 1.0, t_stat = 0.0, t_p = 1.0;
    if (!labelled.rows.empty()) {
      acc = accuracy(labelled.rows);
      std::int64_t successes = 0;
      for (const auto& row : labelled.rows)
        if (row.human_label == row.predicted_label) ++successes;
      binomial_p = binomial_significance(
          successes, std::int64_t(labelled.rows.size()), 0.5);
      summary << "accuracy=" << fraction_string(acc) << '\n'
              << "binomial_p=" << binomial_p << '\n';
      if (labelled.rows.size() >= 2) {
        auto t = proportion_t_test(successes,
                                   std::int64_t(labelled.rows.size()), 0.5);
        t_stat = t.t_statistic;
        t_p = t.p_one_sided;
        summary << "proportion_t=" << fraction_string(t.t_statistic) << '\n'
                << "proportion_t_p=" << t.p_one_sided << '\n';
      }
    }
    auto csv_out = open_output(fs::path(options.out) / "accuracy_summary.csv");
    csv_out << "rows,dropped_no_majority,accuracy,binomial_p,proportion_t,"
               "proportion_t_p\n"
            << labelled.rows.size() << ',' << labelled.dropped_no_majority << ','
            << fraction_string(acc) << ',' << binomial_p << ','
            << fraction_string(t_stat) << ',' << t_p << '\n';
  }

  if (!options.status.empty()) {
    auto in = open_input(options.status, "status");
    // Without a report the status file itself defines the account set.
    std::set<UserId> flagged =
        report_ids ? *report_ids : load_report_ids(options.status);
    auto status = account_status_report(in, flagged);
    summary << "[status]\n"
            << "suspended=" << status.suspended_count << '\n'
            << "deleted=" << status.deleted_count << '\n'
            << "active=" << status.active_count << '\n'
            << "flagged_total=" << flagged.size() << '\n';
    auto csv_out = open_output(fs::path(options.out) / "status_summary.csv");
    csv_out << "suspended,deleted,active,flagged_total\n"
            << status.suspended_count << ',' << status.deleted_count << ','
            << status.active_count << ',' << flagged.size() << '\n';
  }

  if (!options.scores.empty()) {
    auto in = open_input(options.scores, "scores");
    std::set<UserId> flagged = report_ids ? *report_ids
                                          : load_report_ids(options.scores);
    auto scores = summarize_external_scores(in, flagged, labelled.rows);
    summary << "[external_scores]\n"
            << "covered=" << scores.covered << '\n'
            << "zero_coverage=" << (scores.has_coverage ? "false" : "true")
            << '\n'
            << "mean=" << fraction_string(scores.mean) << '\n'
            << "sd=" << fraction_string(scores.sd) << '\n'
            << "tp_with_scores=" << scores.tp_total << '\n'
            << "tp_fraction_above_half="
            << fraction_string(scores.tp_fraction_above_half) << '\n'
            << "fp_with_scores=" << scores.fp_total << '\n'
            << "fp_fraction_above_half="
            << fraction_string(scores.fp_fraction_above_half) << '\n'
            << "rejected_rows=" << scores.rejected_rows << '\n';
    auto csv_out = open_output(fs::path(options.out) / "scores_summary.csv");
    csv_out << "covered,zero_coverage,mean,sd,tp_with_scores,"
               "tp_fraction_above_half,fp_with_scores,fp_fraction_above_half,"
               "rejected_rows\n"
            << scores.covered << ','
            << (scores.has_coverage ? "false" : "true") << ','
            << fraction_string(scores.mean) << ',' << fraction_string(scores.sd)
            << ',' << scores.tp_total << ','
            << fraction_string(scores.tp_fraction_above_half) << ','
            << scores.fp_total << ','
            << fraction_string(scores.fp_fraction_above_half) << ','
            << scores.rejected_rows << '\n';
  }

  if (summary.str().empty())
    summary << "nothing to evaluate: pass --labelled, --status or --scores\n";
  {
    auto out = open_output(fs::path(options.out) / "eval_summary.txt");
    out << summary.str();
  }
  std::cout << summary.str();
  write_config_echo(app, options.out);
  return kExitOk;
}

int cmd_synth(CLI::App& app, Options& options) {
  fs::create_directories(options.out);
  options.synth.validate();
  auto output = generate(options.synth);
  {
    auto out = open_output(fs::path(options.out) / "stream.jsonl");
    write_stream_jsonl(output, out);
  }
  {
    auto out = open_output(fs::path(options.out) / "truth.csv");
    write_ground_truth_csv(output, out);
  }
  {
    auto out = open_output(fs::path(options.out) / "calendar.csv");
    write_calendar_csv(output.calendar, out);
  }
  std::ostringstream summary;
  summary << "total_tweets=" << output.stats.total_tweets << '\n'
          << "bot_tweets=" << output.stats.bot_tweets << '\n'
          << "bot_tweet_fraction="
          << fraction_string(output.stats.bot_tweet_fraction) << '\n'
          << "users=" << output.is_bot.size() << '\n';
  {
    auto out = open_output(fs::path(options.out) / "synth_summary.txt");
    out << summary.str();
  }
  std::cout << summary.str();
  write_config_echo(app, options.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Content-polluter detection for streamed tweet corpora"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name
  app.set_config("--config", "", "Flat key=value config file; flags override");

  Options options;
  app.add_option("--input", options.input, "Line-delimited tweet records");
  app.add_option("--calendar", options.calendar, "Event calendar CSV (city,date)");
  app.add_option("--tz", options.pipeline.timezone,
                 "IANA timezone for day bucketing")
      ->capture_default_str();
  app.add_option("--top-k", options.pipeline.top_k, "Top URLs to score")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--gini-threshold", options.pipeline.thresholds.gini_threshold,
                 "Gini below this is bot-like")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--r2-threshold", options.pipeline.thresholds.r2_threshold,
                 "Rank-size R^2 below this is bot-like")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--min-users", options.pipeline.thresholds.min_users,
                 "Minimum users before a URL can be labelled bot_url")
      ->capture_default_str();
  app.add_option("--seed", options.pipeline.louvain_seed,
                 "Seed for Louvain visit order (and synth)")
      ->capture_default_str();
  app.add_option("--resolution", options.pipeline.resolution,
                 "Louvain resolution parameter")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--dense-min-size", options.pipeline.dense_min_size,
                 "Minimum community size listed as dense")
      ->capture_default_str();
  app.add_option("--dense-min-multiplicity",
                 options.pipeline.dense_min_multiplicity,
                 "Minimum mean multiplicity listed as dense")
      ->capture_default_str();
  app.add_option("--dense-flag-multiplicity",
                 options.pipeline.detector.dense_multiplicity_threshold,
                 "Mean multiplicity a cluster must exceed to flag members")
      ->capture_default_str();
  app.add_option("--exemption-percentile",
                 options.pipeline.detector.follower_exemption_percentile,
                 "Follower percentile above which accounts are media-exempt")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--burst-min",
                 options.pipeline.detector.burst_min_count,
                 "Accounts per creation date to call a burst")
      ->check(CLI::Range(2, 1000000))
      ->capture_default_str();
  app.add_option("--out", options.out, "Output directory")
      ->capture_default_str();
  app.add_option("--since", options.since, "Keep records on/after this UTC date");
  app.add_option("--until", options.until, "Keep records on/before this UTC date");

  CLI::App* detect =
      app.add_subcommand("detect", "Run the full detection pipeline");
  detect->add_option("--truth", options.truth,
                     "Ground-truth CSV for precision/recall");

  CLI::App* graph = app.add_subcommand(
      "graph", "Export co-tweet graphs (DOT + CSV), all-days and event-days");

  CLI::App* gini = app.add_subcommand(
      "gini", "Per-URL diversity verdicts for the top-K or given URLs");
  gini->add_option("--url", options.url_filter,
                   "Score this URL instead of the top-K (repeatable)");

  CLI::App* eval = app.add_subcommand(
      "eval", "Hand-label accuracy, account status and external-score summaries");
  eval->add_option("--report", options.report, "report.csv from a detect run");
  eval->add_option("--labelled", options.labelled,
                   "CSV user_id,label_1,label_2,label_3,predicted");
  eval->add_option("--status", options.status, "CSV user_id,code (63/50/empty)");
  eval->add_option("--scores", options.scores, "CSV user_id,score in [0,1]");

  CLI::App* synth =
      app.add_subcommand("synth", "Generate a labelled synthetic stream");
  synth->add_option("--legit-users", options.synth.n_legit_users)
      ->capture_default_str();
  synth->add_option("--bots", options.synth.n_bots)->capture_default_str();
  synth->add_option("--bot-urls", options.synth.n_bot_urls)
      ->capture_default_str();
  synth->add_option("--url-pool", options.synth.legit_url_pool)
      ->capture_default_str();
  synth->add_option("--days", options.synth.days)->capture_default_str();
  synth->add_option("--event-stride", options.synth.event_day_stride)
      ->capture_default_str();
  synth->add_option("--cotweet-rate", options.synth.bot_cotweet_rate)
      ->capture_default_str();
  synth->add_option("--bot-active-days", options.synth.bot_active_days)
      ->capture_default_str();
  synth->add_option("--tweet-rate", options.synth.legit_tweet_rate)
      ->capture_default_str();
  synth->add_option("--bot-budget", options.synth.bot_tweet_budget)
      ->capture_default_str();
  synth->add_option("--bot-fraction", options.synth.bot_tweet_fraction_target)
      ->capture_default_str();
  synth->add_option("--budget-noise", options.synth.bot_budget_noise)
      ->capture_default_str();
  synth->add_option("--burst-date", options.synth.burst_date)
      ->capture_default_str();
  synth->add_option("--burst-names", options.synth.burst_name_pool)
      ->capture_default_str();
  synth->add_option("--start-date", options.synth.start_date)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  options.synth.seed = options.pipeline.louvain_seed;

  try {
    TimeZone::load(options.pipeline.timezone);  // fail fast on bad --tz
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (detect->parsed()) return cmd_detect(app, options);
    if (graph->parsed()) return cmd_graph(app, options);
    if (gini->parsed()) return cmd_gini(app, options);
    if (eval->parsed()) return cmd_eval(app, options);
    if (synth->parsed()) return cmd_synth(app, options);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  } catch (const FileFormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  }
  return kExitUsage;
}
