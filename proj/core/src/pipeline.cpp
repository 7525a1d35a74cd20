#include "polluterwatch/pipeline.hpp"

#include <algorithm>

#include "polluterwatch/ingest.hpp"

namespace pw {

PipelineResult run_detection(std::span<const TweetRecord> records,
                             const PipelineConfig& config) {
  PipelineResult result;
  TimeZone tz = TimeZone::load(config.timezone);

  result.top_urls = top_k_urls(records, config.top_k);
  result.tables = diversity_tables(records, result.top_urls);
  result.verdicts.reserve(result.top_urls.size());
  for (const auto& url : result.top_urls)
    result.verdicts.push_back(
        classify_url(result.tables.at(url), config.thresholds));

  auto bipartite = build_bipartite(records, BipartiteMode::all_days, tz);
  result.graph = project(bipartite);
  result.partition = louvain(result.graph, config.louvain_seed, config.resolution);
  result.dense = dense_components(result.graph, result.partition,
                                  config.dense_min_size,
                                  config.dense_min_multiplicity);

  result.report = flag_accounts(result.verdicts, result.tables, result.dense,
                                result.graph, records, config.detector);

  for (const auto& rec : records)
    result.as_of = std::max(result.as_of, rec.created_at);
  result.population =
      population_stats(result.report.flagged_ids(), records, result.as_of);
  return result;
}

PrecisionRecall score_against_truth(const std::set<UserId>& flagged,
                                    const std::map<UserId, bool>& truth) {
  PrecisionRecall score;
  std::int64_t total_bots = 0;
  for (const auto& [user, is_bot] : truth) {
    bool is_flagged = flagged.count(user) > 0;
    if (is_bot) ++total_bots;
    if (is_flagged && is_bot) ++score.true_positives;
    if (is_flagged && !is_bot) ++score.false_positives;
    if (!is_flagged && is_bot) ++score.false_negatives;
  }
  std::int64_t flagged_total = score.true_positives + score.false_positives;
  score.precision = flagged_total == 0
                        ? 1.0
                        : double(score.true_positives) / double(flagged_total);
  score.recall =
      total_bots == 0 ? 1.0 : double(score.true_positives) / double(total_bots);
  return score;
}

}  // namespace pw
