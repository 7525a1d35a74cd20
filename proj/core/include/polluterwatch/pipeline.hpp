#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polluterwatch/detector.hpp"
#include "polluterwatch/diversity.hpp"
#include "polluterwatch/graph.hpp"
#include "polluterwatch/tweet.hpp"

namespace pw {

// End-to-end detection over a bounded window of records:
// top-K URLs -> diversity verdicts -> all-days co-tweet graph -> Louvain ->
// dense components -> account flags -> population statistics.
struct PipelineConfig {
  std::string timezone = "UTC";
  std::size_t top_k = 20;
  DiversityThresholds thresholds;
  std::uint64_t louvain_seed = 1;
  double resolution = 1.0;
  std::size_t dense_min_size = 3;
  double dense_min_multiplicity = 2.0;
  DetectorConfig detector;
};

struct PipelineResult {
  std::vector<std::string> top_urls;
  std::map<std::string, UrlDiversityTable> tables;
  std::vector<UrlVerdict> verdicts;
  CoTweetMultigraph graph;  // all-days projection
  Partition partition;
  std::vector<DenseComponent> dense;
  DetectionReport report;
  ComparisonStats population;
  UnixSeconds as_of = 0;
};

PipelineResult run_detection(std::span<const TweetRecord> records,
                             const PipelineConfig& config);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  std::int64_t true_positives = 0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
};

// Flagged set against a ground-truth bot set. Empty denominators score 1.
PrecisionRecall score_against_truth(const std::set<UserId>& flagged,
                                    const std::map<UserId, bool>& truth);

}  // namespace pw
