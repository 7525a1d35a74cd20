#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "polluterwatch/tweet.hpp"
#include "polluterwatch/tz.hpp"

namespace pw {

// Day identifier for the bipartite event side. Users in different cities
// never share a day, so the projected graph decomposes per city.
struct DayKey {
  City city;
  Date date;
  friend auto operator<=>(const DayKey&, const DayKey&) = default;
};

enum class BipartiteMode { event_days, all_days };

struct BipartiteGraph {
  // Only users with at least one qualifying day appear.
  std::map<UserId, std::set<DayKey>> incidence;
  std::set<DayKey> days;
  // Total records per user in the input sequence (event filter not applied).
  std::map<UserId, std::int64_t> tweet_counts;
};

// event_days mode restricts to dates listed in the calendar for the
// record's city and throws ConfigError when no calendar is given.
BipartiteGraph build_bipartite(std::span<const TweetRecord> records,
                               BipartiteMode mode, const TimeZone& tz,
                               const EventCalendar* calendar = nullptr);

// One-mode projection: undirected loopless multigraph on users, parallel
// edges collapsed into a multiplicity = |N(u) ∩ N(v)|.
struct CoTweetMultigraph {
  using NodeIndex = std::uint32_t;

  std::vector<UserId> users;               // sorted; index is the node id
  std::vector<std::int64_t> tweet_counts;  // parallel to users

  // key packs the unordered pair (lo<<32)|hi with lo < hi
  std::unordered_map<std::uint64_t, std::int64_t> edges;

  static std::uint64_t pack(NodeIndex a, NodeIndex b);

  std::size_t node_count() const { return users.size(); }
  std::optional<NodeIndex> index_of(std::string_view user) const;
  std::int64_t multiplicity(NodeIndex a, NodeIndex b) const;
  void add_multiplicity(NodeIndex a, NodeIndex b, std::int64_t m);
  std::int64_t total_edge_weight() const;
};

CoTweetMultigraph project(const BipartiteGraph& bipartite);

struct Partition {
  std::vector<int> community;  // parallel to graph.users, ids 0..C-1
  double modularity = 0.0;     // at the resolution the partition was built with
  // Modularity after each completed Louvain level, for monotonicity checks.
  std::vector<double> level_modularity;

  int community_count() const;
};

// Weighted Newman modularity of an assignment, multiplicities as weights;
// 0 by convention for edgeless graphs.
double modularity(const CoTweetMultigraph& graph, std::span<const int> community,
                  double resolution = 1.0);

// Deterministic for a fixed seed: node visit order is a seed-derived
// permutation and equal-gain moves pick the lowest community id.
Partition louvain(const CoTweetMultigraph& graph, std::uint64_t seed,
                  double resolution = 1.0);

struct DenseComponent {
  int community_id = 0;
  std::vector<CoTweetMultigraph::NodeIndex> members;  // sorted by user id
  double mean_multiplicity = 0.0;  // internal edge weight over all member pairs
};

// Communities with size >= min_size and mean internal multiplicity >=
// min_internal_multiplicity, densest first; ties by size, then by
// lexicographically smallest member. Size-1 communities never qualify.
std::vector<DenseComponent> dense_components(const CoTweetMultigraph& graph,
                                             const Partition& partition,
                                             std::size_t min_size,
                                             double min_internal_multiplicity);

void export_dot(const CoTweetMultigraph& graph, const Partition& partition,
                std::ostream& out);

// Snapshot serialization: "user_a,user_b,multiplicity" / "user_id,tweet_count,community".
void write_edge_csv(const CoTweetMultigraph& graph, std::ostream& out);
void write_node_csv(const CoTweetMultigraph& graph, const Partition& partition,
                    std::ostream& out);

}  // namespace pw
