#include "polluterwatch/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "polluterwatch/csv.hpp"
#include "polluterwatch/errors.hpp"
#include "polluterwatch/ingest.hpp"

namespace pw {

BipartiteGraph build_bipartite(std::span<const TweetRecord> records,
                               BipartiteMode mode, const TimeZone& tz,
                               const EventCalendar* calendar) {
  if (mode == BipartiteMode::event_days && calendar == nullptr)
    throw ConfigError("event_days mode requires an event calendar");

  BipartiteGraph graph;
  for (const auto& rec : records) {
    graph.tweet_counts[rec.user_id] += 1;
    Date date = active_day(rec, tz);
    if (mode == BipartiteMode::event_days && !calendar->contains(rec.city, date))
      continue;
    DayKey day{rec.city, date};
    graph.incidence[rec.user_id].insert(day);
    graph.days.insert(day);
  }
  // Users with no qualifying day are dropped entirely.
  for (auto it = graph.tweet_counts.begin(); it != graph.tweet_counts.end();) {
    if (graph.incidence.count(it->first) == 0)
      it = graph.tweet_counts.erase(it);
    else
      ++it;
  }
  return graph;
}

std::uint64_t CoTweetMultigraph::pack(NodeIndex a, NodeIndex b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t(a) << 32) | b;
}

std::optional<CoTweetMultigraph::NodeIndex> CoTweetMultigraph::index_of(
    std::string_view user) const {
  auto it = std::lower_bound(users.begin(), users.end(), user);
  if (it == users.end() || *it != user) return std::nullopt;
  return NodeIndex(it - users.begin());
}

std::int64_t CoTweetMultigraph::multiplicity(NodeIndex a, NodeIndex b) const {
  if (a == b) return 0;
  auto it = edges.find(pack(a, b));
  return it == edges.end() ? 0 : it->second;
}

void CoTweetMultigraph::add_multiplicity(NodeIndex a, NodeIndex b,
                                         std::int64_t m) {
  if (a == b) return;  // loopless by construction
  edges[pack(a, b)] += m;
}

std::int64_t CoTweetMultigraph::total_edge_weight() const {
  std::int64_t total = 0;
  for (const auto& [key, mult] : edges) total += mult;
  return total;
}

CoTweetMultigraph project(const BipartiteGraph& bipartite) {
  CoTweetMultigraph graph;
  graph.users.reserve(bipartite.incidence.size());
  for (const auto& [user, days] : bipartite.incidence) graph.users.push_back(user);
  // incidence is an ordered map, so users arrive sorted.
  graph.tweet_counts.reserve(graph.users.size());
  for (const auto& user : graph.users) {
    auto it = bipartite.tweet_counts.find(user);
    graph.tweet_counts.push_back(it == bipartite.tweet_counts.end() ? 0
                                                                    : it->second);
  }

  // Per-day co-active lists instead of per-pair intersections: each shared
  // day contributes one parallel edge to every co-active pair.
  std::map<DayKey, std::vector<CoTweetMultigraph::NodeIndex>> day_users;
  for (const auto& [user, days] : bipartite.incidence) {
    auto index = graph.index_of(user);
    for (const DayKey& day : days) day_users[day].push_back(*index);
  }
  for (const auto& [day, members] : day_users) {
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j)
        graph.add_multiplicity(members[i], members[j], 1);
  }
  return graph;
}

int Partition::community_count() const {
  int max_id = -1;
  for (int c : community) max_id = std::max(max_id, c);
  return max_id + 1;
}

std::vector<DenseComponent> dense_components(const CoTweetMultigraph& graph,
                                             const Partition& partition,
                                             std::size_t min_size,
                                             double min_internal_multiplicity) {
  if (partition.community.size() != graph.node_count())
    throw std::invalid_argument("partition does not cover the graph");

  std::map<int, std::vector<CoTweetMultigraph::NodeIndex>> members;
  for (std::size_t i = 0; i < graph.node_count(); ++i)
    members[partition.community[i]].push_back(CoTweetMultigraph::NodeIndex(i));

  std::map<int, std::int64_t> internal_weight;
  for (const auto& [key, mult] : graph.edges) {
    auto a = int(partition.community[key >> 32]);
    auto b = int(partition.community[key & 0xFFFFFFFF]);
    if (a == b) internal_weight[a] += mult;
  }

  std::vector<DenseComponent> dense;
  for (const auto& [community_id, nodes] : members) {
    std::size_t size = nodes.size();
    if (size < 2 || size < min_size) continue;  // density undefined below 2
    double pairs = double(size) * double(size - 1) / 2.0;
    double mean = double(internal_weight[community_id]) / pairs;
    if (mean < min_internal_multiplicity) continue;
    DenseComponent component;
    component.community_id = community_id;
    component.members = nodes;  // node indices ascend with sorted user ids
    component.mean_multiplicity = mean;
    dense.push_back(std::move(component));
  }

  std::sort(dense.begin(), dense.end(),
            [&graph](const DenseComponent& a, const DenseComponent& b) {
              if (a.mean_multiplicity != b.mean_multiplicity)
                return a.mean_multiplicity > b.mean_multiplicity;
              if (a.members.size() != b.members.size())
                return a.members.size() > b.members.size();
              return graph.users[a.members.front()] < graph.users[b.members.front()];
            });
  return dense;
}

namespace {

std::string dot_quote(const std::string& id) {
  std::string out = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void export_dot(const CoTweetMultigraph& graph, const Partition& partition,
                std::ostream& out) {
  out << "graph cotweet {\n";
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    int community = i < partition.community.size() ? partition.community[i] : 0;
    out << "  " << dot_quote(graph.users[i]) << " [tweet_count="
        << graph.tweet_counts[i] << ", community=" << community << "];\n";
  }
  // Sorted edge order keeps the export reproducible.
  std::vector<std::uint64_t> keys;
  keys.reserve(graph.edges.size());
  for (const auto& [key, mult] : graph.edges) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  for (std::uint64_t key : keys) {
    auto a = CoTweetMultigraph::NodeIndex(key >> 32);
    auto b = CoTweetMultigraph::NodeIndex(key & 0xFFFFFFFF);
    out << "  " << dot_quote(graph.users[a]) << " -- " << dot_quote(graph.users[b])
        << " [weight=\"" << graph.edges.at(key) << "\"];\n";
  }
  out << "}\n";
  if (!out) throw IoError("failed to write DOT output");
}

void write_edge_csv(const CoTweetMultigraph& graph, std::ostream& out) {
  out << "user_a,user_b,multiplicity\n";
  std::vector<std::uint64_t> keys;
  keys.reserve(graph.edges.size());
  for (const auto& [key, mult] : graph.edges) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  for (std::uint64_t key : keys) {
    out << csv::escape(graph.users[key >> 32]) << ','
        << csv::escape(graph.users[key & 0xFFFFFFFF]) << ','
        << graph.edges.at(key) << '\n';
  }
}

void write_node_csv(const CoTweetMultigraph& graph, const Partition& partition,
                    std::ostream& out) {
  out << "user_id,tweet_count,community\n";
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    int community = i < partition.community.size() ? partition.community[i] : 0;
    out << csv::escape(graph.users[i]) << ',' << graph.tweet_counts[i] << ','
        << community << '\n';
  }
}

}  // namespace pw
