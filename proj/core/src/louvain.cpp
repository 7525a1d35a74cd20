#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "polluterwatch/graph.hpp"

namespace pw {

namespace {

constexpr double kGainEpsilon = 1e-12;

// Working graph for one aggregation level. Self-loops carry the internal
// weight of collapsed communities; a self-loop of weight w adds 2w to the
// node's degree.
struct LevelGraph {
  std::vector<std::vector<std::pair<int, double>>> adjacency;
  std::vector<double> self_loop;
  double total_weight = 0.0;  // m: sum of edge weights plus self-loops

  std::size_t size() const { return adjacency.size(); }

  double degree(int node) const {
    double k = 2.0 * self_loop[node];
    for (const auto& [peer, weight] : adjacency[node]) k += weight;
    return k;
  }
};

// Hand-rolled Fisher-Yates so the permutation depends only on the seed,
// not on the standard library's distribution internals.
std::vector<int> seeded_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = std::size_t(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

struct LocalMoveResult {
  std::vector<int> community;  // normalized ids 0..C-1
  bool moved_any = false;
};

LocalMoveResult local_moves(const LevelGraph& graph, double resolution,
                            std::mt19937_64& rng) {
  std::size_t n = graph.size();
  std::vector<int> community(n);
  std::iota(community.begin(), community.end(), 0);
  std::vector<double> degree(n);
  std::vector<double> community_total(n);  // sum of degrees per community
  for (std::size_t i = 0; i < n; ++i) {
    degree[i] = graph.degree(int(i));
    community_total[i] = degree[i];
  }
  double m = graph.total_weight;
  std::vector<int> order = seeded_permutation(n, rng);

  LocalMoveResult result;
  if (m <= 0.0) {  // edgeless graph: every node stays alone
    result.community = std::move(community);
    return result;
  }

  std::vector<double> weight_to(n, 0.0);
  bool moved_in_sweep = true;
  while (moved_in_sweep) {
    moved_in_sweep = false;
    for (int node : order) {
      int old_community = community[node];

      std::vector<int> touched;
      for (const auto& [peer, weight] : graph.adjacency[node]) {
        int c = community[peer];
        if (weight_to[c] == 0.0) touched.push_back(c);
        weight_to[c] += weight;
      }
      if (weight_to[old_community] == 0.0) touched.push_back(old_community);

      community_total[old_community] -= degree[node];

      // Gain of joining c (node currently removed):
      //   w(node->c) - resolution * k_node * tot_c / (2m)
      // Own (possibly empty) community is the baseline candidate.
      int best_community = old_community;
      double best_gain = weight_to[old_community] -
                         resolution * degree[node] *
                             community_total[old_community] / (2.0 * m);
      std::sort(touched.begin(), touched.end());
      for (int c : touched) {
        if (c == old_community) continue;
        double gain = weight_to[c] -
                      resolution * degree[node] * community_total[c] / (2.0 * m);
        if (gain > best_gain + kGainEpsilon ||
            (gain > best_gain - kGainEpsilon && c < best_community)) {
          best_gain = gain;
          best_community = c;
        }
      }

      community_total[best_community] += degree[node];
      community[node] = best_community;
      if (best_community != old_community) {
        moved_in_sweep = true;
        result.moved_any = true;
      }
      for (int c : touched) weight_to[c] = 0.0;
    }
  }

  // Renumber communities by their lowest member index.
  std::vector<int> remap(n, -1);
  int next_id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (remap[community[i]] == -1) remap[community[i]] = next_id++;
    community[i] = remap[community[i]];
  }
  result.community = std::move(community);
  return result;
}

LevelGraph aggregate(const LevelGraph& graph, const std::vector<int>& community,
                     int community_count) {
  LevelGraph next;
  next.adjacency.resize(community_count);
  next.self_loop.assign(community_count, 0.0);
  next.total_weight = graph.total_weight;

  std::map<std::pair<int, int>, double> weight;
  for (std::size_t u = 0; u < graph.size(); ++u) {
    next.self_loop[community[u]] += graph.self_loop[u];
    for (const auto& [v, w] : graph.adjacency[u]) {
      if (std::size_t(v) < u) continue;  // each undirected edge once
      int a = community[u], b = community[v];
      if (a == b)
        next.self_loop[a] += w;
      else
        weight[{std::min(a, b), std::max(a, b)}] += w;
    }
  }
  for (const auto& [pair, w] : weight) {
    next.adjacency[pair.first].emplace_back(pair.second, w);
    next.adjacency[pair.second].emplace_back(pair.first, w);
  }
  for (auto& neighbors : next.adjacency)
    std::sort(neighbors.begin(), neighbors.end());
  return next;
}

}  // namespace

double modularity(const CoTweetMultigraph& graph, std::span<const int> community,
                  double resolution) {
  if (community.size() != graph.node_count())
    throw std::invalid_argument("assignment does not cover the graph");
  double m = double(graph.total_edge_weight());
  if (m <= 0.0) return 0.0;

  double internal = 0.0;
  for (const auto& [key, mult] : graph.edges) {
    auto a = std::size_t(key >> 32);
    auto b = std::size_t(key & 0xFFFFFFFF);
    if (community[a] == community[b]) internal += double(mult);
  }

  int count = 0;
  for (int c : community) count = std::max(count, c + 1);
  std::vector<double> community_degree(count, 0.0);
  for (const auto& [key, mult] : graph.edges) {
    community_degree[community[key >> 32]] += double(mult);
    community_degree[community[key & 0xFFFFFFFF]] += double(mult);
  }

  double q = internal / m;
  for (double k : community_degree) {
    double share = k / (2.0 * m);
    q -= resolution * share * share;
  }
  return q;
}

Partition louvain(const CoTweetMultigraph& graph, std::uint64_t seed,
                  double resolution) {
  std::size_t n = graph.node_count();
  Partition partition;
  partition.community.assign(n, 0);
  std::iota(partition.community.begin(), partition.community.end(), 0);
  if (n == 0) return partition;
  if (n == 1) {
    partition.modularity = 0.0;  // single node: one community, Q = 0
    return partition;
  }

  LevelGraph level;
  level.adjacency.resize(n);
  level.self_loop.assign(n, 0.0);
  for (const auto& [key, mult] : graph.edges) {
    int a = int(key >> 32);
    int b = int(key & 0xFFFFFFFF);
    level.adjacency[a].emplace_back(b, double(mult));
    level.adjacency[b].emplace_back(a, double(mult));
    level.total_weight += double(mult);
  }
  for (auto& neighbors : level.adjacency)
    std::sort(neighbors.begin(), neighbors.end());

  std::mt19937_64 rng(seed);
  std::vector<int> assignment = partition.community;  // original node -> community

  while (true) {
    LocalMoveResult moves = local_moves(level, resolution, rng);
    int community_count =
        *std::max_element(moves.community.begin(), moves.community.end()) + 1;

    for (std::size_t i = 0; i < n; ++i)
      assignment[i] = moves.community[assignment[i]];
    partition.level_modularity.push_back(
        modularity(graph, assignment, resolution));

    if (!moves.moved_any || community_count == int(level.size())) break;
    level = aggregate(level, moves.community, community_count);
  }

  // Normalize ids by first appearance over the sorted node order.
  std::vector<int> remap(n, -1);
  int next_id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (remap[assignment[i]] == -1) remap[assignment[i]] = next_id++;
    assignment[i] = remap[assignment[i]];
  }
  partition.community = std::move(assignment);
  partition.modularity = modularity(graph, partition.community, resolution);
  return partition;
}

}  // namespace pw
