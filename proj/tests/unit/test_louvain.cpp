#include "doctest.h"

#include "polluterwatch/graph.hpp"

#include "../support/oracles.hpp"

using namespace pw;

namespace {

CoTweetMultigraph make_graph(int nodes,
                             const std::vector<std::tuple<int, int, int>>& edges) {
  CoTweetMultigraph graph;
  for (int i = 0; i < nodes; ++i) {  // single-digit ids stay sorted
    graph.users.push_back("u" + std::to_string(i));
    graph.tweet_counts.push_back(1);
  }
  for (const auto& [a, b, mult] : edges)
    graph.add_multiplicity(CoTweetMultigraph::NodeIndex(a),
                           CoTweetMultigraph::NodeIndex(b), mult);
  return graph;
}

// Two 4-cliques joined by a single bridge edge, all multiplicities 1.
CoTweetMultigraph two_cliques() {
  std::vector<std::tuple<int, int, int>> edges;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      edges.emplace_back(i, j, 1);
      edges.emplace_back(4 + i, 4 + j, 1);
    }
  edges.emplace_back(3, 4, 1);
  return make_graph(8, edges);
}

}  // namespace

TEST_CASE("louvain recovers the two-clique optimum exactly") {
  auto graph = two_cliques();
  Partition partition = louvain(graph, 1);

  auto best = oracle::best_partition(graph);
  // The optimum over all 4140 partitions of 8 nodes is the two cliques.
  std::set<std::vector<int>> cliques{{0, 1, 2, 3}, {4, 5, 6, 7}};
  CHECK(oracle::grouping(best.assignment) == cliques);
  CHECK(oracle::grouping(partition.community) == cliques);
  CHECK(partition.modularity == doctest::Approx(best.modularity).epsilon(1e-12));

  // Seeds change visit order, never the desk-scale result.
  for (std::uint64_t seed : {2ull, 3ull, 99ull, 123456ull})
    CHECK(oracle::grouping(louvain(graph, seed).community) == cliques);
}

TEST_CASE("louvain on a triangle: one community, matches exhaustive search") {
  auto graph = make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  Partition partition = louvain(graph, 5);
  auto best = oracle::best_partition(graph);

  std::set<std::vector<int>> one{{0, 1, 2}};
  CHECK(oracle::grouping(best.assignment) == one);
  CHECK(oracle::grouping(partition.community) == one);
  CHECK(partition.modularity == doctest::Approx(best.modularity).epsilon(1e-12));
}

TEST_CASE("edgeless graph: every node its own community, modularity 0") {
  auto graph = make_graph(4, {});
  Partition partition = louvain(graph, 1);
  CHECK(partition.community_count() == 4);
  CHECK(partition.modularity == 0.0);
}

TEST_CASE("single node: single community, modularity 0 by convention") {
  auto graph = make_graph(1, {});
  Partition partition = louvain(graph, 1);
  CHECK(partition.community == std::vector<int>{0});
  CHECK(partition.modularity == 0.0);
}

TEST_CASE("reported modularity equals a from-scratch recomputation") {
  auto graph = two_cliques();
  graph.add_multiplicity(0, 5, 3);  // extra weighted noise edge
  for (std::uint64_t seed : {1ull, 7ull, 42ull}) {
    Partition partition = louvain(graph, seed);
    double recomputed = modularity(graph, partition.community);
    CHECK(std::fabs(partition.modularity - recomputed) < 1e-12);
  }
}

TEST_CASE("louvain is deterministic for a fixed seed") {
  auto graph = two_cliques();
  graph.add_multiplicity(1, 6, 2);
  Partition a = louvain(graph, 31337);
  Partition b = louvain(graph, 31337);
  CHECK(a.community == b.community);
  CHECK(a.modularity == b.modularity);
}

TEST_CASE("level modularity is non-decreasing and beats singletons") {
  auto graph = two_cliques();
  Partition partition = louvain(graph, 9);
  REQUIRE(!partition.level_modularity.empty());
  for (std::size_t i = 1; i < partition.level_modularity.size(); ++i)
    CHECK(partition.level_modularity[i] >=
          partition.level_modularity[i - 1] - 1e-12);

  std::vector<int> singletons(graph.node_count());
  for (std::size_t i = 0; i < singletons.size(); ++i) singletons[i] = int(i);
  CHECK(partition.modularity >= modularity(graph, singletons) - 1e-12);
}

TEST_CASE("modularity honours edge multiplicities as weights") {
  // One heavy edge dominates: grouping its endpoints wins.
  auto graph = make_graph(4, {{0, 1, 10}, {1, 2, 1}, {2, 3, 10}});
  Partition partition = louvain(graph, 3);
  auto best = oracle::best_partition(graph);
  CHECK(oracle::grouping(partition.community) ==
        oracle::grouping(best.assignment));
}

TEST_CASE("resolution above 1 splits looser groupings") {
  auto graph = two_cliques();
  Partition coarse = louvain(graph, 1, 1.0);
  Partition fine = louvain(graph, 1, 8.0);
  CHECK(fine.community_count() >= coarse.community_count());
}

TEST_CASE("dense_components filters, ranks and breaks ties") {
  // Community 0: 5 nodes all pairwise multiplicity 3 (mean 3).
  // Community 1: 3-clique multiplicity 1 (mean 1).
  std::vector<std::tuple<int, int, int>> edges;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) edges.emplace_back(i, j, 3);
  for (int i = 5; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) edges.emplace_back(i, j, 1);
  auto graph = make_graph(8, edges);
  Partition partition;
  partition.community = {0, 0, 0, 0, 0, 1, 1, 1};

  auto dense = dense_components(graph, partition, 3, 2.0);
  REQUIRE(dense.size() == 1);
  CHECK(dense[0].members.size() == 5);
  CHECK(dense[0].mean_multiplicity == doctest::Approx(3.0));

  auto all = dense_components(graph, partition, 3, 0.5);
  REQUIRE(all.size() == 2);
  CHECK(all[0].mean_multiplicity > all[1].mean_multiplicity);

  CHECK(dense_components(graph, partition, 6, 0.0).empty());
}

TEST_CASE("dense_components: no community meets thresholds") {
  auto graph = make_graph(4, {{0, 1, 1}});
  Partition partition;
  partition.community = {0, 0, 1, 2};
  CHECK(dense_components(graph, partition, 2, 5.0).empty());
}

TEST_CASE("dense_components: singletons are excluded even at min_size 1") {
  auto graph = make_graph(3, {});
  Partition partition;
  partition.community = {0, 1, 2};
  CHECK(dense_components(graph, partition, 1, 0.0).empty());
}

TEST_CASE("dense_components: sparse community is penalized by missing pairs") {
  // A path on 4 nodes: 3 edges of multiplicity 4 over 6 pairs -> mean 2.
  auto graph = make_graph(4, {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}});
  Partition partition;
  partition.community = {0, 0, 0, 0};
  auto dense = dense_components(graph, partition, 2, 0.0);
  REQUIRE(dense.size() == 1);
  CHECK(dense[0].mean_multiplicity == doctest::Approx(2.0));
}
