#pragma once

// Independent reference implementations used only to check the production
// code. These deliberately take the slow, literal route: double sums,
// pairwise intersections, exhaustive search, exact rational arithmetic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "polluterwatch/graph.hpp"

namespace oracle {

// Gini as the literal double sum: sum |x_i - x_j| / (2 n sum x).
inline double gini_double_sum(std::span<const double> xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  if (total == 0.0) return 0.0;
  double numerator = 0.0;
  for (double a : xs)
    for (double b : xs) numerator += std::fabs(a - b);
  return numerator / (2.0 * double(xs.size()) * total);
}

// Pairwise |N(u) ∩ N(v)| over every user pair.
inline std::map<std::pair<std::string, std::string>, std::int64_t>
projection_pairwise(const pw::BipartiteGraph& bipartite) {
  std::map<std::pair<std::string, std::string>, std::int64_t> result;
  std::vector<const std::string*> users;
  for (const auto& [user, days] : bipartite.incidence) users.push_back(&user);
  for (std::size_t i = 0; i < users.size(); ++i) {
    for (std::size_t j = i + 1; j < users.size(); ++j) {
      const auto& a = bipartite.incidence.at(*users[i]);
      const auto& b = bipartite.incidence.at(*users[j]);
      std::int64_t shared = 0;
      for (const auto& day : a) shared += b.count(day);
      if (shared > 0) result[{*users[i], *users[j]}] = shared;
    }
  }
  return result;
}

// Enumerates every set partition of {0..n-1} via restricted growth strings
// and hands each assignment to fn. Bell(8) = 4140, fine for desk scale.
inline void for_each_partition(int n,
                               const std::function<void(std::span<const int>)>& fn) {
  std::vector<int> assignment(std::size_t(n), 0);
  std::function<void(int, int)> recurse = [&](int index, int next_free) {
    if (index == n) {
      fn(assignment);
      return;
    }
    for (int c = 0; c <= next_free; ++c) {
      assignment[std::size_t(index)] = c;
      recurse(index + 1, std::max(next_free, c + 1));
    }
  };
  recurse(0, 0);
}

struct BestPartition {
  double modularity = -1.0;
  std::vector<int> assignment;
};

// Exhaustive modularity maximization; ties keep the first found.
inline BestPartition best_partition(const pw::CoTweetMultigraph& graph,
                                    double resolution = 1.0) {
  BestPartition best;
  for_each_partition(int(graph.node_count()), [&](std::span<const int> assignment) {
    double q = pw::modularity(graph, assignment, resolution);
    if (q > best.modularity) {
      best.modularity = q;
      best.assignment.assign(assignment.begin(), assignment.end());
    }
  });
  return best;
}

// Community structure as a canonical set of sorted member sets, so two
// labelings compare equal iff they induce the same grouping.
inline std::set<std::vector<int>> grouping(std::span<const int> assignment) {
  std::map<int, std::vector<int>> communities;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    communities[assignment[i]].push_back(int(i));
  std::set<std::vector<int>> result;
  for (auto& [id, members] : communities) result.insert(members);
  return result;
}

// Exact binomial tail P[X >= s] under p = num/den, rational arithmetic.
inline double binomial_tail_rational(int successes, int trials, std::int64_t num,
                                     std::int64_t den) {
  using boost::multiprecision::cpp_int;
  cpp_int numerator = 0;
  for (int k = successes; k <= trials; ++k) {
    cpp_int choose = 1;
    for (int i = 0; i < k; ++i) {
      choose *= trials - i;
      choose /= i + 1;
    }
    cpp_int term = choose;
    for (int i = 0; i < k; ++i) term *= num;
    for (int i = 0; i < trials - k; ++i) term *= den - num;
    numerator += term;
  }
  cpp_int denominator = 1;
  for (int i = 0; i < trials; ++i) denominator *= den;
  return double(numerator.convert_to<long double>() /
                denominator.convert_to<long double>());
}

// Textbook normal-equations fit of log(score) against log(rank), with
// explicitly mean-centered sums (a different route than the production
// corrected-sums formula).
inline double loglog_r_squared(std::span<const double> scores) {
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] <= 0.0) continue;
    xs.push_back(std::log(double(i + 1)));
    ys.push_back(std::log(sorted[i]));
  }
  if (xs.size() < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(xs.size());
  my /= double(xs.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (syy <= 0.0 || sxx <= 0.0) return 0.0;
  double slope = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double predicted = my + slope * (xs[i] - mx);
    ss_res += (ys[i] - predicted) * (ys[i] - predicted);
  }
  return 1.0 - ss_res / syy;
}

}  // namespace oracle
