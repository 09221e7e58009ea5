#pragma once

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stroll/rational.hpp"

namespace stroll {

struct WeightedGraph {
  int n = 0;
  std::vector<std::tuple<int, int, Rational>> edges;
};

struct TreeDecomposition {
  std::vector<std::vector<int>> bags;  // sorted vertex lists
  std::vector<std::pair<int, int>> tree_edges;
  int root = 0;

  int width() const;
};

struct ValidationReport {
  bool ok = true;
  std::string violation;
};

/// Checks the three tree-decomposition conditions exhaustively and reports the
/// first violation with a witness.
ValidationReport validate_tree_decomposition(const WeightedGraph& g,
                                             const TreeDecomposition& t);

/// Min-degree elimination; width is reported, not necessarily optimal.
TreeDecomposition heuristic_tree_decomposition(const WeightedGraph& g);

/// Duplicates bags so that every node has at most two children and every
/// two-child node's second child is a copy of its own bag.
TreeDecomposition binarize(const TreeDecomposition& t);

/// vertex -> its rootmost bag.
std::map<int, int> token_map(const TreeDecomposition& t);

struct TwConfig {
  double time_limit_seconds = 30.0;  // deadline guess enumeration budget
  bool exclude_endpoints = false;    // P2P prize skips s and t when set
};

struct TwQueryPair {
  int a = 0;
  int b = 0;
  int group = 0;
};

struct TwMultiPathResult {
  bool feasible = false;
  std::vector<Rational> group_lengths;
  Rational total_length;
  std::vector<std::vector<int>> walks;  // one per query pair
  int prize = 0;
};

/// Minimum-length collection of walks in the subtree of `bag_id` realizing the
/// query pairs and visiting at least k_min distinct vertices.
TwMultiPathResult solve_multipath_kstroll_tw(const WeightedGraph& g,
                                             const TreeDecomposition& t,
                                             int bag_id,
                                             const std::vector<TwQueryPair>& pairs,
                                             int k_min, const TwConfig& cfg = {});

struct TwWalkResult {
  bool feasible = false;
  Rational length;
  std::vector<int> walk;
  int prize = 0;
};

TwWalkResult solve_kstroll_tw(const WeightedGraph& g, const TreeDecomposition& t,
                              int s, int t_vertex, int k, const TwConfig& cfg = {});

TwWalkResult solve_p2p_tw(const WeightedGraph& g, const TreeDecomposition& t,
                          int s, int t_vertex, const Rational& budget,
                          const TwConfig& cfg = {});

struct TwDeadlineResult {
  bool feasible = false;
  std::vector<int> walk;
  int on_time = 0;
  bool certified = false;  // guess enumeration completed without hitting caps
  std::vector<Rational> arrivals;  // per walk position
};

TwDeadlineResult solve_deadline_tw(const WeightedGraph& g, const TreeDecomposition& t,
                                   int s, const std::map<int, Rational>& deadlines,
                                   double epsilon, int m_max = 3,
                                   const TwConfig& cfg = {});

}  // namespace stroll
