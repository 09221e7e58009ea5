#pragma once

#include <map>
#include <utility>
#include <vector>

#include "stroll/walk.hpp"

namespace stroll {

struct DecompositionConfig {
  double epsilon = 0.5;
  double kappa = 2.0;         // doubling dimension used in the size bounds
  double kappa_prime = 6.0;   // calibration constant, default 2*kappa + 2
  int gamma = 1;              // split nodes per internal cluster
  int leaf_size = 3;
};

struct Cluster {
  int id = -1;
  std::vector<int> vertices;
  int level = 0;
  Rational diam;
};

/// One random partition of a cluster into parts of at most half its diameter,
/// with optional per-part portal sets.
struct SplitNode {
  int id = -1;
  int parent_cluster = -1;
  std::vector<std::vector<int>> parts;
  std::map<int, int> part_of;                 // node -> part index
  std::vector<std::vector<int>> portals;      // per part, empty until attached
  std::uint64_t seed = 0;
};

struct GammaSplitTree {
  std::vector<Cluster> clusters;
  std::vector<SplitNode> splits;
  std::vector<std::vector<int>> cluster_split_ids;  // cluster id -> its splits
  std::vector<std::vector<int>> split_child_clusters;
  // split_child_clusters[split id][part index] = child cluster id
  int root = 0;
  int gamma = 1;
  int leaf_size = 3;
  int height = 0;  // cluster levels below the root

  bool is_leaf(int cluster_id) const { return cluster_split_ids[cluster_id].empty(); }
};

/// Partition `c` by a random (diam/4)-net; each part is one net center's
/// preimage, so part diameters are at most diam/2.
SplitNode random_partition(const MetricInstance& m, const Cluster& c, Rng& rng);

/// Attach a beta*diam(part)-net portal set to every part, beta = eps/(4 kappa' delta).
void attach_portals(const MetricInstance& m, SplitNode& s,
                    const DecompositionConfig& cfg, double delta);

std::vector<std::pair<int, int>> bridge_edges(
    const SplitNode& s, const std::vector<std::pair<int, int>>& candidates);

/// All cross-part portal pairs. Throws if the count exceeds
/// (16 kappa' delta / eps)^(2 kappa), which signals kappa' is too small.
std::vector<std::pair<int, int>> portal_edges(const SplitNode& s,
                                              const DecompositionConfig& cfg,
                                              double delta);

GammaSplitTree build_gamma_split_tree(const MetricInstance& m,
                                      const DecompositionConfig& cfg, Rng& rng);

/// Reroute every cross-part step of w via the nearest portals on both sides.
Walk make_portal_respecting(const Walk& w, const SplitNode& s,
                            const MetricInstance& m);

int crossing_count(const Walk& w, const SplitNode& s);

}  // namespace stroll
