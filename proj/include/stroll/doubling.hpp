#pragma once

#include <optional>
#include <vector>

#include "stroll/decomposition.hpp"
#include "stroll/walk.hpp"

namespace stroll {

/// Parameters of the split-tree solvers. Caps set to 0 mean "derived default"
/// (which at desk scale is effectively uncapped); when a finite cap binds
/// during enumeration the result is flagged not certified.
struct SolverConfig {
  double epsilon = 0.5;
  int mu = 3;
  double kappa = 2.0;
  double kappa_prime = 6.0;  // calibration constant, default 2*kappa + 2
  int gamma = 1;
  int leaf_size = 3;
  int sparse_crossing_cap = 0;     // hops per route at one split; 0 = 2k'log(n)/eps
  int max_segments_per_route = 0;  // 0 = cluster size
  int max_sigma = 0;               // pair-list size per cluster; 0 = unbounded
  std::uint64_t seed = 1;

  DecompositionConfig decomposition() const {
    DecompositionConfig d;
    d.epsilon = epsilon;
    d.kappa = kappa;
    d.kappa_prime = kappa_prime;
    d.gamma = gamma;
    d.leaf_size = leaf_size;
    return d;
  }
};

struct DblQueryPair {
  int a = 0;
  int b = 0;
};

struct DblMultiPathResult {
  bool feasible = false;
  Rational total_length;
  std::vector<std::vector<int>> walks;  // one per query pair
  int prize = 0;
  bool certified = true;
};

/// Minimum total length of walks inside the cluster realizing the pairs and
/// visiting at least k_min distinct cluster vertices; recursion over the
/// cluster's splits with both crossing regimes enumerated.
DblMultiPathResult solve_multipath_kstroll_dbl(const MetricInstance& m,
                                               const GammaSplitTree& tree,
                                               int cluster_id,
                                               const std::vector<DblQueryPair>& pairs,
                                               int k_min, const SolverConfig& cfg);

struct DblWalkResult {
  bool feasible = false;
  Rational length;
  std::optional<Walk> walk;
  int prize = 0;
  bool certified = true;
};

DblWalkResult solve_kstroll_dbl(const MetricInstance& m, int s, int t, int k,
                                const SolverConfig& cfg, Rng& rng);

DblWalkResult solve_p2p_dbl(const MetricInstance& m, int s, int t,
                            const Rational& budget, const SolverConfig& cfg,
                            Rng& rng);

}  // namespace stroll
