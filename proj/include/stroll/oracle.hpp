#pragma once

#include <map>
#include <optional>

#include "stroll/walk.hpp"

namespace stroll {

/// Ground-truth result from a brute-force solver.
struct OracleResult {
  bool feasible = false;
  Rational value;           // optimal length (k-stroll) or prize count (p2p/deadline)
  std::optional<Walk> witness;
  std::int64_t explored_states = 0;
  double wall_seconds = 0.0;
};

/// Minimum-length s-t sequence on the metric completion visiting at least k
/// distinct vertices. Subset DP over (visited set, last vertex).
OracleResult exact_kstroll(const MetricInstance& m, int s, int t, int k);

/// Maximum number of vertices on an s-t sequence of length at most B.
OracleResult exact_p2p(const MetricInstance& m, int s, int t, const Rational& B);

/// Maximum number of vertices whose first visit beats its deadline, over
/// sequences starting at s. A missing deadline means no constraint.
OracleResult exact_deadline(const MetricInstance& m, int s,
                            const std::map<int, Rational>& deadlines);

/// Maximum-length mu-jump by full enumeration of index subsequences.
Jump exact_mu_jump(const Walk& w, int mu);

// Independent cross-checks by naive permutation enumeration; n <= 8.
OracleResult permutation_kstroll(const MetricInstance& m, int s, int t, int k);
OracleResult permutation_p2p(const MetricInstance& m, int s, int t, const Rational& B);
OracleResult permutation_deadline(const MetricInstance& m, int s,
                                  const std::map<int, Rational>& deadlines);

}  // namespace stroll
