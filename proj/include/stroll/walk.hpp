#pragma once

#include <utility>
#include <vector>

#include "stroll/metric.hpp"

namespace stroll {

/// Ordered vertex sequence (repeats allowed) over a metric, with cached length.
class Walk {
 public:
  Walk(const MetricInstance& m, std::vector<int> vertices);

  const std::vector<int>& vertices() const { return verts_; }
  const MetricInstance& metric() const { return *metric_; }
  int size() const { return static_cast<int>(verts_.size()); }
  const Rational& length() const { return length_; }
  int distinct_count() const;

  int front() const { return verts_.front(); }
  int back() const { return verts_.back(); }

  /// Length of the prefix ending at position `pos`.
  Rational prefix_length(int pos) const;

 private:
  const MetricInstance* metric_;
  std::vector<int> verts_;
  Rational length_;
};

/// Index subsequence of a walk with fixed endpoints.
struct Jump {
  std::vector<int> indices;  // positions into the parent walk, first and last fixed
  Rational length;
};

Walk subpath(const Walk& w, int u_pos, int v_pos);

/// Maximum-length mu-jump; ties broken to the lexicographically smallest
/// index sequence.
Jump optimal_mu_jump(const Walk& w, int mu);

Rational mu_excess(const Walk& w, int mu);

/// The canonical equal-size mu-jump with indices ceil((j-1)(k-1)/(mu-1))+1.
Jump equal_size_jump(const Walk& w, int mu);

/// Replace each [from,to] index range by the direct edge between its endpoints.
Walk shortcut(const Walk& w, const std::vector<std::pair<int, int>>& segments);

/// Sum of lengths of the maximal contiguous sub-walks of w inside `cluster`.
Rational restriction_length(const Walk& w, const std::vector<int>& cluster);

}  // namespace stroll
