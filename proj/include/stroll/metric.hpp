#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stroll/rational.hpp"

namespace stroll {

using Rng = std::mt19937_64;

/// Finite metric space with exact rational distances, normalized so the
/// minimum positive pairwise distance is 1. Immutable after construction.
class MetricInstance {
 public:
  static MetricInstance from_matrix(std::vector<std::string> ids,
                                    std::vector<std::vector<Rational>> dist,
                                    bool check_triangle = true);
  /// Euclidean points; distances are snapped to a 1/grid_den grid before
  /// normalization so downstream arithmetic stays rational.
  static MetricInstance from_coords(std::vector<std::string> ids,
                                    std::vector<std::vector<Rational>> coords,
                                    std::int64_t grid_den = 1000);
  /// Connected weighted graph; the metric is its shortest-path completion.
  static MetricInstance from_graph(std::vector<std::string> ids,
                                   std::vector<std::tuple<int, int, Rational>> edges);

  int size() const { return n_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(int v) const { return ids_[v]; }
  int index_of(const std::string& id) const;

  const Rational& dist(int u, int v) const { return dist_[u][v]; }
  Rational aspect_ratio() const { return aspect_; }
  /// delta = log2(aspect ratio), at least 1.
  double log_aspect() const;
  /// Factor every raw distance was divided by during normalization.
  Rational normalization_scale() const { return scale_; }

  const std::optional<std::vector<std::vector<Rational>>>& coords() const {
    return coords_;
  }

  bool has_integer_distances() const;

  std::vector<int> all_nodes() const;

 private:
  MetricInstance() = default;
  void normalize();

  int n_ = 0;
  std::vector<std::string> ids_;
  std::vector<std::vector<Rational>> dist_;
  Rational aspect_ = Rational(0);
  Rational scale_ = Rational(1);
  std::optional<std::vector<std::vector<Rational>>> coords_;
};

/// rho-cover whose centers are pairwise more than rho apart (so a rho/2-packing).
struct NetResult {
  std::vector<int> centers;
  Rational radius;
  std::map<int, int> assignment;  // node -> nearest center
};

std::vector<int> ball(const MetricInstance& m, int v, const Rational& r);
std::vector<int> ball_within(const MetricInstance& m, const std::vector<int>& subset,
                             int v, const Rational& r);

NetResult greedy_net(const MetricInstance& m, const std::vector<int>& subset,
                     const Rational& rho, Rng& rng);

Rational diameter(const MetricInstance& m, const std::vector<int>& subset);

/// Heuristic upper estimate of the doubling dimension via greedy ball covers
/// at dyadic scales.
double doubling_dimension_estimate(const MetricInstance& m);

}  // namespace stroll
