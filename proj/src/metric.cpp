#include "stroll/metric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stroll {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

MetricInstance MetricInstance::from_matrix(std::vector<std::string> ids,
                                           std::vector<std::vector<Rational>> dist,
                                           bool check_triangle) {
  const int n = static_cast<int>(ids.size());
  if (n == 0) fail("metric needs at least one node");
  if (static_cast<int>(dist.size()) != n) fail("distance matrix size mismatch");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(dist[i].size()) != n) fail("distance matrix row size mismatch");
    if (dist[i][i] != Rational(0))
      fail("nonzero self-distance at node " + ids[i]);
    for (int j = 0; j < n; ++j) {
      if (dist[i][j] != dist[j][i])
        fail("asymmetric distance for pair (" + ids[i] + "," + ids[j] + ")");
      if (i != j && dist[i][j] <= Rational(0))
        fail("nonpositive distance for pair (" + ids[i] + "," + ids[j] + ")");
    }
  }
  if (check_triangle && n <= 64) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (dist[i][j] > dist[i][k] + dist[k][j])
            fail("triangle inequality violated by (" + ids[i] + "," + ids[j] +
                 "," + ids[k] + ")");
  }
  MetricInstance m;
  m.n_ = n;
  m.ids_ = std::move(ids);
  m.dist_ = std::move(dist);
  m.normalize();
  return m;
}

MetricInstance MetricInstance::from_coords(std::vector<std::string> ids,
                                           std::vector<std::vector<Rational>> coords,
                                           std::int64_t grid_den) {
  const int n = static_cast<int>(ids.size());
  if (n == 0) fail("metric needs at least one node");
  if (static_cast<int>(coords.size()) != n) fail("coordinate list size mismatch");
  const std::size_t dim = coords[0].size();
  for (auto& p : coords)
    if (p.size() != dim) fail("inconsistent coordinate dimension");
  std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double s = 0;
      for (std::size_t d = 0; d < dim; ++d) {
        double diff = coords[i][d].to_double() - coords[j][d].to_double();
        s += diff * diff;
      }
      double e = std::sqrt(s);
      // Snap to the 1/grid_den grid.
      Rational r(static_cast<std::int64_t>(std::llround(e * double(grid_den))),
                 grid_den);
      if (r == Rational(0))
        fail("duplicate points (" + ids[i] + "," + ids[j] + ") after grid snapping");
      dist[i][j] = dist[j][i] = r;
    }
  }
  MetricInstance m;
  m.n_ = n;
  m.ids_ = std::move(ids);
  m.dist_ = std::move(dist);
  m.coords_ = std::move(coords);
  m.normalize();
  return m;
}

MetricInstance MetricInstance::from_graph(
    std::vector<std::string> ids, std::vector<std::tuple<int, int, Rational>> edges) {
  const int n = static_cast<int>(ids.size());
  if (n == 0) fail("metric needs at least one node");
  const Rational inf(INT64_MAX / 4);
  std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n, inf));
  for (int i = 0; i < n; ++i) dist[i][i] = Rational(0);
  for (auto& [u, v, w] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) fail("edge endpoint out of range");
    if (w <= Rational(0)) fail("nonpositive edge weight");
    if (w < dist[u][v]) dist[u][v] = dist[v][u] = w;
  }
  // Floyd-Warshall.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Rational via = dist[i][k] + dist[k][j];
        if (via < dist[i][j]) dist[i][j] = via;
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (dist[i][j] == inf)
        fail("graph is disconnected (no path between " + ids[i] + " and " + ids[j] + ")");
  MetricInstance m;
  m.n_ = n;
  m.ids_ = std::move(ids);
  m.dist_ = std::move(dist);
  m.normalize();
  return m;
}

void MetricInstance::normalize() {
  Rational dmin(0), dmax(0);
  bool first = true;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      if (first || dist_[i][j] < dmin) dmin = dist_[i][j];
      if (first || dist_[i][j] > dmax) dmax = dist_[i][j];
      first = false;
    }
  if (first) {  // single node
    aspect_ = Rational(1);
    scale_ = Rational(1);
    return;
  }
  scale_ = dmin;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j) dist_[i][j] = dist_[i][j] / dmin;
  aspect_ = dmax / dmin;
}

int MetricInstance::index_of(const std::string& id) const {
  for (int i = 0; i < n_; ++i)
    if (ids_[i] == id) return i;
  fail("unknown node id " + id);
}

double MetricInstance::log_aspect() const {
  double d = std::log2(aspect_.to_double());
  return std::max(1.0, d);
}

bool MetricInstance::has_integer_distances() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!dist_[i][j].is_integer()) return false;
  return true;
}

std::vector<int> MetricInstance::all_nodes() const {
  std::vector<int> v(n_);
  for (int i = 0; i < n_; ++i) v[i] = i;
  return v;
}

std::vector<int> ball(const MetricInstance& m, int v, const Rational& r) {
  return ball_within(m, m.all_nodes(), v, r);
}

std::vector<int> ball_within(const MetricInstance& m, const std::vector<int>& subset,
                             int v, const Rational& r) {
  std::vector<int> out;
  for (int u : subset)
    if (m.dist(u, v) <= r) out.push_back(u);
  return out;
}

NetResult greedy_net(const MetricInstance& m, const std::vector<int>& subset,
                     const Rational& rho, Rng& rng) {
  if (subset.empty()) throw std::invalid_argument("greedy_net on empty subset");
  NetResult res;
  res.radius = rho;
  std::vector<int> uncovered = subset;
  while (!uncovered.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, uncovered.size() - 1);
    int c = uncovered[pick(rng)];
    res.centers.push_back(c);
    std::vector<int> rest;
    for (int u : uncovered)
      if (m.dist(u, c) > rho) rest.push_back(u);
    uncovered = std::move(rest);
  }
  // Assign every node to its nearest center; ties to the smallest node id.
  for (int u : subset) {
    int best = res.centers[0];
    for (int c : res.centers) {
      if (m.dist(u, c) < m.dist(u, best) ||
          (m.dist(u, c) == m.dist(u, best) && c < best))
        best = c;
    }
    res.assignment[u] = best;
  }
  return res;
}

Rational diameter(const MetricInstance& m, const std::vector<int>& subset) {
  if (subset.empty()) throw std::invalid_argument("diameter of empty subset");
  Rational d(0);
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = i + 1; j < subset.size(); ++j)
      if (m.dist(subset[i], subset[j]) > d) d = m.dist(subset[i], subset[j]);
  return d;
}

double doubling_dimension_estimate(const MetricInstance& m) {
  if (m.size() <= 1) return 0.0;
  const auto nodes = m.all_nodes();
  double best = 0.0;
  Rational rho = m.aspect_ratio();
  while (rho >= Rational(1, 2)) {
    for (int v : nodes) {
      auto big = ball(m, v, rho + rho);
      // Greedy cover of big with balls of radius rho centered at points of big.
      std::vector<int> uncovered = big;
      int count = 0;
      while (!uncovered.empty()) {
        int c = uncovered.front();
        ++count;
        std::vector<int> rest;
        for (int u : uncovered)
          if (m.dist(u, c) > rho) rest.push_back(u);
        uncovered = std::move(rest);
      }
      if (count > 1) best = std::max(best, std::log2(double(count)));
    }
    rho = rho / Rational(2);
  }
  return best;
}

}  // namespace stroll
