#include "stroll/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stroll {

SplitNode random_partition(const MetricInstance& m, const Cluster& c, Rng& rng) {
  if (c.vertices.size() < 2)
    throw std::invalid_argument("cannot partition a singleton cluster");
  SplitNode s;
  s.parent_cluster = c.id;
  Rational rho = c.diam / Rational(4);
  auto net = greedy_net(m, c.vertices, rho, rng);
  for (std::size_t p = 0; p < net.centers.size(); ++p) {
    s.parts.emplace_back();
    for (int v : c.vertices)
      if (net.assignment.at(v) == net.centers[p]) {
        s.parts.back().push_back(v);
        s.part_of[v] = static_cast<int>(p);
      }
  }
  return s;
}

void attach_portals(const MetricInstance& m, SplitNode& s,
                    const DecompositionConfig& cfg, double delta) {
  double beta = cfg.epsilon / (4.0 * cfg.kappa_prime * delta);
  s.portals.clear();
  Rng rng(s.seed * 0x9e3779b97f4a7c15ull + 1);
  for (const auto& part : s.parts) {
    if (part.size() == 1 || beta >= 1.0) {
      s.portals.push_back({part.front()});
      continue;
    }
    Rational rho = Rational::from_double(beta) * diameter(m, part);
    if (rho <= Rational(0)) {
      s.portals.push_back({part.front()});
      continue;
    }
    auto net = greedy_net(m, part, rho, rng);
    auto centers = net.centers;
    std::sort(centers.begin(), centers.end());
    s.portals.push_back(std::move(centers));
  }
}

std::vector<std::pair<int, int>> bridge_edges(
    const SplitNode& s, const std::vector<std::pair<int, int>>& candidates) {
  std::vector<std::pair<int, int>> out;
  for (auto [u, v] : candidates) {
    auto iu = s.part_of.find(u);
    auto iv = s.part_of.find(v);
    if (iu == s.part_of.end() || iv == s.part_of.end())
      throw std::invalid_argument("bridge_edges candidate outside the cluster");
    if (iu->second != iv->second) out.push_back({u, v});
  }
  return out;
}

std::vector<std::pair<int, int>> portal_edges(const SplitNode& s,
                                              const DecompositionConfig& cfg,
                                              double delta) {
  if (s.portals.size() != s.parts.size())
    throw std::invalid_argument("portal_edges before attach_portals");
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < s.portals.size(); ++i)
    for (std::size_t j = i + 1; j < s.portals.size(); ++j)
      for (int u : s.portals[i])
        for (int v : s.portals[j]) out.push_back({u, v});
  double bound = std::pow(16.0 * cfg.kappa_prime * delta / cfg.epsilon,
                          2.0 * cfg.kappa);
  if (double(out.size()) > bound)
    throw std::runtime_error(
        "portal-edge count exceeds the configured bound; raise kappa or kappa_prime");
  return out;
}

GammaSplitTree build_gamma_split_tree(const MetricInstance& m,
                                      const DecompositionConfig& cfg, Rng& rng) {
  if (cfg.gamma < 1 || cfg.leaf_size < 1)
    throw std::invalid_argument("gamma and leaf size must be positive");
  GammaSplitTree t;
  t.gamma = cfg.gamma;
  t.leaf_size = cfg.leaf_size;
  const double delta = m.log_aspect();

  Cluster root;
  root.id = 0;
  root.vertices = m.all_nodes();
  root.level = 0;
  root.diam = diameter(m, root.vertices);
  t.clusters.push_back(root);
  t.cluster_split_ids.emplace_back();

  std::vector<int> work{0};
  while (!work.empty()) {
    int cid = work.back();
    work.pop_back();
    Cluster c = t.clusters[cid];
    if (static_cast<int>(c.vertices.size()) <= cfg.leaf_size) continue;
    for (int g = 0; g < cfg.gamma; ++g) {
      std::uint64_t seed = rng();
      Rng part_rng(seed);
      SplitNode s = random_partition(m, c, part_rng);
      s.seed = seed;
      attach_portals(m, s, cfg, delta);
      s.id = static_cast<int>(t.splits.size());
      t.cluster_split_ids[cid].push_back(s.id);
      t.split_child_clusters.emplace_back();
      for (const auto& part : s.parts) {
        Cluster child;
        child.id = static_cast<int>(t.clusters.size());
        child.vertices = part;
        child.level = c.level + 1;
        child.diam = diameter(m, part);
        t.split_child_clusters[s.id].push_back(child.id);
        t.clusters.push_back(child);
        t.cluster_split_ids.emplace_back();
        t.height = std::max(t.height, child.level);
        work.push_back(child.id);
      }
      t.splits.push_back(std::move(s));
    }
  }
  return t;
}

Walk make_portal_respecting(const Walk& w, const SplitNode& s,
                            const MetricInstance& m) {
  auto nearest_portal = [&](int v) {
    const auto& ps = s.portals.at(s.part_of.at(v));
    int best = ps.front();
    for (int p : ps)
      if (m.dist(v, p) < m.dist(v, best) || (m.dist(v, p) == m.dist(v, best) && p < best))
        best = p;
    return best;
  };
  std::vector<int> out;
  const auto& vs = w.vertices();
  out.push_back(vs.front());
  for (std::size_t i = 1; i < vs.size(); ++i) {
    int u = vs[i - 1], v = vs[i];
    if (s.part_of.at(u) != s.part_of.at(v)) {
      int up = nearest_portal(u);
      int vp = nearest_portal(v);
      if (up != u) out.push_back(up);
      if (vp != v) out.push_back(vp);
    }
    out.push_back(v);
  }
  return Walk(m, std::move(out));
}

int crossing_count(const Walk& w, const SplitNode& s) {
  const auto& vs = w.vertices();
  int count = 0;
  for (std::size_t i = 1; i < vs.size(); ++i)
    if (s.part_of.at(vs[i - 1]) != s.part_of.at(vs[i])) ++count;
  return count;
}

}  // namespace stroll
