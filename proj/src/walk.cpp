#include "stroll/walk.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace stroll {

Walk::Walk(const MetricInstance& m, std::vector<int> vertices)
    : metric_(&m), verts_(std::move(vertices)), length_(0) {
  if (verts_.empty()) throw std::invalid_argument("empty walk");
  for (int v : verts_)
    if (v < 0 || v >= m.size()) throw std::invalid_argument("walk vertex out of range");
  for (std::size_t i = 1; i < verts_.size(); ++i)
    length_ += m.dist(verts_[i - 1], verts_[i]);
}

int Walk::distinct_count() const {
  std::set<int> s(verts_.begin(), verts_.end());
  return static_cast<int>(s.size());
}

Rational Walk::prefix_length(int pos) const {
  if (pos < 0 || pos >= size()) throw std::invalid_argument("prefix position out of range");
  Rational len(0);
  for (int i = 1; i <= pos; ++i) len += metric_->dist(verts_[i - 1], verts_[i]);
  return len;
}

Walk subpath(const Walk& w, int u_pos, int v_pos) {
  if (u_pos < 0 || v_pos >= w.size() || u_pos > v_pos)
    throw std::invalid_argument("invalid subpath range");
  std::vector<int> vs(w.vertices().begin() + u_pos, w.vertices().begin() + v_pos + 1);
  return Walk(w.metric(), std::move(vs));
}

Jump optimal_mu_jump(const Walk& w, int mu) {
  const int m = w.size();
  if (mu < 2) throw std::invalid_argument("mu-jump needs mu >= 2");
  const auto& vs = w.vertices();
  const auto& met = w.metric();
  if (m == 1) {
    // Degenerate single-vertex walk: the only jump repeats the vertex.
    Jump j;
    j.indices.assign(std::min(mu, 2), 0);
    j.length = Rational(0);
    return j;
  }
  mu = std::min(mu, m);
  // best[c][i]: max jump length from index i to the last index using exactly
  // c more nodes counting i itself.
  const Rational neg_inf(INT64_MIN / 4);
  std::vector<std::vector<Rational>> best(mu + 1, std::vector<Rational>(m, neg_inf));
  best[1][m - 1] = Rational(0);
  for (int c = 2; c <= mu; ++c)
    for (int i = m - 1 - (c - 1); i >= 0; --i)
      for (int j = i + 1; j <= m - 1; ++j) {
        if (best[c - 1][j] == neg_inf) continue;
        Rational cand = met.dist(vs[i], vs[j]) + best[c - 1][j];
        if (cand > best[c][i]) best[c][i] = cand;
      }
  Jump out;
  out.length = best[mu][0];
  // Reconstruct, preferring the smallest next index on ties.
  int i = 0, c = mu;
  out.indices.push_back(0);
  while (c > 1) {
    for (int j = i + 1; j <= m - 1; ++j) {
      if (best[c - 1][j] == neg_inf) continue;
      if (met.dist(vs[i], vs[j]) + best[c - 1][j] == best[c][i]) {
        out.indices.push_back(j);
        i = j;
        break;
      }
    }
    --c;
  }
  return out;
}

Rational mu_excess(const Walk& w, int mu) {
  return w.length() - optimal_mu_jump(w, mu).length;
}

Jump equal_size_jump(const Walk& w, int mu) {
  const int k = w.size();
  if (mu < 2) throw std::invalid_argument("equal-size jump needs mu >= 2");
  mu = std::min(mu, k);
  Jump j;
  if (k == 1) {
    j.indices = {0, 0};
    j.length = Rational(0);
    return j;
  }
  const auto& vs = w.vertices();
  for (int idx = 1; idx <= mu; ++idx) {
    // a_j = ceil((j-1)(k-1)/(mu-1)) + 1 in 1-based indexing.
    std::int64_t num = std::int64_t(idx - 1) * (k - 1);
    std::int64_t a = (num + mu - 2) / (mu - 1) + 1;
    j.indices.push_back(static_cast<int>(a - 1));
  }
  j.length = Rational(0);
  for (std::size_t t = 1; t < j.indices.size(); ++t)
    j.length += w.metric().dist(vs[j.indices[t - 1]], vs[j.indices[t]]);
  return j;
}

Walk shortcut(const Walk& w, const std::vector<std::pair<int, int>>& segments) {
  auto segs = segments;
  std::sort(segs.begin(), segs.end());
  int prev_end = -1;
  for (auto& [a, b] : segs) {
    if (a < 0 || b >= w.size() || a > b) throw std::invalid_argument("bad shortcut range");
    if (a <= prev_end) throw std::invalid_argument("overlapping shortcut ranges");
    prev_end = b;
  }
  std::vector<int> out;
  std::size_t s = 0;
  for (int i = 0; i < w.size(); ++i) {
    while (s < segs.size() && segs[s].second < i) ++s;
    bool interior = s < segs.size() && segs[s].first < i && i < segs[s].second;
    if (!interior) out.push_back(w.vertices()[i]);
  }
  return Walk(w.metric(), std::move(out));
}

Rational restriction_length(const Walk& w, const std::vector<int>& cluster) {
  std::set<int> cs(cluster.begin(), cluster.end());
  const auto& vs = w.vertices();
  Rational len(0);
  for (int i = 1; i < w.size(); ++i)
    if (cs.count(vs[i - 1]) && cs.count(vs[i]))
      len += w.metric().dist(vs[i - 1], vs[i]);
  return len;
}

}  // namespace stroll
