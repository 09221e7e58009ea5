#include "stroll/doubling.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace stroll {

namespace {

const Rational kInf(INT64_MAX / 4);

using PairList = std::vector<std::pair<int, int>>;  // canonical: (min,max), sorted

struct Seg {
  int part = -1, a = -1, b = -1;
};

struct Prof {
  std::vector<Seg> segs;  // route order; consecutive segments joined by a hop
  Rational hop;           // total crossing-hop length
  Rational seg_lb;        // sum of d(entry, exit), a child-cost lower bound
};

struct Choice {
  bool leaf = true;
  std::vector<std::vector<int>> leaf_seqs;  // per canonical pair
  int split = -1;
  std::vector<std::vector<Seg>> profiles;  // per canonical pair
  std::vector<int> child_k;                // per part of the split
};

struct ClusterTable {
  std::vector<Rational> best;  // index k: min cost visiting >= k distinct vertices
  std::vector<Choice> choice;
};

class DblEngine {
 public:
  DblEngine(const MetricInstance& m, const GammaSplitTree& t, const SolverConfig& cfg)
      : m_(m), t_(t), cfg_(cfg) {
    delta_ = m.log_aspect();
    sparse_cap_ = cfg.sparse_crossing_cap > 0
                      ? cfg.sparse_crossing_cap
                      : std::max(1, static_cast<int>(std::ceil(
                                        2.0 * cfg.kappa_prime *
                                        std::log2(std::max(2, m.size())) /
                                        cfg.epsilon)));
  }

  bool certified() const { return !capped_; }

  const ClusterTable& table(int cid, PairList pairs) {
    std::sort(pairs.begin(), pairs.end());
    auto key = std::make_pair(cid, pairs);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    ClusterTable tab = compute(cid, pairs);
    return memo_.emplace(std::move(key), std::move(tab)).first->second;
  }

  std::vector<std::vector<int>> walks(int cid, PairList pairs, int k) {
    std::sort(pairs.begin(), pairs.end());
    const ClusterTable& tab = table(cid, pairs);
    if (tab.best[k] == kInf) throw std::runtime_error("no witness for infeasible entry");
    const Choice& ch = tab.choice[k];
    if (ch.leaf) return ch.leaf_seqs;
    const SplitNode& sp = t_.splits[ch.split];
    const auto& children = t_.split_child_clusters[ch.split];
    const int nparts = static_cast<int>(sp.parts.size());
    // Rebuild per-part pair lists in append order and fetch child walks.
    std::vector<PairList> append(nparts);
    for (const auto& profile : ch.profiles)
      for (const auto& sg : profile)
        append[sg.part].push_back(std::minmax(sg.a, sg.b));
    std::vector<std::vector<int>> slot_of(nparts);
    std::vector<std::vector<std::vector<int>>> cwalks(nparts);
    for (int j = 0; j < nparts; ++j) {
      std::vector<int> idx(append[j].size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](int x, int y) { return append[j][x] < append[j][y]; });
      slot_of[j].resize(idx.size());
      for (std::size_t slot = 0; slot < idx.size(); ++slot)
        slot_of[j][idx[slot]] = static_cast<int>(slot);
      PairList sorted = append[j];
      std::sort(sorted.begin(), sorted.end());
      if (!sorted.empty() || ch.child_k[j] > 0)
        cwalks[j] = walks(children[j], sorted, ch.child_k[j]);
    }
    std::vector<int> counter(nparts, 0);
    std::vector<std::vector<int>> out;
    for (std::size_t pi = 0; pi < ch.profiles.size(); ++pi) {
      std::vector<int> w;
      for (const auto& sg : ch.profiles[pi]) {
        int slot = slot_of[sg.part][counter[sg.part]++];
        auto cw = cwalks[sg.part].at(slot);
        if (cw.front() != sg.a) std::reverse(cw.begin(), cw.end());
        w.insert(w.end(), cw.begin(), cw.end());
      }
      out.push_back(std::move(w));
    }
    return out;
  }

 private:
  ClusterTable compute(int cid, const PairList& pairs) {
    const Cluster& c = t_.clusters[cid];
    const int n = static_cast<int>(c.vertices.size());
    ClusterTable tab;
    tab.best.assign(n + 1, kInf);
    tab.choice.resize(n + 1);
    if (cfg_.max_sigma > 0 && static_cast<int>(pairs.size()) > cfg_.max_sigma) {
      capped_ = true;
      return tab;
    }
    std::set<int> members(c.vertices.begin(), c.vertices.end());
    for (auto& [a, b] : pairs)
      if (!members.count(a) || !members.count(b)) return tab;  // infeasible key
    if (pairs.empty()) {
      tab.best[0] = Rational(0);
      return tab;
    }
    if (t_.is_leaf(cid)) {
      leaf_solve(c, pairs, tab);
    } else {
      for (int split_id : t_.cluster_split_ids[cid]) split_solve(split_id, c, pairs, tab);
    }
    for (int k = n - 1; k >= 0; --k)
      if (tab.best[k + 1] < tab.best[k]) {
        tab.best[k] = tab.best[k + 1];
        tab.choice[k] = tab.choice[k + 1];
      }
    return tab;
  }

  // Exhaustive base case: per pair all simple sequences inside the cluster,
  // combined over pairs by a visited-subset DP.
  void leaf_solve(const Cluster& c, const PairList& pairs, ClusterTable& tab) {
    const int n = static_cast<int>(c.vertices.size());
    auto lidx = [&](int v) {
      return static_cast<int>(std::lower_bound(c.vertices.begin(), c.vertices.end(), v) -
                              c.vertices.begin());
    };
    struct State {
      Rational len;
      std::vector<std::vector<int>> seqs;
    };
    std::map<int, State> states{{0, {Rational(0), {}}}};
    for (auto& [s, t] : pairs) {
      // options: visited local mask -> (min length, argmin sequence)
      std::map<int, std::pair<Rational, std::vector<int>>> opts;
      std::vector<int> interior;
      for (int v : c.vertices)
        if (v != s && v != t) interior.push_back(v);
      const int in = static_cast<int>(interior.size());
      for (int sub = 0; sub < (1 << in); ++sub) {
        std::vector<int> chosen;
        for (int i = 0; i < in; ++i)
          if (sub >> i & 1) chosen.push_back(interior[i]);
        std::sort(chosen.begin(), chosen.end());
        do {
          std::vector<int> seq{s};
          seq.insert(seq.end(), chosen.begin(), chosen.end());
          if (s != t || !chosen.empty()) seq.push_back(t);
          Rational len(0);
          for (std::size_t i = 1; i < seq.size(); ++i)
            len += m_.dist(seq[i - 1], seq[i]);
          int mask = (1 << lidx(s)) | (1 << lidx(t));
          for (int v : chosen) mask |= 1 << lidx(v);
          auto it = opts.find(mask);
          if (it == opts.end() || len < it->second.first) opts[mask] = {len, seq};
        } while (std::next_permutation(chosen.begin(), chosen.end()));
      }
      std::map<int, State> next;
      for (auto& [mask, st] : states)
        for (auto& [omask, opt] : opts) {
          int nm = mask | omask;
          Rational nl = st.len + opt.first;
          auto it = next.find(nm);
          if (it == next.end() || nl < it->second.len) {
            State ns = st;
            ns.len = nl;
            ns.seqs.push_back(opt.second);
            next[nm] = std::move(ns);
          }
        }
      states = std::move(next);
    }
    for (auto& [mask, st] : states) {
      int k = std::popcount(static_cast<unsigned>(mask));
      if (st.len < tab.best[k]) {
        tab.best[k] = st.len;
        tab.choice[k].leaf = true;
        tab.choice[k].leaf_seqs = st.seqs;
        (void)n;
      }
    }
  }

  Rational greedy_upper_bound(const Cluster& c, const PairList& pairs) {
    Rational total(0);
    for (std::size_t i = 1; i < pairs.size(); ++i)
      total += m_.dist(pairs[i].first, pairs[i].second);
    auto [s, t] = pairs[0];
    std::set<int> remaining(c.vertices.begin(), c.vertices.end());
    remaining.erase(s);
    remaining.erase(t);
    int cur = s;
    while (!remaining.empty()) {
      int pick = -1;
      for (int v : remaining)
        if (pick < 0 || m_.dist(cur, v) < m_.dist(cur, pick)) pick = v;
      total += m_.dist(cur, pick);
      cur = pick;
      remaining.erase(pick);
    }
    total += m_.dist(cur, t);
    return total;
  }

  // All dominant route profiles for one pair at one split: alternating
  // part-segments and crossing hops over simple entry/exit vertices, in both
  // the free-crossing (sparse) and portal-only (dense) regimes.
  std::vector<Prof> enumerate_profiles(const SplitNode& sp, int s, int t,
                                       const Rational& ub, int seg_cap) {
    std::map<std::vector<std::tuple<int, int, int>>, Prof> out;
    auto canon = [](const std::vector<Seg>& segs) {
      std::vector<std::tuple<int, int, int>> key;
      for (const auto& sg : segs)
        key.push_back({sg.part, std::min(sg.a, sg.b), std::max(sg.a, sg.b)});
      std::sort(key.begin(), key.end());
      return key;
    };
    auto is_portal = [&](int v) {
      const auto& ps = sp.portals.at(sp.part_of.at(v));
      return std::find(ps.begin(), ps.end(), v) != ps.end();
    };
    for (int dense = 0; dense < 2; ++dense) {
      std::set<int> used{s};
      std::vector<Seg> segs;
      std::function<void(int, int, Rational, Rational, int)> dfs =
          [&](int part, int entry, Rational hop, Rational lb, int hops) {
            for (int b : sp.parts[part]) {
              bool is_new = !used.count(b);
              bool closes = s == t && b == s && entry == s && segs.empty();
              // finish the route at t
              // Entries are always fresh, so b == entry means t appears only
              // in this final segment and the route stays simple.
              if (b == t && sp.part_of.at(t) == part && (is_new || closes || b == entry)) {
                Rational nlb = lb + m_.dist(entry, b);
                if (hop + nlb <= ub) {
                  segs.push_back({part, entry, b});
                  auto key = canon(segs);
                  auto it = out.find(key);
                  if (it == out.end() || hop < it->second.hop)
                    out[key] = Prof{segs, hop, nlb};
                  segs.pop_back();
                }
              }
              if (!is_new && b != entry) continue;
              if (b == t && sp.part_of.at(t) == part) continue;  // t ends the route
              if (static_cast<int>(segs.size()) + 1 >= seg_cap) continue;
              if (dense && !is_portal(b)) continue;
              // hop out of this part and open the next segment
              Rational nlb = lb + m_.dist(entry, b);
              if (hop + nlb > ub) continue;
              for (std::size_t q = 0; q < sp.parts.size(); ++q) {
                if (static_cast<int>(q) == part) continue;
                if (!dense && hops >= sparse_cap_) continue;
                for (int a2 : sp.parts[q]) {
                  if (used.count(a2)) continue;
                  if (dense && !is_portal(a2)) continue;
                  Rational nhop = hop + m_.dist(b, a2);
                  if (nhop + nlb > ub) continue;
                  segs.push_back({part, entry, b});
                  bool inserted = used.insert(b).second;
                  used.insert(a2);
                  dfs(static_cast<int>(q), a2, nhop, nlb, hops + 1);
                  used.erase(a2);
                  if (inserted) used.erase(b);
                  segs.pop_back();
                }
              }
            }
          };
      dfs(sp.part_of.at(s), s, Rational(0), Rational(0), 0);
    }
    std::vector<Prof> res;
    for (auto& [k, p] : out) res.push_back(std::move(p));
    return res;
  }

  void split_solve(int split_id, const Cluster& c, const PairList& pairs,
                   ClusterTable& tab) {
    const SplitNode& sp = t_.splits[split_id];
    const auto& children = t_.split_child_clusters[split_id];
    const int nparts = static_cast<int>(sp.parts.size());
    const int seg_cap = cfg_.max_segments_per_route > 0
                            ? cfg_.max_segments_per_route
                            : static_cast<int>(c.vertices.size());
    Rational ub = greedy_upper_bound(c, pairs);
    std::vector<std::vector<Prof>> per_pair;
    for (auto& [s, t] : pairs) {
      per_pair.push_back(enumerate_profiles(sp, s, t, ub, seg_cap));
      if (per_pair.back().empty()) return;
    }
    // Cross-pair aggregation, deduplicated by the combined per-part pair lists.
    struct Agg {
      std::vector<int> pick;  // profile index per pair
      Rational hop;
    };
    std::map<std::vector<std::tuple<int, int, int>>, Agg> aggs;
    std::function<void(std::size_t, std::vector<int>&, Rational)> build =
        [&](std::size_t pi, std::vector<int>& pick, Rational hop) {
          if (pi == pairs.size()) {
            std::vector<std::tuple<int, int, int>> key;
            for (std::size_t i = 0; i < pick.size(); ++i)
              for (const auto& sg : per_pair[i][pick[i]].segs)
                key.push_back({sg.part, std::min(sg.a, sg.b), std::max(sg.a, sg.b)});
            std::sort(key.begin(), key.end());
            auto it = aggs.find(key);
            if (it == aggs.end() || hop < it->second.hop) aggs[key] = {pick, hop};
            return;
          }
          for (std::size_t x = 0; x < per_pair[pi].size(); ++x) {
            pick.push_back(static_cast<int>(x));
            build(pi + 1, pick, hop + per_pair[pi][x].hop);
            pick.pop_back();
          }
        };
    std::vector<int> pick;
    build(0, pick, Rational(0));

    for (auto& [key, agg] : aggs) {
      std::vector<PairList> plists(nparts);
      for (std::size_t i = 0; i < pairs.size(); ++i)
        for (const auto& sg : per_pair[i][agg.pick[i]].segs)
          plists[sg.part].push_back(std::minmax(sg.a, sg.b));
      std::vector<const ClusterTable*> ct(nparts);
      bool dead = false;
      for (int j = 0; j < nparts && !dead; ++j) {
        std::sort(plists[j].begin(), plists[j].end());
        ct[j] = &table(children[j], plists[j]);
        bool any = false;
        for (const auto& v : ct[j]->best)
          if (v < kInf) any = true;
        if (!any) dead = true;
      }
      if (dead) continue;
      // min-plus convolution over parts, with argmin tracking
      std::vector<std::vector<Rational>> dp(nparts + 1);
      std::vector<std::vector<int>> back(nparts + 1);
      dp[0] = {agg.hop};
      for (int j = 0; j < nparts; ++j) {
        const auto& f = ct[j]->best;
        dp[j + 1].assign(dp[j].size() + f.size() - 1, kInf);
        back[j + 1].assign(dp[j + 1].size(), -1);
        for (std::size_t x = 0; x < dp[j].size(); ++x) {
          if (dp[j][x] == kInf) continue;
          for (std::size_t y = 0; y < f.size(); ++y) {
            if (f[y] == kInf) continue;
            Rational v = dp[j][x] + f[y];
            if (v < dp[j + 1][x + y]) {
              dp[j + 1][x + y] = v;
              back[j + 1][x + y] = static_cast<int>(y);
            }
          }
        }
      }
      const int n = static_cast<int>(c.vertices.size());
      for (int k = 0; k <= n && k < static_cast<int>(dp[nparts].size()); ++k) {
        if (dp[nparts][k] >= tab.best[k]) continue;
        Choice ch;
        ch.leaf = false;
        ch.split = split_id;
        for (std::size_t i = 0; i < pairs.size(); ++i)
          ch.profiles.push_back(per_pair[i][agg.pick[i]].segs);
        ch.child_k.assign(nparts, 0);
        int rem = k;
        for (int j = nparts; j >= 1; --j) {
          ch.child_k[j - 1] = back[j][rem];
          rem -= back[j][rem];
        }
        tab.best[k] = dp[nparts][k];
        tab.choice[k] = std::move(ch);
      }
    }
  }

  const MetricInstance& m_;
  const GammaSplitTree& t_;
  SolverConfig cfg_;
  double delta_ = 1.0;
  int sparse_cap_ = 1;
  bool capped_ = false;
  std::map<std::pair<int, PairList>, ClusterTable> memo_;
};

int distinct_union(const std::vector<std::vector<int>>& walks) {
  std::set<int> seen;
  for (const auto& w : walks) seen.insert(w.begin(), w.end());
  return static_cast<int>(seen.size());
}

Rational walks_length(const MetricInstance& m,
                      const std::vector<std::vector<int>>& walks) {
  Rational total(0);
  for (const auto& w : walks)
    for (std::size_t i = 1; i < w.size(); ++i) total += m.dist(w[i - 1], w[i]);
  return total;
}

}  // namespace

DblMultiPathResult solve_multipath_kstroll_dbl(const MetricInstance& m,
                                               const GammaSplitTree& tree,
                                               int cluster_id,
                                               const std::vector<DblQueryPair>& pairs,
                                               int k_min, const SolverConfig& cfg) {
  DblEngine eng(m, tree, cfg);
  PairList canon;
  for (const auto& p : pairs) canon.push_back(std::minmax(p.a, p.b));
  std::sort(canon.begin(), canon.end());
  const auto& tab = eng.table(cluster_id, canon);
  DblMultiPathResult res;
  res.certified = eng.certified();
  const int n = static_cast<int>(tree.clusters[cluster_id].vertices.size());
  if (k_min > n || tab.best[std::max(0, k_min)] == kInf) return res;
  int k = std::max(0, k_min);
  res.feasible = true;
  res.total_length = tab.best[k];
  auto sorted_walks = eng.walks(cluster_id, canon, k);
  // Map canonical slots back to the callers' pair order and orientation.
  std::vector<int> order(canon.size());
  std::vector<std::pair<int, int>> raw;
  for (const auto& p : pairs) raw.push_back(std::minmax(p.a, p.b));
  std::vector<int> idx(raw.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int x, int y) { return raw[x] < raw[y]; });
  res.walks.resize(pairs.size());
  for (std::size_t slot = 0; slot < idx.size(); ++slot) {
    auto w = sorted_walks[slot];
    int orig = idx[slot];
    if (!w.empty() && w.front() != pairs[orig].a) std::reverse(w.begin(), w.end());
    res.walks[orig] = std::move(w);
  }
  res.prize = distinct_union(res.walks);
  return res;
}

DblWalkResult solve_kstroll_dbl(const MetricInstance& m, int s, int t, int k,
                                const SolverConfig& cfg, Rng& rng) {
  if (k > m.size()) throw std::invalid_argument("k exceeds the vertex count");
  auto tree = build_gamma_split_tree(m, cfg.decomposition(), rng);
  DblEngine eng(m, tree, cfg);
  PairList canon{std::minmax(s, t)};
  const auto& tab = eng.table(0, canon);
  DblWalkResult res;
  res.certified = eng.certified();
  int kk = std::max(0, k);
  if (tab.best[kk] == kInf) return res;
  auto ws = eng.walks(0, canon, kk);
  auto w = ws[0];
  if (!w.empty() && w.front() != s) std::reverse(w.begin(), w.end());
  res.feasible = true;
  res.length = tab.best[kk];
  res.walk = Walk(m, w);
  res.prize = res.walk->distinct_count();
  if (res.walk->length() != res.length)
    throw std::runtime_error("witness length mismatch");
  return res;
}

DblWalkResult solve_p2p_dbl(const MetricInstance& m, int s, int t,
                            const Rational& budget, const SolverConfig& cfg,
                            Rng& rng) {
  DblWalkResult res;
  if (budget < m.dist(s, t)) return res;
  auto tree = build_gamma_split_tree(m, cfg.decomposition(), rng);
  DblEngine eng(m, tree, cfg);
  PairList canon{std::minmax(s, t)};
  const auto& tab = eng.table(0, canon);
  res.certified = eng.certified();
  int best_k = -1;
  for (int k = 0; k < static_cast<int>(tab.best.size()); ++k)
    if (tab.best[k] <= budget) best_k = k;
  if (best_k < 0) return res;
  auto ws = eng.walks(0, canon, best_k);
  auto w = ws[0];
  if (!w.empty() && w.front() != s) std::reverse(w.begin(), w.end());
  res.feasible = true;
  res.length = tab.best[best_k];
  res.walk = Walk(m, w);
  res.prize = res.walk->distinct_count();
  return res;
}

}  // namespace stroll
