#include "stroll/treewidth.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace stroll {

namespace {

const Rational kInf(INT64_MAX / 4);

std::vector<std::vector<int>> tree_adjacency(const TreeDecomposition& t) {
  std::vector<std::vector<int>> adj(t.bags.size());
  for (auto [a, b] : t.tree_edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

// children lists of the tree rooted at t.root, in BFS discovery order.
std::vector<std::vector<int>> rooted_children(const TreeDecomposition& t,
                                              std::vector<int>* order = nullptr) {
  auto adj = tree_adjacency(t);
  std::vector<std::vector<int>> ch(t.bags.size());
  std::vector<char> seen(t.bags.size(), 0);
  std::vector<int> queue{t.root};
  seen[t.root] = 1;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int b = queue[q];
    if (order) order->push_back(b);
    for (int c : adj[b])
      if (!seen[c]) {
        seen[c] = 1;
        ch[b].push_back(c);
        queue.push_back(c);
      }
  }
  return ch;
}

bool bag_contains(const std::vector<int>& bag, int v) {
  return std::binary_search(bag.begin(), bag.end(), v);
}

}  // namespace

int TreeDecomposition::width() const {
  int w = -1;
  for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
  return w;
}

ValidationReport validate_tree_decomposition(const WeightedGraph& g,
                                             const TreeDecomposition& t) {
  ValidationReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.violation = std::move(msg);
    return rep;
  };
  if (t.bags.empty()) return fail("no bags");
  if (t.tree_edges.size() + 1 != t.bags.size())
    return fail("bag graph is not a tree (edge count)");
  for (auto [a, b] : t.tree_edges)
    if (a < 0 || b < 0 || a >= static_cast<int>(t.bags.size()) ||
        b >= static_cast<int>(t.bags.size()))
      return fail("tree edge references a missing bag");
  {
    auto adj = tree_adjacency(t);
    std::vector<char> seen(t.bags.size(), 0);
    std::vector<int> q{0};
    seen[0] = 1;
    for (std::size_t i = 0; i < q.size(); ++i)
      for (int c : adj[q[i]])
        if (!seen[c]) { seen[c] = 1; q.push_back(c); }
    if (q.size() != t.bags.size()) return fail("bag graph is not connected");
  }
  for (int v = 0; v < g.n; ++v) {
    bool found = false;
    for (const auto& b : t.bags)
      if (bag_contains(b, v)) { found = true; break; }
    if (!found)
      return fail("condition 1: vertex " + std::to_string(v) + " is in no bag");
  }
  for (auto& [u, v, w] : g.edges) {
    bool found = false;
    for (const auto& b : t.bags)
      if (bag_contains(b, u) && bag_contains(b, v)) { found = true; break; }
    if (!found)
      return fail("condition 2: edge (" + std::to_string(u) + "," +
                  std::to_string(v) + ") is inside no bag");
  }
  auto adj = tree_adjacency(t);
  for (int v = 0; v < g.n; ++v) {
    std::vector<int> holders;
    for (std::size_t b = 0; b < t.bags.size(); ++b)
      if (bag_contains(t.bags[b], v)) holders.push_back(static_cast<int>(b));
    std::set<int> holder_set(holders.begin(), holders.end());
    std::vector<int> q{holders.front()};
    std::set<int> seen{holders.front()};
    for (std::size_t i = 0; i < q.size(); ++i)
      for (int c : adj[q[i]])
        if (holder_set.count(c) && !seen.count(c)) { seen.insert(c); q.push_back(c); }
    if (seen.size() != holder_set.size())
      return fail("condition 3: bags of vertex " + std::to_string(v) +
                  " are disconnected");
  }
  return rep;
}

TreeDecomposition heuristic_tree_decomposition(const WeightedGraph& g) {
  if (g.n <= 0) throw std::invalid_argument("empty graph");
  std::vector<std::set<int>> adj(g.n);
  for (auto& [u, v, w] : g.edges)
    if (u != v) { adj[u].insert(v); adj[v].insert(u); }
  std::vector<char> gone(g.n, 0);
  std::vector<int> elim_pos(g.n, -1);
  TreeDecomposition t;
  std::vector<std::vector<int>> elim_neighbors(g.n);
  for (int step = 0; step < g.n; ++step) {
    int best = -1;
    for (int v = 0; v < g.n; ++v)
      if (!gone[v] && (best == -1 || adj[v].size() < adj[best].size())) best = v;
    elim_pos[best] = step;
    std::vector<int> bag{best};
    for (int u : adj[best]) bag.push_back(u);
    std::sort(bag.begin(), bag.end());
    t.bags.push_back(bag);
    elim_neighbors[step] = {adj[best].begin(), adj[best].end()};
    for (int u : adj[best])
      for (int w : adj[best])
        if (u != w) adj[u].insert(w);
    for (int u : adj[best]) adj[u].erase(best);
    adj[best].clear();
    gone[best] = 1;
  }
  for (int step = 0; step + 1 < g.n; ++step) {
    // Parent bag: the earliest-eliminated remaining neighbor's bag.
    int parent_step = step + 1;
    int best_pos = g.n + 1;
    for (int u : elim_neighbors[step])
      if (elim_pos[u] > step && elim_pos[u] < best_pos) best_pos = elim_pos[u];
    if (best_pos <= g.n) parent_step = best_pos;
    t.tree_edges.push_back({step, parent_step});
  }
  t.root = g.n - 1;
  return t;
}

TreeDecomposition binarize(const TreeDecomposition& t) {
  auto ch = rooted_children(t);
  TreeDecomposition out;
  std::function<int(int)> conv = [&](int b) -> int {
    int my = static_cast<int>(out.bags.size());
    out.bags.push_back(t.bags[b]);
    int cur = my;
    for (std::size_t i = 0; i < ch[b].size(); ++i) {
      int sub = conv(ch[b][i]);
      out.tree_edges.push_back({cur, sub});
      if (ch[b].size() - i - 1 >= 2) {
        int nxt = static_cast<int>(out.bags.size());
        out.bags.push_back(t.bags[b]);
        out.tree_edges.push_back({cur, nxt});
        cur = nxt;
      }
    }
    return my;
  };
  out.root = conv(t.root);
  return out;
}

std::map<int, int> token_map(const TreeDecomposition& t) {
  std::vector<int> order;
  rooted_children(t, &order);
  std::map<int, int> tokens;
  for (int b : order)
    for (int v : t.bags[b])
      if (!tokens.count(v)) tokens[v] = b;
  return tokens;
}

namespace {

// ---------------------------------------------------------------------------
// Multigraph DP over a nice tree decomposition.
//
// A collection of s_i-t_i walks of minimum total length is equivalent to a
// minimum-weight sub-multigraph (edge multiplicities at most 2; dropping two
// parallel copies never hurts) whose odd-degree vertices match the pair
// endpoints and whose every component holds some pair, the walks being its
// Euler trails. The DP state per bag is the classic triple: per-vertex usage
// and degree parity, the partition of used bag vertices into components, and
// the number of used vertices already forgotten.
// ---------------------------------------------------------------------------

struct NiceNode {
  enum Kind { kLeaf, kIntro, kForget, kIntroEdge, kJoin };
  Kind kind = kLeaf;
  std::vector<int> bag;  // sorted
  int v = -1;            // kIntro / kForget
  int e = -1;            // kIntroEdge: index into the engine's edge list
  int child1 = -1, child2 = -1;
};

// usage: 0 unused, 1 used even degree, 2 used odd degree; block: -1 unused.
struct BagState {
  std::vector<std::int8_t> usage;
  std::vector<std::int8_t> block;
};

void canonicalize(BagState& s) {
  std::array<std::int8_t, 16> remap;
  remap.fill(-1);
  std::int8_t next = 0;
  for (std::size_t i = 0; i < s.block.size(); ++i) {
    if (s.block[i] < 0) continue;
    if (remap[s.block[i]] < 0) remap[s.block[i]] = next++;
    s.block[i] = remap[s.block[i]];
  }
}

std::uint64_t pack(const BagState& s) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < s.usage.size(); ++i) {
    std::uint64_t f = static_cast<std::uint64_t>(s.usage[i]) |
                      (static_cast<std::uint64_t>(s.block[i] + 1) << 2);
    key |= f << (6 * i);
  }
  return key;
}

BagState unpack(std::uint64_t key, int len) {
  BagState s;
  s.usage.resize(len);
  s.block.resize(len);
  for (int i = 0; i < len; ++i) {
    std::uint64_t f = (key >> (6 * i)) & 0x3f;
    s.usage[i] = static_cast<std::int8_t>(f & 3);
    s.block[i] = static_cast<std::int8_t>(static_cast<int>(f >> 2) - 1);
  }
  return s;
}

struct DpKey {
  std::uint64_t state = 0;
  int k = 0;
  bool operator<(const DpKey& o) const {
    return std::tie(state, k) < std::tie(o.state, o.k);
  }
};

struct DpEntry {
  Rational cost;
  DpKey from1, from2;  // provenance for witness recovery
  int copies = 0;      // kIntroEdge only
  bool has1 = false, has2 = false;
};

using DpTable = std::map<DpKey, DpEntry>;

class Engine {
 public:
  Engine(const WeightedGraph& g, const TreeDecomposition& t) : n_(g.n) {
    // Dedup parallel edges by min weight; drop self loops.
    std::map<std::pair<int, int>, Rational> wmin;
    for (auto& [u, v, w] : g.edges) {
      if (u == v) continue;
      if (w <= Rational(0)) throw std::invalid_argument("edge weights must be positive");
      auto key = std::minmax(u, v);
      auto it = wmin.find({key.first, key.second});
      if (it == wmin.end() || w < it->second) wmin[{key.first, key.second}] = w;
    }
    for (auto& [uv, w] : wmin) edges_.push_back({uv.first, uv.second, w});
    build_nice(binarize(t));
    run();
  }

  const std::vector<int>& root_bag() const { return nodes_[root_].bag; }
  const DpTable& root_table() const { return tables_[root_]; }
  const std::vector<std::tuple<int, int, Rational>>& edges() const { return edges_; }

  /// Expands an accepted root entry into the multiset of chosen edge copies.
  std::vector<std::pair<int, int>> recover_edges(const DpKey& key) const {
    std::vector<std::pair<int, int>> out;
    std::function<void(int, const DpKey&)> walk = [&](int node, const DpKey& k) {
      const auto& nd = nodes_[node];
      const auto& e = tables_[node].at(k);
      if (nd.kind == NiceNode::kIntroEdge) {
        auto [u, v, w] = edges_[nd.e];
        for (int c = 0; c < e.copies; ++c) out.push_back({u, v});
      }
      if (e.has1) walk(nd.child1, e.from1);
      if (e.has2) walk(nd.child2, e.from2);
    };
    walk(root_, key);
    return out;
  }

 private:
  int add_node(NiceNode nd) {
    nodes_.push_back(std::move(nd));
    return static_cast<int>(nodes_.size()) - 1;
  }

  void build_nice(const TreeDecomposition& bt) {
    std::vector<int> order;
    auto ch = rooted_children(bt, &order);
    // Assign every edge to the first node (BFS order) whose bag holds it.
    std::vector<std::vector<int>> assigned(bt.bags.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      auto [u, v, w] = edges_[e];
      bool placed = false;
      for (int b : order)
        if (bag_contains(bt.bags[b], u) && bag_contains(bt.bags[b], v)) {
          assigned[b].push_back(static_cast<int>(e));
          placed = true;
          break;
        }
      if (!placed) edge_dropped_ = true;  // outside this subtree's scope
    }
    // Lift a built nice node from its bag to `target` via forgets then intros.
    auto lift = [&](int nice, const std::vector<int>& target) {
      auto bag = nodes_[nice].bag;
      for (int v : std::vector<int>(bag.begin(), bag.end()))
        if (!bag_contains(target, v)) {
          auto nb = bag;
          nb.erase(std::find(nb.begin(), nb.end(), v));
          NiceNode nd;
          nd.kind = NiceNode::kForget;
          nd.bag = nb;
          nd.v = v;
          nd.child1 = nice;
          nice = add_node(nd);
          bag = nb;
        }
      for (int v : target)
        if (!bag_contains(bag, v)) {
          auto nb = bag;
          nb.insert(std::upper_bound(nb.begin(), nb.end(), v), v);
          NiceNode nd;
          nd.kind = NiceNode::kIntro;
          nd.bag = nb;
          nd.v = v;
          nd.child1 = nice;
          nice = add_node(nd);
          bag = nb;
        }
      return nice;
    };
    std::function<int(int)> build = [&](int b) -> int {
      const auto& bag = bt.bags[b];
      if (bag.size() > 10)
        throw std::invalid_argument("bag too large for this solver (max 10)");
      int nice;
      if (ch[b].empty()) {
        NiceNode leaf;
        leaf.kind = NiceNode::kLeaf;
        nice = add_node(leaf);
        nice = lift(nice, bag);
      } else if (ch[b].size() == 1) {
        nice = lift(build(ch[b][0]), bag);
      } else {
        int a = lift(build(ch[b][0]), bag);
        int c = lift(build(ch[b][1]), bag);
        NiceNode join;
        join.kind = NiceNode::kJoin;
        join.bag = bag;
        join.child1 = a;
        join.child2 = c;
        nice = add_node(join);
      }
      for (int e : assigned[b]) {
        NiceNode nd;
        nd.kind = NiceNode::kIntroEdge;
        nd.bag = bag;
        nd.e = e;
        nd.child1 = nice;
        nice = add_node(nd);
      }
      return nice;
    };
    root_ = build(bt.root);
  }

  static void relax(DpTable& t, const DpKey& key, DpEntry entry) {
    auto it = t.find(key);
    if (it == t.end() || entry.cost < it->second.cost) t[key] = std::move(entry);
  }

  // Keep, per packed state, only the (k, cost) Pareto frontier.
  static void prune(DpTable& t) {
    std::map<std::uint64_t, std::vector<std::pair<int, Rational>>> frontier;
    for (auto& [key, e] : t) frontier[key.state].push_back({key.k, e.cost});
    std::erase_if(t, [&](const auto& kv) {
      for (auto& [k2, c2] : frontier[kv.first.state])
        if (k2 > kv.first.k && c2 <= kv.second.cost) return true;
      return false;
    });
  }

  void run() {
    tables_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& nd = nodes_[i];
      DpTable& t = tables_[i];
      const int L = static_cast<int>(nd.bag.size());
      switch (nd.kind) {
        case NiceNode::kLeaf: {
          t[{0, 0}] = DpEntry{Rational(0), {}, {}, 0, false, false};
          break;
        }
        case NiceNode::kIntro: {
          int p = static_cast<int>(
              std::lower_bound(nd.bag.begin(), nd.bag.end(), nd.v) -
              nd.bag.begin());
          for (auto& [ck, ce] : tables_[nd.child1]) {
            BagState s = unpack(ck.state, L - 1);
            s.usage.insert(s.usage.begin() + p, 0);
            s.block.insert(s.block.begin() + p, -1);
            relax(t, {pack(s), ck.k},
                  DpEntry{ce.cost, ck, {}, 0, true, false});
          }
          break;
        }
        case NiceNode::kForget: {
          const auto& cbag = nodes_[nd.child1].bag;
          int p = static_cast<int>(
              std::lower_bound(cbag.begin(), cbag.end(), nd.v) - cbag.begin());
          for (auto& [ck, ce] : tables_[nd.child1]) {
            BagState s = unpack(ck.state, L + 1);
            int add = 0;
            if (s.usage[p] == 2) continue;  // odd degree can no longer be fixed
            if (s.usage[p] == 1) {
              bool alone = true;
              for (int q = 0; q <= L; ++q)
                if (q != p && s.block[q] == s.block[p]) alone = false;
              if (alone) continue;  // its component would become unreachable
              add = 1;
            }
            s.usage.erase(s.usage.begin() + p);
            s.block.erase(s.block.begin() + p);
            canonicalize(s);
            relax(t, {pack(s), ck.k + add},
                  DpEntry{ce.cost, ck, {}, 0, true, false});
          }
          break;
        }
        case NiceNode::kIntroEdge: {
          auto [u, v, w] = edges_[nd.e];
          int pu = static_cast<int>(
              std::lower_bound(nd.bag.begin(), nd.bag.end(), u) - nd.bag.begin());
          int pv = static_cast<int>(
              std::lower_bound(nd.bag.begin(), nd.bag.end(), v) - nd.bag.begin());
          for (auto& [ck, ce] : tables_[nd.child1]) {
            relax(t, ck, DpEntry{ce.cost, ck, {}, 0, true, false});
            for (int copies = 1; copies <= 2; ++copies) {
              BagState s = unpack(ck.state, L);
              for (int p : {pu, pv}) {
                if (s.usage[p] == 0)
                  s.usage[p] = copies == 1 ? 2 : 1;
                else if (copies == 1)
                  s.usage[p] = s.usage[p] == 1 ? 2 : 1;
              }
              std::int8_t nb = 15;
              if (s.block[pu] >= 0) nb = s.block[pu];
              if (s.block[pv] >= 0) nb = std::min(nb, s.block[pv]);
              if (nb == 15) nb = 14;  // fresh block, renamed by canonicalize
              std::int8_t bu = s.block[pu], bv = s.block[pv];
              for (std::size_t q = 0; q < s.block.size(); ++q)
                if (s.block[q] >= 0 && (s.block[q] == bu || s.block[q] == bv))
                  s.block[q] = nb;
              s.block[pu] = s.block[pv] = nb;
              canonicalize(s);
              relax(t, {pack(s), ck.k},
                    DpEntry{ce.cost + w * Rational(copies), ck, {}, copies, true,
                            false});
            }
          }
          break;
        }
        case NiceNode::kJoin: {
          for (auto& [k1, e1] : tables_[nd.child1]) {
            BagState s1 = unpack(k1.state, L);
            for (auto& [k2, e2] : tables_[nd.child2]) {
              BagState s2 = unpack(k2.state, L);
              BagState s;
              s.usage.resize(L);
              s.block.assign(L, -1);
              for (int p = 0; p < L; ++p) {
                if (!s1.usage[p] && !s2.usage[p])
                  s.usage[p] = 0;
                else if (!s1.usage[p])
                  s.usage[p] = s2.usage[p];
                else if (!s2.usage[p])
                  s.usage[p] = s1.usage[p];
                else
                  s.usage[p] = (s1.usage[p] == 2) != (s2.usage[p] == 2) ? 2 : 1;
              }
              // Union blocks across both children.
              std::array<int, 16> uf;
              for (int p = 0; p < L; ++p) uf[p] = p;
              std::function<int(int)> find = [&](int x) {
                while (uf[x] != x) x = uf[x] = uf[uf[x]];
                return x;
              };
              for (const BagState* cs : {&s1, &s2})
                for (int p = 0; p < L; ++p)
                  for (int q = p + 1; q < L; ++q)
                    if (cs->block[p] >= 0 && cs->block[p] == cs->block[q])
                      uf[find(p)] = find(q);
              for (int p = 0; p < L; ++p)
                if (s.usage[p]) s.block[p] = static_cast<std::int8_t>(find(p));
              canonicalize(s);
              relax(t, {pack(s), k1.k + k2.k},
                    DpEntry{e1.cost + e2.cost, k1, k2, 0, true, true});
            }
          }
          break;
        }
      }
      prune(t);
    }
  }

  int n_;
  std::vector<std::tuple<int, int, Rational>> edges_;
  std::vector<NiceNode> nodes_;
  std::vector<DpTable> tables_;
  int root_ = -1;
  bool edge_dropped_ = false;
};

// ---------------------------------------------------------------------------
// Trail recovery: split a chosen multigraph into walks with given endpoints.
// ---------------------------------------------------------------------------

struct TrailProblem {
  std::vector<std::pair<int, int>> hedges;  // one entry per edge copy
  std::vector<std::pair<int, int>> pairs;
};

class TrailSplitter {
 public:
  explicit TrailSplitter(TrailProblem p) : p_(std::move(p)) {
    for (std::size_t e = 0; e < p_.hedges.size(); ++e) {
      adj_[p_.hedges[e].first].push_back(static_cast<int>(e));
      adj_[p_.hedges[e].second].push_back(static_cast<int>(e));
    }
  }

  /// One walk per pair, jointly covering every edge copy.
  std::vector<std::vector<int>> split() {
    std::vector<char> used(p_.hedges.size(), 0);
    std::vector<std::vector<int>> trails(p_.pairs.size());
    std::vector<int> open;
    for (std::size_t i = 0; i < p_.pairs.size(); ++i) {
      if (p_.pairs[i].first != p_.pairs[i].second)
        open.push_back(static_cast<int>(i));
      trails[i] = {p_.pairs[i].first};
    }
    if (!extract(used, trails, open, 0))
      throw std::runtime_error("walk recovery failed");
    // Graft leftover even components (closed detours) into any incident walk.
    bool progress = true;
    while (progress) {
      progress = false;
      int loose = -1;
      for (std::size_t e = 0; e < used.size(); ++e)
        if (!used[e]) { loose = static_cast<int>(e); break; }
      if (loose < 0) break;
      for (auto& tr : trails) {
        for (std::size_t pos = 0; pos < tr.size(); ++pos) {
          int v = tr[pos];
          bool incident = false;
          for (int e : adj_[v])
            if (!used[e]) incident = true;
          if (!incident) continue;
          auto circuit = euler_from(v, used);  // closed, starts and ends at v
          tr.insert(tr.begin() + pos + 1, circuit.begin() + 1, circuit.end());
          progress = true;
          break;
        }
        if (progress) break;
      }
      if (!progress) throw std::runtime_error("walk recovery left loose edges");
    }
    return trails;
  }

 private:
  // Peel trails for open pairs one at a time, backtracking over edge choices
  // so the remaining pairs stay co-connected.
  bool extract(std::vector<char>& used, std::vector<std::vector<int>>& trails,
               const std::vector<int>& open, std::size_t idx) {
    if (idx == open.size()) return remaining_consistent(used, open, idx);
    auto [s, t] = p_.pairs[open[idx]];
    std::vector<int> walk{s};
    std::function<bool(int)> dfs = [&](int cur) -> bool {
      if (cur == t && walk.size() > 1) {
        auto saved = trails[open[idx]];
        trails[open[idx]] = walk;
        if (remaining_consistent(used, open, idx + 1) &&
            extract(used, trails, open, idx + 1))
          return true;
        trails[open[idx]] = saved;
      }
      for (int e : adj_[cur]) {
        if (used[e]) continue;
        int nxt = p_.hedges[e].first == cur ? p_.hedges[e].second
                                            : p_.hedges[e].first;
        used[e] = 1;
        walk.push_back(nxt);
        if (dfs(nxt)) return true;
        walk.pop_back();
        used[e] = 0;
      }
      return false;
    };
    return dfs(s);
  }

  // Every still-open pair must have its endpoints connected by unused edges.
  bool remaining_consistent(const std::vector<char>& used,
                            const std::vector<int>& open, std::size_t idx) {
    std::map<int, int> comp;
    int nc = 0;
    std::function<void(int, int)> flood = [&](int v, int c) {
      comp[v] = c;
      for (int e : adj_[v]) {
        if (used[e]) continue;
        int nxt = p_.hedges[e].first == v ? p_.hedges[e].second
                                          : p_.hedges[e].first;
        if (!comp.count(nxt)) flood(nxt, c);
      }
    };
    for (auto& [u, v] : p_.hedges) {
      if (!comp.count(u)) flood(u, nc++);
      if (!comp.count(v)) flood(v, nc++);
    }
    for (std::size_t i = idx; i < open.size(); ++i) {
      auto [s, t] = p_.pairs[open[i]];
      if (!comp.count(s)) flood(s, nc++);
      if (!comp.count(t)) flood(t, nc++);
      if (comp[s] != comp[t]) return false;
    }
    return true;
  }

  // Hierholzer circuit through all unused edges of v's component.
  std::vector<int> euler_from(int start, std::vector<char>& used) {
    std::vector<int> circuit{start};
    std::size_t pos = 0;
    while (pos < circuit.size()) {
      int v = circuit[pos];
      int e = -1;
      for (int cand : adj_[v])
        if (!used[cand]) { e = cand; break; }
      if (e < 0) {
        ++pos;
        continue;
      }
      // Trace a closed sub-tour from v and splice it in.
      std::vector<int> sub{v};
      int cur = v;
      while (true) {
        int pick = -1;
        for (int cand : adj_[cur])
          if (!used[cand]) { pick = cand; break; }
        if (pick < 0) break;
        used[pick] = 1;
        cur = p_.hedges[pick].first == cur ? p_.hedges[pick].second
                                           : p_.hedges[pick].first;
        sub.push_back(cur);
      }
      circuit.insert(circuit.begin() + pos + 1, sub.begin() + 1, sub.end());
    }
    return circuit;
  }

  TrailProblem p_;
  std::map<int, std::vector<int>> adj_;
};

// ---------------------------------------------------------------------------
// Root-table evaluation shared by the three path solvers.
// ---------------------------------------------------------------------------

struct RootCandidate {
  DpKey key;
  Rational cost;
  int prize = 0;
};

std::vector<RootCandidate> root_candidates(
    const Engine& eng, const std::vector<std::pair<int, int>>& pairs) {
  const auto& bag = eng.root_bag();
  const int L = static_cast<int>(bag.size());
  auto pos_of = [&](int v) {
    return static_cast<int>(std::lower_bound(bag.begin(), bag.end(), v) -
                            bag.begin());
  };
  std::vector<int> parity(L, 0), required(L, 0), endpoint(L, 0);
  for (auto& [a, b] : pairs) {
    endpoint[pos_of(a)] = endpoint[pos_of(b)] = 1;
    if (a != b) {
      parity[pos_of(a)] ^= 1;
      parity[pos_of(b)] ^= 1;
      required[pos_of(a)] = required[pos_of(b)] = 1;
    }
  }
  std::vector<RootCandidate> out;
  for (const auto& [key, entry] : eng.root_table()) {
    BagState s = unpack(key.state, L);
    bool ok = true;
    for (int p = 0; p < L && ok; ++p) {
      if (s.usage[p] == 0) {
        if (parity[p] || required[p]) ok = false;
      } else if ((s.usage[p] == 2 ? 1 : 0) != parity[p]) {
        ok = false;
      }
    }
    if (!ok) continue;
    for (auto& [a, b] : pairs)
      if (a != b && s.block[pos_of(a)] != s.block[pos_of(b)]) ok = false;
    if (!ok) continue;
    // Every component needs a pair endpoint to host its Euler trail.
    std::set<int> blocks, covered;
    for (int p = 0; p < L; ++p)
      if (s.block[p] >= 0) {
        blocks.insert(s.block[p]);
        if (endpoint[p]) covered.insert(s.block[p]);
      }
    if (blocks != covered) continue;
    int prize = key.k;
    for (int p = 0; p < L; ++p)
      if (s.usage[p] || endpoint[p]) ++prize;
    out.push_back({key, entry.cost, prize});
  }
  return out;
}

std::vector<std::vector<int>> recover_walks(
    const Engine& eng, const DpKey& key,
    const std::vector<std::pair<int, int>>& pairs) {
  TrailProblem tp;
  tp.hedges = eng.recover_edges(key);
  tp.pairs = pairs;
  return TrailSplitter(std::move(tp)).split();
}

TreeDecomposition augment_bags(const TreeDecomposition& t, std::vector<int> extra) {
  TreeDecomposition out = t;
  for (auto& bag : out.bags) {
    for (int v : extra) bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
  }
  return out;
}

std::map<std::pair<int, int>, Rational> min_weights(const WeightedGraph& g) {
  std::map<std::pair<int, int>, Rational> wmin;
  for (auto& [u, v, w] : g.edges) {
    if (u == v) continue;
    auto key = std::minmax(u, v);
    auto it = wmin.find({key.first, key.second});
    if (it == wmin.end() || w < it->second) wmin[{key.first, key.second}] = w;
  }
  return wmin;
}

int distinct_count(const std::vector<int>& walk) {
  return static_cast<int>(std::set<int>(walk.begin(), walk.end()).size());
}

}  // namespace

TwMultiPathResult solve_multipath_kstroll_tw(const WeightedGraph& g,
                                             const TreeDecomposition& t,
                                             int bag_id,
                                             const std::vector<TwQueryPair>& pairs,
                                             int k_min, const TwConfig& cfg) {
  (void)cfg;
  auto rep = validate_tree_decomposition(g, t);
  if (!rep.ok) throw std::invalid_argument("invalid tree decomposition: " + rep.violation);
  for (const auto& p : pairs) {
    if (!bag_contains(t.bags[bag_id], p.a) || !bag_contains(t.bags[bag_id], p.b))
      throw std::invalid_argument("pair endpoint outside the query bag");
    if (p.group != 0)
      throw std::invalid_argument("multipath k-stroll uses a single group");
  }
  // Restrict to the subtree below bag_id.
  auto ch = rooted_children(t);
  std::vector<int> sub{bag_id};
  for (std::size_t i = 0; i < sub.size(); ++i)
    for (int c : ch[sub[i]]) sub.push_back(c);
  std::map<int, int> remap;
  TreeDecomposition sd;
  for (int b : sub) {
    remap[b] = static_cast<int>(sd.bags.size());
    sd.bags.push_back(t.bags[b]);
  }
  for (int b : sub)
    for (int c : ch[b]) sd.tree_edges.push_back({remap[b], remap[c]});
  sd.root = 0;
  // Keep only edges visible in the subtree; the DP ignores the rest anyway
  // but the engine requires a consistent graph.
  Engine eng(g, sd);
  std::vector<std::pair<int, int>> eps;
  for (const auto& p : pairs) eps.push_back({p.a, p.b});
  TwMultiPathResult res;
  const RootCandidate* best = nullptr;
  auto cands = root_candidates(eng, eps);
  for (const auto& c : cands) {
    if (c.prize < k_min) continue;
    if (!best || c.cost < best->cost) best = &c;
  }
  if (!best) return res;
  res.feasible = true;
  res.total_length = best->cost;
  res.group_lengths = {best->cost};
  res.prize = best->prize;
  res.walks = recover_walks(eng, best->key, eps);
  return res;
}

TwWalkResult solve_kstroll_tw(const WeightedGraph& g, const TreeDecomposition& t,
                              int s, int t_vertex, int k, const TwConfig& cfg) {
  (void)cfg;
  if (k > g.n) throw std::invalid_argument("k exceeds the vertex count");
  auto aug = augment_bags(t, {s, t_vertex});
  auto rep = validate_tree_decomposition(g, aug);
  if (!rep.ok) throw std::invalid_argument("invalid tree decomposition: " + rep.violation);
  Engine eng(g, aug);
  std::vector<std::pair<int, int>> eps{{s, t_vertex}};
  TwWalkResult res;
  const RootCandidate* best = nullptr;
  auto cands = root_candidates(eng, eps);
  for (const auto& c : cands) {
    if (c.prize < k) continue;
    if (!best || c.cost < best->cost) best = &c;
  }
  if (!best) return res;
  res.feasible = true;
  res.length = best->cost;
  res.walk = recover_walks(eng, best->key, eps)[0];
  if (!res.walk.empty() && res.walk.front() != s)
    std::reverse(res.walk.begin(), res.walk.end());
  res.prize = distinct_count(res.walk);
  return res;
}

TwWalkResult solve_p2p_tw(const WeightedGraph& g, const TreeDecomposition& t,
                          int s, int t_vertex, const Rational& budget,
                          const TwConfig& cfg) {
  auto aug = augment_bags(t, {s, t_vertex});
  auto rep = validate_tree_decomposition(g, aug);
  if (!rep.ok) throw std::invalid_argument("invalid tree decomposition: " + rep.violation);
  Engine eng(g, aug);
  std::vector<std::pair<int, int>> eps{{s, t_vertex}};
  const int discount = cfg.exclude_endpoints ? (s == t_vertex ? 1 : 2) : 0;
  TwWalkResult res;
  const RootCandidate* best = nullptr;
  auto cands = root_candidates(eng, eps);
  for (const auto& c : cands) {
    if (c.cost > budget) continue;
    if (!best || c.prize > best->prize ||
        (c.prize == best->prize && c.cost < best->cost))
      best = &c;
  }
  if (!best) return res;
  res.feasible = true;
  res.length = best->cost;
  res.walk = recover_walks(eng, best->key, eps)[0];
  if (!res.walk.empty() && res.walk.front() != s)
    std::reverse(res.walk.begin(), res.walk.end());
  res.prize = distinct_count(res.walk) - discount;
  return res;
}

TwDeadlineResult solve_deadline_tw(const WeightedGraph& g, const TreeDecomposition& t,
                                   int s, const std::map<int, Rational>& deadlines,
                                   double epsilon, int m_max,
                                   const TwConfig& cfg) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  if (g.n > 14) throw std::invalid_argument("deadline solver supports n <= 14");
  for (auto& [u, v, w] : g.edges)
    if (!w.is_integer())
      throw std::invalid_argument(
          "non-integer distances; use the bicriteria deadline mode");
  for (auto& [v, d] : deadlines)
    if (!d.is_integer())
      throw std::invalid_argument(
          "non-integer deadlines; use the bicriteria deadline mode");
  if (m_max < 1) throw std::invalid_argument("m_max must be positive");
  auto rep = validate_tree_decomposition(g, t);
  if (!rep.ok) throw std::invalid_argument("invalid tree decomposition: " + rep.violation);

  auto wmin = min_weights(g);
  auto deadline_of = [&](int v) {
    auto it = deadlines.find(v);
    return it == deadlines.end() ? kInf : it->second;
  };

  // Metric completion with path reconstruction for witness expansion.
  std::vector<std::vector<Rational>> dist(g.n, std::vector<Rational>(g.n, kInf));
  std::vector<std::vector<int>> nxt(g.n, std::vector<int>(g.n, -1));
  for (int v = 0; v < g.n; ++v) dist[v][v] = Rational(0);
  for (auto& [uv, w] : wmin) {
    dist[uv.first][uv.second] = dist[uv.second][uv.first] = w;
    nxt[uv.first][uv.second] = uv.second;
    nxt[uv.second][uv.first] = uv.first;
  }
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b)
      for (int c = 0; c < g.n; ++c)
        if (dist[b][a] + dist[a][c] < dist[b][c]) {
          dist[b][c] = dist[b][a] + dist[a][c];
          nxt[b][c] = nxt[b][a];
        }
  auto expand = [&](int a, int b, std::vector<int>& out) {
    while (a != b) {
      a = nxt[a][b];
      out.push_back(a);
    }
  };

  TwDeadlineResult best;
  best.feasible = true;
  best.certified = true;
  auto verify = [&](const std::vector<int>& walk) {
    Rational at(0);
    std::map<int, Rational> first_arrival;
    std::vector<Rational> arrivals;
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) {
        auto key = std::minmax(walk[i - 1], walk[i]);
        at += wmin.at({key.first, key.second});
      }
      arrivals.push_back(at);
      if (!first_arrival.count(walk[i])) first_arrival[walk[i]] = at;
    }
    int count = 0;
    for (auto& [v, a] : first_arrival)
      if (a <= deadline_of(v)) ++count;
    if (count > best.on_time) {
      best.on_time = count;
      best.walk = walk;
      best.arrivals = arrivals;
    }
  };
  verify({s});

  // Candidate cumulative leg budgets: the distinct nonnegative deadlines.
  std::set<Rational> cum_set;
  for (auto& [v, d] : deadlines)
    if (d >= Rational(0)) cum_set.insert(d);
  std::vector<Rational> cums(cum_set.begin(), cum_set.end());

  auto start_time = std::chrono::steady_clock::now();
  auto out_of_time = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_time)
               .count() > cfg.time_limit_seconds;
  };

  // For one guess (leg budgets + leg end vertices), an exact legged subset DP
  // on the metric completion: state (leg, counted set, position) -> min length
  // inside the current leg. Only counting moves are needed on a metric.
  auto run_guess = [&](const std::vector<Rational>& cum,
                       const std::vector<int>& ends) {
    const int m = static_cast<int>(cum.size());
    struct St {
      Rational len = Rational(-1);
      int pleg = -1, pmask = -1, pcur = -1;  // predecessor
    };
    std::vector<std::vector<std::vector<St>>> dp(
        m, std::vector<std::vector<St>>(std::size_t(1) << g.n,
                                        std::vector<St>(g.n)));
    int mask0 = deadline_of(s) >= Rational(0) ? (1 << s) : 0;
    dp[0][mask0][s].len = Rational(0);
    auto leg_budget = [&](int i) {
      return i == 0 ? cum[0] : cum[i] - cum[i - 1];
    };
    for (int leg = 0; leg < m; ++leg) {
      const int w = ends[leg];
      for (int mask = 0; mask < (1 << g.n); ++mask) {
        // First let every state hop straight to the leg end (no counting),
        // so the later passes see the best way to close the leg.
        for (int cur = 0; cur < g.n; ++cur) {
          const St& st = dp[leg][mask][cur];
          if (st.len < Rational(0) || cur == w) continue;
          Rational nl = st.len + dist[cur][w];
          if (nl > leg_budget(leg)) continue;
          St& to = dp[leg][mask][w];
          if (to.len < Rational(0) || nl < to.len) {
            to.len = nl;
            to.pleg = leg;
            to.pmask = mask;
            to.pcur = cur;
          }
        }
        for (int cur = 0; cur < g.n; ++cur) {
          const St& st = dp[leg][mask][cur];
          if (st.len < Rational(0)) continue;
          // advance to the next leg at its end vertex
          if (cur == w && leg + 1 < m) {
            St& to = dp[leg + 1][mask][cur];
            if (to.len < Rational(0)) {
              to.len = Rational(0);
              to.pleg = leg;
              to.pmask = mask;
              to.pcur = cur;
            }
          }
          // visit a new countable vertex of this leg
          for (int u = 0; u < g.n; ++u) {
            if (mask >> u & 1) continue;
            if (deadline_of(u) < cum[leg]) continue;
            Rational nl = st.len + dist[cur][u];
            if (nl > leg_budget(leg)) continue;
            St& to = dp[leg][mask | (1 << u)][u];
            if (to.len < Rational(0) || nl < to.len) {
              to.len = nl;
              to.pleg = leg;
              to.pmask = mask;
              to.pcur = cur;
            }
          }
        }
      }
    }
    // best final state ending leg m at ends[m-1]
    int bmask = -1;
    for (int mask = 0; mask < (1 << g.n); ++mask) {
      const St& st = dp[m - 1][mask][ends[m - 1]];
      if (st.len < Rational(0) || st.len > leg_budget(m - 1)) continue;
      if (bmask < 0 || std::popcount(unsigned(mask)) > std::popcount(unsigned(bmask)))
        bmask = mask;
    }
    if (bmask < 0 ||
        std::popcount(unsigned(bmask)) <= best.on_time)
      return;
    // Reconstruct the metric-level sequence, then expand to graph hops.
    std::vector<int> seq;
    int leg = m - 1, mask = bmask, cur = ends[m - 1];
    while (leg >= 0) {
      seq.push_back(cur);
      const St& st = dp[leg][mask][cur];
      if (st.pleg < 0) break;
      bool leg_jump = st.pleg != leg;
      leg = st.pleg;
      mask = st.pmask;
      cur = st.pcur;
      if (leg_jump) seq.pop_back();  // same vertex repeats at the leg boundary
    }
    std::reverse(seq.begin(), seq.end());
    std::vector<int> walk{seq.front()};
    for (std::size_t i = 1; i < seq.size(); ++i) expand(seq[i - 1], seq[i], walk);
    verify(walk);
  };

  std::vector<Rational> cum_choice;
  std::vector<int> end_choice;
  std::function<void(int, int)> enumerate = [&](int m, int stage) {
    if (best.on_time == g.n) return;
    if (out_of_time()) {
      best.certified = false;
      return;
    }
    if (stage < m) {
      std::size_t lo = 0;
      if (stage > 0) {
        auto it = std::upper_bound(cums.begin(), cums.end(), cum_choice.back());
        lo = static_cast<std::size_t>(it - cums.begin());
      }
      for (std::size_t i = lo; i < cums.size(); ++i) {
        cum_choice.push_back(cums[i]);
        enumerate(m, stage + 1);
        cum_choice.pop_back();
      }
      return;
    }
    if (stage < 2 * m) {
      int leg = stage - m;
      int prev = leg == 0 ? s : end_choice.back();
      Rational lo = leg == 0 ? Rational(0) : cum_choice[leg - 1];
      for (int w = 0; w < g.n; ++w) {
        if (dist[prev][w] > cum_choice[leg] - lo) continue;
        end_choice.push_back(w);
        enumerate(m, stage + 1);
        end_choice.pop_back();
      }
      return;
    }
    run_guess(cum_choice, end_choice);
  };
  for (int m = 1; m <= m_max && !cums.empty(); ++m) enumerate(m, 0);
  if (out_of_time()) best.certified = false;
  return best;
}

}  // namespace stroll
