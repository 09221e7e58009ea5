#include "stroll/oracle.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <set>
#include <stdexcept>

namespace stroll {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const Rational kInf(INT64_MAX / 4);

// dp[mask][last] = min length of a simple sequence starting at s, visiting
// exactly the vertices of mask, ending at last. parent[mask][last] stores the
// predecessor vertex for witness reconstruction.
struct SubsetDp {
  std::vector<std::vector<Rational>> dp;
  std::vector<std::vector<int>> parent;
  std::int64_t explored = 0;

  SubsetDp(const MetricInstance& m, int s,
           const std::map<int, Rational>* deadlines = nullptr) {
    const int n = m.size();
    dp.assign(std::size_t(1) << n, std::vector<Rational>(n, kInf));
    parent.assign(std::size_t(1) << n, std::vector<int>(n, -1));
    dp[std::size_t(1) << s][s] = Rational(0);
    for (std::size_t mask = 1; mask < dp.size(); ++mask) {
      if (!(mask >> s & 1)) continue;
      for (int last = 0; last < n; ++last) {
        if (!(mask >> last & 1) || dp[mask][last] == kInf) continue;
        ++explored;
        for (int v = 0; v < n; ++v) {
          if (mask >> v & 1) continue;
          Rational cand = dp[mask][last] + m.dist(last, v);
          if (deadlines) {
            auto it = deadlines->find(v);
            if (it != deadlines->end() && cand > it->second) continue;
          }
          std::size_t nmask = mask | (std::size_t(1) << v);
          if (cand < dp[nmask][v]) {
            dp[nmask][v] = cand;
            parent[nmask][v] = last;
          }
        }
      }
    }
  }

  Walk reconstruct(const MetricInstance& m, std::size_t mask, int last) const {
    std::vector<int> rev;
    while (last != -1) {
      rev.push_back(last);
      int p = parent[mask][last];
      mask &= ~(std::size_t(1) << last);
      last = p;
    }
    std::reverse(rev.begin(), rev.end());
    return Walk(m, std::move(rev));
  }
};

template <class Fn>
void for_each_ordered_subset(const std::vector<int>& pool, Fn&& fn) {
  const int p = static_cast<int>(pool.size());
  for (std::size_t sub = 0; sub < (std::size_t(1) << p); ++sub) {
    std::vector<int> chosen;
    for (int i = 0; i < p; ++i)
      if (sub >> i & 1) chosen.push_back(pool[i]);
    std::sort(chosen.begin(), chosen.end());
    do {
      fn(chosen);
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  }
}

}  // namespace

OracleResult exact_kstroll(const MetricInstance& m, int s, int t, int k) {
  if (m.size() > 16) throw std::invalid_argument("exact_kstroll limited to n <= 16");
  if (s < 0 || s >= m.size() || t < 0 || t >= m.size())
    throw std::invalid_argument("endpoint out of range");
  auto t0 = Clock::now();
  OracleResult res;
  if (k > m.size()) { res.wall_seconds = seconds_since(t0); return res; }
  SubsetDp dp(m, s);
  res.explored_states = dp.explored;
  std::size_t best_mask = 0;
  int best_last = t;
  for (std::size_t mask = 1; mask < dp.dp.size(); ++mask) {
    if (!(mask >> s & 1) || !(mask >> t & 1)) continue;
    if (std::popcount(mask) < k) continue;
    for (int last = 0; last < m.size(); ++last) {
      if (dp.dp[mask][last] == kInf) continue;
      // t == s asks for a closed tour; close it with the last hop back.
      if (t != s && last != t) continue;
      Rational total = dp.dp[mask][last];
      if (t == s && last != s) total += m.dist(last, s);
      if (!res.feasible || total < res.value) {
        res.feasible = true;
        res.value = total;
        best_mask = mask;
        best_last = last;
      }
    }
  }
  if (res.feasible) {
    Walk w = dp.reconstruct(m, best_mask, best_last);
    if (t == s && best_last != s) {
      auto vs = w.vertices();
      vs.push_back(s);
      w = Walk(m, std::move(vs));
    }
    res.witness = w;
  }
  res.wall_seconds = seconds_since(t0);
  return res;
}

OracleResult exact_p2p(const MetricInstance& m, int s, int t, const Rational& B) {
  if (m.size() > 16) throw std::invalid_argument("exact_p2p limited to n <= 16");
  auto t0 = Clock::now();
  OracleResult res;
  SubsetDp dp(m, s);
  res.explored_states = dp.explored;
  int best_k = -1;
  std::size_t best_mask = 0;
  int best_last = t;
  for (std::size_t mask = 1; mask < dp.dp.size(); ++mask) {
    if (!(mask >> s & 1) || !(mask >> t & 1)) continue;
    for (int last = 0; last < m.size(); ++last) {
      if (dp.dp[mask][last] == kInf) continue;
      if (t != s && last != t) continue;
      Rational total = dp.dp[mask][last];
      if (t == s && last != s) total += m.dist(last, s);
      if (total > B) continue;
      int cnt = std::popcount(mask);
      if (cnt > best_k) { best_k = cnt; best_mask = mask; best_last = last; }
    }
  }
  if (best_k >= 0) {
    res.feasible = true;
    res.value = Rational(best_k);
    Walk w = dp.reconstruct(m, best_mask, best_last);
    if (t == s && best_last != s) {
      auto vs = w.vertices();
      vs.push_back(s);
      w = Walk(m, std::move(vs));
    }
    res.witness = w;
  }
  res.wall_seconds = seconds_since(t0);
  return res;
}

OracleResult exact_deadline(const MetricInstance& m, int s,
                            const std::map<int, Rational>& deadlines) {
  if (m.size() > 14) throw std::invalid_argument("exact_deadline limited to n <= 14");
  auto t0 = Clock::now();
  OracleResult res;
  auto it_s = deadlines.find(s);
  const int start_credit = (it_s == deadlines.end() || it_s->second >= Rational(0)) ? 1 : 0;
  SubsetDp dp(m, s, &deadlines);
  res.explored_states = dp.explored;
  int best = -1;
  std::size_t best_mask = 0;
  int best_last = -1;
  for (std::size_t mask = 1; mask < dp.dp.size(); ++mask) {
    if (!(mask >> s & 1)) continue;
    for (int last = 0; last < m.size(); ++last) {
      if (dp.dp[mask][last] == kInf) continue;
      int cnt = std::popcount(mask) - 1 + start_credit;
      if (cnt > best) { best = cnt; best_mask = mask; best_last = last; }
    }
  }
  res.feasible = true;
  res.value = Rational(best);
  res.witness = dp.reconstruct(m, best_mask, best_last);
  res.wall_seconds = seconds_since(t0);
  return res;
}

Jump exact_mu_jump(const Walk& w, int mu) {
  if (w.size() > 12) throw std::invalid_argument("exact_mu_jump limited to |w| <= 12");
  if (mu < 2) throw std::invalid_argument("mu-jump needs mu >= 2");
  const int m = w.size();
  mu = std::min(mu, m);
  const auto& vs = w.vertices();
  Jump best;
  best.length = Rational(INT64_MIN / 4);
  std::vector<int> idx;
  // Choose mu-2 interior indices from 1..m-2.
  std::vector<int> comb(mu - 2);
  auto eval = [&](const std::vector<int>& interior) {
    std::vector<int> seq;
    seq.push_back(0);
    seq.insert(seq.end(), interior.begin(), interior.end());
    seq.push_back(m - 1);
    Rational len(0);
    for (std::size_t i = 1; i < seq.size(); ++i)
      len += w.metric().dist(vs[seq[i - 1]], vs[seq[i]]);
    if (len > best.length || (len == best.length && seq < best.indices)) {
      best.length = len;
      best.indices = seq;
    }
  };
  std::function<void(int, int)> rec = [&](int pos, int next) {
    if (pos == mu - 2) { eval(comb); return; }
    for (int i = next; i <= m - 2 - (mu - 3 - pos); ++i) {
      comb[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  if (mu == 2) eval({});
  else rec(0, 1);
  return best;
}

OracleResult permutation_kstroll(const MetricInstance& m, int s, int t, int k) {
  if (m.size() > 8) throw std::invalid_argument("permutation oracle limited to n <= 8");
  auto t0 = Clock::now();
  OracleResult res;
  std::vector<int> pool;
  for (int v = 0; v < m.size(); ++v)
    if (v != s && v != t) pool.push_back(v);
  for_each_ordered_subset(pool, [&](const std::vector<int>& mid) {
    ++res.explored_states;
    std::vector<int> seq{s};
    seq.insert(seq.end(), mid.begin(), mid.end());
    if (t != s || !mid.empty()) seq.push_back(t);
    std::set<int> dis(seq.begin(), seq.end());
    if (static_cast<int>(dis.size()) < k) return;
    Walk w(m, seq);
    if (!res.feasible || w.length() < res.value) {
      res.feasible = true;
      res.value = w.length();
      res.witness = w;
    }
  });
  res.wall_seconds = seconds_since(t0);
  return res;
}

OracleResult permutation_p2p(const MetricInstance& m, int s, int t, const Rational& B) {
  if (m.size() > 8) throw std::invalid_argument("permutation oracle limited to n <= 8");
  auto t0 = Clock::now();
  OracleResult res;
  std::vector<int> pool;
  for (int v = 0; v < m.size(); ++v)
    if (v != s && v != t) pool.push_back(v);
  int best = -1;
  for_each_ordered_subset(pool, [&](const std::vector<int>& mid) {
    ++res.explored_states;
    std::vector<int> seq{s};
    seq.insert(seq.end(), mid.begin(), mid.end());
    if (t != s || !mid.empty()) seq.push_back(t);
    Walk w(m, seq);
    if (w.length() > B) return;
    if (w.distinct_count() > best) {
      best = w.distinct_count();
      res.witness = w;
    }
  });
  if (best >= 0) { res.feasible = true; res.value = Rational(best); }
  res.wall_seconds = seconds_since(t0);
  return res;
}

OracleResult permutation_deadline(const MetricInstance& m, int s,
                                  const std::map<int, Rational>& deadlines) {
  if (m.size() > 8) throw std::invalid_argument("permutation oracle limited to n <= 8");
  auto t0 = Clock::now();
  OracleResult res;
  auto it_s = deadlines.find(s);
  const int start_credit = (it_s == deadlines.end() || it_s->second >= Rational(0)) ? 1 : 0;
  std::vector<int> pool;
  for (int v = 0; v < m.size(); ++v)
    if (v != s) pool.push_back(v);
  int best = -1;
  for_each_ordered_subset(pool, [&](const std::vector<int>& mid) {
    ++res.explored_states;
    std::vector<int> seq{s};
    seq.insert(seq.end(), mid.begin(), mid.end());
    Walk w(m, seq);
    int count = start_credit;
    for (std::size_t i = 1; i < seq.size(); ++i) {
      auto it = deadlines.find(seq[i]);
      if (it != deadlines.end() && w.prefix_length(static_cast<int>(i)) > it->second)
        return;  // only deadline-meeting sequences considered
      ++count;
    }
    if (count > best) { best = count; res.witness = w; }
  });
  res.feasible = true;
  res.value = Rational(best);
  res.wall_seconds = seconds_since(t0);
  return res;
}

}  // namespace stroll
