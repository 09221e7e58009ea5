#include "stroll/deadline.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>

namespace stroll {

namespace {

const Rational kInf(INT64_MAX / 4);
constexpr std::int64_t kGrid = 1 << 20;  // denominator for rounding snaps

Rational deadline_of(const std::map<int, Rational>& deadlines, int v) {
  auto it = deadlines.find(v);
  return it == deadlines.end() ? kInf : it->second;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.num()) / static_cast<double>(r.den());
}

struct Closure {
  std::vector<std::vector<Rational>> d;
  std::vector<std::vector<int>> nxt;

  explicit Closure(const std::vector<std::vector<Rational>>& w) {
    const int n = static_cast<int>(w.size());
    d = w;
    nxt.assign(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) nxt[i][j] = j;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (d[i][k] + d[k][j] < d[i][j]) {
            d[i][j] = d[i][k] + d[k][j];
            nxt[i][j] = nxt[i][k];
          }
  }

  // Appends the interior and endpoint of the shortest u -> v route.
  void expand(int u, int v, std::vector<int>& out) const {
    while (u != v) {
      u = nxt[u][v];
      out.push_back(u);
    }
  }
};

// Exact DP for one skeleton: state (group, credited set, position) -> minimum
// total length from the start; group advances are free and the position is
// kept, so breakpoints never need to be guessed.
struct DpRun {
  bool any = false;
  int prize = 0;
  Rational total;
  std::vector<int> credited;             // visit order, excluding the start
  std::vector<std::vector<int>> moves;   // credited moves per group
};

DpRun run_guess(const Closure& c, int s, const std::map<int, Rational>& deadlines,
                const std::vector<Rational>& cum) {
  const int n = static_cast<int>(c.d.size());
  const int m = static_cast<int>(cum.size());
  const std::size_t nmask = std::size_t{1} << n;
  struct Parent {
    int mask = -1, pos = -1;
    bool moved = false;
  };
  std::vector<std::vector<std::vector<Rational>>> dp(
      m, std::vector<std::vector<Rational>>(nmask, std::vector<Rational>(n, kInf)));
  std::vector<std::vector<std::vector<Parent>>> par(
      m, std::vector<std::vector<Parent>>(nmask, std::vector<Parent>(n)));
  int mask0 = deadline_of(deadlines, s) >= Rational(0) ? (1 << s) : 0;
  dp[0][mask0][s] = Rational(0);
  for (int i = 0; i < m; ++i) {
    if (i > 0)
      for (std::size_t mask = 0; mask < nmask; ++mask)
        for (int pos = 0; pos < n; ++pos)
          if (dp[i - 1][mask][pos] < dp[i][mask][pos]) {
            dp[i][mask][pos] = dp[i - 1][mask][pos];
            par[i][mask][pos] = {static_cast<int>(mask), pos, false};
          }
    for (std::size_t mask = 0; mask < nmask; ++mask)
      for (int pos = 0; pos < n; ++pos) {
        if (dp[i][mask][pos] == kInf) continue;
        for (int v = 0; v < n; ++v) {
          if (v == s || (mask >> v & 1)) continue;
          if (deadline_of(deadlines, v) < cum[i]) continue;
          Rational t = dp[i][mask][pos] + c.d[pos][v];
          if (t > cum[i]) continue;
          std::size_t nm = mask | (std::size_t{1} << v);
          if (t < dp[i][nm][v]) {
            dp[i][nm][v] = t;
            par[i][nm][v] = {static_cast<int>(mask), pos, true};
          }
        }
      }
  }
  DpRun best;
  int bi = -1, bpos = -1;
  std::size_t bmask = 0;
  for (int i = 0; i < m; ++i)
    for (std::size_t mask = 0; mask < nmask; ++mask)
      for (int pos = 0; pos < n; ++pos) {
        if (dp[i][mask][pos] == kInf) continue;
        int prize = std::popcount(mask);
        if (!best.any || prize > best.prize ||
            (prize == best.prize && dp[i][mask][pos] < best.total)) {
          best.any = true;
          best.prize = prize;
          best.total = dp[i][mask][pos];
          bi = i;
          bmask = static_cast<int>(mask);
          bpos = pos;
        }
      }
  if (!best.any) return best;
  best.moves.assign(m, {});
  int i = bi, pos = bpos;
  std::size_t mask = bmask;
  while (!(i == 0 && mask == static_cast<std::size_t>(mask0) && pos == s)) {
    Parent p = par[i][mask][pos];
    if (p.moved) {
      best.moves[i].push_back(pos);
      best.credited.push_back(pos);
      mask = p.mask;
      pos = p.pos;
    } else {
      --i;
    }
  }
  std::reverse(best.credited.begin(), best.credited.end());
  for (auto& mv : best.moves) std::reverse(mv.begin(), mv.end());
  return best;
}

std::vector<std::vector<int>> legs_from_moves(const Closure& c, int s,
                                              const std::vector<std::vector<int>>& moves) {
  std::vector<std::vector<int>> legs;
  int pos = s;
  for (const auto& group : moves) {
    std::vector<int> leg{pos};
    for (int v : group) {
      c.expand(pos, v, leg);
      pos = v;
    }
    legs.push_back(std::move(leg));
  }
  return legs;
}

std::vector<Rational> finite_deadline_values(const std::map<int, Rational>& deadlines,
                                             const Rational& extra) {
  std::set<Rational> vals;
  for (auto& [v, d] : deadlines)
    if (d >= Rational(0) && d < kInf) vals.insert(d);
  vals.insert(extra);
  return {vals.begin(), vals.end()};
}

DblDeadlineResult solve_core(const MetricInstance& m_true,
                             const std::vector<std::vector<Rational>>& w_solve,
                             const std::map<int, Rational>& dl_solve,
                             const std::map<int, Rational>& dl_true, int s,
                             double epsilon, int m_max, const DeadlineConfig& cfg) {
  if (m_true.size() > 14)
    throw std::invalid_argument("deadline solver limited to n <= 14");
  if (m_max < 1) throw std::invalid_argument("m_max must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  Closure c(w_solve);
  DblDeadlineResult res;
  res.certified = true;
  auto consider = [&](const DpRun& run) {
    if (!run.any) return;
    std::vector<int> walk{s};
    int pos = s;
    for (int v : run.credited) {
      c.expand(pos, v, walk);
      pos = v;
    }
    auto ver = concatenate_and_verify(m_true, s, dl_true, {walk});
    int claimed = run.prize;
    int have = res.feasible ? static_cast<int>(res.credited.size()) : -1;
    if (claimed > have) {
      res.feasible = true;
      res.walk = ver.walk;
      res.arrivals = ver.arrivals;
      res.on_time = ver.on_time;
      res.credited = run.credited;
      if (deadline_of(dl_solve, s) >= Rational(0))
        res.credited.insert(res.credited.begin(), s);
    }
  };
  DpRun trivial;
  trivial.any = true;
  trivial.prize = deadline_of(dl_solve, s) >= Rational(0) ? 1 : 0;
  trivial.total = Rational(0);
  consider(trivial);

  Rational reach = Rational(0);
  for (std::size_t i = 0; i < w_solve.size(); ++i) {
    Rational far(0);
    for (std::size_t j = 0; j < w_solve.size(); ++j)
      far = std::max(far, w_solve[i][j]);
    reach += far;
  }
  auto values = finite_deadline_values(dl_solve, reach);
  const int nv = static_cast<int>(values.size());
  std::size_t guesses = 0;
  std::vector<Rational> cum;
  std::function<void(int)> enumerate = [&](int from) {
    if (!res.certified) return;
    if (!cum.empty()) {
      if (++guesses > cfg.max_guesses ||
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >
              cfg.time_limit_seconds) {
        res.certified = false;
        return;
      }
      consider(run_guess(c, s, dl_solve, cum));
    }
    if (static_cast<int>(cum.size()) >= m_max) return;
    for (int i = from; i < nv; ++i) {
      cum.push_back(values[i]);
      enumerate(i + 1);
      cum.pop_back();
    }
  };
  enumerate(0);
  (void)epsilon;
  return res;
}

}  // namespace

void eligible_sets(const MetricInstance& m, const std::map<int, Rational>& deadlines,
                   DeadlineGuess& guess) {
  guess.eligible.clear();
  for (const auto& cum : guess.cumulative) {
    std::vector<int> elig;
    for (int v = 0; v < m.size(); ++v)
      if (deadline_of(deadlines, v) >= cum) elig.push_back(v);
    guess.eligible.push_back(std::move(elig));
  }
}

std::vector<DeadlineGuess> enumerate_guesses(
    const MetricInstance& m, int s, const std::map<int, Rational>& deadlines,
    double epsilon, int m_max, const std::optional<std::vector<int>>& known_path) {
  (void)epsilon;
  std::vector<DeadlineGuess> out;
  if (known_path) {
    const auto& p = *known_path;
    if (p.empty() || p.front() != s)
      throw std::invalid_argument("known path must start at s");
    // First-visit arrivals and the on-time set of the given walk.
    std::vector<Rational> arrival(p.size());
    std::map<int, Rational> first;
    Rational len(0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i > 0) len += m.dist(p[i - 1], p[i]);
      arrival[i] = len;
      if (!first.count(p[i])) first[p[i]] = len;
    }
    std::set<Rational> cums;
    for (auto& [v, a] : first) {
      Rational d = deadline_of(deadlines, v);
      if (a <= d && d < kInf && d >= Rational(0)) cums.insert(d);
    }
    cums.insert(len);
    DeadlineGuess g;
    g.breakpoints.push_back(s);
    Rational prev(0), prev_end(0);
    for (const auto& cval : cums) {
      g.cumulative.push_back(cval);
      g.budgets.push_back(cval - prev);
      prev = cval;
      // group end: last walk position reached within this cumulative budget
      int bp = s;
      Rational end_of_group = prev_end;
      for (std::size_t i = 0; i < p.size(); ++i)
        if (arrival[i] <= cval) {
          bp = p[i];
          end_of_group = arrival[i];
        }
      int vprev = g.breakpoints.back();
      g.breakpoints.push_back(bp);
      g.excess.push_back((end_of_group - prev_end) - m.dist(vprev, bp));
      prev_end = end_of_group;
    }
    eligible_sets(m, deadlines, g);
    out.push_back(std::move(g));
    return out;
  }
  Rational reach = m.aspect_ratio() * Rational(m.size());
  auto values = finite_deadline_values(deadlines, reach);
  const int nv = static_cast<int>(values.size());
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int from) {
    if (!pick.empty()) {
      DeadlineGuess g;
      Rational prev(0);
      for (int i : pick) {
        g.cumulative.push_back(values[i]);
        g.budgets.push_back(values[i] - prev);
        g.excess.push_back(Rational(0));
        prev = values[i];
      }
      eligible_sets(m, deadlines, g);
      out.push_back(std::move(g));
    }
    if (static_cast<int>(pick.size()) >= m_max) return;
    for (int i = from; i < nv; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  std::stable_sort(out.begin(), out.end(),
                   [](const DeadlineGuess& a, const DeadlineGuess& b) {
                     return a.cumulative.size() < b.cumulative.size();
                   });
  return out;
}

MglResult solve_mgl_orienteering(const MetricInstance& m, int s,
                                 const std::map<int, Rational>& deadlines,
                                 const DeadlineGuess& guess) {
  MglResult res;
  if (guess.cumulative.empty()) return res;
  Rational prev(-1);
  for (const auto& cval : guess.cumulative) {
    if (cval <= prev || cval < Rational(0)) return res;  // malformed skeleton
    prev = cval;
  }
  std::vector<std::vector<Rational>> w(m.size(), std::vector<Rational>(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) w[i][j] = m.dist(i, j);
  Closure c(w);
  auto run = run_guess(c, s, deadlines, guess.cumulative);
  if (!run.any) return res;
  res.feasible = true;
  res.prize = run.prize;
  res.total_length = run.total;
  res.legs = legs_from_moves(c, s, run.moves);
  res.credited = run.credited;
  if (deadline_of(deadlines, s) >= Rational(0))
    res.credited.insert(res.credited.begin(), s);
  return res;
}

DeadlineVerification concatenate_and_verify(const MetricInstance& m, int s,
                                            const std::map<int, Rational>& deadlines,
                                            const std::vector<std::vector<int>>& legs) {
  DeadlineVerification ver;
  ver.walk = {s};
  for (const auto& leg : legs) {
    if (leg.empty()) continue;
    if (leg.front() != ver.walk.back())
      throw std::invalid_argument("legs do not chain");
    ver.walk.insert(ver.walk.end(), leg.begin() + 1, leg.end());
  }
  if (!legs.empty() && !legs.front().empty() && legs.front().front() != s)
    throw std::invalid_argument("first leg must start at s");
  Rational len(0);
  std::set<int> seen;
  for (std::size_t i = 0; i < ver.walk.size(); ++i) {
    if (i > 0) len += m.dist(ver.walk[i - 1], ver.walk[i]);
    ver.arrivals.push_back(len);
    int v = ver.walk[i];
    if (seen.insert(v).second && len <= deadline_of(deadlines, v)) ++ver.on_time;
  }
  return ver;
}

DblDeadlineResult solve_deadline_dbl(const MetricInstance& m, int s,
                                     const std::map<int, Rational>& deadlines,
                                     double epsilon, int m_max,
                                     const DeadlineConfig& cfg) {
  if (!m.has_integer_distances())
    throw std::invalid_argument(
        "non-integer distances: use the bicriteria mode");
  for (auto& [v, d] : deadlines)
    if (!d.is_integer())
      throw std::invalid_argument(
          "non-integer deadlines: use the bicriteria mode");
  std::vector<std::vector<Rational>> w(m.size(), std::vector<Rational>(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) w[i][j] = m.dist(i, j);
  auto res = solve_core(m, w, deadlines, deadlines, s, epsilon, m_max, cfg);
  if (res.on_time < static_cast<int>(res.credited.size()))
    throw std::runtime_error("credited vertex missed its deadline");
  return res;
}

BicriteriaRounding bicriteria_round(const MetricInstance& m,
                                    const std::map<int, Rational>& deadlines,
                                    double epsilon) {
  BicriteriaRounding out;
  const double delta = std::max(1.0, m.log_aspect());
  const double lam = 1.0 + epsilon * epsilon / (2.0 * delta);
  out.lambda = Rational(static_cast<std::int64_t>(std::ceil(lam * kGrid)), kGrid);
  const int n = m.size();
  out.dist.assign(n, std::vector<Rational>(n, Rational(0)));
  auto power_near = [&](double x, bool up) {
    double k = std::log(x) / std::log(lam);
    double v = std::pow(lam, up ? std::ceil(k - 1e-12) : std::floor(k + 1e-12));
    if (up && v < x) v *= lam;
    if (!up && v > x) v /= lam;
    return v;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Rational x = m.dist(i, j);
      double v = power_near(to_double(x), false);
      Rational r(static_cast<std::int64_t>(std::floor(v * kGrid)), kGrid);
      if (r > x) r = x;
      if (!(r > Rational(0))) r = Rational(1, kGrid);
      out.dist[i][j] = r;
    }
  for (auto& [v, d] : deadlines) {
    if (d <= Rational(0)) {
      out.deadlines[v] = d;
      continue;
    }
    double rv = power_near(to_double(d), true);
    Rational r(static_cast<std::int64_t>(std::ceil(rv * kGrid)), kGrid);
    out.deadlines[v] = std::max(r, d);
  }
  return out;
}

DblDeadlineResult solve_deadline_bicriteria(const MetricInstance& m, int s,
                                            const std::map<int, Rational>& deadlines,
                                            double epsilon, int m_max,
                                            const DeadlineConfig& cfg) {
  auto rounding = bicriteria_round(m, deadlines, epsilon);
  return solve_core(m, rounding.dist, rounding.deadlines, deadlines, s, epsilon,
                    m_max, cfg);
}

}  // namespace stroll
