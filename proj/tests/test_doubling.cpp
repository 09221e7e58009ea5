#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "stroll/doubling.hpp"
#include "stroll/oracle.hpp"

using namespace stroll;

namespace {

MetricInstance uniform_metric(int n) {
  std::vector<std::string> ids;
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(1)));
  for (int i = 0; i < n; ++i) {
    ids.push_back("u" + std::to_string(i));
    d[i][i] = Rational(0);
  }
  return MetricInstance::from_matrix(std::move(ids), std::move(d));
}

MetricInstance grid_points(int n, std::int64_t side, Rng& rng) {
  std::uniform_int_distribution<std::int64_t> cd(0, side);
  std::set<std::pair<std::int64_t, std::int64_t>> pts;
  while (static_cast<int>(pts.size()) < n) pts.insert({cd(rng), cd(rng)});
  std::vector<std::string> ids;
  std::vector<std::vector<Rational>> coords;
  int i = 0;
  for (auto [x, y] : pts) {
    ids.push_back("p" + std::to_string(i++));
    coords.push_back({Rational(x), Rational(y)});
  }
  return MetricInstance::from_coords(std::move(ids), std::move(coords));
}

SolverConfig scaled_config(int n) {
  SolverConfig cfg;
  cfg.epsilon = 0.5;
  cfg.gamma = 3 * static_cast<int>(std::ceil(std::log2(std::max(2, n))));
  return cfg;
}

}  // namespace

TEST_CASE("multipath: stub pair on a leaf cluster costs zero") {
  auto m = uniform_metric(3);
  SolverConfig cfg;  // leaf_size 3: the root cluster is itself a leaf
  Rng rng(7);
  auto tree = build_gamma_split_tree(m, cfg.decomposition(), rng);
  REQUIRE(tree.is_leaf(0));
  auto res = solve_multipath_kstroll_dbl(m, tree, 0, {{1, 1}}, 1, cfg);
  REQUIRE(res.feasible);
  CHECK(res.total_length == Rational(0));
  REQUIRE(res.walks.size() == 1);
  CHECK(res.walks[0] == std::vector<int>{1});
  CHECK(res.prize == 1);
}

TEST_CASE("multipath: singleton leaf via leaf_size 1") {
  Rng rng(5);
  auto m = grid_points(4, 20, rng);
  SolverConfig cfg;
  cfg.leaf_size = 1;
  Rng trng(9);
  auto tree = build_gamma_split_tree(m, cfg.decomposition(), trng);
  int leaf = -1;
  for (const auto& c : tree.clusters)
    if (tree.is_leaf(c.id) && c.vertices.size() == 1) leaf = c.id;
  REQUIRE(leaf >= 0);
  int v = tree.clusters[leaf].vertices[0];
  auto res = solve_multipath_kstroll_dbl(m, tree, leaf, {{v, v}}, 1, cfg);
  REQUIRE(res.feasible);
  CHECK(res.total_length == Rational(0));
  CHECK(res.prize == 1);
}

TEST_CASE("multipath: counting only the endpoints gives the sum of direct hops") {
  Rng prng(11);
  auto m = grid_points(6, 30, prng);
  SolverConfig cfg;
  cfg.gamma = 2;
  Rng rng(13);
  auto tree = build_gamma_split_tree(m, cfg.decomposition(), rng);
  std::vector<DblQueryPair> pairs{{0, 1}, {2, 3}};
  auto res = solve_multipath_kstroll_dbl(m, tree, 0, pairs, 4, cfg);
  REQUIRE(res.feasible);
  CHECK(res.total_length == m.dist(0, 1) + m.dist(2, 3));
  CHECK(res.prize >= 4);
  REQUIRE(res.walks.size() == 2);
  CHECK(res.walks[0].front() == 0);
  CHECK(res.walks[0].back() == 1);
  CHECK(res.walks[1].front() == 2);
  CHECK(res.walks[1].back() == 3);
}

TEST_CASE("multipath: uniform metric n=6, one pair, k=4 costs 3") {
  auto m = uniform_metric(6);
  SolverConfig cfg;
  cfg.gamma = 2;
  Rng rng(17);
  auto tree = build_gamma_split_tree(m, cfg.decomposition(), rng);
  auto res = solve_multipath_kstroll_dbl(m, tree, 0, {{0, 5}}, 4, cfg);
  REQUIRE(res.feasible);
  CHECK(res.total_length == Rational(3));
  CHECK(res.prize >= 4);
}

TEST_CASE("k-stroll: k=2 equals the direct distance") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Rng prng(seed);
    auto m = grid_points(7, 25, prng);
    SolverConfig cfg;
    Rng rng(seed + 100);
    auto res = solve_kstroll_dbl(m, 0, 6, 2, cfg, rng);
    REQUIRE(res.feasible);
    CHECK(res.length == m.dist(0, 6));
    CHECK(res.prize >= 2);
  }
}

TEST_CASE("k-stroll: exact on tiny instances via the base case") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    Rng prng(seed * 3 + 1);
    int n = 2 + static_cast<int>(seed % 3);  // 2..4
    auto m = grid_points(n, 15, prng);
    SolverConfig cfg;
    cfg.leaf_size = 4;  // whole space fits in one exhaustive leaf
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        for (int k = 0; k <= n; ++k) {
          Rng rng(seed);
          auto res = solve_kstroll_dbl(m, s, t, k, cfg, rng);
          auto oracle = exact_kstroll(m, s, t, k);
          REQUIRE(res.feasible == oracle.feasible);
          if (res.feasible) CHECK(res.length == oracle.value);
        }
  }
}

TEST_CASE("k-stroll: near-optimal and never superoptimal on Euclidean instances") {
  int within = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng prng(seed * 7 + 3);
    int n = 8 + static_cast<int>(seed % 3);  // 8..10
    auto m = grid_points(n, 40, prng);
    SolverConfig cfg = scaled_config(n);
    std::uniform_int_distribution<int> kd(4, n);
    int k = kd(prng);
    Rng rng(seed);
    auto res = solve_kstroll_dbl(m, 0, n - 1, k, cfg, rng);
    auto oracle = exact_kstroll(m, 0, n - 1, k);
    REQUIRE(res.feasible);
    REQUIRE(oracle.feasible);
    CHECK(res.length >= oracle.value);  // oracle dominance
    CHECK(res.prize >= k);
    REQUIRE(res.walk.has_value());
    CHECK(res.walk->length() == res.length);
    CHECK(res.walk->front() == 0);
    CHECK(res.walk->back() == n - 1);
    ++total;
    if (res.length * Rational(2) <= oracle.value * Rational(3)) ++within;
  }
  CHECK(within >= (total * 9 + 9) / 10);
}

TEST_CASE("p2p: generous budget collects everything") {
  Rng prng(23);
  auto m = grid_points(7, 20, prng);
  Rational big = m.aspect_ratio() * Rational(m.size());
  SolverConfig cfg;
  Rng rng(29);
  auto res = solve_p2p_dbl(m, 1, 5, big, cfg, rng);
  REQUIRE(res.feasible);
  CHECK(res.prize == m.size());
  CHECK(res.length <= big);
}

TEST_CASE("p2p: budget equal to a collinear geodesic collects the whole line") {
  std::vector<std::string> ids{"a", "b", "c"};
  std::vector<std::vector<Rational>> coords{{Rational(0)}, {Rational(1)}, {Rational(2)}};
  auto m = MetricInstance::from_coords(std::move(ids), std::move(coords));
  SolverConfig cfg;
  Rng rng(31);
  auto res = solve_p2p_dbl(m, 0, 2, m.dist(0, 2), cfg, rng);
  REQUIRE(res.feasible);
  CHECK(res.prize == 3);
  CHECK(res.length == m.dist(0, 2));
}

TEST_CASE("p2p: uniform n=5 with budget 3 collects 4") {
  auto m = uniform_metric(5);
  SolverConfig cfg;
  cfg.gamma = 2;
  Rng rng(37);
  auto res = solve_p2p_dbl(m, 0, 4, Rational(3), cfg, rng);
  REQUIRE(res.feasible);
  CHECK(res.prize == 4);
  CHECK(res.length <= Rational(3));
}

TEST_CASE("p2p: infeasible below the direct distance, monotone in the budget") {
  Rng prng(41);
  auto m = grid_points(8, 30, prng);
  SolverConfig cfg;
  Rng rng(43);
  auto low = solve_p2p_dbl(m, 0, 7, m.dist(0, 7) - Rational(1, 100), cfg, rng);
  CHECK_FALSE(low.feasible);
  int prev = -1;
  for (int step = 0; step <= 4; ++step) {
    Rational budget = m.dist(0, 7) + m.aspect_ratio() * Rational(step, 2);
    Rng r2(43);
    auto res = solve_p2p_dbl(m, 0, 7, budget, cfg, r2);
    REQUIRE(res.feasible);
    CHECK(res.length <= budget);
    CHECK(res.prize >= prev);
    auto oracle = exact_p2p(m, 0, 7, budget);
    CHECK(res.prize <= static_cast<int>(oracle.value.num()));
    prev = res.prize;
  }
}

TEST_CASE("determinism: identical seeds give identical answers") {
  Rng prng(47);
  auto m = grid_points(9, 35, prng);
  SolverConfig cfg = scaled_config(9);
  Rng r1(5), r2(5);
  auto a = solve_kstroll_dbl(m, 0, 8, 5, cfg, r1);
  auto b = solve_kstroll_dbl(m, 0, 8, 5, cfg, r2);
  REQUIRE(a.feasible);
  REQUIRE(b.feasible);
  CHECK(a.length == b.length);
  REQUIRE(a.walk.has_value());
  REQUIRE(b.walk.has_value());
  CHECK(a.walk->vertices() == b.walk->vertices());
}
