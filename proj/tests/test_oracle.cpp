#include <random>

#include "doctest.h"
#include "stroll/oracle.hpp"

using namespace stroll;

namespace {

MetricInstance uniform_metric(int n) {
  std::vector<std::string> ids;
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n, Rational(1)));
  for (int i = 0; i < n; ++i) {
    ids.push_back("v" + std::to_string(i));
    d[i][i] = Rational(0);
  }
  return MetricInstance::from_matrix(std::move(ids), std::move(d));
}

MetricInstance random_graph_metric(int n, Rng& rng) {
  std::uniform_int_distribution<std::int64_t> wd(1, 8);
  std::vector<std::tuple<int, int, Rational>> edges;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pd(0, v - 1);
    edges.push_back({pd(rng), v, Rational(wd(rng))});
  }
  std::uniform_int_distribution<int> extra_d(0, n);
  int extra = extra_d(rng);
  std::uniform_int_distribution<int> vd(0, n - 1);
  for (int e = 0; e < extra; ++e) {
    int u = vd(rng), v = vd(rng);
    if (u != v) edges.push_back({u, v, Rational(wd(rng))});
  }
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
  return MetricInstance::from_graph(std::move(ids), std::move(edges));
}

void check_witness(const OracleResult& r) {
  REQUIRE(r.feasible);
  REQUIRE(r.witness.has_value());
}

}  // namespace

TEST_CASE("exact_kstroll basics") {
  auto m = uniform_metric(5);
  SUBCASE("k=2 is the direct edge") {
    auto r = exact_kstroll(m, 0, 3, 2);
    check_witness(r);
    CHECK(r.value == m.dist(0, 3));
  }
  SUBCASE("k=n on the uniform metric costs n-1") {
    auto r = exact_kstroll(m, 0, 4, 5);
    check_witness(r);
    CHECK(r.value == Rational(4));
    CHECK(r.witness->distinct_count() == 5);
    CHECK(r.witness->length() == r.value);
  }
  SUBCASE("k beyond n is infeasible") {
    CHECK_FALSE(exact_kstroll(m, 0, 1, 6).feasible);
  }
}

TEST_CASE("exact_p2p basics") {
  auto m = uniform_metric(5);
  SUBCASE("budget below the direct distance is infeasible") {
    CHECK_FALSE(exact_p2p(m, 0, 1, Rational(1, 2)).feasible);
  }
  SUBCASE("huge budget collects everything") {
    auto r = exact_p2p(m, 0, 1, Rational(100));
    check_witness(r);
    CHECK(r.value == Rational(5));
  }
  SUBCASE("uniform n=5, B=3 gives prize 4") {
    auto r = exact_p2p(m, 0, 1, Rational(3));
    check_witness(r);
    CHECK(r.value == Rational(4));
    CHECK(r.witness->length() <= Rational(3));
  }
}

TEST_CASE("exact_deadline basics") {
  auto m = uniform_metric(5);
  SUBCASE("no deadlines means everything counts") {
    auto r = exact_deadline(m, 0, {});
    check_witness(r);
    CHECK(r.value == Rational(5));
  }
  SUBCASE("everything unreachable leaves only the start") {
    std::map<int, Rational> dl;
    for (int v = 1; v < 5; ++v) dl[v] = Rational(1, 2);
    auto r = exact_deadline(m, 0, dl);
    CHECK(r.value == Rational(1));
  }
  SUBCASE("tight chain of deadlines") {
    std::map<int, Rational> dl{{1, Rational(1)}, {2, Rational(2)}};
    auto r = exact_deadline(m, 0, dl);
    check_witness(r);
    CHECK(r.value == Rational(5));
  }
}

TEST_CASE("subset DP agrees with permutation enumeration") {
  Rng rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<int> nd(2, 7);
    int n = nd(rng);
    auto m = random_graph_metric(n, rng);
    std::uniform_int_distribution<int> vd(0, n - 1);
    int s = vd(rng), t = vd(rng);
    for (int k = 1; k <= n; ++k) {
      auto fast = exact_kstroll(m, s, t, k);
      auto slow = permutation_kstroll(m, s, t, k);
      REQUIRE(fast.feasible == slow.feasible);
      if (fast.feasible) CHECK(fast.value == slow.value);
    }
    std::uniform_int_distribution<std::int64_t> bd(0, 40);
    Rational B(bd(rng), 2);
    auto fp = exact_p2p(m, s, t, B);
    auto sp = permutation_p2p(m, s, t, B);
    REQUIRE(fp.feasible == sp.feasible);
    if (fp.feasible) CHECK(fp.value == sp.value);
    std::map<int, Rational> dl;
    std::uniform_int_distribution<std::int64_t> dd(0, 30);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int v = 0; v < n; ++v)
      if (coin(rng)) dl[v] = Rational(dd(rng), 2);
    auto fd = exact_deadline(m, s, dl);
    auto sd = permutation_deadline(m, s, dl);
    CHECK(fd.value == sd.value);
  }
}

TEST_CASE("witnesses re-simulate to the reported value") {
  Rng rng(202);
  for (int trial = 0; trial < 15; ++trial) {
    auto m = random_graph_metric(7, rng);
    auto rk = exact_kstroll(m, 0, 6, 5);
    if (rk.feasible) {
      CHECK(rk.witness->length() == rk.value);
      CHECK(rk.witness->front() == 0);
      CHECK(rk.witness->back() == 6);
      CHECK(rk.witness->distinct_count() >= 5);
    }
    std::map<int, Rational> dl{{3, Rational(4)}, {5, Rational(9)}};
    auto rd = exact_deadline(m, 0, dl);
    check_witness(rd);
    const auto& w = *rd.witness;
    for (int i = 0; i < w.size(); ++i) {
      auto it = dl.find(w.vertices()[i]);
      if (it != dl.end()) CHECK(w.prefix_length(i) <= it->second);
    }
  }
}

TEST_CASE("size limits enforced") {
  auto m = uniform_metric(5);
  CHECK_THROWS_AS(permutation_kstroll(uniform_metric(9), 0, 1, 2),
                  std::invalid_argument);
  CHECK_NOTHROW(exact_kstroll(m, 0, 1, 2));
}

TEST_CASE("exact_mu_jump endpoints and identity") {
  auto m = uniform_metric(6);
  Walk w(m, {0, 1, 2, 3, 4, 5});
  auto j2 = exact_mu_jump(w, 2);
  CHECK(j2.indices == std::vector<int>{0, 5});
  auto j6 = exact_mu_jump(w, 6);
  CHECK(j6.length == w.length());
}
