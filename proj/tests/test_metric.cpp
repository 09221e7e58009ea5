#include <algorithm>
#include <set>

#include "doctest.h"
#include "stroll/metric.hpp"

using namespace stroll;

namespace {

MetricInstance line_metric(std::vector<std::int64_t> xs) {
  std::vector<std::string> ids;
  std::vector<std::vector<Rational>> coords;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ids.push_back("p" + std::to_string(i));
    coords.push_back({Rational(xs[i])});
  }
  return MetricInstance::from_coords(std::move(ids), std::move(coords));
}

}  // namespace

TEST_CASE("2x2 matrix normalizes to unit distance") {
  auto m = MetricInstance::from_matrix({"a", "b"}, {{Rational(0), Rational(5)},
                                                    {Rational(5), Rational(0)}});
  CHECK(m.dist(0, 1) == Rational(1));
  CHECK(m.aspect_ratio() == Rational(1));
  CHECK(m.normalization_scale() == Rational(5));
}

TEST_CASE("collinear coordinates 0,1,3") {
  auto m = line_metric({0, 1, 3});
  CHECK(m.dist(0, 2) == Rational(3));
  CHECK(m.dist(0, 1) == Rational(1));
  CHECK(m.aspect_ratio() == Rational(3));
}

TEST_CASE("path graph a-b-c with weights 2,2") {
  auto m = MetricInstance::from_graph(
      {"a", "b", "c"}, {{0, 1, Rational(2)}, {1, 2, Rational(2)}});
  CHECK(m.dist(0, 2) * m.normalization_scale() == Rational(4));
  CHECK(m.dist(0, 2) == Rational(2));
  CHECK(m.index_of("c") == 2);
  CHECK_THROWS_AS(m.index_of("z"), std::invalid_argument);
}

TEST_CASE("matrix validation errors") {
  using M = std::vector<std::vector<Rational>>;
  CHECK_THROWS_WITH_AS(
      MetricInstance::from_matrix({"a", "b"}, M{{Rational(0), Rational(2)},
                                                {Rational(3), Rational(0)}}),
      doctest::Contains("asymmetric"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      MetricInstance::from_matrix({"a", "b"}, M{{Rational(1), Rational(2)},
                                                {Rational(2), Rational(0)}}),
      doctest::Contains("self-distance"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      MetricInstance::from_matrix(
          {"a", "b", "c"},
          M{{Rational(0), Rational(1), Rational(5)},
            {Rational(1), Rational(0), Rational(1)},
            {Rational(5), Rational(1), Rational(0)}}),
      doctest::Contains("triangle"), std::invalid_argument);
}

TEST_CASE("disconnected graph rejected") {
  CHECK_THROWS_WITH_AS(
      MetricInstance::from_graph({"a", "b", "c"}, {{0, 1, Rational(1)}}),
      doctest::Contains("disconnected"), std::invalid_argument);
}

TEST_CASE("normalization is idempotent") {
  auto m1 = line_metric({0, 2, 6});
  std::vector<std::vector<Rational>> d(3, std::vector<Rational>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d[i][j] = m1.dist(i, j);
  auto m2 = MetricInstance::from_matrix({"a", "b", "c"}, d);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(m2.dist(i, j) == m1.dist(i, j));
  CHECK(m2.normalization_scale() == Rational(1));
}

TEST_CASE("balls") {
  auto m = line_metric({0, 1, 3});
  CHECK(ball(m, 0, Rational(0)) == std::vector<int>{0});
  CHECK(ball(m, 0, Rational(1)) == std::vector<int>{0, 1});
  CHECK(ball(m, 0, m.aspect_ratio()) == std::vector<int>{0, 1, 2});
  SUBCASE("monotone in radius") {
    for (int v = 0; v < 3; ++v)
      for (std::int64_t r1 = 0; r1 <= 3; ++r1)
        for (std::int64_t r2 = r1; r2 <= 3; ++r2) {
          auto b1 = ball(m, v, Rational(r1));
          auto b2 = ball(m, v, Rational(r2));
          CHECK(std::includes(b2.begin(), b2.end(), b1.begin(), b1.end()));
        }
  }
}

TEST_CASE("greedy_net cover and packing invariants") {
  auto m = line_metric({0, 3, 7, 12, 20, 31});
  Rng rng(7);
  for (std::int64_t rho_num = 1; rho_num <= 40; rho_num += 3) {
    Rational rho(rho_num, 3);
    auto net = greedy_net(m, m.all_nodes(), rho, rng);
    for (int u : m.all_nodes()) {
      REQUIRE(net.assignment.count(u) == 1);
      CHECK(m.dist(u, net.assignment.at(u)) <= rho);
    }
    for (std::size_t i = 0; i < net.centers.size(); ++i)
      for (std::size_t j = i + 1; j < net.centers.size(); ++j)
        CHECK(m.dist(net.centers[i], net.centers[j]) > rho);
  }
}

TEST_CASE("greedy_net trivial shapes") {
  auto m = line_metric({0, 1, 10});
  Rng rng(1);
  auto net = greedy_net(m, {0, 2}, Rational(3), rng);
  CHECK(net.centers.size() == 2);
  auto m2 = line_metric({0, 1, 2});
  auto net2 = greedy_net(m2, m2.all_nodes(), Rational(5), rng);
  CHECK(net2.centers.size() == 1);
  auto net3 = greedy_net(m2, {1}, Rational(1), rng);
  CHECK(net3.centers == std::vector<int>{1});
}

TEST_CASE("greedy_net is deterministic given the seed") {
  auto m = line_metric({0, 3, 7, 12, 20, 31});
  Rng r1(42), r2(42);
  auto a = greedy_net(m, m.all_nodes(), Rational(5), r1);
  auto b = greedy_net(m, m.all_nodes(), Rational(5), r2);
  CHECK(a.centers == b.centers);
  CHECK(a.assignment == b.assignment);
}

TEST_CASE("packing bound on a Euclidean grid") {
  // 4x4 integer grid, kappa = dim + 1 slack.
  std::vector<std::string> ids;
  std::vector<std::vector<Rational>> coords;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      ids.push_back(std::to_string(x) + "_" + std::to_string(y));
      coords.push_back({Rational(x), Rational(y)});
    }
  auto m = MetricInstance::from_coords(std::move(ids), std::move(coords));
  const double kappa = 3.0;
  Rng rng(11);
  for (std::int64_t rn = 1; rn <= 8; ++rn) {
    Rational rho(rn, 2);
    auto net = greedy_net(m, m.all_nodes(), rho, rng);
    double bound =
        std::pow(m.aspect_ratio().to_double() / (rho.to_double() / 2), kappa);
    CHECK(double(net.centers.size()) <= bound);
  }
}

TEST_CASE("diameter") {
  auto m = line_metric({0, 1, 3});
  CHECK(diameter(m, {1}) == Rational(0));
  CHECK(diameter(m, m.all_nodes()) == Rational(3));
  CHECK_THROWS_AS(diameter(m, {}), std::invalid_argument);
  auto u = MetricInstance::from_matrix(
      {"a", "b", "c"}, {{Rational(0), Rational(1), Rational(1)},
                        {Rational(1), Rational(0), Rational(1)},
                        {Rational(1), Rational(1), Rational(0)}});
  CHECK(diameter(u, {0, 2}) == Rational(1));
}

TEST_CASE("doubling dimension estimate") {
  auto one = MetricInstance::from_matrix({"a"}, {{Rational(0)}});
  CHECK(doubling_dimension_estimate(one) == 0.0);
  auto two = line_metric({0, 5});
  CHECK(doubling_dimension_estimate(two) <= 1.0);
  std::vector<std::string> ids;
  std::vector<std::vector<Rational>> coords;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      ids.push_back(std::to_string(x) + "_" + std::to_string(y));
      coords.push_back({Rational(x), Rational(y)});
    }
  auto grid = MetricInstance::from_coords(std::move(ids), std::move(coords));
  double est = doubling_dimension_estimate(grid);
  CHECK(est >= 1.0);
  CHECK(est <= 4.0);
}

TEST_CASE("duplicate coordinates rejected") {
  CHECK_THROWS_WITH_AS(
      MetricInstance::from_coords({"a", "b"}, {{Rational(1)}, {Rational(1)}}),
      doctest::Contains("duplicate"), std::invalid_argument);
}
