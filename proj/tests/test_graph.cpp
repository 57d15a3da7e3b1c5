#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "gs/error.hpp"
#include "gs/graph.hpp"

using namespace gs;
using namespace gs::testing;

namespace {

WeightedGraph unit_chain() {
  return make_birth_death([](std::int64_t) { return 1.0; }, [](std::int64_t) { return 1.0; });
}

bool throws_code(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("validate_graph on P3 finds nothing") {
  const WeightedGraph g = make_path(3);
  const ValidationReport rep = validate_graph(g, {0, 1, 2});
  CHECK(rep.ok());
  CHECK(rep.components == 1);
  CHECK(rep.sampled == 3);
}

TEST_CASE("validate_graph flags asymmetric weights") {
  const WeightedGraph g = ExplicitGraphBuilder({1.0, 1.0}).set_weight(0, 1, 1.0).set_weight(1, 0, 2.0).build();
  const ValidationReport rep = validate_graph(g, {0, 1});
  CHECK(rep.count(ViolationKind::Asymmetric) >= 1);
  const auto it = std::find_if(rep.violations.begin(), rep.violations.end(),
                               [](const Violation& v) { return v.kind == ViolationKind::Asymmetric; });
  REQUIRE(it != rep.violations.end());
  CHECK(std::min(it->x, it->y) == 0);
  CHECK(std::max(it->x, it->y) == 1);
}

TEST_CASE("validate_graph flags loops") {
  const WeightedGraph g = ExplicitGraphBuilder({1.0}).set_weight(0, 0, 1.0).build();
  const ValidationReport rep = validate_graph(g, {0});
  CHECK(rep.count(ViolationKind::Loop) == 1);
  CHECK(rep.violations.front().x == 0);
}

TEST_CASE("validate_graph rejects an empty sample") {
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { validate_graph(make_path(2), {}); }));
}

TEST_CASE("check_fc examples") {
  CHECK(check_fc(unit_chain(), 1).value == doctest::Approx(2.0));
  const WeightedGraph p2 = ExplicitGraphBuilder({1.0, 9.0}).add_edge(0, 1, 3.0).build();
  CHECK(check_fc(p2, 0).value == doctest::Approx(1.0));
  const WeightedGraph isolated = ExplicitGraphBuilder({1.0}).build();
  CHECK(check_fc(isolated, 0).value == 0.0);
}

TEST_CASE("check_fc needs a tail bound on infinite neighborhoods") {
  const WeightedGraph star = make_infinite_star([](std::int64_t n) { return std::ldexp(1.0, -static_cast<int>(n)); }, 1.0);
  CHECK(throws_code(ErrorCode::UnboundedTail, [&] { check_fc(star, 0); }));
  const FcValue v = check_fc(star, 0, 1e-3);
  CHECK(v.finite);
  CHECK(v.value > 0.0);
  CHECK_FALSE(check_fc(star, 0, std::numeric_limits<double>::infinity()).finite);
}

TEST_CASE("connected_components examples") {
  const WeightedGraph p3 = make_path(3);
  CHECK(connected_components(p3, {0, 1, 2}).size() == 1);
  CHECK(connected_components(p3, {0, 2}).size() == 2);
  CHECK(connected_components(p3, {}).empty());
}

TEST_CASE("birth-death chains") {
  const WeightedGraph g = unit_chain();
  CHECK(g.deg(0) == 1.0);
  CHECK(g.deg(3) == 2.0);
  CHECK(g.b(2, 5) == 0.0);
  CHECK(g.b(2, 3) == 1.0);
  CHECK_FALSE(g.is_finite());

  const WeightedGraph h = make_birth_death([](std::int64_t n) { return n + 1.0; }, [](std::int64_t) { return 1.0; });
  CHECK(h.deg(2) == 5.0);

  const WeightedGraph bad = make_birth_death([](std::int64_t n) { return n == 3 ? -1.0 : 1.0; },
                                             [](std::int64_t) { return 1.0; });
  CHECK(throws_code(ErrorCode::NonPositiveWeight, [&] { bad.b(3, 4); }));
  CHECK(throws_code(ErrorCode::NonPositiveWeight, [] { make_birth_death({1.0, 0.0}, {1.0, 1.0, 1.0}); }));
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { make_birth_death({1.0}, {1.0}); }));

  const WeightedGraph finite = make_birth_death({1.0, 2.0}, {1.0, 1.0, 1.0});
  CHECK(finite.is_finite());
  CHECK(finite.deg(1) == 3.0);
  CHECK(finite.deg(2) == 2.0);
}

TEST_CASE("ball exhaustion examples") {
  const Exhaustion e = ball_exhaustion(unit_chain(), 0, {1, 2});
  REQUIRE(e.subsets.size() == 2);
  CHECK(e.subsets[0] == std::vector<Vertex>{0, 1});
  CHECK(e.subsets[1] == std::vector<Vertex>{0, 1, 2});

  const Exhaustion s = ball_exhaustion(make_star(4), 0, {1});
  CHECK(s.subsets[0].size() == 5);

  const Exhaustion z = ball_exhaustion(unit_chain(), 7, {0});
  CHECK(z.subsets[0] == std::vector<Vertex>{7});
}

TEST_CASE("ball exhaustion errors") {
  const WeightedGraph star = make_infinite_star([](std::int64_t n) { return std::ldexp(1.0, -static_cast<int>(n)); }, 1.0);
  CHECK(throws_code(ErrorCode::NotLocallyFinite, [&] { ball_exhaustion(star, 0, {1}); }));
  CHECK(throws_code(ErrorCode::NotLocallyFinite, [] { ball_exhaustion(make_lattice(2), lattice_vertex({0, 0}), {50}, 100); }));
}

TEST_CASE("lattice oracles") {
  const WeightedGraph z2 = make_lattice(2, 0.5, 2.0);
  const Vertex o = lattice_vertex({0, 0});
  CHECK(z2.deg(o) == 2.0);
  CHECK(z2.b(o, lattice_vertex({1, 0})) == 0.5);
  CHECK(z2.b(o, lattice_vertex({1, 1})) == 0.0);
  CHECK(lattice_coords(lattice_vertex({-3, 7}), 2) == std::vector<std::int64_t>{-3, 7});
  CHECK(ball_exhaustion(z2, o, {2}).subsets[0].size() == 13);
}

TEST_CASE("property: generated graphs are symmetric, degrees match neighbor sums, FC matches brute force") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = index(rng, 1, 40);
    const RandomGraph rg = random_graph(rng, n, index(rng, 0, 3 * n));
    for (std::size_t x = 0; x < n; ++x) {
      double deg = 0.0;
      double fc = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        CHECK(rg.graph.b(x, y) == rg.graph.b(y, x));
        CHECK(rg.graph.b(x, y) == rg.b[x][y]);
        deg += rg.b[x][y];
        fc += rg.b[x][y] * rg.b[x][y] / rg.mu[y];
      }
      CHECK(std::abs(rg.graph.deg(x) - deg) <= 1e-13 * (1.0 + deg));
      CHECK(std::abs(check_fc(rg.graph, x).value - fc) <= 1e-14 * (1.0 + fc));
      double listed = 0.0;
      for (const auto& nb : rg.graph.neighbors(x).entries) listed += nb.weight;
      CHECK(std::abs(rg.graph.deg(x) - listed) <= 1e-13 * (1.0 + deg));
    }
    CHECK(validate_graph(rg.graph, iota_vertices(n)).ok());
  }
}

TEST_CASE("property: balls are nested") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = index(rng, 2, 60);
    const RandomGraph rg = random_graph(rng, n, index(rng, 0, n));
    const Vertex root = static_cast<Vertex>(index(rng, 0, n - 1));
    const Exhaustion e = ball_exhaustion(rg.graph, root, {0, 1, 2, 3, 5, 8});
    for (std::size_t i = 1; i < e.subsets.size(); ++i) {
      auto small = e.subsets[i - 1], big = e.subsets[i];
      std::sort(small.begin(), small.end());
      std::sort(big.begin(), big.end());
      CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
    }
  }
}
