#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "gs/error.hpp"
#include "gs/forms.hpp"
#include "gs/solvers.hpp"

using namespace gs;
using namespace gs::testing;

namespace {

WeightedGraph unit_chain() {
  return make_birth_death([](std::int64_t) { return 1.0; }, [](std::int64_t) { return 1.0; });
}

// 1/2 sum_{x,y} b |f(x) - f(y)|^2 over an explicit dense weight table.
double brute_energy(const RandomGraph& rg, const std::vector<Complex>& f) {
  double s = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    for (std::size_t y = 0; y < f.size(); ++y) s += rg.b[x][y] * std::norm(f[x] - f[y]);
  }
  return 0.5 * s;
}

}  // namespace

TEST_CASE("pairing examples") {
  const WeightedGraph g = ExplicitGraphBuilder({3.0, 1.0}).add_edge(0, 1, 1.0).build();
  CHECK(pairing_a(g, VertexFunction([](Vertex) { return Complex(1.0); }), delta(0)) == Complex(3.0));
  const WeightedGraph p2 = make_path(2);
  CHECK(pairing_a(p2, VertexFunction(delta(0, Complex(0, 1))), delta(0)) == Complex(0, 1));
  CHECK(pairing_a(p2, VertexFunction(delta(0)), delta(1)) == Complex(0.0));
}

TEST_CASE("form_Q examples") {
  const WeightedGraph p2 = make_path(2);
  const FormValue q = form_Q_quadratic(p2, Potential(), {{0, 1.0}, {1, -1.0}});
  CHECK(q.energy_part == doctest::Approx(4.0));
  CHECK(q.total == doctest::Approx(4.0));

  const WeightedGraph p3 = make_path(3);
  CHECK(form_Q_quadratic(p3, Potential(), {{0, 2.0}, {1, 2.0}, {2, 2.0}}).total == 0.0);

  CHECK(form_Q_quadratic(unit_chain(), Potential(), delta(0)).total == doctest::Approx(1.0));

  const SesquilinearValue s = form_Q(p2, Potential::constant(2.0), {{0, 1.0}, {1, -1.0}}, {{0, 1.0}, {1, -1.0}});
  CHECK(s.total.real() == doctest::Approx(4.0 + 4.0));
}

TEST_CASE("greens identity examples") {
  const WeightedGraph p3 = make_path(3);
  const GreensResidual r = greens_identity_residual(p3, Potential(), VertexFunction(FiniteFunction{{0, 1.0}, {1, 2.0}, {2, 3.0}}), delta(1));
  CHECK(r.residual == 0.0);
  CHECK(r.operator_side == Complex(0.0));

  const FiniteFunction u{{0, Complex(1, 2)}, {3, Complex(-0.5, 1)}};
  const Potential W = Potential::constant(0.75);
  const GreensResidual self = greens_identity_residual(unit_chain(), W, VertexFunction(u), u);
  CHECK(self.residual <= 1e-12);
  CHECK(std::abs(self.operator_side - form_Q(unit_chain(), W, u, u).total) <= 1e-12);

  const GreensResidual zero = greens_identity_residual(p3, W, VertexFunction(delta(0)), FiniteFunction{});
  CHECK(zero.residual == 0.0);
}

TEST_CASE("greens identity with an infinitely supported f") {
  const WeightedGraph g = unit_chain();
  const VertexFunction f([](Vertex x) { return Complex(std::cos(0.3 * x), std::sin(0.7 * x)); });
  const FiniteFunction u{{0, 1.0}, {4, Complex(0, 2)}, {5, -1.0}};
  const GreensResidual r = greens_identity_residual(g, Potential::constant(-2.0), f, u);
  CHECK(r.residual <= 1e-12 * (1.0 + r.scale));
  CHECK_FALSE(r.flip_residual.has_value());

  const WeightedGraph star = make_infinite_star([](std::int64_t n) { return std::ldexp(1.0, -static_cast<int>(n)); }, 1.0);
  try {
    greens_identity_residual(star, Potential(), f, delta(0));
    FAIL("expected DomainViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainViolation);
  }
}

TEST_CASE("form norm examples") {
  const FiniteSection p2 = dirichlet_section(make_path(2), Potential(), {0, 1});
  const double l0 = lambda0(p2).value;
  CHECK(std::abs(l0) <= 1e-14);
  const FormNorm n = form_norm_eval(p2, Eigen::Vector2d(1, -1), 1.0, l0);
  CHECK(n.value * n.value == doctest::Approx(6.0));
  CHECK(form_norm_eval(p2, Eigen::Vector2d::Zero(), 1.0, l0).value == 0.0);
  try {
    form_norm_eval(p2, Eigen::Vector2d(1, 1), 1.0, std::numeric_limits<double>::quiet_NaN());
    FAIL("expected NotLowerBounded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotLowerBounded);
  }
}

TEST_CASE("finite energy check") {
  const Potential W = Potential::constant(1e12);
  const EnergyCheck e = finite_energy_check(unit_chain(), W, VertexFunction(delta(0)));
  CHECK(e.finite == Tri::True);
  REQUIRE(e.value);
  CHECK(*e.value == doctest::Approx(2.0 + 1e12));
  const VertexFunction constant([](Vertex) { return Complex(1.0); });
  CHECK(finite_energy_check(unit_chain(), Potential(), constant).finite == Tri::Unknown);
}

TEST_CASE("property: form values match brute-force double sums and the section quadratic form") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = index(rng, 1, 25);
    const RandomGraph rg = random_graph(rng, n, index(rng, 0, 2 * n));
    const auto Wv = random_values(rng, n, -10, 10);
    const Potential W = Potential::from_values(Wv);
    std::vector<Complex> fv(n);
    FiniteFunction f;
    for (std::size_t x = 0; x < n; ++x) {
      fv[x] = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
      f[static_cast<Vertex>(x)] = fv[x];
    }
    const FormValue q = form_Q_quadratic(rg.graph, W, f);
    const double energy = brute_energy(rg, fv);
    CHECK(std::abs(q.energy_part - energy) <= 1e-12 * (1.0 + energy));
    double pot = 0.0;
    for (std::size_t x = 0; x < n; ++x) pot += rg.mu[x] * Wv[x] * std::norm(fv[x]);
    CHECK(std::abs(q.potential_part - pot) <= 1e-12 * (1.0 + std::abs(pot)));

    // Real vectors: Q(u) = <section(W) u, u>.
    const FiniteSection sec = dirichlet_section(rg.graph, W, iota_vertices(n));
    const Eigen::VectorXd u = random_vector(rng, n);
    const double qs = form_Q_quadratic(rg.graph, W, to_function(sec, u)).total;
    CHECK(std::abs(qs - sec.quadratic(u)) <= 1e-12 * (1.0 + std::abs(qs)));
  }
}

TEST_CASE("property: Beurling-Deny and lower-bound propagation") {
  Rng rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = index(rng, 1, 20);
    const RandomGraph rg = random_graph(rng, n, index(rng, 0, n));
    const FiniteFunction f = random_function(rng, n, index(rng, 1, n));
    const FormValue q = form_Q_quadratic(rg.graph, Potential(), f);
    const FormValue qa = form_Q_quadratic(rg.graph, Potential(), modulus(f));
    CHECK(qa.energy_part <= q.energy_part + 1e-12);

    const auto S = iota_vertices(n);
    const Potential V1 = Potential::from_values(random_values(rng, n, -10, 10));
    const Potential Wp = Potential::from_values(random_values(rng, n, 0, 10));
    CHECK(lambda0(dirichlet_section(rg.graph, V1 + Wp, S)).value >= lambda0(dirichlet_section(rg.graph, V1, S)).value - 1e-10);
  }
}

TEST_CASE("property: form norm scales between 1 and sqrt 2 when beta doubles") {
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = index(rng, 1, 15);
    const RandomGraph rg = random_graph(rng, n, n);
    const FiniteSection sec = dirichlet_section(rg.graph, Potential::from_values(random_values(rng, n, -5, 5)), iota_vertices(n));
    const double l0 = lambda0(sec).value;
    const double beta = uniform(rng, 0.1, 3.0);
    const Eigen::VectorXd u = random_vector(rng, n);
    const double ratio = form_norm_eval(sec, u, 2 * beta, l0).value / form_norm_eval(sec, u, beta, l0).value;
    CHECK(ratio >= 1.0 - 1e-12);
    CHECK(ratio <= std::sqrt(2.0) + 1e-12);
  }
}
