#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "generators.hpp"
#include "gs/error.hpp"
#include "gs/experiments.hpp"
#include "oracles.hpp"

using namespace gs;
using namespace gs::testing;

namespace {

WeightedGraph unit_chain() {
  return make_birth_death([](std::int64_t) { return 1.0; }, [](std::int64_t) { return 1.0; });
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

double close(double a, double b) { return std::abs(a - b) <= 1e-8 * (1e-6 + std::abs(b)); }

}  // namespace

TEST_CASE("coincidence examples") {
  const WeightedGraph p2 = make_path(2);
  const CoincidenceResult r = formsum_vs_friedrichs(p2, Potential(), Potential::from_values({1.0, 0.0}), {0, 1});
  CHECK(r.max_matrix_discrepancy == 0.0);
  CHECK(r.resolvent_drift <= 1e-15);
  const FiniteSection both = dirichlet_section(p2, Potential::from_values({1.0, 0.0}), {0, 1});
  Eigen::MatrixXd expected(2, 2);
  expected << 2, -1, -1, 1;
  CHECK(both.dense_symmetric() == expected);

  const CoincidenceResult zero = formsum_vs_friedrichs(unit_chain(), Potential::constant(-3.0), Potential(), iota_vertices(10));
  CHECK(zero.max_matrix_discrepancy == 0.0);
  CHECK(zero.resolvent_drift == 0.0);
  CHECK(zero.alpha == doctest::Approx(1.0 + 3.0 - lambda0(dirichlet_section(unit_chain(), Potential(), iota_vertices(10))).value));

  CHECK(code_of([] { formsum_vs_friedrichs(make_path(2), Potential(), Potential::constant(-1.0), {0, 1}); }) ==
        ErrorCode::NegativePerturbation);
}

TEST_CASE("coincidence over an exhaustion") {
  const Potential V1([](Vertex x) { return 3.0 * std::sin(double(x)); });
  const Potential V2([](Vertex x) { return double(x); });
  const Exhaustion e = ball_exhaustion(unit_chain(), 0, {15, 31, 63});
  const auto levels = coincidence_over_exhaustion(unit_chain(), V1, V2, e);
  REQUIRE(levels.size() == 3);
  CHECK(levels[2].section_size == 64);
  for (const auto& l : levels) {
    CHECK(l.matrix_discrepancy == 0.0);
    CHECK(l.resolvent_drift <= 1e-10);
  }
}

TEST_CASE("core approximation: inactive and saturated truncation") {
  const auto S = iota_vertices(12);
  const Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(12, 1.0, 0.1);
  const CoreApproxTrace t = positive_core_approximation(unit_chain(), Potential::constant(2.0), S, u, {1, 2, 3}, {1, 2, 4});
  CHECK(t.shift == 0.0);
  for (const auto& row : t.rows) CHECK(row.form_error == 0.0);
  CHECK(t.r_monotone);

  const CoreApproxTrace p2 = positive_core_approximation(make_path(2), Potential::from_values({-3.0, 0.0}), {0, 1},
                                                         Eigen::Vector2d(1, 1), {5}, {1, 3});
  for (const auto& row : p2.rows) {
    CHECK(row.form_error == 0.0);
    CHECK(row.estimate_bound == 0.0);
  }
  CHECK(p2.shift > 0.0);

  CHECK(code_of([&] { positive_core_approximation(make_path(2), Potential(), {0, 1}, Eigen::Vector2d(1, -1), {1}, {1}); }) ==
        ErrorCode::NotNonnegative);
  CHECK(code_of([&] { positive_core_approximation(make_path(2), Potential(), {0, 1}, Eigen::Vector2d(1, 1), {2, 1}, {1}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("core approximation trace matches dense oracles on the N=30 chain") {
  const std::size_t N = 30;
  const auto S = iota_vertices(N);
  const WeightedGraph g = unit_chain();
  const Potential V1([](Vertex n) { return -0.5 * static_cast<double>(n); });
  std::vector<std::int64_t> ks;
  for (int k = 1; k <= 15; ++k) ks.push_back(k);
  const std::vector<double> rs{1, 2, 4, 8, 16};

  const DenseOperator plus = dense_operator(g, V1.plus(), S);
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(N);
  e0[0] = 1.0;
  const Eigen::VectorXd u = plus.smooth(1.0, e0);

  const CoreApproxTrace t = positive_core_approximation(g, V1, S, u, ks, rs);
  CHECK(t.worst_min_entry >= -1e-12);
  CHECK(t.worst_estimate_margin >= -1e-10);
  CHECK(t.k_monotone);
  CHECK(t.r_monotone);

  const DenseOperator raw = dense_operator(g, V1, S);
  const double shift = std::max(0.0, -raw.lowest());
  CHECK(close(t.shift, shift));
  const DenseOperator L = raw.shifted(shift);
  const double l0 = L.lowest();
  auto form_norm = [&](const Eigen::VectorXd& w) { return std::sqrt(std::max(0.0, L.inner(L.A * w, w) + (1.0 - l0) * L.inner(w, w))); };
  for (std::size_t ir = 0; ir < rs.size(); ++ir) {
    const double r = rs[ir];
    const Eigen::VectorXd ur = L.smooth(r, u);
    CHECK(close(t.r_form_errors[ir], form_norm(ur - u)));
    for (std::size_t ik = 0; ik < ks.size(); ++ik) {
      const DenseOperator Lk = dense_operator(g, truncate_negative_part(V1, ks[ik]), S).shifted(shift);
      const Eigen::VectorXd urk = Lk.smooth(r, u);
      const Eigen::VectorXd d = (urk - ur) / r;
      const CoreApproxRow& row = t.rows[ir * ks.size() + ik];
      CHECK(close(row.min_entry, urk.minCoeff()));
      CHECK(close(row.form_error, form_norm(urk - ur)));
      CHECK(close(row.l2_error, L.norm(urk - ur)));
      CHECK(close(row.estimate_lhs, L.inner(L.A * d, d) + L.inner(d, d)));
      CHECK(close(row.estimate_bound, L.inner(ur / r, u) - L.inner(urk / r, u)));
    }
  }
  // k = 15 exceeds max V1^- = 14.5 on S.
  for (std::size_t ir = 0; ir < rs.size(); ++ir) CHECK(t.rows[ir * ks.size() + 14].form_error == 0.0);
  REQUIRE(t.diagonal.size() == rs.size());
  CHECK(t.diagonal_decreasing);
}

TEST_CASE("stability: truncation inactive") {
  const auto S = iota_vertices(10);
  const Potential V2([](Vertex x) { return 0.1 * x; });
  const Eigen::VectorXd u = Eigen::VectorXd::Ones(10);
  const StabilityReport rep = stability_pipeline(unit_chain(), Potential(), V2, S, u, 1.0, {1, 2}, {1, 4, 16});
  for (const auto& row : rep.grid) {
    CHECK(row.resolvent_error == 0.0);
    CHECK(row.image_error == 0.0);
  }
  for (const auto& s : rep.selections) CHECK(s.k == 1);
  for (const auto& row : rep.k_report.rows) CHECK(row.l2_error == 0.0);
  CHECK(rep.identity_discrepancy <= 1e-15);
}

TEST_CASE("stability: eigenvector closed form") {
  const std::size_t N = 20;
  const auto S = iota_vertices(N);
  const Potential V2([](Vertex x) { return 0.05 * x * x; });
  const FiniteSection L = dirichlet_section(unit_chain(), V2, S);
  const SpectralDecomposition spec = spectral_decomposition(L);
  const Eigen::VectorXd u = spec.vectors.col(3);
  const double lambda = spec.values[3];
  const std::vector<double> rs{1, 2, 4, 8};
  const StabilityReport rep = stability_pipeline(unit_chain(), Potential(), V2, S, u, 1.0, {1, 2, 4, 8, 16, 32}, rs);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double expected = L.norm(u) * std::abs(1.0 - 1.0 / (lambda / rs[i] + 1.0));
    CHECK(rep.selections[i].rho_error == doctest::Approx(expected).epsilon(1e-10));
    CHECK(rep.selections[i].commutation_residual <= 1e-12);
  }
}

TEST_CASE("stability: N=40 chain with V2 = n^2 against dense oracles") {
  const std::size_t N = 40;
  const auto S = iota_vertices(N);
  const WeightedGraph g = unit_chain();
  const Potential V2([](Vertex n) { return double(n) * double(n); });
  Eigen::VectorXd u(N);
  for (std::size_t i = 0; i < N; ++i) u[i] = std::ldexp(1.0, -static_cast<int>(i));
  std::vector<std::int64_t> ks;
  for (std::int64_t k = 1; k <= 2048; k *= 2) ks.push_back(k);
  const std::vector<double> rs{1, 2, 4, 8, 16, 32, 64};
  const StabilityReport rep = stability_pipeline(g, Potential(), V2, S, u, 1.0, ks, rs);

  CHECK(rep.fit.samples > 0);
  CHECK(std::isfinite(rep.fit.a1));
  CHECK(std::isfinite(rep.fit.a2));
  CHECK(rep.identity_discrepancy <= 1e-14);
  CHECK(rep.worst_domination_margin >= -1e-12);
  CHECK(rep.k_report.monotone);
  CHECK(rep.r_report.monotone);

  const DenseOperator L = dense_operator(g, V2, S);
  for (std::size_t ir = 0; ir < rs.size(); ++ir) {
    const double r = rs[ir];
    const Eigen::VectorXd rho = L.smooth(r, u);
    const StabilitySelection& s = rep.selections[ir];
    const DenseOperator T = dense_operator(g, truncate_above(V2, s.k), S);
    const Eigen::VectorXd w = T.smooth(r, u);
    CHECK(close(s.rho_error, L.norm(rho - u)));
    CHECK(close(s.rho_image_error, L.norm(L.A * (rho - u))));
    CHECK(close(s.w_error, L.norm(w - u)));
    CHECK(close(s.w_image_error, L.norm(L.A * (w - u))));
    CHECK(s.within_literal_bound);
    CHECK(L.norm(w - rho) <= 1.0 / r);
    // The selected k is the first one meeting the rule.
    for (std::size_t ik = 0; ik < ks.size() && ks[ik] < s.k; ++ik) {
      const Eigen::VectorXd wk = dense_operator(g, truncate_above(V2, ks[ik]), S).smooth(r, u);
      CHECK((L.norm(wk - rho) > 1.0 / r || L.norm(L.A * (wk - rho)) > 1.0 / r));
    }
  }
  for (std::size_t i = 1; i < rep.selections.size(); ++i) {
    CHECK(rep.selections[i].w_error < rep.selections[i - 1].w_error);
    CHECK(rep.selections.back().w_image_error <= rep.selections[i - 1].w_image_error);
  }
}

TEST_CASE("stability errors") {
  const auto S = iota_vertices(10);
  const Potential V2([](Vertex x) { return 100.0 * x * x; });
  CHECK(code_of([&] { stability_pipeline(unit_chain(), Potential(), V2, S, Eigen::VectorXd::Ones(10), 1.0, {1}, {64}); }) ==
        ErrorCode::SelectionFailure);
  CHECK(code_of([&] { stability_pipeline(unit_chain(), Potential(), Potential::constant(-1), S, Eigen::VectorXd::Ones(10), 1.0, {1}, {1}); }) ==
        ErrorCode::NegativePerturbation);
}

TEST_CASE("deficiency: unit chain reproduces the integer recursion") {
  const Sequence one = [](std::int64_t) { return 1.0; };
  const DeficiencyReport rep = deficiency_probe_birth_death(one, one, Potential(), 1.0, 30);
  std::int64_t prev = 1, cur = 2;
  CHECK(rep.value(0) == 1.0);
  CHECK(rep.value(1) == 2.0);
  for (std::size_t n = 2; n <= 30; ++n) {
    const std::int64_t next = 3 * cur - prev;
    prev = cur;
    cur = next;
    CHECK(rep.value(n) == static_cast<double>(cur));
  }
  CHECK(rep.classification == DeficiencyClass::Divergent);
}

TEST_CASE("deficiency: alpha = 0 gives the constant solution") {
  const Sequence mu = [](std::int64_t n) { return 1.0 / (1.0 + n); };
  const DeficiencyReport rep = deficiency_probe_birth_death([](std::int64_t n) { return 1.0 + n; }, mu, Potential(), 0.0, 64);
  double p = 0.0;
  for (std::size_t n = 0; n <= 64; ++n) {
    CHECK(rep.value(n) == 1.0);
    p += mu(static_cast<std::int64_t>(n));
    CHECK(std::exp(rep.log_partial_sums[n]) == doctest::Approx(p).epsilon(1e-13));
  }
}

TEST_CASE("deficiency: extended-precision oracle for N = 1000") {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Sequence b = [](std::int64_t n) { return 1.0 + 0.5 * std::sin(double(n)); };
  const Sequence mu = [](std::int64_t n) { return 2.0 + std::cos(0.3 * n); };
  const Potential V([](Vertex n) { return 0.25 * std::sin(0.7 * n); });
  const double alpha = 0.5;
  const std::size_t N = 1000;
  const DeficiencyReport rep = deficiency_probe_birth_death(b, mu, V, alpha, N);

  Big prev = 0, cur = 1, p = Big(mu(0));
  Big bprev = 0;
  for (std::size_t n = 0; n < N; ++n) {
    const auto i = static_cast<std::int64_t>(n);
    const Big next = cur + (bprev * (cur - prev) + (Big(V(i)) + alpha) * Big(mu(i)) * cur) / Big(b(i));
    prev = cur;
    cur = next;
    bprev = Big(b(i));
    p += Big(mu(i + 1)) * cur * cur;
    const Big got = Big(rep.mantissa[n + 1]) * boost::multiprecision::ldexp(Big(1), rep.exponent[n + 1]);
    CHECK(static_cast<double>(abs(got - cur) / abs(cur)) <= 1e-8);
    CHECK(std::abs(rep.log_partial_sums[n + 1] - static_cast<double>(log(p))) <= 1e-8 * static_cast<double>(log(p)));
  }
}

TEST_CASE("deficiency: geometric weights and errors") {
  const DeficiencyReport rep = deficiency_probe_birth_death([](std::int64_t n) { return std::pow(4.0, double(n)); },
                                                            [](std::int64_t n) { return std::pow(4.0, -double(n)); },
                                                            Potential(), 1.0, 200);
  CHECK(std::isfinite(rep.log_partial_sums.back()));
  CHECK(rep.classification == DeficiencyClass::Convergent);

  const Sequence one = [](std::int64_t) { return 1.0; };
  CHECK(code_of([&] { deficiency_probe_birth_death([](std::int64_t n) { return n == 5 ? 0.0 : 1.0; }, one, Potential(), 1.0, 10); }) ==
        ErrorCode::ZeroWeight);
  CHECK(code_of([&] { deficiency_probe_birth_death(one, one, Potential(), 1.0, 1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { deficiency_probe_birth_death(one, one, Potential(), -1.0, 10); }) == ErrorCode::InvalidArgument);
}
