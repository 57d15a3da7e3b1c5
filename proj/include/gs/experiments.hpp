#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gs/graph.hpp"
#include "gs/operator.hpp"
#include "gs/potential.hpp"
#include "gs/solvers.hpp"

namespace gs {

// ---------------------------------------------------------------------------
// Form-sum versus Friedrichs extension of the sum.

struct CoincidenceLevel {
  std::size_t section_size = 0;
  double alpha = 0.0;
  double matrix_discrepancy = 0.0;
  double resolvent_drift = 0.0;  // max_v ||R_A v - R_B v||_mu / (1 + ||R_A v||_mu)
};

struct CoincidenceResult {
  double max_matrix_discrepancy = 0.0;  // max |entry(A) - entry(B)|
  double scale = 1.0;                   // 1 + max |diagonal|
  double alpha = 0.0;
  std::size_t section_size = 0;
  double resolvent_drift = 0.0;
  std::vector<CoincidenceLevel> levels;  // optional exhaustion probe
};

/// Path A: section(V1) plus diag(V2). Path B: section(V1 + V2). Compares the
/// two matrices entrywise and their resolvents at alpha (default
/// 1 + max(0, -lambda0(section(V1)))) on a few fixed test vectors.
CoincidenceResult formsum_vs_friedrichs(const WeightedGraph& g, const Potential& V1, const Potential& V2,
                                        const std::vector<Vertex>& S, std::optional<double> alpha = std::nullopt,
                                        std::uint64_t seed = 42);

/// The same comparison on every subset of an exhaustion.
std::vector<CoincidenceLevel> coincidence_over_exhaustion(const WeightedGraph& g, const Potential& V1,
                                                          const Potential& V2, const Exhaustion& exhaustion,
                                                          std::optional<double> alpha = std::nullopt,
                                                          std::uint64_t seed = 42);

// ---------------------------------------------------------------------------
// Positive form core: u_r and u_r^k from truncations of the negative part.

struct CoreApproxRow {
  double r = 0.0;
  std::int64_t k = 0;
  double min_entry = 0.0;        // min of u_r^k
  double form_error = 0.0;       // ||u_r^k - u_r|| in the form norm of L
  double l2_error = 0.0;         // ||u_r^k - u_r||_mu
  double estimate_lhs = 0.0;     // h(d) + ||d||^2, d = (L_k + r)^{-1}u - (L + r)^{-1}u
  double estimate_bound = 0.0;   // ((L + r)^{-1}u, u) - ((L_k + r)^{-1}u, u)
  double estimate_margin = 0.0;  // bound - lhs
};

struct DiagonalPick {
  double r = 0.0;
  std::int64_t k = 0;
  double form_error = 0.0;  // ||w_j - u|| in the form norm of L
};

struct CoreApproxTrace {
  double shift = 0.0;    // added to every operator, = -min(0, lambda0(section(V1)))
  double lambda0 = 0.0;  // of the shifted operator L
  double beta = 1.0;
  std::vector<CoreApproxRow> rows;  // r-major, k-minor
  std::vector<double> r_form_errors;  // ||u_r - u|| in the form norm, per r
  std::vector<double> r_l2_errors;
  std::vector<DiagonalPick> diagonal;
  double worst_min_entry = 0.0;
  double worst_estimate_margin = 0.0;
  bool k_monotone = true;   // form errors non-increasing in k for each r
  bool r_monotone = true;   // ||u_r - u|| non-increasing in r
  bool diagonal_decreasing = true;
};

/// u_r = (L/r + 1)^{-1} u and u_r^k = (L_k/r + 1)^{-1} u with L = L_{V1} and
/// L_k = L_{V1^(k)}, both shifted so that L >= 0. `beta` is the form-norm
/// parameter. Grids are processed in the order given.
CoreApproxTrace positive_core_approximation(const WeightedGraph& g, const Potential& V1,
                                            const std::vector<Vertex>& S, const Eigen::VectorXd& u,
                                            const std::vector<std::int64_t>& k_seq, const std::vector<double>& r_seq,
                                            double beta = 1.0, double slack = 1e-12);

// ---------------------------------------------------------------------------
// Stability of essential self-adjointness: truncated T_k and the w_r sequence.

struct RelativeBoundFit {
  double a1 = 0.0;  // least-squares fit of ||V2 u|| ~ a1 ||L_{V1} u|| + a2 ||u||, a_j >= 0
  double a2 = 0.0;
  double inflation = 1.0;  // factor making the fit an upper bound on every sample
  std::size_t samples = 0;
};

struct StabilityRow {
  double r = 0.0;
  std::int64_t k = 0;
  double resolvent_error = 0.0;  // ||u_r^k - rho_r||, rho_r = (L_V/r + 1)^{-1} u
  double image_error = 0.0;      // ||L_V u_r^k - L_V rho_r||
  double domination_margin = 0.0;
};

struct StabilitySelection {
  double r = 0.0;
  std::int64_t k = 0;
  double w_error = 0.0;        // ||w_r - u||
  double w_image_error = 0.0;  // ||L_V w_r - L_V u||
  double rho_error = 0.0;      // ||rho_r - u||
  double rho_image_error = 0.0;
  double commutation_residual = 0.0;  // ||L_V rho_r - (L_V/r + 1)^{-1} L_V u||
  bool within_literal_bound = true;   // ||w_r - u|| <= ||rho_r - u|| + 1/r
};

struct StabilityReport {
  double shift = 0.0;
  double alpha = 0.0;
  RelativeBoundFit fit;
  double identity_discrepancy = 0.0;  // L_V = L_{V1} + V2 on section vectors
  std::vector<StabilityRow> grid;
  std::vector<StabilitySelection> selections;
  double worst_domination_margin = 0.0;
  ConvergenceReport k_report;  // (T_k + alpha)^{-1} u -> (L_V + alpha)^{-1} u
  ConvergenceReport r_report;  // rho_r -> u
};

StabilityReport stability_pipeline(const WeightedGraph& g, const Potential& V1, const Potential& V2,
                                   const std::vector<Vertex>& S, const Eigen::VectorXd& u, double alpha,
                                   const std::vector<std::int64_t>& k_seq, const std::vector<double>& r_seq,
                                   std::uint64_t seed = 42, int bound_samples = 200);

// ---------------------------------------------------------------------------
// Birth-death deficiency probe.

enum class DeficiencyClass { Divergent, Convergent, Inconclusive };
const char* to_string(DeficiencyClass c);

struct DeficiencyReport {
  // u(n) = mantissa[n] * 2^exponent[n]; exact while no rescaling happened.
  std::vector<double> mantissa;
  std::vector<int> exponent;
  std::vector<double> log_partial_sums;  // ln P_n, P_n = sum_{m <= n} mu(m) u(m)^2
  double growth_ratio = 0.0;             // ln P_N / ln N
  DeficiencyClass classification = DeficiencyClass::Inconclusive;

  double value(std::size_t n) const;  // may overflow to +-inf
  double log_abs_value(std::size_t n) const;
};

/// Solves (L_V + alpha) u = 0 on a birth-death chain by the three-term
/// recursion with u(0) = 1 and reports the growth of sum mu |u|^2.
DeficiencyReport deficiency_probe_birth_death(const Sequence& b_seq, const Sequence& mu_seq, const Potential& V,
                                              double alpha, std::size_t N);

}  // namespace gs
