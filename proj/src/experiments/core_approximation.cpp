#include <algorithm>
#include <cmath>
#include <limits>

#include "gs/error.hpp"
#include "gs/experiments.hpp"
#include "gs/forms.hpp"
#include "gs/parallel.hpp"

namespace gs {

namespace {

template <typename T>
void require_increasing(const std::vector<T>& seq, const char* name) {
  if (seq.empty()) throw Error(ErrorCode::InvalidArgument, std::string(name) + " grid is empty");
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (!(seq[i] > seq[i - 1])) throw Error(ErrorCode::InvalidArgument, std::string(name) + " grid must increase");
  }
}

}  // namespace

CoreApproxTrace positive_core_approximation(const WeightedGraph& g, const Potential& V1,
                                            const std::vector<Vertex>& S, const Eigen::VectorXd& u,
                                            const std::vector<std::int64_t>& k_seq, const std::vector<double>& r_seq,
                                            double beta, double slack) {
  require_increasing(k_seq, "k");
  require_increasing(r_seq, "r");
  if (r_seq.front() < 1.0) throw Error(ErrorCode::InvalidArgument, "r grid must start at r >= 1");
  if (static_cast<std::size_t>(u.size()) != S.size()) throw Error(ErrorCode::IndexMismatch, "u does not match S");
  if (u.size() > 0 && u.minCoeff() < 0.0) throw Error(ErrorCode::NotNonnegative, "u has negative entries");

  CoreApproxTrace trace;
  trace.beta = beta;
  const FiniteSection raw = dirichlet_section(g, V1, S);
  trace.shift = std::max(0.0, -lambda0(raw).value);
  const FiniteSection L = raw.shifted(trace.shift);
  trace.lambda0 = lambda0(L).value;

  std::vector<FiniteSection> truncated;
  truncated.reserve(k_seq.size());
  for (std::int64_t k : k_seq) truncated.push_back(dirichlet_section(g, truncate_negative_part(V1, k), S).shifted(trace.shift));

  auto form_norm = [&](const Eigen::VectorXd& w) { return form_norm_eval(L, w, beta, trace.lambda0).value; };

  const std::size_t nk = k_seq.size();
  trace.rows.resize(r_seq.size() * nk);
  trace.r_form_errors.resize(r_seq.size());
  trace.r_l2_errors.resize(r_seq.size());
  std::vector<std::vector<Eigen::VectorXd>> approximants(r_seq.size());

  parallel_for(r_seq.size(), [&](std::size_t ir) {
    const double r = r_seq[ir];
    const Eigen::VectorXd rho = Resolvent(L, r).apply(u).solution;  // (L + r)^{-1} u
    const Eigen::VectorXd u_r = r * rho;
    trace.r_form_errors[ir] = form_norm(u_r - u);
    trace.r_l2_errors[ir] = L.norm(u_r - u);
    const double rho_u = L.inner(rho, u);
    approximants[ir].resize(nk);
    for (std::size_t ik = 0; ik < nk; ++ik) {
      const Eigen::VectorXd rho_k = Resolvent(truncated[ik], r).apply(u).solution;
      const Eigen::VectorXd u_rk = r * rho_k;
      const Eigen::VectorXd d = rho_k - rho;
      CoreApproxRow& row = trace.rows[ir * nk + ik];
      row.r = r;
      row.k = k_seq[ik];
      row.min_entry = u_rk.minCoeff();
      row.form_error = form_norm(u_rk - u_r);
      row.l2_error = L.norm(u_rk - u_r);
      row.estimate_lhs = L.quadratic(d) + L.inner(d, d);
      row.estimate_bound = rho_u - L.inner(rho_k, u);
      row.estimate_margin = row.estimate_bound - row.estimate_lhs;
      approximants[ir][ik] = u_rk;
    }
  });

  trace.worst_min_entry = std::numeric_limits<double>::infinity();
  trace.worst_estimate_margin = std::numeric_limits<double>::infinity();
  for (std::size_t ir = 0; ir < r_seq.size(); ++ir) {
    for (std::size_t ik = 0; ik < nk; ++ik) {
      const CoreApproxRow& row = trace.rows[ir * nk + ik];
      trace.worst_min_entry = std::min(trace.worst_min_entry, row.min_entry);
      trace.worst_estimate_margin = std::min(trace.worst_estimate_margin, row.estimate_margin);
      if (ik > 0 && row.form_error > trace.rows[ir * nk + ik - 1].form_error + slack) trace.k_monotone = false;
    }
    if (ir > 0 && trace.r_form_errors[ir] > trace.r_form_errors[ir - 1] + slack) trace.r_monotone = false;

    // Smallest k whose approximant is within 1/r of u_r; the last k otherwise.
    const double r = r_seq[ir];
    std::size_t pick = nk - 1;
    for (std::size_t ik = 0; ik < nk; ++ik) {
      if (trace.rows[ir * nk + ik].form_error <= 1.0 / r) {
        pick = ik;
        break;
      }
    }
    DiagonalPick d{r, k_seq[pick], form_norm(approximants[ir][pick] - u)};
    if (!trace.diagonal.empty() && d.form_error > trace.diagonal.back().form_error + slack) {
      trace.diagonal_decreasing = false;
    }
    trace.diagonal.push_back(d);
  }
  return trace;
}

}  // namespace gs
