#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gs/error.hpp"
#include "gs/experiments.hpp"
#include "gs/forms.hpp"
#include "gs/parallel.hpp"

namespace gs {

namespace {

// Least squares for z ~ a1 x + a2 y with a1, a2 >= 0.
RelativeBoundFit fit_relative_bound(const std::vector<double>& x, const std::vector<double>& y,
                                    const std::vector<double>& z) {
  double sxx = 0, sxy = 0, syy = 0, sxz = 0, syz = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
    sxz += x[i] * z[i];
    syz += y[i] * z[i];
  }
  auto residual = [&](double a1, double a2) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(a1 * x[i] + a2 * y[i] - z[i], 2);
    return s;
  };
  std::vector<std::pair<double, double>> candidates{{0.0, 0.0}};
  const double det = sxx * syy - sxy * sxy;
  if (det > 1e-14 * sxx * syy) {
    const double a1 = (sxz * syy - syz * sxy) / det;
    const double a2 = (syz * sxx - sxz * sxy) / det;
    if (a1 >= 0 && a2 >= 0) candidates.emplace_back(a1, a2);
  }
  if (sxx > 0) candidates.emplace_back(std::max(0.0, sxz / sxx), 0.0);
  if (syy > 0) candidates.emplace_back(0.0, std::max(0.0, syz / syy));

  RelativeBoundFit fit;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a1, a2] : candidates) {
    const double res = residual(a1, a2);
    if (res < best) {
      best = res;
      fit.a1 = a1;
      fit.a2 = a2;
    }
  }
  fit.samples = x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double predicted = fit.a1 * x[i] + fit.a2 * y[i];
    if (predicted > 0) {
      fit.inflation = std::max(fit.inflation, z[i] / predicted);
    } else if (z[i] > 0) {
      fit.inflation = std::numeric_limits<double>::infinity();
    }
  }
  return fit;
}

}  // namespace

StabilityReport stability_pipeline(const WeightedGraph& g, const Potential& V1, const Potential& V2,
                                   const std::vector<Vertex>& S, const Eigen::VectorXd& u, double alpha,
                                   const std::vector<std::int64_t>& k_seq, const std::vector<double>& r_seq,
                                   std::uint64_t seed, int bound_samples) {
  if (k_seq.empty() || r_seq.empty()) throw Error(ErrorCode::InvalidArgument, "empty k or r grid");
  for (std::size_t i = 1; i < k_seq.size(); ++i) {
    if (k_seq[i] <= k_seq[i - 1]) throw Error(ErrorCode::InvalidArgument, "k grid must increase");
  }
  for (double r : r_seq) {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "r must be positive");
  }
  if (static_cast<std::size_t>(u.size()) != S.size()) throw Error(ErrorCode::IndexMismatch, "u does not match S");

  StabilityReport report;
  report.alpha = alpha;
  const FiniteSection raw1 = dirichlet_section(g, V1, S);
  const std::size_t n = raw1.size();
  Eigen::VectorXd v2(n);
  for (std::size_t i = 0; i < n; ++i) {
    v2[i] = V2(S[i]);
    if (v2[i] < 0.0) throw Error(ErrorCode::NegativePerturbation, "V2(" + std::to_string(S[i]) + ") < 0");
  }
  report.shift = std::max(0.0, -lambda0(raw1).value);
  const FiniteSection L1 = raw1.shifted(report.shift);
  const FiniteSection raw = dirichlet_section(g, V1 + V2, S);
  const FiniteSection L = raw.shifted(report.shift);

  // Relative bound sampled on vectors supported at interior vertices, where
  // the section acts as the formal operator.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> xs, ys, zs;
  double identity = 0.0;
  for (int s = 0; s < bound_samples; ++s) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (raw1.interior()[i]) w[i] = uniform(rng);
    }
    if (w.isZero()) continue;
    const Eigen::VectorXd l1w = raw1.apply(w);
    xs.push_back(raw1.norm(l1w));
    ys.push_back(raw1.norm(w));
    zs.push_back(raw1.norm(v2.cwiseProduct(w)));
    const Eigen::VectorXd lw = raw.apply(w);
    identity = std::max(identity, raw.norm(lw - l1w - v2.cwiseProduct(w)) / (1.0 + raw.norm(lw)));
  }
  report.fit = fit_relative_bound(xs, ys, zs);
  {
    const Eigen::VectorXd lu = raw.apply(u);
    const Eigen::VectorXd l1u = raw1.apply(u);
    identity = std::max(identity, raw.norm(lu - l1u - v2.cwiseProduct(u)) / (1.0 + raw.norm(lu)));
  }
  report.identity_discrepancy = identity;

  std::vector<FiniteSection> T;
  T.reserve(k_seq.size());
  for (std::int64_t k : k_seq) T.push_back(dirichlet_section(g, V1 + truncate_above(V2, k), S).shifted(report.shift));

  const Eigen::VectorXd Lu = L.apply(u);
  const std::size_t nk = k_seq.size();
  report.grid.resize(r_seq.size() * nk);
  std::vector<Eigen::VectorXd> rho(r_seq.size());
  std::vector<std::vector<Eigen::VectorXd>> approx(r_seq.size(), std::vector<Eigen::VectorXd>(nk));
  std::vector<double> commutation(r_seq.size());

  parallel_for(r_seq.size(), [&](std::size_t ir) {
    const double r = r_seq[ir];
    const Resolvent res(L, r);
    rho[ir] = r * res.apply(u).solution;
    const Eigen::VectorXd Lrho = L.apply(rho[ir]);
    commutation[ir] = L.norm(Lrho - r * res.apply(Lu).solution);
    for (std::size_t ik = 0; ik < nk; ++ik) {
      approx[ir][ik] = r * Resolvent(T[ik], r).apply(u).solution;
      StabilityRow& row = report.grid[ir * nk + ik];
      row.r = r;
      row.k = k_seq[ik];
      row.resolvent_error = L.norm(approx[ir][ik] - rho[ir]);
      row.image_error = L.norm(L.apply(approx[ir][ik]) - Lrho);
      row.domination_margin = domination_check(L1, T[ik], r, u).worst_margin;
    }
  });

  report.worst_domination_margin = std::numeric_limits<double>::infinity();
  for (const auto& row : report.grid) {
    report.worst_domination_margin = std::min(report.worst_domination_margin, row.domination_margin);
  }

  const double l0 = lambda0(L).value;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t ir = 0; ir < r_seq.size(); ++ir) {
    const double r = r_seq[ir];
    std::size_t pick = nk;
    for (std::size_t ik = 0; ik < nk; ++ik) {
      const StabilityRow& row = report.grid[ir * nk + ik];
      if (row.resolvent_error <= 1.0 / r && row.image_error <= 1.0 / r) {
        pick = ik;
        break;
      }
    }
    if (pick == nk) {
      throw Error(ErrorCode::SelectionFailure, "no k in the grid meets the 1/r rule at r = " + std::to_string(r));
    }
    const Eigen::VectorXd& w = approx[ir][pick];
    StabilitySelection sel;
    sel.r = r;
    sel.k = k_seq[pick];
    sel.w_error = L.norm(w - u);
    sel.w_image_error = L.norm(L.apply(w) - Lu);
    sel.rho_error = L.norm(rho[ir] - u);
    sel.rho_image_error = L.norm(L.apply(rho[ir]) - Lu);
    sel.commutation_residual = commutation[ir];
    sel.within_literal_bound = sel.w_error <= sel.rho_error + 1.0 / r;
    report.selections.push_back(sel);

    ConvergenceRow row;
    row.parameter = r;
    row.alpha = r;
    row.l2_error = sel.rho_error;
    row.form_error = form_norm_eval(L, rho[ir] - u, 1.0, l0).value;
    row.section_size = n;
    if (row.l2_error > previous + 1e-12) report.r_report.monotone = false;
    previous = row.l2_error;
    report.r_report.rows.push_back(row);
  }
  report.r_report.converged = previous <= 1.0 / r_seq.back();

  // T_k increases toward L, so the monitor is assembled here rather than by
  // src_monitor, which expects a family decreasing toward its limit.
  const Resolvent limit_res(L, alpha);
  const Eigen::VectorXd target = limit_res.apply(u).solution;
  previous = std::numeric_limits<double>::infinity();
  for (std::size_t ik = 0; ik < nk; ++ik) {
    const Eigen::VectorXd diff = Resolvent(T[ik], alpha).apply(u).solution - target;
    ConvergenceRow row;
    row.parameter = static_cast<double>(k_seq[ik]);
    row.alpha = alpha;
    row.l2_error = L.norm(diff);
    row.form_error = form_norm_eval(L, diff, 1.0, l0).value;
    row.section_size = n;
    if (row.l2_error > previous + 1e-12) report.k_report.monotone = false;
    previous = row.l2_error;
    report.k_report.rows.push_back(row);
  }
  report.k_report.converged = previous <= 1e-12 * (1.0 + L.norm(target));
  return report;
}

}  // namespace gs
