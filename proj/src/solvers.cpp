#include "gs/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>

#include "gs/error.hpp"
#include "gs/forms.hpp"

namespace gs {

namespace {

SparseMatrix identity_shifted(const SparseMatrix& m, double alpha) {
  SparseMatrix out = m;
  for (int i = 0; i < out.rows(); ++i) out.coeffRef(i, i) += alpha;
  return out;
}

Eigen::VectorXd normalized_vertex_vector(const FiniteSection& section, const Eigen::VectorXd& s) {
  Eigen::VectorXd v = section.from_symmetric(s / s.norm());
  // Fix the sign so that the largest entry is positive; keeps reports stable.
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
  return v;
}

}  // namespace

EigenPair lambda0(const FiniteSection& section, double tol, std::size_t dense_limit) {
  const std::size_t n = section.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty section");
  if (n <= dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(section.dense_symmetric());
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigensolver failed");
    EigenPair out;
    out.value = solver.eigenvalues()[0];
    const Eigen::VectorXd s = solver.eigenvectors().col(0);
    out.residual = (section.symmetric() * s - out.value * s).norm();
    out.vector = normalized_vertex_vector(section, s);
    const double scale = solver.eigenvalues().cwiseAbs().maxCoeff();
    if (out.residual > std::max(tol, 1e-12 * (1.0 + scale))) {
      throw Error(ErrorCode::NoConvergence, "dense eigenpair residual above tolerance");
    }
    return out;
  }
  EigenPair out = lanczos_lowest(section.symmetric(), tol);
  out.vector = normalized_vertex_vector(section, out.vector);
  return out;
}

EigenPair lanczos_lowest(const SparseMatrix& B, double tol, int max_restarts, int krylov_dim) {
  const Eigen::Index n = B.rows();
  const Eigen::Index m = std::min<Eigen::Index>(krylov_dim, n);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start[i] = normal(rng);

  Eigen::MatrixXd Q(n, m);
  EigenPair best;
  for (int restart = 0; restart < max_restarts; ++restart) {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);
    Q.col(0) = start / start.norm();
    Eigen::Index steps = m;
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXd w = B * Q.col(j);
      alpha[j] = Q.col(j).dot(w);
      // Full reorthogonalization, applied twice.
      for (int pass = 0; pass < 2; ++pass) {
        w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).transpose() * w);
      }
      if (j + 1 == m) break;
      beta[j] = w.norm();
      if (beta[j] < 1e-14) {
        steps = j + 1;
        break;
      }
      Q.col(j + 1) = w / beta[j];
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
    for (Eigen::Index j = 0; j < steps; ++j) {
      T(j, j) = alpha[j];
      if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(T);
    const double theta = small.eigenvalues()[0];
    Eigen::VectorXd x = Q.leftCols(steps) * small.eigenvectors().col(0);
    x /= x.norm();
    const double residual = (B * x - theta * x).norm();
    best.value = theta;
    best.vector = x;
    best.residual = residual;
    best.iterations = restart + 1;
    if (residual <= tol) return best;
    start = x;
  }
  throw Error(ErrorCode::NoConvergence, "Lanczos did not reach residual " + std::to_string(tol));
}

SpectralDecomposition spectral_decomposition(const FiniteSection& section) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(section.dense_symmetric());
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigensolver failed");
  SpectralDecomposition out;
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
    out.vectors.col(j) = section.from_symmetric(out.vectors.col(j));
  }
  return out;
}

Eigen::VectorXd spectral_apply(const SpectralDecomposition& spec, const FiniteSection& section,
                               const std::function<double(double)>& phi, const Eigen::VectorXd& u) {
  // Columns are mu-orthonormal, so the coefficients are mu-inner products.
  const Eigen::VectorXd coeff = spec.vectors.transpose() * section.mu().cwiseProduct(u);
  Eigen::VectorXd scaled = coeff;
  for (Eigen::Index j = 0; j < coeff.size(); ++j) scaled[j] *= phi(spec.values[j]);
  return spec.vectors * scaled;
}

// --- resolvents -------------------------------------------------------------

Resolvent::Resolvent(const FiniteSection& section, double alpha, SolverOptions options)
    : section_(section), alpha_(alpha), options_(options) {
  const std::size_t n = section.size();
  if (n <= options_.dense_limit) {
    const Eigen::MatrixXd B = section.dense_symmetric();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::LLT<Eigen::MatrixXd> margin_check(B + (alpha - options_.shift_margin) * I);
    if (margin_check.info() != Eigen::Success) {
      throw Error(ErrorCode::ShiftTooSmall,
                  "alpha = " + std::to_string(alpha) + " is not above -lambda0 + margin");
    }
    dense_.emplace(B + alpha * I);
    if (dense_->info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "Cholesky factorization failed");
  } else {
    const double l0 = options_.known_lambda0 ? *options_.known_lambda0
                                             : lambda0(section, 1e-9, options_.dense_limit).value;
    if (!(alpha > -l0 + options_.shift_margin)) {
      throw Error(ErrorCode::ShiftTooSmall,
                  "alpha = " + std::to_string(alpha) + " <= -lambda0 + margin, lambda0 = " + std::to_string(l0));
    }
    shifted_ = identity_shifted(section.symmetric(), alpha);
  }
}

ResolventResult Resolvent::apply(const Eigen::VectorXd& v) const {
  const FiniteSection& sec = section_;
  if (static_cast<std::size_t>(v.size()) != sec.size()) {
    throw Error(ErrorCode::IndexMismatch, "right-hand side length differs from section size");
  }
  ResolventResult out;
  out.alpha = alpha_;
  const Eigen::VectorXd rhs = sec.to_symmetric(v);
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    out.solution = Eigen::VectorXd::Zero(v.size());
    return out;
  }

  Eigen::VectorXd s;
  if (dense_) {
    s = dense_->solve(rhs);
    // One round of refinement against the sparse operator.
    Eigen::VectorXd r = rhs - (sec.symmetric() * s + alpha_ * s);
    s += dense_->solve(r);
    out.iterations = 1;
  } else {
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(options_.tol);
    cg.setMaxIterations(options_.max_iterations);
    cg.compute(shifted_);
    s = cg.solve(rhs);
    out.iterations = static_cast<int>(cg.iterations());
    if (cg.info() != Eigen::Success) {
      throw Error(ErrorCode::NoConvergence, "conjugate gradient stopped at residual " + std::to_string(cg.error()));
    }
  }
  out.residual = (sec.symmetric() * s + alpha_ * s - rhs).norm() / rhs_norm;
  if (out.residual > options_.tol) {
    throw Error(ErrorCode::NoConvergence, "resolvent residual " + std::to_string(out.residual));
  }
  out.solution = sec.from_symmetric(s);
  return out;
}

ResolventResult resolvent_apply(const FiniteSection& section, double alpha, const Eigen::VectorXd& v, double tol) {
  SolverOptions options;
  options.tol = tol;
  return Resolvent(section, alpha, options).apply(v);
}

PositivityReport positivity_check(const FiniteSection& section, double alpha, int trials, double tol,
                                  std::uint64_t seed) {
  const Resolvent resolvent(section, alpha);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PositivityReport report;
  report.trials = trials;
  report.worst_margin = trials > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  const auto n = static_cast<Eigen::Index>(section.size());
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd v(n);
    // Half the entries are zeroed so that sparse right-hand sides are covered.
    for (Eigen::Index i = 0; i < n; ++i) {
      const double keep = unit(rng);
      const double value = unit(rng);
      v[i] = keep < 0.5 ? 0.0 : value;
    }
    const Eigen::VectorXd u = resolvent.apply(v).solution;
    report.worst_margin = std::min(report.worst_margin, u.minCoeff());
  }
  report.passed = report.worst_margin >= -tol;
  return report;
}

DominationReport domination_check(const FiniteSection& low, const FiniteSection& high, double r,
                                  const Eigen::VectorXd& u, double tol) {
  if (low.vertices() != high.vertices()) throw Error(ErrorCode::IndexMismatch, "sections have different index maps");
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "r must be positive");
  const Eigen::VectorXd w = high.potential() - low.potential();
  if (w.size() > 0 && w.minCoeff() < 0.0) {
    throw Error(ErrorCode::NegativePerturbation, "high section potential is below the low one");
  }
  // (A/r + 1)^{-1} = r (A + r)^{-1}
  const Resolvent res_low(low, r);
  const Resolvent res_high(high, r);
  DominationReport report;
  report.lhs = (r * res_high.apply(u).solution).cwiseAbs();
  report.rhs = r * res_low.apply(u.cwiseAbs()).solution;
  report.worst_margin = u.size() > 0 ? (report.rhs - report.lhs).minCoeff() : 0.0;
  report.passed = report.worst_margin >= -tol;
  return report;
}

// --- strong resolvent convergence ----------------------------------------------

std::string to_csv(const ConvergenceReport& report) {
  std::string out = "k_or_r,alpha,vector_id,l2_error,form_error,section_size\n";
  char line[256];
  for (const auto& row : report.rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%d,%.17g,%.17g,%zu\n", row.parameter, row.alpha, row.vector_id,
                  row.l2_error, row.form_error, row.section_size);
    out += line;
  }
  return out;
}

ConvergenceReport src_monitor(const std::vector<SectionFamilyMember>& family, const FiniteSection& limit,
                              double alpha, const std::vector<Eigen::VectorXd>& test_vectors, double tol,
                              int form_samples, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(limit.size());
  std::vector<Eigen::VectorXd> samples = test_vectors;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < form_samples; ++s) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
    samples.push_back(v);
  }
  for (const auto& member : family) {
    if (member.section.vertices() != limit.vertices()) {
      throw Error(ErrorCode::IndexMismatch, "family member has a different index map");
    }
    for (const auto& v : samples) {
      const double tk = member.section.quadratic(v);
      const double t = limit.quadratic(v);
      if (tk < t - 1e-12 * (1.0 + std::abs(t))) {
        throw Error(ErrorCode::MonotonicityViolation,
                    "t_k(u) < t(u) at parameter " + std::to_string(member.parameter));
      }
    }
  }

  const double l0 = lambda0(limit).value;
  const Resolvent limit_res(limit, alpha);
  std::vector<Eigen::VectorXd> limit_solutions;
  for (const auto& v : test_vectors) limit_solutions.push_back(limit_res.apply(v).solution);

  ConvergenceReport report;
  std::vector<double> previous(test_vectors.size(), std::numeric_limits<double>::infinity());
  for (const auto& member : family) {
    const Resolvent res(member.section, alpha);
    for (std::size_t j = 0; j < test_vectors.size(); ++j) {
      const Eigen::VectorXd diff = res.apply(test_vectors[j]).solution - limit_solutions[j];
      ConvergenceRow row;
      row.parameter = member.parameter;
      row.alpha = alpha;
      row.vector_id = static_cast<int>(j);
      row.l2_error = limit.norm(diff);
      row.form_error = form_norm_eval(limit, diff, 1.0, l0).value;
      row.section_size = limit.size();
      if (row.l2_error > previous[j] + 1e-12) report.monotone = false;
      previous[j] = row.l2_error;
      report.rows.push_back(row);
    }
  }
  report.converged = !family.empty();
  for (double e : previous) report.converged = report.converged && e <= tol;
  return report;
}

}  // namespace gs
