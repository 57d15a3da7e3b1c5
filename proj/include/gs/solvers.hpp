#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gs/operator.hpp"

namespace gs {

struct SolverOptions {
  std::size_t dense_limit = 2000;  // dense factorizations up to this size
  double tol = 1e-10;              // relative residual of resolvent solves
  double shift_margin = 1e-8;      // required gap alpha - (-lambda0)
  int max_iterations = 20000;
  std::optional<double> known_lambda0;  // skips the eigen estimate on large sections
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // vertex coordinates, unit mu-norm
  double residual = 0.0;   // ||B v - value v|| in symmetric coordinates
  int iterations = 0;
};

/// Smallest eigenvalue of the section with a residual certificate. Dense
/// below `dense_limit`, restarted Lanczos above.
EigenPair lambda0(const FiniteSection& section, double tol = 1e-10, std::size_t dense_limit = 2000);
EigenPair lanczos_lowest(const SparseMatrix& symmetric, double tol, int max_restarts = 500,
                         int krylov_dim = 120);

struct SpectralDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns in vertex coordinates, mu-orthonormal
};

/// All eigenpairs of a small section (dense).
SpectralDecomposition spectral_decomposition(const FiniteSection& section);

/// phi(A) u through the dense spectral decomposition.
Eigen::VectorXd spectral_apply(const SpectralDecomposition& spec, const FiniteSection& section,
                               const std::function<double(double)>& phi, const Eigen::VectorXd& u);

struct ResolventResult {
  Eigen::VectorXd solution;
  double alpha = 0.0;
  double residual = 0.0;  // ||(A + alpha) u - v||_mu / ||v||_mu
  int iterations = 0;
};

/// (A + alpha)^{-1} on one section, factorized once and applied many times.
class Resolvent {
 public:
  Resolvent(const FiniteSection& section, double alpha, SolverOptions options = {});

  ResolventResult apply(const Eigen::VectorXd& v) const;
  double alpha() const { return alpha_; }
  const FiniteSection& section() const { return section_; }

 private:
  FiniteSection section_;
  double alpha_;
  SolverOptions options_;
  SparseMatrix shifted_;
  std::optional<Eigen::LLT<Eigen::MatrixXd>> dense_;
};

ResolventResult resolvent_apply(const FiniteSection& section, double alpha, const Eigen::VectorXd& v,
                                double tol = 1e-10);

struct PositivityReport {
  double worst_margin = 0.0;  // smallest entry over every solution
  int trials = 0;
  bool passed = true;
};

/// Resolvents of random entrywise non-negative vectors stay non-negative.
PositivityReport positivity_check(const FiniteSection& section, double alpha, int trials, double tol = 1e-12,
                                  std::uint64_t seed = 42);

struct DominationReport {
  double worst_margin = 0.0;  // min over entries of rhs - lhs
  Eigen::VectorXd lhs;        // |(r^{-1} A_high + 1)^{-1} u|
  Eigen::VectorXd rhs;        // (r^{-1} A_low + 1)^{-1} |u|
  bool passed = true;
};

/// |(A_high/r + 1)^{-1} u| <= (A_low/r + 1)^{-1} |u| entrywise, where the two
/// sections differ by a non-negative potential.
DominationReport domination_check(const FiniteSection& low, const FiniteSection& high, double r,
                                  const Eigen::VectorXd& u, double tol = 1e-12);

struct ConvergenceRow {
  double parameter = 0.0;  // k or r
  double alpha = 0.0;
  int vector_id = 0;
  double l2_error = 0.0;
  double form_error = 0.0;
  std::size_t section_size = 0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool monotone = true;   // errors non-increasing in the parameter, per vector
  bool converged = false; // final errors <= tol
};

std::string to_csv(const ConvergenceReport& report);

struct SectionFamilyMember {
  double parameter;
  FiniteSection section;
};

/// Strong resolvent convergence of a monotone family toward `limit`: rows of
/// ||(A_k + alpha)^{-1} v - (A + alpha)^{-1} v|| per k and test vector. The
/// form inequality <A_k u, u> >= <A u, u> is sampled first.
ConvergenceReport src_monitor(const std::vector<SectionFamilyMember>& family, const FiniteSection& limit,
                              double alpha, const std::vector<Eigen::VectorXd>& test_vectors, double tol = 1e-12,
                              int form_samples = 16, std::uint64_t seed = 42);

}  // namespace gs
