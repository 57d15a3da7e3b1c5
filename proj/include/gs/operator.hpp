#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gs/functions.hpp"
#include "gs/graph.hpp"
#include "gs/potential.hpp"

namespace gs {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// True iff sum_y b(x,y)|f(y)| converges. `tail_bound` bounds the part of
/// the sum beyond a truncated neighbor list; without it the answer for
/// infinite supports is Unknown.
Tri in_domain_F(const WeightedGraph& g, const VertexFunction& f, Vertex x,
                std::optional<double> tail_bound = std::nullopt);

/// (L_V f)(x) = (deg(x)/mu(x) + V(x)) f(x) - (1/mu(x)) sum_y b(x,y) f(y).
///
/// Finitely supported f is summed over its support, so non-locally-finite
/// graphs are fine. Otherwise the neighbor list of x is used; if that list is
/// a truncated prefix (domain certified through `tail_bound`), the returned
/// value omits the tail and is accurate to within that bound.
Complex apply_formal(const WeightedGraph& g, const Potential& V, const VertexFunction& f, Vertex x,
                     std::optional<double> tail_bound = std::nullopt);

/// V+ - min(V-, k).
Potential truncate_negative_part(const Potential& V, std::int64_t k);
/// min(W, k) for W >= 0; evaluation raises NegativeInput where W < 0.
Potential truncate_above(const Potential& W, std::int64_t k);

/// Dirichlet compression of L_V to functions supported in a finite set S.
///
/// Two matrices are kept: the action A on vertex values (A(x,y) = -b(x,y)/mu(x),
/// A(x,x) = deg(x)/mu(x) + V(x)) and its symmetrization B = D^{1/2} A D^{-1/2}
/// with D = diag(mu). The diagonal carries the full degree over X.
class FiniteSection {
 public:
  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  std::optional<std::size_t> index_of(Vertex x) const;

  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::VectorXd& sqrt_mu() const { return sqrt_mu_; }
  const Eigen::VectorXd& degree() const { return degree_; }
  const Eigen::VectorXd& potential() const { return potential_; }
  // Vertices whose whole neighborhood lies inside the section.
  const std::vector<bool>& interior() const { return interior_; }

  const SparseMatrix& symmetric() const { return symmetric_; }
  const SparseMatrix& action() const { return action_; }
  Eigen::MatrixXd dense_symmetric() const { return Eigen::MatrixXd(symmetric_); }

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const { return action_ * u; }
  Eigen::VectorXd to_symmetric(const Eigen::VectorXd& u) const { return sqrt_mu_.cwiseProduct(u); }
  Eigen::VectorXd from_symmetric(const Eigen::VectorXd& s) const { return s.cwiseQuotient(sqrt_mu_); }

  // mu-weighted inner product and norm.
  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  double norm(const Eigen::VectorXd& u) const;
  // <A u, u>_mu, evaluated through B.
  double quadratic(const Eigen::VectorXd& u) const;

  /// Same section with `extra` added to the potential (diagonal only).
  FiniteSection with_added_potential(const Eigen::VectorXd& extra) const;
  FiniteSection shifted(double c) const;

  // "row col value" per line, row-major, for the symmetrized matrix.
  std::string coordinate_text() const;

 private:
  friend FiniteSection dirichlet_section(const WeightedGraph&, const Potential&, const std::vector<Vertex>&);

  std::vector<Vertex> vertices_;
  std::unordered_map<Vertex, std::size_t> index_;
  Eigen::VectorXd mu_;
  Eigen::VectorXd sqrt_mu_;
  Eigen::VectorXd degree_;
  Eigen::VectorXd potential_;
  std::vector<bool> interior_;
  SparseMatrix symmetric_;
  SparseMatrix action_;
};

FiniteSection dirichlet_section(const WeightedGraph& g, const Potential& V, const std::vector<Vertex>& S);

// Section vector <-> finitely supported function.
FiniteFunction to_function(const FiniteSection& section, const Eigen::VectorXd& u);

struct KatoReport {
  double residual = 0.0;        // ||A_W f - beta f|| / ||f||
  double worst_margin = 0.0;    // min over interior x of (beta|f| - L_{W0}|f|)(x) / ||f||_inf
  Vertex worst_vertex = -1;
  std::size_t interior_checked = 0;
  bool passed = true;
};

/// Pointwise check of L_{W0}|f| <= beta |f| at interior vertices of S for a
/// numerical eigenpair (beta, f) of section(W). Requires W >= W0 on S.
KatoReport kato_inequality_check(const WeightedGraph& g, const Potential& W, const Potential& W0,
                                 const std::vector<Vertex>& S, const Eigen::VectorXd& f, double beta,
                                 double tol = 1e-9);

}  // namespace gs
