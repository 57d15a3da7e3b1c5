#pragma once

#include <optional>

#include <Eigen/Dense>

#include "gs/functions.hpp"
#include "gs/graph.hpp"
#include "gs/operator.hpp"
#include "gs/potential.hpp"

namespace gs {

/// Q_W(f) split into its energy and potential parts.
struct FormValue {
  double energy_part = 0.0;     // 1/2 sum_{x,y} b(x,y)|f(x)-f(y)|^2
  double potential_part = 0.0;  // sum_x mu(x) W(x) |f(x)|^2
  double total = 0.0;
};

struct SesquilinearValue {
  Complex energy_part;
  Complex potential_part;
  Complex total;
};

/// (u, w)_a = sum_x mu(x) u(x) conj(w(x)) for finitely supported w.
Complex pairing_a(const WeightedGraph& g, const VertexFunction& u, const FiniteFunction& w);

/// Q_W(f, h) on finitely supported functions. Edges that leave the joint
/// support S are accounted for through deg(x) - sum_{y in S} b(x,y), so no
/// infinite neighborhood is ever enumerated.
SesquilinearValue form_Q(const WeightedGraph& g, const Potential& W, const FiniteFunction& f,
                         const FiniteFunction& h);
FormValue form_Q_quadratic(const WeightedGraph& g, const Potential& W, const FiniteFunction& f);

struct GreensResidual {
  double residual = 0.0;     // |(L_W f, u)_a - [pair sum + potential sum]|
  double scale = 1.0;        // 1 + |operator side| + |form side|
  Complex operator_side;
  Complex form_side;
  std::optional<double> flip_residual;  // |(L_W f, u)_a - (f, L_W u)_a|, f finitely supported
};

/// Green's formula check. The form side is an independent pair-by-pair sum
/// over the edges touching supp(u) (or supp(f) u supp(u)).
GreensResidual greens_identity_residual(const WeightedGraph& g, const Potential& W, const VertexFunction& f,
                                        const FiniteFunction& u);

struct FormNorm {
  double lambda0 = 0.0;
  double beta = 1.0;
  double value = 0.0;  // sqrt(h(u) + (beta - lambda0) ||u||^2)
};

/// Form norm of a section vector; `lambda0` is the section's smallest eigenvalue.
FormNorm form_norm_eval(const FiniteSection& section, const Eigen::VectorXd& u, double beta, double lambda0);

struct EnergyCheck {
  Tri finite = Tri::Unknown;
  // sum_{x,y} b|f(x)-f(y)|^2 + sum_x mu |W| |f|^2, when computable.
  std::optional<double> value;
};

EnergyCheck finite_energy_check(const WeightedGraph& g, const Potential& W, const VertexFunction& f,
                                std::optional<double> tail_bound = std::nullopt);

}  // namespace gs
