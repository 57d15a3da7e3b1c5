#include "gs/forms.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>
#include <utility>

#include "gs/error.hpp"
#include "gs/summation.hpp"

namespace gs {

namespace {

std::vector<Vertex> joint_support(const FiniteFunction& f, const FiniteFunction& h) {
  std::vector<Vertex> s;
  s.reserve(f.size() + h.size());
  for (const auto& [x, v] : f) s.push_back(x);
  for (const auto& [x, v] : h) s.push_back(x);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

Complex value_at(const FiniteFunction& f, Vertex x) {
  auto it = f.find(x);
  return it == f.end() ? Complex{} : it->second;
}

double checked_deg(const WeightedGraph& g, Vertex x) {
  double d;
  try {
    d = g.deg(x);
  } catch (const Error& e) {
    throw Error(ErrorCode::MissingDegree, e.what());
  }
  if (!std::isfinite(d)) throw Error(ErrorCode::MissingDegree, "deg(" + std::to_string(x) + ")");
  return d;
}

// Calls visit(x, y, b(x,y)) for every ordered pair x != y inside `support`
// with b(x,y) > 0, and returns deg(x) - sum_{y in support} b(x,y) per vertex.
template <typename Visit>
std::vector<double> walk_pairs(const WeightedGraph& g, const std::vector<Vertex>& support, Visit&& visit) {
  std::unordered_set<Vertex> in(support.begin(), support.end());
  std::vector<double> outside(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Vertex x = support[i];
    CompensatedSum rest;
    rest.add(checked_deg(g, x));
    const NeighborList list = g.neighbors(x);
    if (list.complete) {
      for (const auto& nb : list.entries) {
        if (nb.vertex == x || !in.count(nb.vertex) || nb.weight == 0.0) continue;
        rest.add(-nb.weight);
        visit(x, nb.vertex, nb.weight);
      }
    } else {
      for (Vertex y : support) {
        if (y == x) continue;
        const double w = g.b(x, y);
        if (w == 0.0) continue;
        rest.add(-w);
        visit(x, y, w);
      }
    }
    outside[i] = rest.value();
  }
  return outside;
}

}  // namespace

Complex pairing_a(const WeightedGraph& g, const VertexFunction& u, const FiniteFunction& w) {
  ComplexCompensatedSum sum;
  for (const auto& [x, wx] : w) sum.add(g.mu(x) * u(x) * std::conj(wx));
  return sum.value();
}

SesquilinearValue form_Q(const WeightedGraph& g, const Potential& W, const FiniteFunction& f,
                         const FiniteFunction& h) {
  const std::vector<Vertex> s = joint_support(f, h);
  ComplexCompensatedSum pair_sum;
  const auto outside = walk_pairs(g, s, [&](Vertex x, Vertex y, double w) {
    pair_sum.add(w * (value_at(f, x) - value_at(f, y)) * std::conj(value_at(h, x) - value_at(h, y)));
  });
  ComplexCompensatedSum energy;
  ComplexCompensatedSum potential;
  energy.add(0.5 * pair_sum.value());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Complex fh = value_at(f, s[i]) * std::conj(value_at(h, s[i]));
    energy.add(outside[i] * fh);
    potential.add(g.mu(s[i]) * W(s[i]) * fh);
  }
  SesquilinearValue out;
  out.energy_part = energy.value();
  out.potential_part = potential.value();
  out.total = out.energy_part + out.potential_part;
  return out;
}

FormValue form_Q_quadratic(const WeightedGraph& g, const Potential& W, const FiniteFunction& f) {
  const std::vector<Vertex> s = joint_support(f, {});
  CompensatedSum pair_sum;
  const auto outside = walk_pairs(g, s, [&](Vertex x, Vertex y, double w) {
    pair_sum.add(w * std::norm(value_at(f, x) - value_at(f, y)));
  });
  CompensatedSum energy;
  CompensatedSum potential;
  energy.add(0.5 * pair_sum.value());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double sq = std::norm(value_at(f, s[i]));
    energy.add(outside[i] * sq);
    potential.add(g.mu(s[i]) * W(s[i]) * sq);
  }
  FormValue out;
  out.energy_part = energy.value();
  out.potential_part = potential.value();
  out.total = out.energy_part + out.potential_part;
  return out;
}

GreensResidual greens_identity_residual(const WeightedGraph& g, const Potential& W, const VertexFunction& f,
                                        const FiniteFunction& u) {
  GreensResidual out;

  ComplexCompensatedSum lhs;
  for (const auto& [x, ux] : u) lhs.add(g.mu(x) * apply_formal(g, W, f, x) * std::conj(ux));
  out.operator_side = lhs.value();

  ComplexCompensatedSum rhs;
  if (f.finitely_supported()) {
    const FiniteFunction& fs = f.support();
    const std::vector<Vertex> t = joint_support(fs, u);
    ComplexCompensatedSum pairs;
    const auto outside = walk_pairs(g, t, [&](Vertex x, Vertex y, double w) {
      pairs.add(w * (value_at(fs, x) - value_at(fs, y)) * std::conj(value_at(u, x) - value_at(u, y)));
    });
    rhs.add(0.5 * pairs.value());
    for (std::size_t i = 0; i < t.size(); ++i) {
      rhs.add(outside[i] * value_at(fs, t[i]) * std::conj(value_at(u, t[i])));
    }
  } else {
    // Each unordered edge {x, y} touching supp(u) contributes once (the 1/2
    // cancels the two orientations).
    std::set<std::pair<Vertex, Vertex>> seen;
    for (const auto& [x, ux] : u) {
      const NeighborList list = g.neighbors(x);
      if (!list.complete) {
        throw Error(ErrorCode::DomainViolation,
                    "pair sum at " + std::to_string(x) + " needs a finitely supported f on a non-locally-finite vertex");
      }
      for (const auto& nb : list.entries) {
        if (nb.vertex == x) continue;
        const auto key = std::minmax(x, nb.vertex);
        if (!seen.insert(key).second) continue;
        rhs.add(nb.weight * (f(x) - f(nb.vertex)) * std::conj(ux - value_at(u, nb.vertex)));
      }
    }
  }
  for (const auto& [x, ux] : u) rhs.add(g.mu(x) * W(x) * f(x) * std::conj(ux));
  out.form_side = rhs.value();

  out.residual = std::abs(out.operator_side - out.form_side);
  out.scale = 1.0 + std::abs(out.operator_side) + std::abs(out.form_side);

  if (f.finitely_supported()) {
    const VertexFunction uf(u);
    ComplexCompensatedSum flip;
    for (const auto& [x, fx] : f.support()) flip.add(g.mu(x) * fx * std::conj(apply_formal(g, W, uf, x)));
    out.flip_residual = std::abs(out.operator_side - flip.value());
  }
  return out;
}

FormNorm form_norm_eval(const FiniteSection& section, const Eigen::VectorXd& u, double beta, double lambda0) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  if (!std::isfinite(lambda0)) throw Error(ErrorCode::NotLowerBounded, "lambda0 of the section is not available");
  const double squared = section.quadratic(u) + (beta - lambda0) * section.inner(u, u);
  return {lambda0, beta, std::sqrt(std::max(squared, 0.0))};
}

EnergyCheck finite_energy_check(const WeightedGraph& g, const Potential& W, const VertexFunction& f,
                                std::optional<double> tail_bound) {
  EnergyCheck out;
  if (f.finitely_supported()) {
    const FiniteFunction& fs = f.support();
    const FormValue q = form_Q_quadratic(g, Potential(), fs);
    CompensatedSum pot;
    for (const auto& [x, v] : fs) pot.add(g.mu(x) * std::abs(W(x)) * std::norm(v));
    out.finite = Tri::True;
    out.value = 2.0 * q.energy_part + pot.value();
    return out;
  }
  if (tail_bound) out.finite = std::isfinite(*tail_bound) ? Tri::True : Tri::False;
  return out;
}

}  // namespace gs
