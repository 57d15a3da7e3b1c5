#include "gs/operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_set>

#include "gs/error.hpp"
#include "gs/summation.hpp"

namespace gs {

Tri in_domain_F(const WeightedGraph& g, const VertexFunction& f, Vertex x, std::optional<double> tail_bound) {
  if (f.finitely_supported()) return Tri::True;
  const NeighborList list = g.neighbors(x);
  for (const auto& n : list.entries) {
    if (!std::isfinite(std::abs(f(n.vertex)))) return Tri::False;
  }
  if (list.complete) return Tri::True;
  if (!tail_bound) return Tri::Unknown;
  return std::isfinite(*tail_bound) ? Tri::True : Tri::False;
}

Complex apply_formal(const WeightedGraph& g, const Potential& V, const VertexFunction& f, Vertex x,
                     std::optional<double> tail_bound) {
  const Tri dom = in_domain_F(g, f, x, tail_bound);
  if (dom != Tri::True) {
    throw Error(ErrorCode::DomainViolation,
                std::string("sum_y b(x,y)|f(y)| at x = ") + std::to_string(x) + " is " + to_string(dom));
  }
  const double mu = g.mu(x);
  const double deg = g.deg(x);
  if (!std::isfinite(deg)) throw Error(ErrorCode::MissingDegree, "deg(" + std::to_string(x) + ")");

  ComplexCompensatedSum coupling;
  if (f.finitely_supported()) {
    for (const auto& [y, value] : f.support()) {
      if (y != x) coupling.add(g.b(x, y) * value);
    }
  } else {
    for (const auto& n : g.neighbors(x).entries) {
      if (n.vertex != x) coupling.add(n.weight * f(n.vertex));
    }
  }
  return (deg / mu + V(x)) * f(x) - coupling.value() / mu;
}

Potential truncate_negative_part(const Potential& V, std::int64_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "truncation level must be >= 1");
  const double level = static_cast<double>(k);
  const Potential plus = V.plus();
  const Potential minus = V.minus();
  return Potential([plus, minus, level](Vertex x) { return plus(x) - std::min(minus(x), level); },
                   V.label() + "^(" + std::to_string(k) + ")");
}

Potential truncate_above(const Potential& W, std::int64_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "truncation level must be >= 1");
  const double level = static_cast<double>(k);
  return Potential(
      [W, level](Vertex x) {
        const double w = W(x);
        if (w < 0.0) throw Error(ErrorCode::NegativeInput, "W(" + std::to_string(x) + ") < 0");
        return std::min(w, level);
      },
      "min(" + W.label() + "," + std::to_string(k) + ")");
}

// --- FiniteSection ----------------------------------------------------------

std::optional<std::size_t> FiniteSection::index_of(Vertex x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double FiniteSection::inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  return (mu_.array() * u.array() * v.array()).sum();
}

double FiniteSection::norm(const Eigen::VectorXd& u) const { return std::sqrt(inner(u, u)); }

double FiniteSection::quadratic(const Eigen::VectorXd& u) const {
  const Eigen::VectorXd s = to_symmetric(u);
  return s.dot(symmetric_ * s);
}

FiniteSection FiniteSection::with_added_potential(const Eigen::VectorXd& extra) const {
  if (static_cast<std::size_t>(extra.size()) != size()) {
    throw Error(ErrorCode::IndexMismatch, "potential vector has the wrong length");
  }
  FiniteSection out = *this;
  out.potential_ += extra;
  for (std::size_t i = 0; i < size(); ++i) {
    out.symmetric_.coeffRef(i, i) += extra[i];
    out.action_.coeffRef(i, i) += extra[i];
  }
  return out;
}

FiniteSection FiniteSection::shifted(double c) const {
  return with_added_potential(Eigen::VectorXd::Constant(size(), c));
}

std::string FiniteSection::coordinate_text() const {
  std::string out;
  char line[96];
  for (int r = 0; r < symmetric_.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(symmetric_, r); it; ++it) {
      std::snprintf(line, sizeof line, "%d %d %.17g\n", r, static_cast<int>(it.col()), it.value());
      out += line;
    }
  }
  return out;
}

FiniteSection dirichlet_section(const WeightedGraph& g, const Potential& V, const std::vector<Vertex>& S) {
  FiniteSection sec;
  const std::size_t n = S.size();
  sec.vertices_ = S;
  for (std::size_t i = 0; i < n; ++i) {
    if (!sec.index_.emplace(S[i], i).second) {
      throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(S[i]) + " repeated in section");
    }
  }
  sec.mu_.resize(n);
  sec.degree_.resize(n);
  sec.potential_.resize(n);
  sec.interior_.assign(n, true);

  std::vector<NeighborList> lists(n);
  bool all_complete = true;
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex x = S[i];
    sec.mu_[i] = g.mu(x);
    double deg;
    try {
      deg = g.deg(x);
    } catch (const Error& e) {
      throw Error(ErrorCode::MissingDegree, "deg(" + std::to_string(x) + "): " + e.what());
    }
    if (!std::isfinite(deg)) throw Error(ErrorCode::MissingDegree, "deg(" + std::to_string(x) + ") unavailable");
    sec.degree_[i] = deg;
    sec.potential_[i] = V(x);
    lists[i] = g.neighbors(x);
    all_complete = all_complete && lists[i].complete;
    if (!lists[i].complete) sec.interior_[i] = false;
    for (const auto& nb : lists[i].entries) {
      if (nb.weight > 0.0 && !sec.index_.count(nb.vertex)) sec.interior_[i] = false;
    }
  }
  sec.sqrt_mu_ = sec.mu_.cwiseSqrt();

  // One b evaluation per unordered pair keeps B exactly symmetric.
  struct Pair {
    std::size_t i, j;
    double w;
  };
  std::vector<Pair> pairs;
  if (all_complete) {
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& nb : lists[i].entries) {
        auto it = sec.index_.find(nb.vertex);
        if (it == sec.index_.end() || it->second <= i) continue;
        const double w = g.b(S[i], nb.vertex);
        if (w != 0.0) pairs.push_back({i, it->second, w});
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double w = g.b(S[i], S[j]);
        if (w != 0.0) pairs.push_back({i, j, w});
      }
    }
  }

  std::vector<Eigen::Triplet<double>> sym, act;
  sym.reserve(n + 2 * pairs.size());
  act.reserve(n + 2 * pairs.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double d = sec.degree_[i] / sec.mu_[i] + sec.potential_[i];
    sym.emplace_back(i, i, d);
    act.emplace_back(i, i, d);
  }
  for (const auto& p : pairs) {
    const double s = -p.w / std::sqrt(sec.mu_[p.i] * sec.mu_[p.j]);
    sym.emplace_back(p.i, p.j, s);
    sym.emplace_back(p.j, p.i, s);
    act.emplace_back(p.i, p.j, -p.w / sec.mu_[p.i]);
    act.emplace_back(p.j, p.i, -p.w / sec.mu_[p.j]);
  }
  sec.symmetric_.resize(n, n);
  sec.symmetric_.setFromTriplets(sym.begin(), sym.end());
  sec.action_.resize(n, n);
  sec.action_.setFromTriplets(act.begin(), act.end());
  return sec;
}

FiniteFunction to_function(const FiniteSection& section, const Eigen::VectorXd& u) {
  FiniteFunction f;
  for (std::size_t i = 0; i < section.size(); ++i) {
    if (u[i] != 0.0) f.emplace(section.vertices()[i], u[i]);
  }
  return f;
}

KatoReport kato_inequality_check(const WeightedGraph& g, const Potential& W, const Potential& W0,
                                 const std::vector<Vertex>& S, const Eigen::VectorXd& f, double beta, double tol) {
  const FiniteSection sec = dirichlet_section(g, W, S);
  if (static_cast<std::size_t>(f.size()) != sec.size()) {
    throw Error(ErrorCode::IndexMismatch, "eigenvector length differs from section size");
  }
  for (Vertex x : S) {
    if (W(x) < W0(x)) throw Error(ErrorCode::InvalidArgument, "W < W0 at vertex " + std::to_string(x));
  }

  KatoReport report;
  const double fnorm = sec.norm(f);
  const double finf = f.cwiseAbs().maxCoeff();
  if (fnorm == 0.0) throw Error(ErrorCode::NotAnEigenvector, "zero vector");
  report.residual = sec.norm(sec.apply(f) - beta * f) / fnorm;
  if (report.residual > tol) {
    throw Error(ErrorCode::NotAnEigenvector, "residual " + std::to_string(report.residual) + " exceeds tolerance");
  }

  const VertexFunction abs_f(modulus(to_function(sec, f)));
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sec.size(); ++i) {
    if (!sec.interior()[i]) continue;
    const Vertex x = S[i];
    const double lhs = apply_formal(g, W0, abs_f, x).real();
    const double margin = (beta * std::abs(f[i]) - lhs) / finf;
    ++report.interior_checked;
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst_vertex = x;
    }
  }
  if (report.interior_checked == 0) report.worst_margin = 0.0;
  report.passed = report.worst_margin >= -tol;
  return report;
}

}  // namespace gs
