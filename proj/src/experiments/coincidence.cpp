#include <algorithm>
#include <cmath>
#include <random>

#include "gs/error.hpp"
#include "gs/experiments.hpp"

namespace gs {

namespace {

double max_abs_difference(const SparseMatrix& a, const SparseMatrix& b) {
  const SparseMatrix d = a - b;
  double worst = 0.0;
  for (int r = 0; r < d.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(d, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

std::vector<Eigen::VectorXd> probe_vectors(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd random(n);
  for (std::size_t i = 0; i < n; ++i) random[i] = unit(rng);
  Eigen::VectorXd first = Eigen::VectorXd::Zero(n);
  first[0] = 1.0;
  return {Eigen::VectorXd::Ones(n), first, random};
}

CoincidenceLevel compare_paths(const WeightedGraph& g, const Potential& V1, const Potential& V2,
                               const std::vector<Vertex>& S, std::optional<double> alpha, std::uint64_t seed,
                               double* scale) {
  if (S.empty()) throw Error(ErrorCode::InvalidArgument, "empty section");
  const std::vector<double> v2 = V2.values(S);
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (v2[i] < 0.0) throw Error(ErrorCode::NegativePerturbation, "V2 < 0 at vertex " + std::to_string(S[i]));
  }
  const FiniteSection low = dirichlet_section(g, V1, S);
  const FiniteSection path_a = low.with_added_potential(Eigen::Map<const Eigen::VectorXd>(v2.data(), v2.size()));
  const FiniteSection path_b = dirichlet_section(g, V1 + V2, S);

  CoincidenceLevel level;
  level.section_size = S.size();
  level.matrix_discrepancy = std::max(max_abs_difference(path_a.symmetric(), path_b.symmetric()),
                                      max_abs_difference(path_a.action(), path_b.action()));
  if (scale) {
    *scale = 1.0 + std::max(path_a.symmetric().diagonal().cwiseAbs().maxCoeff(),
                            path_b.symmetric().diagonal().cwiseAbs().maxCoeff());
  }
  level.alpha = alpha ? *alpha : 1.0 + std::max(0.0, -lambda0(low).value);

  const Resolvent res_a(path_a, level.alpha);
  const Resolvent res_b(path_b, level.alpha);
  for (const auto& v : probe_vectors(S.size(), seed)) {
    const Eigen::VectorXd ra = res_a.apply(v).solution;
    const Eigen::VectorXd rb = res_b.apply(v).solution;
    level.resolvent_drift = std::max(level.resolvent_drift, path_a.norm(ra - rb) / (1.0 + path_a.norm(ra)));
  }
  return level;
}

}  // namespace

CoincidenceResult formsum_vs_friedrichs(const WeightedGraph& g, const Potential& V1, const Potential& V2,
                                        const std::vector<Vertex>& S, std::optional<double> alpha,
                                        std::uint64_t seed) {
  CoincidenceResult out;
  const CoincidenceLevel level = compare_paths(g, V1, V2, S, alpha, seed, &out.scale);
  out.max_matrix_discrepancy = level.matrix_discrepancy;
  out.alpha = level.alpha;
  out.section_size = level.section_size;
  out.resolvent_drift = level.resolvent_drift;
  return out;
}

std::vector<CoincidenceLevel> coincidence_over_exhaustion(const WeightedGraph& g, const Potential& V1,
                                                          const Potential& V2, const Exhaustion& exhaustion,
                                                          std::optional<double> alpha, std::uint64_t seed) {
  std::vector<CoincidenceLevel> levels;
  for (const auto& subset : exhaustion.subsets) levels.push_back(compare_paths(g, V1, V2, subset, alpha, seed, nullptr));
  return levels;
}

}  // namespace gs
