#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gs/functions.hpp"
#include "gs/graph.hpp"
#include "gs/operator.hpp"
#include "gs/potential.hpp"

namespace gs::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline std::size_t index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

struct RandomGraph {
  WeightedGraph graph;
  std::vector<double> mu;
  std::vector<std::vector<double>> b;  // dense copy, for brute-force oracles
};

// Connected graph on 0..n-1: a random spanning tree plus `extra` random edges.
// Weights in (0, wmax], measures in (0.1, 10].
inline RandomGraph random_graph(Rng& rng, std::size_t n, std::size_t extra, double wmax = 10.0) {
  std::vector<double> mu(n);
  for (auto& m : mu) m = 10.0 - uniform(rng, 0.0, 9.9);
  std::vector<std::vector<double>> b(n, std::vector<double>(n, 0.0));
  auto weight = [&] { return wmax - uniform(rng, 0.0, wmax * (1.0 - 1e-9)); };
  for (std::size_t v = 1; v < n; ++v) {
    const std::size_t u = index(rng, 0, v - 1);
    b[u][v] = b[v][u] = weight();
  }
  for (std::size_t e = 0; e < extra && n > 1; ++e) {
    const std::size_t x = index(rng, 0, n - 1), y = index(rng, 0, n - 1);
    if (x != y) b[x][y] = b[y][x] = weight();
  }
  ExplicitGraphBuilder builder(mu);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (b[x][y] > 0) builder.add_edge(static_cast<Vertex>(x), static_cast<Vertex>(y), b[x][y]);
    }
  }
  return {builder.build(), mu, b};
}

inline std::vector<double> random_values(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

inline std::vector<Vertex> iota_vertices(std::size_t n) {
  std::vector<Vertex> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<Vertex>(i);
  return s;
}

// Random complex function supported on at most `count` vertices of 0..n-1.
inline FiniteFunction random_function(Rng& rng, std::size_t n, std::size_t count) {
  FiniteFunction f;
  for (std::size_t i = 0; i < count; ++i) {
    f[static_cast<Vertex>(index(rng, 0, n - 1))] = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
  }
  return f;
}

inline Eigen::VectorXd random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = uniform(rng, lo, hi);
  return v;
}

// Action matrix of the Dirichlet section built straight from the definition.
inline Eigen::MatrixXd dense_action(const WeightedGraph& g, const Potential& V, const std::vector<Vertex>& S) {
  const auto n = static_cast<Eigen::Index>(S.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, i) = g.deg(S[i]) / g.mu(S[i]) + V(S[i]);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) A(i, j) = -g.b(S[i], S[j]) / g.mu(S[i]);
    }
  }
  return A;
}

inline Eigen::VectorXd measure(const WeightedGraph& g, const std::vector<Vertex>& S) {
  Eigen::VectorXd m(static_cast<Eigen::Index>(S.size()));
  for (std::size_t i = 0; i < S.size(); ++i) m[static_cast<Eigen::Index>(i)] = g.mu(S[i]);
  return m;
}

inline double mu_norm(const Eigen::VectorXd& mu, const Eigen::VectorXd& v) {
  return std::sqrt((mu.array() * v.array().square()).sum());
}

}  // namespace gs::testing
