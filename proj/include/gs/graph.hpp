#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gs {

using Vertex = std::int64_t;
using Complex = std::complex<double>;

struct Neighbor {
  Vertex vertex;
  double weight;
};

// Support of b(x, .). When `complete` is false the entries are only a finite
// prefix of an infinite support.
struct NeighborList {
  std::vector<Neighbor> entries;
  bool complete = true;
};

/// A weighted graph (X, b, mu) given by coefficient oracles.
///
/// X is countable and may be infinite; every oracle is pure, so a graph value
/// can be read from several threads. The degree oracle returns
/// sum_y b(x, y) over all of X, which is what Dirichlet sections and energy
/// sums need even when only a finite part of the graph is ever touched.
class WeightedGraph {
 public:
  struct Oracles {
    std::function<double(Vertex, Vertex)> b;
    std::function<double(Vertex)> mu;
    std::function<double(Vertex)> deg;
    std::function<NeighborList(Vertex)> neighbors;
    // index -> vertex; returns nullopt past the end of a finite vertex set.
    std::function<std::optional<Vertex>(std::size_t)> enumerate;
    std::function<bool(Vertex)> contains;
    std::optional<std::size_t> vertex_count;  // nullopt: infinite
    std::string name;
  };

  explicit WeightedGraph(Oracles oracles);

  double b(Vertex x, Vertex y) const { return oracles_.b(x, y); }
  double mu(Vertex x) const { return oracles_.mu(x); }
  double deg(Vertex x) const { return oracles_.deg(x); }
  NeighborList neighbors(Vertex x) const { return oracles_.neighbors(x); }
  bool contains(Vertex x) const { return oracles_.contains(x); }

  std::optional<Vertex> vertex_at(std::size_t index) const;
  std::optional<std::size_t> vertex_count() const { return oracles_.vertex_count; }
  bool is_finite() const { return oracles_.vertex_count.has_value(); }
  const std::string& name() const { return oracles_.name; }

  // First n vertices of the enumeration (fewer if the graph is smaller).
  std::vector<Vertex> first_vertices(std::size_t n) const;

 private:
  Oracles oracles_;
};

/// Mutable edge table for explicit finite graphs on vertices 0..n-1.
///
/// `set_weight` writes one direction only, which is how deliberately broken
/// inputs (asymmetric weights, loops) are built for validation tests.
class ExplicitGraphBuilder {
 public:
  explicit ExplicitGraphBuilder(std::vector<double> mu);

  ExplicitGraphBuilder& add_edge(Vertex x, Vertex y, double weight);
  ExplicitGraphBuilder& set_weight(Vertex x, Vertex y, double weight);
  ExplicitGraphBuilder& name(std::string name);

  WeightedGraph build() const;

 private:
  void check_vertex(Vertex x) const;

  std::vector<double> mu_;
  std::vector<std::map<Vertex, double>> rows_;
  std::string name_ = "explicit";
};

// Real sequence indexed by n = 0, 1, 2, ...
using Sequence = std::function<double(std::int64_t)>;

/// Birth-death chain on {0, 1, 2, ...}: b(n, n+1) = b_seq(n), mu(n) = mu_seq(n).
/// With `vertex_count` set the chain is the finite path 0..vertex_count-1.
/// Values <= 0 raise NonPositiveWeight when they are evaluated.
WeightedGraph make_birth_death(Sequence b_seq, Sequence mu_seq,
                               std::optional<std::size_t> vertex_count = std::nullopt);
/// Array form: b_values.size() + 1 vertices; every value is checked up front.
WeightedGraph make_birth_death(const std::vector<double>& b_values,
                               const std::vector<double>& mu_values);

WeightedGraph make_path(std::size_t n, double weight = 1.0, double mu = 1.0);
WeightedGraph make_star(std::size_t leaves, double weight = 1.0, double mu = 1.0);
/// Center 0 joined to leaves 1, 2, ... with b(0, n) = leaf_weight(n). Not
/// locally finite; `listed_leaves` bounds the prefix returned by neighbors(0).
/// `center_degree` must equal sum_n leaf_weight(n).
WeightedGraph make_infinite_star(Sequence leaf_weight, double center_degree,
                                 std::size_t listed_leaves = 64);
/// Z^dim with constant edge weight and constant measure.
WeightedGraph make_lattice(int dim, double weight = 1.0, double mu = 1.0);
Vertex lattice_vertex(const std::vector<std::int64_t>& coords);
std::vector<std::int64_t> lattice_coords(Vertex v, int dim);

// ---------------------------------------------------------------------------

enum class ViolationKind { Asymmetric, Loop, DegreeDeficit, NonPositiveMeasure };

struct Violation {
  ViolationKind kind;
  Vertex x;
  Vertex y;
  double detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::size_t sampled = 0;
  std::size_t components = 0;  // connected components of the sample

  bool ok() const { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
};

/// Checks (b1), (b2), the degree bound and mu > 0 on `sample`.
ValidationReport validate_graph(const WeightedGraph& g, const std::vector<Vertex>& sample);

struct FcValue {
  double value = 0.0;  // sum_y b(x,y)^2 / mu(y), +inf when certified infinite
  bool finite = true;
};

/// Finiteness condition at x. For an incomplete neighbor list the caller
/// must supply a bound on the remaining tail of sum_y b(x,y)^2/mu(y).
FcValue check_fc(const WeightedGraph& g, Vertex x, std::optional<double> tail_bound = std::nullopt);

std::vector<std::vector<Vertex>> connected_components(const WeightedGraph& g,
                                                      const std::vector<Vertex>& subset);

struct Exhaustion {
  Vertex root = 0;
  std::vector<int> radii;
  std::vector<std::vector<Vertex>> subsets;
};

/// Combinatorial balls around `root`, listed in breadth-first order.
Exhaustion ball_exhaustion(const WeightedGraph& g, Vertex root, const std::vector<int>& radii,
                           std::size_t vertex_cap = 1'000'000);

}  // namespace gs
