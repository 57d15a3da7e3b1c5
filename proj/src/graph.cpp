#include "gs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "gs/error.hpp"
#include "gs/summation.hpp"

namespace gs {

WeightedGraph::WeightedGraph(Oracles oracles) : oracles_(std::move(oracles)) {
  if (!oracles_.b || !oracles_.mu || !oracles_.deg || !oracles_.neighbors || !oracles_.contains) {
    throw Error(ErrorCode::InvalidArgument, "weighted graph needs b, mu, deg, neighbors and contains oracles");
  }
}

std::optional<Vertex> WeightedGraph::vertex_at(std::size_t index) const {
  if (!oracles_.enumerate) {
    throw Error(ErrorCode::InvalidArgument, "graph '" + oracles_.name + "' has no vertex enumeration");
  }
  return oracles_.enumerate(index);
}

std::vector<Vertex> WeightedGraph::first_vertices(std::size_t n) const {
  std::vector<Vertex> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = vertex_at(i);
    if (!v) break;
    out.push_back(*v);
  }
  return out;
}

// --- explicit graphs --------------------------------------------------------

ExplicitGraphBuilder::ExplicitGraphBuilder(std::vector<double> mu)
    : mu_(std::move(mu)), rows_(mu_.size()) {}

void ExplicitGraphBuilder::check_vertex(Vertex x) const {
  if (x < 0 || static_cast<std::size_t>(x) >= mu_.size()) {
    throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(x) + " out of range");
  }
}

ExplicitGraphBuilder& ExplicitGraphBuilder::add_edge(Vertex x, Vertex y, double weight) {
  set_weight(x, y, weight);
  set_weight(y, x, weight);
  return *this;
}

ExplicitGraphBuilder& ExplicitGraphBuilder::set_weight(Vertex x, Vertex y, double weight) {
  check_vertex(x);
  check_vertex(y);
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::NonPositiveWeight, "edge weight must be finite and non-negative");
  }
  if (weight == 0.0) {
    rows_[x].erase(y);
  } else {
    rows_[x][y] = weight;
  }
  return *this;
}

ExplicitGraphBuilder& ExplicitGraphBuilder::name(std::string name) {
  name_ = std::move(name);
  return *this;
}

namespace {

struct ExplicitData {
  std::vector<double> mu;
  std::vector<std::vector<Neighbor>> rows;
  std::vector<double> deg;

  bool in_range(Vertex x) const { return x >= 0 && static_cast<std::size_t>(x) < mu.size(); }
};

}  // namespace

WeightedGraph ExplicitGraphBuilder::build() const {
  auto data = std::make_shared<ExplicitData>();
  data->mu = mu_;
  data->rows.resize(rows_.size());
  data->deg.resize(rows_.size());
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    CompensatedSum sum;
    for (const auto& [y, w] : rows_[x]) {
      data->rows[x].push_back({y, w});
      sum.add(w);
    }
    data->deg[x] = sum.value();
  }

  WeightedGraph::Oracles o;
  o.b = [data](Vertex x, Vertex y) -> double {
    if (!data->in_range(x) || !data->in_range(y)) return 0.0;
    const auto& row = data->rows[x];
    auto it = std::lower_bound(row.begin(), row.end(), y,
                               [](const Neighbor& n, Vertex v) { return n.vertex < v; });
    return (it != row.end() && it->vertex == y) ? it->weight : 0.0;
  };
  o.mu = [data](Vertex x) {
    if (!data->in_range(x)) throw Error(ErrorCode::InvalidArgument, "vertex not in graph");
    return data->mu[x];
  };
  o.deg = [data](Vertex x) {
    if (!data->in_range(x)) throw Error(ErrorCode::InvalidArgument, "vertex not in graph");
    return data->deg[x];
  };
  o.neighbors = [data](Vertex x) {
    if (!data->in_range(x)) throw Error(ErrorCode::InvalidArgument, "vertex not in graph");
    return NeighborList{data->rows[x], true};
  };
  o.enumerate = [data](std::size_t i) -> std::optional<Vertex> {
    if (i < data->mu.size()) return static_cast<Vertex>(i);
    return std::nullopt;
  };
  o.contains = [data](Vertex x) { return data->in_range(x); };
  o.vertex_count = mu_.size();
  o.name = name_;
  return WeightedGraph(std::move(o));
}

// --- generator families -------------------------------------------------------

namespace {

double checked(const Sequence& seq, std::int64_t n, const char* what) {
  const double v = seq(n);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::NonPositiveWeight,
                std::string(what) + "(" + std::to_string(n) + ") = " + std::to_string(v));
  }
  return v;
}

}  // namespace

WeightedGraph make_birth_death(Sequence b_seq, Sequence mu_seq, std::optional<std::size_t> vertex_count) {
  if (vertex_count && *vertex_count == 0) {
    throw Error(ErrorCode::InvalidArgument, "birth-death chain needs at least one vertex");
  }
  const auto last = vertex_count ? std::optional<Vertex>(static_cast<Vertex>(*vertex_count) - 1)
                                 : std::nullopt;
  auto in_range = [last](Vertex x) { return x >= 0 && (!last || x <= *last); };

  WeightedGraph::Oracles o;
  o.b = [b_seq, in_range](Vertex x, Vertex y) -> double {
    if (!in_range(x) || !in_range(y)) return 0.0;
    if (y == x + 1) return checked(b_seq, x, "b");
    if (x == y + 1) return checked(b_seq, y, "b");
    return 0.0;
  };
  o.mu = [mu_seq, in_range](Vertex x) {
    if (!in_range(x)) throw Error(ErrorCode::InvalidArgument, "vertex not in chain");
    return checked(mu_seq, x, "mu");
  };
  o.deg = [b_seq, in_range, last](Vertex x) {
    if (!in_range(x)) throw Error(ErrorCode::InvalidArgument, "vertex not in chain");
    double d = 0.0;
    if (x > 0) d += checked(b_seq, x - 1, "b");
    if (!last || x < *last) d += checked(b_seq, x, "b");
    return d;
  };
  o.neighbors = [b_seq, in_range, last](Vertex x) {
    if (!in_range(x)) throw Error(ErrorCode::InvalidArgument, "vertex not in chain");
    NeighborList list;
    if (x > 0) list.entries.push_back({x - 1, checked(b_seq, x - 1, "b")});
    if (!last || x < *last) list.entries.push_back({x + 1, checked(b_seq, x, "b")});
    return list;
  };
  o.enumerate = [last](std::size_t i) -> std::optional<Vertex> {
    const auto v = static_cast<Vertex>(i);
    if (last && v > *last) return std::nullopt;
    return v;
  };
  o.contains = in_range;
  o.vertex_count = vertex_count;
  o.name = "birth_death";
  return WeightedGraph(std::move(o));
}

WeightedGraph make_birth_death(const std::vector<double>& b_values, const std::vector<double>& mu_values) {
  if (mu_values.size() != b_values.size() + 1) {
    throw Error(ErrorCode::InvalidArgument, "birth-death arrays need |mu| = |b| + 1");
  }
  for (std::size_t n = 0; n < b_values.size(); ++n) {
    if (!(b_values[n] > 0.0)) throw Error(ErrorCode::NonPositiveWeight, "b(" + std::to_string(n) + ") <= 0");
  }
  for (std::size_t n = 0; n < mu_values.size(); ++n) {
    if (!(mu_values[n] > 0.0)) throw Error(ErrorCode::NonPositiveWeight, "mu(" + std::to_string(n) + ") <= 0");
  }
  auto bv = std::make_shared<std::vector<double>>(b_values);
  auto mv = std::make_shared<std::vector<double>>(mu_values);
  return make_birth_death([bv](std::int64_t n) { return (*bv)[n]; },
                          [mv](std::int64_t n) { return (*mv)[n]; }, mu_values.size());
}

WeightedGraph make_path(std::size_t n, double weight, double mu) {
  ExplicitGraphBuilder builder(std::vector<double>(n, mu));
  for (std::size_t i = 0; i + 1 < n; ++i) builder.add_edge(i, i + 1, weight);
  return builder.name("path").build();
}

WeightedGraph make_star(std::size_t leaves, double weight, double mu) {
  ExplicitGraphBuilder builder(std::vector<double>(leaves + 1, mu));
  for (std::size_t i = 1; i <= leaves; ++i) builder.add_edge(0, i, weight);
  return builder.name("star").build();
}

WeightedGraph make_infinite_star(Sequence leaf_weight, double center_degree, std::size_t listed_leaves) {
  WeightedGraph::Oracles o;
  auto valid = [](Vertex x) { return x >= 0; };
  o.b = [leaf_weight](Vertex x, Vertex y) -> double {
    if (x < 0 || y < 0 || x == y) return 0.0;
    if (x == 0) return leaf_weight(y);
    if (y == 0) return leaf_weight(x);
    return 0.0;
  };
  o.mu = [valid](Vertex x) {
    if (!valid(x)) throw Error(ErrorCode::InvalidArgument, "vertex not in star");
    return 1.0;
  };
  o.deg = [leaf_weight, center_degree](Vertex x) { return x == 0 ? center_degree : leaf_weight(x); };
  o.neighbors = [leaf_weight, listed_leaves](Vertex x) {
    NeighborList list;
    if (x == 0) {
      for (std::size_t n = 1; n <= listed_leaves; ++n) {
        list.entries.push_back({static_cast<Vertex>(n), leaf_weight(static_cast<std::int64_t>(n))});
      }
      list.complete = false;
    } else {
      list.entries.push_back({0, leaf_weight(x)});
    }
    return list;
  };
  o.enumerate = [](std::size_t i) -> std::optional<Vertex> { return static_cast<Vertex>(i); };
  o.contains = valid;
  o.name = "infinite_star";
  return WeightedGraph(std::move(o));
}

// Lattice vertices pack up to three coordinates in 21-bit fields.
namespace {
constexpr int kLatticeBits = 21;
constexpr std::int64_t kLatticeOffset = std::int64_t{1} << (kLatticeBits - 1);
constexpr std::int64_t kLatticeMask = (std::int64_t{1} << kLatticeBits) - 1;
}  // namespace

Vertex lattice_vertex(const std::vector<std::int64_t>& coords) {
  Vertex v = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] <= -kLatticeOffset || coords[i] >= kLatticeOffset) {
      throw Error(ErrorCode::InvalidArgument, "lattice coordinate out of range");
    }
    v |= (coords[i] + kLatticeOffset) << (kLatticeBits * static_cast<int>(i));
  }
  return v;
}

std::vector<std::int64_t> lattice_coords(Vertex v, int dim) {
  std::vector<std::int64_t> c(dim);
  for (int i = 0; i < dim; ++i) c[i] = ((v >> (kLatticeBits * i)) & kLatticeMask) - kLatticeOffset;
  return c;
}

WeightedGraph make_lattice(int dim, double weight, double mu) {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::InvalidArgument, "lattice dimension must be 1, 2 or 3");
  if (!(weight > 0.0) || !(mu > 0.0)) throw Error(ErrorCode::NonPositiveWeight, "lattice weight and mu must be > 0");
  auto valid = [dim](Vertex x) { return x >= 0 && (x >> (kLatticeBits * dim)) == 0; };
  WeightedGraph::Oracles o;
  o.b = [dim, weight, valid](Vertex x, Vertex y) -> double {
    if (!valid(x) || !valid(y)) return 0.0;
    auto a = lattice_coords(x, dim);
    auto c = lattice_coords(y, dim);
    std::int64_t dist = 0;
    for (int i = 0; i < dim; ++i) dist += std::abs(a[i] - c[i]);
    return dist == 1 ? weight : 0.0;
  };
  o.mu = [mu, valid](Vertex x) {
    if (!valid(x)) throw Error(ErrorCode::InvalidArgument, "vertex not in lattice");
    return mu;
  };
  o.deg = [dim, weight](Vertex) { return 2.0 * dim * weight; };
  o.neighbors = [dim, weight](Vertex x) {
    NeighborList list;
    auto c = lattice_coords(x, dim);
    for (int i = 0; i < dim; ++i) {
      for (int s : {-1, 1}) {
        auto n = c;
        n[i] += s;
        list.entries.push_back({lattice_vertex(n), weight});
      }
    }
    return list;
  };
  o.contains = valid;
  o.name = "lattice";
  return WeightedGraph(std::move(o));
}

// --- operations -------------------------------------------------------------

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [kind](const Violation& v) { return v.kind == kind; }));
}

ValidationReport validate_graph(const WeightedGraph& g, const std::vector<Vertex>& sample) {
  if (sample.empty()) throw Error(ErrorCode::InvalidArgument, "validation sample is empty");
  ValidationReport report;
  report.sampled = sample.size();
  std::unordered_set<Vertex> in_sample(sample.begin(), sample.end());

  for (std::size_t i = 0; i < sample.size(); ++i) {
    const Vertex x = sample[i];
    const double mu = g.mu(x);
    if (!(mu > 0.0)) report.violations.push_back({ViolationKind::NonPositiveMeasure, x, x, mu});
    const double loop = g.b(x, x);
    if (loop != 0.0) report.violations.push_back({ViolationKind::Loop, x, x, loop});

    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      const Vertex y = sample[j];
      const double bxy = g.b(x, y);
      const double byx = g.b(y, x);
      if (bxy != byx) report.violations.push_back({ViolationKind::Asymmetric, x, y, bxy - byx});
    }

    const NeighborList list = g.neighbors(x);
    CompensatedSum listed;
    for (const auto& n : list.entries) {
      listed.add(n.weight);
      if (!in_sample.count(n.vertex) && n.vertex != x) {
        const double back = g.b(n.vertex, x);
        if (back != n.weight) report.violations.push_back({ViolationKind::Asymmetric, x, n.vertex, n.weight - back});
      }
    }
    const double deg = g.deg(x);
    if (listed.value() > deg + 1e-12 * (1.0 + deg)) {
      report.violations.push_back({ViolationKind::DegreeDeficit, x, x, listed.value() - deg});
    }
  }
  report.components = connected_components(g, sample).size();
  return report;
}

FcValue check_fc(const WeightedGraph& g, Vertex x, std::optional<double> tail_bound) {
  const NeighborList list = g.neighbors(x);
  if (!list.complete && !tail_bound) {
    throw Error(ErrorCode::UnboundedTail, "vertex " + std::to_string(x) + " has infinite support and no tail bound");
  }
  CompensatedSum sum;
  for (const auto& n : list.entries) sum.add(n.weight * n.weight / g.mu(n.vertex));
  if (!list.complete) {
    if (!std::isfinite(*tail_bound)) return {std::numeric_limits<double>::infinity(), false};
    sum.add(*tail_bound);
  }
  return {sum.value(), true};
}

std::vector<std::vector<Vertex>> connected_components(const WeightedGraph& g, const std::vector<Vertex>& subset) {
  const std::size_t n = subset.size();
  std::unordered_map<Vertex, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(subset[i], i);

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  for (std::size_t i = 0; i < n; ++i) {
    const NeighborList list = g.neighbors(subset[i]);
    if (list.complete) {
      for (const auto& nb : list.entries) {
        auto it = index.find(nb.vertex);
        if (nb.weight > 0.0 && it != index.end()) unite(i, it->second);
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && g.b(subset[i], subset[j]) > 0.0) unite(i, j);
      }
    }
  }

  std::vector<std::vector<Vertex>> components;
  std::unordered_map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    auto [it, fresh] = slot.emplace(r, components.size());
    if (fresh) components.emplace_back();
    components[it->second].push_back(subset[i]);
  }
  return components;
}

Exhaustion ball_exhaustion(const WeightedGraph& g, Vertex root, const std::vector<int>& radii,
                           std::size_t vertex_cap) {
  if (radii.empty()) throw Error(ErrorCode::InvalidArgument, "no radii given");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 0 || (i > 0 && radii[i] <= radii[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "radii must be non-negative and strictly increasing");
    }
  }
  if (!g.contains(root)) throw Error(ErrorCode::InvalidArgument, "root not in graph");

  Exhaustion ex;
  ex.root = root;
  ex.radii = radii;

  std::vector<Vertex> order{root};
  std::unordered_set<Vertex> seen{root};
  std::size_t frontier_begin = 0;
  int radius = 0;
  for (int target : radii) {
    while (radius < target) {
      const std::size_t frontier_end = order.size();
      for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
        const NeighborList list = g.neighbors(order[i]);
        if (!list.complete) {
          throw Error(ErrorCode::NotLocallyFinite, "vertex " + std::to_string(order[i]) + " has infinite support");
        }
        for (const auto& nb : list.entries) {
          if (nb.weight > 0.0 && seen.insert(nb.vertex).second) {
            order.push_back(nb.vertex);
            if (order.size() > vertex_cap) {
              throw Error(ErrorCode::NotLocallyFinite, "ball exceeds vertex cap " + std::to_string(vertex_cap));
            }
          }
        }
      }
      frontier_begin = frontier_end;
      ++radius;
    }
    ex.subsets.push_back(order);
  }
  return ex;
}

}  // namespace gs
