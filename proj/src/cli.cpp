#include "gs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gs/error.hpp"
#include "gs/experiments.hpp"
#include "gs/forms.hpp"
#include "gs/operator.hpp"
#include "gs/solvers.hpp"

namespace gs {

using json = nlohmann::json;

namespace {

[[noreturn]] void spec_error(const std::string& what) { throw Error(ErrorCode::SpecParse, what); }

double number_field(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) spec_error(std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

// number | array | {"family": ...}
Sequence parse_sequence(const json& j, const std::string& what) {
  if (j.is_number()) {
    const double c = j.get<double>();
    return [c](std::int64_t) { return c; };
  }
  if (j.is_array()) {
    std::vector<double> values;
    for (const auto& v : j) {
      if (!v.is_number()) spec_error(what + " array must hold numbers");
      values.push_back(v.get<double>());
    }
    return [values, what](std::int64_t n) {
      if (n < 0 || static_cast<std::size_t>(n) >= values.size()) {
        throw Error(ErrorCode::InvalidArgument, what + " has no value at " + std::to_string(n));
      }
      return values[static_cast<std::size_t>(n)];
    };
  }
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    spec_error(what + " must be a number, an array or an object with a 'family'");
  }
  const std::string family = j["family"].get<std::string>();
  const double scale = number_field(j, "scale", 1.0);
  if (family == "constant") {
    const double c = number_field(j, "value", 1.0);
    return [c](std::int64_t) { return c; };
  }
  if (family == "geometric") {
    const double base = number_field(j, "base", 1.0);
    return [scale, base](std::int64_t n) { return scale * std::pow(base, static_cast<double>(n)); };
  }
  if (family == "polynomial") {
    const double exponent = number_field(j, "exponent", 1.0);
    const double offset = number_field(j, "offset", 0.0);
    return [scale, exponent, offset](std::int64_t n) {
      return scale * std::pow(static_cast<double>(n) + offset, exponent);
    };
  }
  spec_error(what + ": unknown family '" + family + "'");
}

Potential parse_potential(const json& j, const std::string& what) {
  if (j.is_object() && j.contains("values")) {
    if (!j["values"].is_array()) spec_error(what + ".values must be an array");
    std::vector<double> values;
    for (const auto& v : j["values"]) {
      if (!v.is_number()) spec_error(what + ".values must hold numbers");
      values.push_back(v.get<double>());
    }
    return Potential::from_values(values, number_field(j, "outside", 0.0));
  }
  if (j.is_array()) {
    std::vector<double> values;
    for (const auto& v : j) {
      if (!v.is_number()) spec_error(what + " array must hold numbers");
      values.push_back(v.get<double>());
    }
    return Potential::from_values(values, 0.0);
  }
  const Sequence seq = parse_sequence(j, what);
  return Potential([seq](Vertex x) { return seq(x); }, what);
}

std::vector<double> number_array(const json& j, const std::string& what) {
  if (!j.is_array()) spec_error(what + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) spec_error(what + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

WeightedGraph parse_explicit(const json& j) {
  if (!j.contains("mu")) spec_error("explicit graph needs 'mu'");
  const std::vector<double> mu = number_array(j["mu"], "mu");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] > 0.0) || !std::isfinite(mu[i])) spec_error("mu[" + std::to_string(i) + "] must be positive");
  }
  ExplicitGraphBuilder builder(mu);
  std::map<std::pair<Vertex, Vertex>, double> seen;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) spec_error("'edges' must be an array");
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
          !e[2].is_number()) {
        spec_error("each edge must be [x, y, weight]");
      }
      const Vertex x = e[0].get<Vertex>();
      const Vertex y = e[1].get<Vertex>();
      const double w = e[2].get<double>();
      if (x < 0 || y < 0 || static_cast<std::size_t>(std::max(x, y)) >= mu.size()) {
        spec_error("edge endpoint out of range");
      }
      if (x == y) spec_error("loop at vertex " + std::to_string(x));
      if (!(w > 0.0) || !std::isfinite(w)) spec_error("edge weights must be positive");
      const auto key = std::minmax(x, y);
      auto [it, inserted] = seen.emplace(key, w);
      if (!inserted) {
        if (it->second != w) spec_error("edge {" + std::to_string(x) + "," + std::to_string(y) + "} listed twice with different weights");
        continue;
      }
      builder.add_edge(x, y, w);
    }
  }
  if (j.contains("name") && j["name"].is_string()) builder.name(j["name"].get<std::string>());
  return builder.build();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Grid commands share the same default vector: u(i) = 2^{-i} in section order.
Eigen::VectorXd default_test_vector(std::size_t n) {
  Eigen::VectorXd u(n);
  for (std::size_t i = 0; i < n; ++i) u[static_cast<Eigen::Index>(i)] = std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(i, 1000)));
  return u;
}

class Runner {
 public:
  Runner(const RunConfig& config, json& summary) : cfg_(config), summary_(summary) {}

  void execute(const GraphSpec& spec) {
    spec_ = &spec;
    root_ = cfg_.root.value_or(spec.default_root);
    const std::string& c = cfg_.command;
    if (c == "deficiency") return deficiency();
    S_ = section_vertices();
    summary_["section_size"] = S_.size();
    if (c == "validate") return validate();
    if (c == "fc") return fc();
    if (c == "assemble") return assemble();
    if (c == "lambda0") return eigen();
    if (c == "resolvent") return resolvent();
    if (c == "positivity") return positivity();
    if (c == "greens") return greens();
    if (c == "kato") return kato();
    if (c == "coincide") return coincide();
    if (c == "core-approx") return core_approx();
    if (c == "stability") return stability();
    spec_error("unknown command '" + c + "'");
  }

  bool all_passed() const {
    for (const auto& [name, ok] : summary_["invariants"].items()) {
      if (!ok.get<bool>()) return false;
    }
    return true;
  }

 private:
  const WeightedGraph& g() const { return spec_->graph; }
  double tol(double fallback) const { return cfg_.tolerance.value_or(fallback); }

  void invariant(const std::string& name, bool ok) { summary_["invariants"][name] = ok; }

  void write(const std::string& name, const std::string& body) {
    const std::filesystem::path path = std::filesystem::path(cfg_.output_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << body;
    summary_["files"].push_back(name);
  }

  std::vector<Vertex> section_vertices() const {
    if (cfg_.radius) {
      if (*cfg_.radius < 0) spec_error("--radius must be >= 0");
      return ball_exhaustion(g(), root_, {*cfg_.radius}).subsets.front();
    }
    if (cfg_.size) {
      if (*cfg_.size == 0) spec_error("--size must be positive");
      try {
        return g().first_vertices(*cfg_.size);
      } catch (const Error&) {
        // No enumeration: grow balls around the root and keep the first `size`.
        for (int r = 0;; ++r) {
          auto ball = ball_exhaustion(g(), root_, {r}).subsets.front();
          if (ball.size() >= *cfg_.size) {
            ball.resize(*cfg_.size);
            return ball;
          }
          if (r > 0 && ball.size() == ball_exhaustion(g(), root_, {r - 1}).subsets.front().size()) return ball;
        }
      }
    }
    if (g().is_finite()) return g().first_vertices(*g().vertex_count());
    spec_error("an infinite graph needs --radius or --size");
  }

  FiniteSection section(const Potential& V) const { return dirichlet_section(g(), V, S_); }

  double default_alpha(const FiniteSection& sec) const {
    return cfg_.alpha.value_or(1.0 + std::max(0.0, -lambda0(sec).value));
  }

  void validate() {
    const ValidationReport rep = validate_graph(g(), S_);
    static const char* names[] = {"asymmetric", "loop", "degree_deficit", "nonpositive_measure"};
    std::string csv = "kind,x,y,detail\n";
    for (const auto& v : rep.violations) {
      csv += std::string(names[static_cast<int>(v.kind)]) + "," + std::to_string(v.x) + "," + std::to_string(v.y) +
             "," + fmt(v.detail) + "\n";
    }
    write("violations.csv", csv);
    summary_["results"] = {{"sampled", rep.sampled},
                           {"components", rep.components},
                           {"violations", rep.violations.size()}};
    invariant("graph_valid", rep.ok());
  }

  void fc() {
    std::string csv = "vertex,value,status\n";
    std::size_t infinite = 0, unknown = 0;
    for (Vertex x : S_) {
      try {
        const FcValue v = check_fc(g(), x);
        csv += std::to_string(x) + "," + fmt(v.value) + "," + (v.finite ? "finite" : "infinite") + "\n";
        if (!v.finite) ++infinite;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnboundedTail) throw;
        csv += std::to_string(x) + ",nan,unknown\n";
        ++unknown;
      }
    }
    write("fc.csv", csv);
    summary_["results"] = {{"infinite", infinite}, {"unknown", unknown}};
    invariant("fc_finite", infinite == 0 && unknown == 0);
  }

  void assemble() {
    const FiniteSection sec = section(spec_->potential);
    write("section.txt", sec.coordinate_text());
    std::string csv = "index,vertex,mu,degree,potential,interior\n";
    for (std::size_t i = 0; i < sec.size(); ++i) {
      csv += std::to_string(i) + "," + std::to_string(sec.vertices()[i]) + "," + fmt(sec.mu()[i]) + "," +
             fmt(sec.degree()[i]) + "," + fmt(sec.potential()[i]) + "," + (sec.interior()[i] ? "1" : "0") + "\n";
    }
    write("vertices.csv", csv);
    summary_["results"] = {{"nonzeros", sec.symmetric().nonZeros()}};
    invariant("symmetric", (sec.dense_symmetric() - sec.dense_symmetric().transpose()).cwiseAbs().maxCoeff() == 0.0);
  }

  void eigen() {
    const FiniteSection sec = section(spec_->potential);
    const EigenPair p = lambda0(sec, tol(1e-10));
    std::string csv = "vertex,value\n";
    for (std::size_t i = 0; i < sec.size(); ++i) csv += std::to_string(sec.vertices()[i]) + "," + fmt(p.vector[i]) + "\n";
    write("eigenvector.csv", csv);
    summary_["results"] = {{"lambda0", p.value}, {"residual", p.residual}, {"iterations", p.iterations}};
    invariant("eigen_residual", p.residual <= 1e-6 * (1.0 + std::abs(p.value)));
  }

  void resolvent() {
    const FiniteSection sec = section(spec_->potential);
    const double alpha = default_alpha(sec);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(sec.size());
    if (auto i = sec.index_of(root_)) {
      v.setZero();
      v[*i] = 1.0;
    }
    SolverOptions opts;
    opts.tol = tol(1e-10);
    const ResolventResult res = Resolvent(sec, alpha, opts).apply(v);
    std::string csv = "vertex,value\n";
    for (std::size_t i = 0; i < sec.size(); ++i) csv += std::to_string(sec.vertices()[i]) + "," + fmt(res.solution[i]) + "\n";
    write("resolvent.csv", csv);
    summary_["results"] = {{"alpha", alpha}, {"residual", res.residual}, {"iterations", res.iterations}};
    invariant("residual", res.residual <= opts.tol);
  }

  void positivity() {
    const FiniteSection sec = section(spec_->potential);
    const double alpha = default_alpha(sec);
    const PositivityReport rep = positivity_check(sec, alpha, cfg_.trials, tol(1e-12), cfg_.seed);
    write("positivity.csv", "trials,alpha,worst_margin\n" + std::to_string(rep.trials) + "," + fmt(alpha) + "," +
                                fmt(rep.worst_margin) + "\n");
    summary_["results"] = {{"alpha", alpha}, {"worst_margin", rep.worst_margin}, {"trials", rep.trials}};
    invariant("positivity", rep.passed);
  }

  void greens() {
    std::mt19937_64 rng(cfg_.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, S_.size() - 1);
    const double t = tol(1e-11);
    std::string csv = "trial,residual,scale,flip_residual\n";
    double worst = 0.0;
    bool ok = true;
    for (int trial = 0; trial < cfg_.trials; ++trial) {
      FiniteFunction f, u;
      const std::size_t m = 1 + pick(rng) % 8;
      for (std::size_t i = 0; i < m; ++i) {
        f[S_[pick(rng)]] = Complex(uni(rng), uni(rng));
        u[S_[pick(rng)]] = Complex(uni(rng), uni(rng));
      }
      const GreensResidual r = greens_identity_residual(g(), spec_->potential, VertexFunction(f), u);
      csv += std::to_string(trial) + "," + fmt(r.residual) + "," + fmt(r.scale) + "," +
             fmt(r.flip_residual.value_or(0.0)) + "\n";
      worst = std::max(worst, r.residual / (1.0 + r.scale));
      ok = ok && r.residual <= t * (1.0 + r.scale) && r.flip_residual.value_or(0.0) <= t * (1.0 + r.scale);
    }
    write("greens.csv", csv);
    summary_["results"] = {{"worst_relative_residual", worst}, {"trials", cfg_.trials}};
    invariant("greens_identity", ok);
  }

  void kato() {
    const Potential& W = spec_->potential;
    const Potential& W0 = spec_->has_potential2 ? spec_->potential2 : spec_->potential;
    const FiniteSection sec = section(W);
    const SpectralDecomposition spec = spectral_decomposition(sec);
    const double t = tol(1e-9);
    const double scale = 1.0 + spec.values.cwiseAbs().maxCoeff();
    std::string csv = "index,beta,residual,worst_margin,interior_checked\n";
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    const int count = std::min<int>(static_cast<int>(sec.size()), std::max(1, cfg_.trials));
    for (int i = 0; i < count; ++i) {
      const KatoReport rep =
          kato_inequality_check(g(), W, W0, S_, spec.vectors.col(i), spec.values[i], t * scale);
      csv += std::to_string(i) + "," + fmt(spec.values[i]) + "," + fmt(rep.residual) + "," + fmt(rep.worst_margin) +
             "," + std::to_string(rep.interior_checked) + "\n";
      worst = std::min(worst, rep.worst_margin);
      ok = ok && rep.worst_margin >= -t;
    }
    write("kato.csv", csv);
    summary_["results"] = {{"eigenpairs", count}, {"worst_margin", worst}};
    invariant("kato", ok);
  }

  void coincide() {
    const CoincidenceResult r =
        formsum_vs_friedrichs(g(), spec_->potential, spec_->potential2, S_, cfg_.alpha, cfg_.seed);
    write("coincide.csv", "section_size,alpha,matrix_discrepancy,scale,resolvent_drift\n" +
                              std::to_string(r.section_size) + "," + fmt(r.alpha) + "," +
                              fmt(r.max_matrix_discrepancy) + "," + fmt(r.scale) + "," + fmt(r.resolvent_drift) + "\n");
    summary_["results"] = {{"discrepancy", r.max_matrix_discrepancy},
                           {"scale", r.scale},
                           {"alpha", r.alpha},
                           {"resolvent_drift", r.resolvent_drift}};
    invariant("matrix_coincidence", r.max_matrix_discrepancy <= std::ldexp(1.0, -45) * r.scale);
    invariant("resolvent_coincidence", r.resolvent_drift <= tol(1e-10));
  }

  std::vector<std::int64_t> k_grid(std::vector<std::int64_t> fallback) const {
    return cfg_.k_grid.empty() ? fallback : cfg_.k_grid;
  }
  std::vector<double> r_grid(std::vector<double> fallback) const {
    return cfg_.r_grid.empty() ? fallback : cfg_.r_grid;
  }

  void core_approx() {
    std::vector<std::int64_t> ks;
    for (int k = 1; k <= 15; ++k) ks.push_back(k);
    const auto k_seq = k_grid(ks);
    const auto r_seq = r_grid({1, 2, 4, 8, 16});
    const CoreApproxTrace t =
        positive_core_approximation(g(), spec_->potential, S_, default_test_vector(S_.size()), k_seq, r_seq);
    std::string csv = "r,k,min_entry,form_error,l2_error,estimate_lhs,estimate_bound,estimate_margin\n";
    for (const auto& row : t.rows) {
      csv += fmt(row.r) + "," + std::to_string(row.k) + "," + fmt(row.min_entry) + "," + fmt(row.form_error) + "," +
             fmt(row.l2_error) + "," + fmt(row.estimate_lhs) + "," + fmt(row.estimate_bound) + "," +
             fmt(row.estimate_margin) + "\n";
    }
    write("core_approx.csv", csv);
    csv = "r,k,form_error,r_form_error,r_l2_error\n";
    for (std::size_t i = 0; i < t.diagonal.size(); ++i) {
      csv += fmt(t.diagonal[i].r) + "," + std::to_string(t.diagonal[i].k) + "," + fmt(t.diagonal[i].form_error) +
             "," + fmt(t.r_form_errors[i]) + "," + fmt(t.r_l2_errors[i]) + "\n";
    }
    write("core_diagonal.csv", csv);
    summary_["results"] = {{"shift", t.shift},
                           {"lambda0", t.lambda0},
                           {"worst_min_entry", t.worst_min_entry},
                           {"worst_estimate_margin", t.worst_estimate_margin}};
    invariant("nonnegative", t.worst_min_entry >= -1e-12);
    invariant("estimate", t.worst_estimate_margin >= -tol(1e-10));
    invariant("k_monotone", t.k_monotone);
    invariant("r_monotone", t.r_monotone);
  }

  void stability() {
    std::vector<std::int64_t> ks;
    for (std::int64_t k = 1; k <= 4096; k *= 2) ks.push_back(k);
    const auto k_seq = k_grid(ks);
    const auto r_seq = r_grid({1, 2, 4, 8, 16, 32, 64});
    const StabilityReport rep = stability_pipeline(g(), spec_->potential, spec_->potential2, S_,
                                                   default_test_vector(S_.size()), cfg_.alpha.value_or(1.0), k_seq,
                                                   r_seq, cfg_.seed);
    std::string csv = "r,k,resolvent_error,image_error,domination_margin\n";
    for (const auto& row : rep.grid) {
      csv += fmt(row.r) + "," + std::to_string(row.k) + "," + fmt(row.resolvent_error) + "," + fmt(row.image_error) +
             "," + fmt(row.domination_margin) + "\n";
    }
    write("stability_grid.csv", csv);
    csv = "r,k,w_error,w_image_error,rho_error,rho_image_error,commutation_residual,within_literal_bound\n";
    bool literal = true;
    double commutation = 0.0;
    for (const auto& s : rep.selections) {
      csv += fmt(s.r) + "," + std::to_string(s.k) + "," + fmt(s.w_error) + "," + fmt(s.w_image_error) + "," +
             fmt(s.rho_error) + "," + fmt(s.rho_image_error) + "," + fmt(s.commutation_residual) + "," +
             (s.within_literal_bound ? "1" : "0") + "\n";
      literal = literal && s.within_literal_bound;
      commutation = std::max(commutation, s.commutation_residual);
    }
    write("stability_selection.csv", csv);
    write("stability_k.csv", to_csv(rep.k_report));
    write("stability_r.csv", to_csv(rep.r_report));
    summary_["results"] = {{"shift", rep.shift},
                           {"alpha", rep.alpha},
                           {"a1", rep.fit.a1},
                           {"a2", rep.fit.a2},
                           {"inflation", rep.fit.inflation},
                           {"identity_discrepancy", rep.identity_discrepancy},
                           {"worst_domination_margin", rep.worst_domination_margin},
                           {"max_commutation_residual", commutation}};
    invariant("identity", rep.identity_discrepancy <= 1e-12);
    invariant("domination", rep.worst_domination_margin >= -1e-12);
    invariant("literal_bound", literal);
    invariant("k_monotone", rep.k_report.monotone);
  }

  void deficiency() {
    if (!spec_->b_seq || !spec_->mu_seq) spec_error("deficiency needs a birth_death graph spec");
    const std::size_t N = cfg_.size.value_or(1000);
    const double alpha = cfg_.alpha.value_or(1.0);
    const DeficiencyReport rep = deficiency_probe_birth_death(*spec_->b_seq, *spec_->mu_seq, spec_->potential, alpha, N);
    std::string csv = "n,mantissa,exponent,log_partial_sum\n";
    for (std::size_t n = 0; n <= N; ++n) {
      csv += std::to_string(n) + "," + fmt(rep.mantissa[n]) + "," + std::to_string(rep.exponent[n]) + "," +
             fmt(rep.log_partial_sums[n]) + "\n";
    }
    write("deficiency.csv", csv);
    summary_["results"] = {{"N", N},
                           {"alpha", alpha},
                           {"log_partial_sum", rep.log_partial_sums[N]},
                           {"growth_ratio", rep.growth_ratio},
                           {"classification", to_string(rep.classification)}};
    summary_["invariants"] = json::object();
  }

  const RunConfig& cfg_;
  json& summary_;
  const GraphSpec* spec_ = nullptr;
  Vertex root_ = 0;
  std::vector<Vertex> S_;
};

}  // namespace

GraphSpec parse_graph_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    spec_error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) spec_error("spec needs a string 'kind'");
  const std::string kind = j["kind"].get<std::string>();

  std::optional<Sequence> b_seq, mu_seq;
  std::optional<WeightedGraph> graph;
  if (kind == "birth_death") {
    if (!j.contains("b") || !j.contains("mu")) spec_error("birth_death needs 'b' and 'mu'");
    if (j["b"].is_array() && j["mu"].is_array()) {
      const auto b = number_array(j["b"], "b");
      const auto mu = number_array(j["mu"], "mu");
      if (mu.size() != b.size() + 1) spec_error("birth_death arrays need |mu| = |b| + 1");
      try {
        graph.emplace(make_birth_death(b, mu));
      } catch (const Error& e) {
        spec_error(e.what());
      }
    } else {
      std::optional<std::size_t> length;
      if (j.contains("length")) {
        if (!j["length"].is_number_unsigned() || j["length"].get<std::size_t>() < 1) {
          spec_error("'length' must be a positive integer");
        }
        length = j["length"].get<std::size_t>();
      }
      graph.emplace(make_birth_death(parse_sequence(j["b"], "b"), parse_sequence(j["mu"], "mu"), length));
    }
    b_seq = parse_sequence(j["b"], "b");
    mu_seq = parse_sequence(j["mu"], "mu");
  } else if (kind == "explicit") {
    graph.emplace(parse_explicit(j));
  } else if (kind == "lattice") {
    const double dim = number_field(j, "dim", 1.0);
    if (dim != 1.0 && dim != 2.0 && dim != 3.0) spec_error("lattice 'dim' must be 1, 2 or 3");
    const double w = number_field(j, "weight", 1.0);
    const double mu = number_field(j, "mu", 1.0);
    if (!(w > 0.0) || !(mu > 0.0)) spec_error("lattice weight and mu must be positive");
    graph.emplace(make_lattice(static_cast<int>(dim), w, mu));
  } else {
    spec_error("unknown graph kind '" + kind + "'");
  }

  GraphSpec spec{*graph, Potential(), Potential(), false, 0, b_seq, mu_seq};
  if (kind == "lattice") spec.default_root = lattice_vertex(std::vector<std::int64_t>(static_cast<std::size_t>(number_field(j, "dim", 1.0)), 0));
  if (j.contains("potential")) spec.potential = parse_potential(j["potential"], "potential");
  if (j.contains("potential2")) {
    spec.potential2 = parse_potential(j["potential2"], "potential2");
    spec.has_potential2 = true;
  }
  return spec;
}

const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> commands{"validate",   "fc",       "assemble", "lambda0",
                                                 "resolvent",  "positivity", "greens", "kato",
                                                 "coincide",   "core-approx", "stability", "deficiency"};
  return commands;
}

int run(const RunConfig& config) {
  json summary;
  summary["command"] = config.command;
  json params;
  params["graph"] = config.graph_spec_path;
  params["cmd"] = config.command;
  params["root"] = config.root ? json(*config.root) : json(nullptr);
  params["radius"] = config.radius ? json(*config.radius) : json(nullptr);
  params["size"] = config.size ? json(*config.size) : json(nullptr);
  params["alpha"] = config.alpha ? json(*config.alpha) : json(nullptr);
  params["tol"] = config.tolerance ? json(*config.tolerance) : json(nullptr);
  params["seed"] = config.seed;
  params["k_grid"] = config.k_grid;
  params["r_grid"] = config.r_grid;
  params["trials"] = config.trials;
  params["out"] = config.output_dir;
  summary["parameters"] = params;
  summary["invariants"] = json::object();
  summary["files"] = json::array();

  int status = kExitOk;
  try {
    std::filesystem::create_directories(config.output_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cannot create %s: %s\n", config.output_dir.c_str(), e.what());
    return kExitInvariant;
  }
  try {
    if (std::find(cli_commands().begin(), cli_commands().end(), config.command) == cli_commands().end()) {
      spec_error("unknown command '" + config.command + "'");
    }
    if (config.tolerance && !(*config.tolerance > 0.0)) spec_error("--tol must be positive");
    std::ifstream in(config.graph_spec_path, std::ios::binary);
    if (!in) spec_error("cannot read graph spec '" + config.graph_spec_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const GraphSpec spec = parse_graph_spec(text);
    summary["parameters"]["graph_spec"] = json::parse(text);

    Runner runner(config, summary);
    runner.execute(spec);
    status = runner.all_passed() ? kExitOk : kExitInvariant;
  } catch (const Error& e) {
    summary["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    switch (e.code()) {
      case ErrorCode::SpecParse: status = kExitSpec; break;
      case ErrorCode::NoConvergence: status = kExitNoConvergence; break;
      default: status = kExitInvariant; break;
    }
    std::fprintf(stderr, "%s\n", e.what());
  }
  summary["status"] = status == kExitOk ? "pass" : "fail";
  summary["exit_code"] = status;

  std::ofstream out(std::filesystem::path(config.output_dir) / "summary.json", std::ios::binary);
  out << summary.dump(2) << "\n";
  return status;
}

}  // namespace gs
