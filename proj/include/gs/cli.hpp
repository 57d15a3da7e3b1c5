#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gs/graph.hpp"
#include "gs/potential.hpp"

namespace gs {

struct RunConfig {
  std::string graph_spec_path;
  std::string command;
  std::optional<Vertex> root;  // default: 0, or the origin of a lattice
  std::optional<int> radius;
  std::optional<std::size_t> size;
  std::optional<double> alpha;
  std::optional<double> tolerance;  // each command has its own default
  std::uint64_t seed = 42;
  std::vector<std::int64_t> k_grid;
  std::vector<double> r_grid;
  int trials = 100;
  std::string output_dir = ".";
};

enum ExitStatus : int { kExitOk = 0, kExitInvariant = 1, kExitSpec = 2, kExitNoConvergence = 3 };

/// A parsed graph spec. Sequences are kept for the birth-death probe.
struct GraphSpec {
  WeightedGraph graph;
  Potential potential;
  Potential potential2;
  bool has_potential2 = false;
  Vertex default_root = 0;
  std::optional<Sequence> b_seq;
  std::optional<Sequence> mu_seq;
};

/// Parses the JSON graph format described in the README. Throws
/// Error(SpecParse) on malformed input.
GraphSpec parse_graph_spec(const std::string& json_text);

const std::vector<std::string>& cli_commands();

/// Runs one command, writing summary.json and the command's CSV files into
/// config.output_dir. Returns the process exit status.
int run(const RunConfig& config);

}  // namespace gs
