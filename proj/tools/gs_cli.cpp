#include <CLI11.hpp>

#include "gs/cli.hpp"

int main(int argc, char** argv) {
  gs::RunConfig cfg;
  CLI::App app{"Weighted-graph Schroedinger operator experiments"};
  app.add_option("--graph", cfg.graph_spec_path, "graph spec (JSON)")->required();
  app.add_option("--cmd", cfg.command, "command")->required()->check(CLI::IsMember(gs::cli_commands()));
  app.add_option("--root", cfg.root, "root vertex of the section");
  auto* radius = app.add_option("--radius", cfg.radius, "section = ball of this radius");
  app.add_option("--size", cfg.size, "section = first N vertices (chain length N for deficiency)")->excludes(radius);
  app.add_option("--alpha", cfg.alpha, "spectral shift");
  app.add_option("--tol", cfg.tolerance, "tolerance override");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--k-grid", cfg.k_grid, "truncation levels")->delimiter(',');
  app.add_option("--r-grid", cfg.r_grid, "resolvent parameters")->delimiter(',');
  app.add_option("--trials", cfg.trials, "random trials / eigenpairs checked");
  app.add_option("--out", cfg.output_dir, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gs::kExitSpec;
  }
  return gs::run(cfg);
}
