#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sympla/jobs.hpp"

namespace {

int readInput(const std::string& path, std::string& text) {
  if (path.empty() || path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
    return 0;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "sympla: cannot open input file " << path << "\n";
    return sympla::kExitSchemaError;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  text = buf.str();
  return 0;
}

int writeOutput(const std::string& path, const std::string& report) {
  if (path.empty() || path == "-") {
    std::cout << report;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "sympla: cannot open output file " << path << "\n";
    return sympla::kExitSchemaError;
  }
  out << report;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symplectic index toolkit: batch verification jobs on JSON inputs"};
  app.require_subcommand(1);

  std::string input_path, output_path;
  sympla::JobOptions opt;

  app.add_option("-i,--input", input_path, "Input JSON file (default: stdin)");
  app.add_option("-o,--output", output_path, "Report file (default: stdout)");
  app.add_option("--tol-rank", opt.tol.rank_rel, "Relative rank cutoff");
  app.add_option("--tol-eig", opt.tol.eig_rel, "Relative inertia cutoff");
  app.add_option("--mesh", opt.tol.mesh, "Elements per unit interval");
  app.add_option("--refine-depth", opt.tol.refine_depth, "Bisection depth");
  app.add_option("--seed", opt.tol.seed, "Seed for deterministic perturbations");
  app.add_flag("--no-meta", opt.no_meta, "Omit the volatile meta block");

  const char* commands[] = {"maslov",  "triangular", "maslov-type", "splitting",
                            "iterate", "mod2",       "morse",       "relations"};
  const char* blurbs[] = {
      "Index of a path of Lagrangian pairs (optionally localized)",
      "Endpoint formula for pair paths in triangular position vs the engine",
      "Index of a symplectic path against a product-space Lagrangian",
      "Splitting numbers: spectral-arc oracle and block-triangular formula",
      "Iterated path index and the frame-change identity",
      "Parity of the index of a real symplectic path",
      "Morse index of a periodic functional: Galerkin vs Hamiltonian pipeline",
      "Gap and norm estimates for linear relations"};
  for (size_t i = 0; i < 8; ++i) {
    app.add_subcommand(commands[i], blurbs[i])->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);
  std::string command = app.get_subcommands().front()->get_name();

  std::string text;
  if (int rc = readInput(input_path, text); rc != 0) return rc;
  sympla::JobOutcome outcome = sympla::runJob(command, text, opt);
  if (int rc = writeOutput(output_path, outcome.report); rc != 0) return rc;
  return outcome.exit_code;
}
