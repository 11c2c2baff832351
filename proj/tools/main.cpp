// Command-line front end for the entanglement toolkit. All numerics live in
// the headers under include/qent; this file only parses flags.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qent/cli.hpp"

namespace {

struct SharedFlags {
  std::string grid;
  std::string range;
};

void add_state_flags(CLI::App* cmd, qent::cli::RunConfig& cfg) {
  cmd->add_option("--state", cfg.state_id,
                  "Named state id (psi1..psi10, zeta0, zeta1, psi8b, psi9b, "
                  "ghz4, w4, chi00, chi11, ...)");
  cmd->add_option("--ket", cfg.ket_expr,
                  "Ket expression, e.g. \"(|0001>+|0010>+|0100>+|1000>)/2\"; "
                  "tensor operator is '(x)', scalars allow n, n^(p/2), "
                  "sqrt(n), i and '*' products");
  cmd->add_flag("--chi", cfg.use_chi, "Use the chi(theta, phi) family");
  cmd->add_option("--theta", cfg.theta, "chi family angle theta (radians)");
  cmd->add_option("--phi", cfg.phi, "chi family angle phi (radians)");
  cmd->add_option("--graph", cfg.graph_bits,
                  "Graph-state edge bits b0..b5 over edges "
                  "(1,2)(1,3)(1,4)(2,3)(2,4)(3,4), e.g. 111000");
}

bool parse_grid(const std::string& text, qent::cli::RunConfig& cfg) {
  if (text.empty()) return true;
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) {
      cfg.grid_n = std::stoi(text);
      cfg.grid_m = 0;
    } else {
      cfg.grid_n = std::stoi(text.substr(0, x));
      cfg.grid_m = std::stoi(text.substr(x + 1));
    }
  } catch (...) {
    return false;
  }
  return cfg.grid_n > 0 && (x == std::string::npos || cfg.grid_m > 0);
}

bool parse_range(const std::string& text, qent::cli::RunConfig& cfg) {
  if (text.empty()) return true;
  const auto c = text.find(':');
  if (c == std::string::npos) return false;
  try {
    cfg.range = {std::stod(text.substr(0, c)), std::stod(text.substr(c + 1))};
  } catch (...) {
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(qent::kToolName) +
               " - entanglement measures and teleportation toolkit for "
               "four-qubit pure states"};
  app.set_version_flag("--version",
                       std::string(qent::kToolName) + " " + qent::kToolVersion);
  app.require_subcommand(1);

  qent::cli::RunConfig cfg;
  SharedFlags shared;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", cfg.seed, "RNG seed (default 42)");
    cmd->add_option("--out", cfg.out_path, "Write the report to this file");
    cmd->add_option("--format", cfg.format, "Output format: json|csv");
  };

  CLI::App* measure = app.add_subcommand(
      "measure", "E_G, P_max, pi4 with components and negativities for one state");
  add_state_flags(measure, cfg);
  measure->add_option("--restarts", cfg.restarts, "Ascent restarts (default 50)");
  add_common(measure);

  CLI::App* table1 = app.add_subcommand(
      "table1", "Reference-vs-computed E_G and pi4 for the 14 registry states (CSV)");
  table1->add_option("--restarts", cfg.restarts, "Ascent restarts (default 50)");
  add_common(table1);

  CLI::App* sweep = app.add_subcommand("sweep", "Figure-style data sweeps (CSV)");
  sweep->add_option("--kind", cfg.kind, "fig1|fig2|fig3|fig8")->required();
  sweep->add_option("--grid", shared.grid, "Grid size N or NxM");
  sweep->add_option("--range", shared.range, "Axis range lo:hi");
  sweep->add_option("--restarts", cfg.restarts, "Ascent restarts (default 50)");
  add_common(sweep);

  CLI::App* graphs = app.add_subcommand(
      "graphs", "All 64 four-vertex graph states: connectivity and pi4");
  add_common(graphs);

  CLI::App* teleport = app.add_subcommand(
      "teleport", "Gate extraction, correction tables, stabilizers, LU identities");
  add_common(teleport);

  CLI::App* protocol = app.add_subcommand(
      "protocol", "Three-party delayed-teleportation runs (JSON lines)");
  protocol->add_option("--runs", cfg.runs, "Number of runs (default 100)");
  add_common(protocol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (measure->parsed()) cfg.command = "measure";
  if (table1->parsed()) cfg.command = "table1";
  if (sweep->parsed()) cfg.command = "sweep";
  if (graphs->parsed()) cfg.command = "graphs";
  if (teleport->parsed()) cfg.command = "teleport";
  if (protocol->parsed()) cfg.command = "protocol";

  if (!parse_grid(shared.grid, cfg)) {
    std::cerr << "input error: --grid expects N or NxM\n";
    return 2;
  }
  if (!parse_range(shared.range, cfg)) {
    std::cerr << "input error: --range expects lo:hi\n";
    return 2;
  }

  return qent::cli::run_command(cfg, std::cout, std::cerr);
}
