#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qent/channels.hpp"
#include "qent/format.hpp"
#include "qent/groverian.hpp"
#include "qent/ketlang.hpp"
#include "qent/measures.hpp"
#include "qent/state.hpp"
#include "qent/statelib.hpp"
#include "qent/teleport.hpp"
#include "qent/ttp.hpp"

namespace qent {
namespace cli {

using json = nlohmann::ordered_json;

// Raised for unusable command-line input (unknown ids, malformed ket
// expressions, bad ranges); maps to exit code 2. Computation-level failures
// propagate as qent::Error and map to exit code 3.
struct InputError : Error {
  using Error::Error;
};

struct RunConfig {
  std::string command;

  // state source (exactly one for state-consuming commands)
  std::string state_id;
  std::string ket_expr;
  bool use_chi = false;
  double theta = 0.0, phi = 0.0;
  std::string graph_bits;

  // optimizer / rng
  int restarts = 50;
  std::uint64_t seed = kDefaultSeed;

  // sweeps
  std::string kind;
  int grid_n = 0, grid_m = 0;  // 0 = command default
  std::optional<std::pair<double, double>> range;

  // output
  std::string format = "json";
  std::string out_path;

  // protocol
  int runs = 100;
};

namespace detail {

inline OptimizerConfig optimizer_config(const RunConfig& cfg) {
  OptimizerConfig oc;
  oc.restarts = cfg.restarts;
  oc.rng_seed = cfg.seed;
  return oc;
}

struct ResolvedState {
  PureState state = PureState::basis(1, 0);
  std::string source;
};

inline ResolvedState resolve_state(const RunConfig& cfg) {
  int sources = 0;
  if (!cfg.state_id.empty()) ++sources;
  if (!cfg.ket_expr.empty()) ++sources;
  if (cfg.use_chi) ++sources;
  if (!cfg.graph_bits.empty()) ++sources;
  if (sources != 1)
    throw InputError("exactly one of --state, --ket, --chi, --graph is required");

  if (!cfg.state_id.empty()) {
    const auto s = named_state(cfg.state_id);
    if (!s) throw InputError("unknown state id '" + cfg.state_id + "'");
    return {*s, "registry:" + cfg.state_id};
  }
  if (!cfg.ket_expr.empty()) {
    double pre_norm = 0.0;
    const PureState s = ket::evaluate_text(cfg.ket_expr, true, &pre_norm);
    return {s, "ket:" + cfg.ket_expr};
  }
  if (cfg.use_chi) {
    return {chi_state(cfg.theta, cfg.phi),
            "chi(theta=" + fmt_g6(cfg.theta) + ",phi=" + fmt_g6(cfg.phi) + ")"};
  }
  if (cfg.graph_bits.size() != 6 ||
      cfg.graph_bits.find_first_not_of("01") != std::string::npos)
    throw InputError("--graph expects six bits, e.g. 110100");
  GraphSpec g;
  for (int k = 0; k < 6; ++k) g.bits[k] = cfg.graph_bits[k] == '1';
  return {graph_state(g), "graph:" + cfg.graph_bits};
}

inline std::string csv_header(const RunConfig& cfg, const std::string& extra) {
  std::string h = std::string("# ") + kToolName + " " + kToolVersion +
                  " command=" + cfg.command;
  if (!cfg.kind.empty()) h += " kind=" + cfg.kind;
  h += " seed=" + std::to_string(cfg.seed);
  if (!extra.empty()) h += " " + extra;
  return h + "\n";
}

inline json pi4_json(const Pi4Result& r) {
  json comp = json::object();
  const char* names[4] = {"A", "B", "C", "D"};
  for (int q = 0; q < 4; ++q)
    comp[names[q]] = {{"raw", r.components.raw[q]},
                      {"clamped", r.components.clamped[q]},
                      {"clamp_applied", r.components.clamp_applied[q]},
                      {"flagged", r.components.flagged[q]}};
  json pairs = json::object();
  const auto& order = NegativityReport::pair_order();
  for (std::size_t i = 0; i < order.size(); ++i)
    pairs[std::to_string(order[i].first) + std::to_string(order[i].second)] =
        r.negativities.pairwise[i];
  json ovr = json::object();
  for (int q = 0; q < 4; ++q)
    ovr[std::to_string(q + 1)] = r.negativities.one_vs_rest_sq[q];
  return {{"value", r.value},
          {"components", comp},
          {"negativity_flagged", r.components.any_flagged()},
          {"pairwise_negativity", pairs},
          {"one_vs_rest_negativity_sq", ovr}};
}

}  // namespace detail

// Full measurement bundle for one state: E_G with both optimizers, and the
// residual entanglement with all intermediates.
inline std::string cmd_measure(const RunConfig& cfg) {
  const auto resolved = detail::resolve_state(cfg);
  const PureState& psi = resolved.state;
  const OptimizerConfig oc = detail::optimizer_config(cfg);

  const OptimizationResult ca =
      coordinate_ascent(psi, ProductAnsatz::basis_aligned(psi), oc);
  const OptimizationResult ga = ga_maximize(psi, oc);
  const double p_max = std::clamp(std::max(ca.p_max, ga.p_max), 0.0, 1.0);

  json out;
  out["version"] = kToolVersion;
  out["seed"] = cfg.seed;
  out["state"] = {{"source", resolved.source},
                  {"n_qubits", psi.n_qubits()},
                  {"ket", psi.to_ket_string()}};
  out["groverian"] = {{"p_max", p_max},
                      {"e_g", std::sqrt(1.0 - p_max)},
                      {"p_coordinate_ascent", ca.p_max},
                      {"p_genetic", ga.p_max},
                      {"restarts", ca.restarts_used}};
  if (psi.n_qubits() == 4) out["pi4"] = detail::pi4_json(pi4(psi));
  if (psi.n_qubits() == 3) {
    const Pi3Result p3 = pi3(psi);
    out["pi3"] = {{"value", p3.value},
                  {"components", {p3.components[0], p3.components[1], p3.components[2]}}};
  }
  return out.dump(2) + "\n";
}

// Side-by-side reference-vs-computed table for all 14 registry rows.
// Discrepancies are data, not failures.
inline std::string cmd_table1(const RunConfig& cfg) {
  const OptimizerConfig oc = detail::optimizer_config(cfg);
  std::string out = detail::csv_header(cfg, "restarts=" + std::to_string(oc.restarts));
  out += "id,eg_paper,eg_computed,pi4_paper,pi4_computed,delta_eg,delta_pi4\n";
  for (const auto& row : table1_registry()) {
    const PureState psi = row.build();
    const double eg = groverian_measure(psi, oc);
    const double p4 = pi4(psi).value;
    const double eg_ref = row.expected_eg.value_or(0.0);
    const double p4_ref = row.expected_pi4.value_or(0.0);
    out += row.id + "," + fmt_g6(eg_ref) + "," + fmt_g6(eg) + "," + fmt_g6(p4_ref) +
           "," + fmt_g6(p4) + "," + fmt_g6(std::abs(eg - eg_ref)) + "," +
           fmt_g6(std::abs(p4 - p4_ref)) + "\n";
  }
  return out;
}

namespace detail {

inline std::string sweep_fig1(const RunConfig& cfg) {
  int n_lo = 3, n_hi = 10;
  if (cfg.range) {
    n_lo = static_cast<int>(cfg.range->first);
    n_hi = static_cast<int>(cfg.range->second);
    if (n_lo < 2 || n_hi < n_lo || n_hi > 14)
      throw InputError("fig1 range must satisfy 2 <= lo <= hi <= 14");
  }
  OptimizerConfig oc = optimizer_config(cfg);
  std::string out = csv_header(cfg, "range=" + std::to_string(n_lo) + ":" +
                                        std::to_string(n_hi) +
                                        " restarts=" + std::to_string(oc.restarts));
  out += "n,eg_analytic,eg_numeric,delta\n";
  for (int n = n_lo; n <= n_hi; ++n) {
    const double analytic = groverian_w_analytic(n);
    const double numeric = groverian_measure(w_state(n), oc);
    out += std::to_string(n) + "," + fmt_g6(analytic) + "," + fmt_g6(numeric) + "," +
           fmt_g6(std::abs(analytic - numeric)) + "\n";
  }
  return out;
}

inline std::string sweep_fig2(const RunConfig& cfg) {
  const int points = cfg.grid_n > 0 ? cfg.grid_n : 41;
  double lo = 0.0, hi = 1.0;
  if (cfg.range) {
    lo = cfg.range->first;
    hi = cfg.range->second;
    if (lo < 0.0 || hi > 1.0 || hi < lo) throw InputError("fig2 range must be within 0:1");
  }
  OptimizerConfig oc = optimizer_config(cfg);
  std::string out = csv_header(cfg, "grid=" + std::to_string(points) + " range=" +
                                        fmt_g6(lo) + ":" + fmt_g6(hi));
  out += "a2,e_g\n";
  for (int i = 0; i < points; ++i) {
    const double a2 = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    std::vector<cplx> amps(16, cplx{0.0, 0.0});
    amps[0] = std::sqrt(a2);
    amps[15] = std::sqrt(1.0 - a2);
    const PureState psi(4, std::move(amps));
    out += fmt_g6(a2) + "," + fmt_g6(groverian_measure(psi, oc)) + "\n";
  }
  return out;
}

inline std::string sweep_fig3(const RunConfig& cfg) {
  const int nt = cfg.grid_n > 0 ? cfg.grid_n : 41;
  const int np = cfg.grid_m > 0 ? cfg.grid_m : nt;
  double lo = 0.0, hi = 6.283185307179586476925;
  if (cfg.range) {
    lo = cfg.range->first;
    hi = cfg.range->second;
  }
  std::string out = csv_header(cfg, "grid=" + std::to_string(nt) + "x" +
                                        std::to_string(np) + " range=" + fmt_g6(lo) +
                                        ":" + fmt_g6(hi));
  out += "theta,phi,pi4\n";
  for (int i = 0; i < nt; ++i) {
    const double t = nt == 1 ? lo : lo + (hi - lo) * i / (nt - 1);
    for (int j = 0; j < np; ++j) {
      const double p = np == 1 ? lo : lo + (hi - lo) * j / (np - 1);
      out += fmt_g6(t) + "," + fmt_g6(p) + "," +
             fmt_g6(pi4(chi_state(t, p)).value) + "\n";
    }
  }
  return out;
}

inline std::string sweep_fig8(const RunConfig& cfg) {
  AngleGrid grid;
  if (cfg.grid_n > 0) grid.n_theta = cfg.grid_n;
  if (cfg.grid_m > 0) grid.n_phi = cfg.grid_m;
  else if (cfg.grid_n > 0) grid.n_phi = cfg.grid_n;
  if (cfg.range) {
    grid.theta_lo = grid.phi_lo = cfg.range->first;
    grid.theta_hi = grid.phi_hi = cfg.range->second;
  }
  std::string out = csv_header(
      cfg, "grid=" + std::to_string(grid.n_theta) + "x" + std::to_string(grid.n_phi) +
               " range=" + fmt_g6(grid.theta_lo) + ":" + fmt_g6(grid.theta_hi));
  out += channel_csv(channel_sweep(grid));
  return out;
}

}  // namespace detail

inline std::string cmd_sweep(const RunConfig& cfg) {
  if (cfg.kind == "fig1") return detail::sweep_fig1(cfg);
  if (cfg.kind == "fig2") return detail::sweep_fig2(cfg);
  if (cfg.kind == "fig3") return detail::sweep_fig3(cfg);
  if (cfg.kind == "fig8") return detail::sweep_fig8(cfg);
  throw InputError("unknown sweep kind '" + cfg.kind + "' (fig1|fig2|fig3|fig8)");
}

// All 64 graph states with connectivity and pi4; the summary records whether
// pi4 = 1 exactly on the connected specs and 0 on the rest.
inline std::string cmd_graphs(const RunConfig& cfg) {
  const auto entries = enumerate_graphs();
  int connected = 0;
  bool dichotomy = true;
  json rows = json::array();
  for (const auto& e : entries) {
    if (e.connected) ++connected;
    dichotomy = dichotomy && (e.connected ? e.pi4 >= 1.0 - 1e-9 : e.pi4 <= 1e-9);
    json edges = json::array();
    for (const auto& [i, j] : e.spec.edges()) edges.push_back({i, j});
    rows.push_back({{"bits", e.spec.bit_string()},
                    {"index", e.spec.index()},
                    {"edges", edges},
                    {"connected", e.connected},
                    {"pi4", e.pi4}});
  }
  json out;
  out["version"] = kToolVersion;
  out["total"] = entries.size();
  out["connected_count"] = connected;
  out["disconnected_count"] = static_cast<int>(entries.size()) - connected;
  out["pi4_matches_connectivity"] = dichotomy;
  out["rows"] = rows;

  if (cfg.format == "csv") {
    std::string csv = detail::csv_header(cfg, "total=64");
    csv += "bits,index,connected,pi4\n";
    for (const auto& e : entries)
      csv += e.spec.bit_string() + "," + std::to_string(e.spec.index()) + "," +
             (e.connected ? "1" : "0") + "," + fmt_g6(e.pi4) + "\n";
    return csv;
  }
  return out.dump(2) + "\n";
}

namespace detail {

inline json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

// Gate-teleportation bundle: extracted gate, generator decomposition, the
// 16-entry derived correction table, the printed-table comparison, the
// local-unitary identities, stabilizer sets, and a bipartite teleportation run.
inline std::string cmd_teleport(const RunConfig& cfg) {
  json out;
  out["version"] = kToolVersion;
  out["seed"] = cfg.seed;

  const PureState resource = gate_teleport_resource();
  const ResourcePairing pairing{};
  const CMatrix u = extract_gate(resource, pairing);
  out["gate_extraction"] = {{"resource", "(|0000>-|0101>+|1010>+|1111>)/2"},
                            {"unitary", detail::matrix_json(u)}};

  const auto word = decompose_over_generators(u, 4);
  out["generator_word"] = word;

  const CorrectionTable table = derive_correction_table(resource, pairing, cfg.seed);
  json rows = json::array();
  for (const auto& e : table.entries)
    rows.push_back({{"outcome", e.outcome},
                    {"correction", e.word.str()},
                    {"probability", e.probability},
                    {"min_fidelity", e.min_fidelity}});
  out["correction_table"] = rows;

  const Table2Report report = verify_table2(table);
  json verdicts = json::array();
  for (const auto& r : report.rows)
    verdicts.push_back({{"printed_label", r.printed_label},
                        {"outcome", r.outcome},
                        {"transcription_flag", r.transcription_flag},
                        {"printed_word", r.printed_word},
                        {"derived_word", r.derived_word},
                        {"agrees", r.agrees}});
  out["table2_comparison"] = {{"best_bit_order", report.best_order},
                              {"agreements", report.agreements},
                              {"rows", verdicts}};

  const LuReport lu = verify_lu_equivalences();
  json lu_rows = json::array();
  for (const auto& item : lu.items)
    lu_rows.push_back({{"name", item.name},
                       {"equal", item.equal},
                       {"overlap", item.overlap},
                       {"phase", item.phase}});
  out["lu_equivalences"] = lu_rows;

  out["stabilizers"] = {{"chi11", stabilizer_check(chi11_state())},
                        {"ghz4", stabilizer_check(ghz_state(4))}};

  const BipartiteTeleport bt = teleport_bipartite(0.6, cplx{0.0, 0.8}, cfg.seed);
  json branches = json::array();
  for (const auto& b : bt.branches)
    branches.push_back({{"outcome", b.outcome},
                        {"probability", b.probability},
                        {"correction", b.correction},
                        {"fidelity", b.fidelity}});
  out["bipartite_teleport"] = {{"alpha", {0.6, 0.0}},
                               {"beta", {0.0, 0.8}},
                               {"min_fidelity", bt.min_fidelity},
                               {"branches", branches}};
  return out.dump(2) + "\n";
}

// Batch of seeded protocol runs, one JSON event per line, with a trailing
// summary line.
inline std::string cmd_protocol(const RunConfig& cfg) {
  if (cfg.runs < 1) throw InputError("--runs must be positive");
  std::string out;
  double min_fid = 1.0, sum_fid = 0.0;
  for (int r = 0; r < cfg.runs; ++r) {
    RngStream rng(cfg.seed, 9000 + static_cast<std::uint64_t>(r));
    std::vector<cplx> amps = {cplx{rng.gaussian(), rng.gaussian()},
                              cplx{rng.gaussian(), rng.gaussian()}};
    const PureState payload = PureState::normalized(1, std::move(amps));
    const ttp::Transcript t =
        ttp::run_protocol(payload, cfg.seed + static_cast<std::uint64_t>(r));
    for (const auto& e : t.events) {
      json j;
      j["run"] = r;
      j["seq"] = e.seq;
      j["kind"] = e.kind;
      for (const auto& [k, v] : e.data.items()) j[k] = v;
      out += j.dump() + "\n";
    }
    min_fid = std::min(min_fid, t.fidelity);
    sum_fid += t.fidelity;
  }
  json summary;
  summary["kind"] = "summary";
  summary["runs"] = cfg.runs;
  summary["seed"] = cfg.seed;
  summary["min_fidelity"] = min_fid;
  summary["mean_fidelity"] = sum_fid / cfg.runs;
  out += summary.dump() + "\n";
  return out;
}

inline std::string dispatch(const RunConfig& cfg) {
  if (cfg.command == "measure") return cmd_measure(cfg);
  if (cfg.command == "table1") return cmd_table1(cfg);
  if (cfg.command == "sweep") return cmd_sweep(cfg);
  if (cfg.command == "graphs") return cmd_graphs(cfg);
  if (cfg.command == "teleport") return cmd_teleport(cfg);
  if (cfg.command == "protocol") return cmd_protocol(cfg);
  throw InputError("unknown command '" + cfg.command + "'");
}

// Exit codes: 0 success, 2 input error, 3 verification/computation failure.
inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string report;
  try {
    report = dispatch(cfg);
  } catch (const ket::SyntaxError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ket::KetError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "verification failure: " << e.what() << "\n";
    return 3;
  }

  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) {
      err << "input error: cannot open output file " << cfg.out_path << "\n";
      return 2;
    }
    f << report;
  } else {
    out << report;
  }
  return 0;
}

}  // namespace cli
}  // namespace qent
