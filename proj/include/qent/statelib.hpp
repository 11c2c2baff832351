#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qent/errors.hpp"
#include "qent/measures.hpp"
#include "qent/state.hpp"

namespace qent {

// Six edge bits b0..b5 over the fixed edge order
// (1,2), (1,3), (1,4), (2,3), (2,4), (3,4).
struct GraphSpec {
  std::array<int, 6> bits{};

  static const std::array<std::pair<int, int>, 6>& edge_order() {
    static const std::array<std::pair<int, int>, 6> order = {
        {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};
    return order;
  }

  static GraphSpec from_index(int idx) {
    if (idx < 0 || idx > 63) throw BadTargets("graph index must be in [0, 63]");
    GraphSpec g;
    for (int k = 0; k < 6; ++k) g.bits[k] = (idx >> k) & 1;
    return g;
  }

  int index() const {
    int idx = 0;
    for (int k = 0; k < 6; ++k) idx |= bits[k] << k;
    return idx;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> e;
    for (int k = 0; k < 6; ++k)
      if (bits[k]) e.push_back(edge_order()[k]);
    return e;
  }

  std::string bit_string() const {
    std::string s(6, '0');
    for (int k = 0; k < 6; ++k) s[k] = bits[k] ? '1' : '0';
    return s;
  }
};

// W_n: equal superposition of the n one-hot strings, amplitude 1/sqrt(n).
inline PureState w_state(int n) {
  if (n < 2) throw BadArity("W state needs at least 2 qubits");
  std::vector<cplx> amps(std::size_t{1} << n, cplx{0.0, 0.0});
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (int q = 0; q < n; ++q) amps[std::size_t{1} << q] = a;
  return PureState(n, std::move(amps));
}

inline PureState ghz_state(int n) {
  if (n < 2) throw BadArity("GHZ state needs at least 2 qubits");
  std::vector<cplx> amps(std::size_t{1} << n, cplx{0.0, 0.0});
  const double a = 0.7071067811865475244;
  amps.front() = a;
  amps.back() = a;
  return PureState(n, std::move(amps));
}

inline PureState plus_state() {
  return PureState(1, {cplx{0.7071067811865475244, 0.0},
                       cplx{0.7071067811865475244, 0.0}});
}

// chi(theta, phi): the two four-term branches below are combined and then
// normalized explicitly -- the printed linear combination has norm sqrt(2),
// which is reported through pre_norm.
//
//   branch0 = cos(t)|0000> - sin(t)|0011> - sin(p)|0101> + cos(p)|0110>
//   branch1 = cos(p)|1001> + sin(p)|1010> + sin(t)|1100> + cos(t)|1111>
inline PureState chi_state(double theta, double phi, double* pre_norm = nullptr) {
  std::vector<cplx> amps(16, cplx{0.0, 0.0});
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double inv_sqrt2 = 0.7071067811865475244;
  amps[0b0000] = ct * inv_sqrt2;
  amps[0b0011] = -st * inv_sqrt2;
  amps[0b0101] = -sp * inv_sqrt2;
  amps[0b0110] = cp * inv_sqrt2;
  amps[0b1001] = cp * inv_sqrt2;
  amps[0b1010] = sp * inv_sqrt2;
  amps[0b1100] = st * inv_sqrt2;
  amps[0b1111] = ct * inv_sqrt2;
  return PureState::normalized(4, std::move(amps), pre_norm);
}

// Uniform amplitude 1/(2 sqrt(2)) over the eight odd-parity basis strings.
inline PureState chi11_state() {
  std::vector<cplx> amps(16, cplx{0.0, 0.0});
  const double a = 1.0 / (2.0 * 1.4142135623730950488);
  for (std::size_t k = 0; k < 16; ++k)
    if (std::popcount(k) % 2 == 1) amps[k] = a;
  return PureState(4, std::move(amps));
}

// Amplitude of |x> is (1/4) * (-1)^(sum over edges of x_i x_j).
inline PureState graph_state(const GraphSpec& g) {
  std::vector<cplx> amps(16);
  const auto edges = g.edges();
  for (std::size_t x = 0; x < 16; ++x) {
    int parity = 0;
    for (const auto& [i, j] : edges)
      parity ^= bit_of(x, 4, i) & bit_of(x, 4, j);
    amps[x] = parity ? -0.25 : 0.25;
  }
  return PureState(4, std::move(amps));
}

// Graph-connected (single component over all four vertices); an isolated
// vertex disconnects the graph.
inline bool is_connected(const GraphSpec& g) {
  std::array<int, 5> parent = {0, 1, 2, 3, 4};
  std::function<int(int)> find = [&](int v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  for (const auto& [i, j] : g.edges()) parent[find(i)] = find(j);
  const int root = find(1);
  for (int v = 2; v <= 4; ++v)
    if (find(v) != root) return false;
  return true;
}

struct GraphEntry {
  GraphSpec spec;
  bool connected = false;
  double pi4 = 0.0;
};

// All 64 specs with the pi4 of their graph states.
inline std::vector<GraphEntry> enumerate_graphs() {
  std::vector<GraphEntry> out;
  out.reserve(64);
  for (int idx = 0; idx < 64; ++idx) {
    GraphEntry e;
    e.spec = GraphSpec::from_index(idx);
    e.connected = is_connected(e.spec);
    e.pi4 = pi4(graph_state(e.spec)).value;
    out.push_back(std::move(e));
  }
  return out;
}

struct NamedState {
  std::string id;
  std::string ket_text;  // machine-readable expression in the ket grammar
  std::function<PureState()> build;
  std::optional<double> expected_eg;
  std::optional<double> expected_pi4;
};

namespace detail {

inline PureState bell_psi_plus() {  // (|01> + |10>)/sqrt(2)
  const double a = 0.7071067811865475244;
  return PureState(2, {0.0, a, a, 0.0});
}

inline PureState bell_phi_plus() {  // (|00> + |11>)/sqrt(2)
  const double a = 0.7071067811865475244;
  return PureState(2, {a, 0.0, 0.0, a});
}

inline PureState four_term_state(std::array<int, 4> kets, std::array<double, 4> signs) {
  std::vector<cplx> amps(16, cplx{0.0, 0.0});
  for (int k = 0; k < 4; ++k) amps[kets[k]] = 0.5 * signs[k];
  return PureState(4, std::move(amps));
}

inline PureState zeta0_state() {
  return four_term_state({0b0000, 0b0011, 0b0101, 0b0110}, {1, -1, -1, 1});
}

inline PureState zeta1_state() {
  return four_term_state({0b1001, 0b1010, 0b1100, 0b1111}, {1, 1, 1, 1});
}

inline PureState chi00_state() {
  const auto z0 = zeta0_state();
  const auto z1 = zeta1_state();
  std::vector<cplx> amps(16);
  const double inv_sqrt2 = 0.7071067811865475244;
  for (std::size_t k = 0; k < 16; ++k)
    amps[k] = (z0.amp(k) + z1.amp(k)) * inv_sqrt2;
  return PureState(4, std::move(amps));
}

}  // namespace detail

// The 14 four-qubit showcase states with their reference E_G and pi4
// expectations attached. Duplicated row labels get unique ids psi8b / psi9b.
inline std::vector<NamedState> table1_registry() {
  using detail::four_term_state;
  std::vector<NamedState> rows;
  rows.push_back({"psi1",
                  "(|01>+|10>)/2^(1/2)(x)(|0>+|1>)/2^(1/2)(x)(|0>+|1>)/2^(1/2)",
                  [] { return tensor(detail::bell_psi_plus(), plus_state(), plus_state()); },
                  0.707, 0.0});
  rows.push_back({"psi2",
                  "(|00>+|11>)/2^(1/2)(x)(|00>+|11>)/2^(1/2)",
                  [] { return tensor(detail::bell_phi_plus(), detail::bell_phi_plus()); },
                  0.866, 0.0});
  rows.push_back({"psi3",
                  "(|000>+|111>)/2^(1/2)(x)(|0>+|1>)/2^(1/2)",
                  [] { return tensor(ghz_state(3), plus_state()); },
                  0.707, 0.0});
  rows.push_back({"psi4",
                  "(|001>+|010>+|100>)/3^(1/2)(x)(|0>+|1>)/2^(1/2)",
                  [] { return tensor(w_state(3), plus_state()); },
                  0.745, 0.0});
  rows.push_back({"zeta0",
                  "(|0000>-|0011>-|0101>+|0110>)/2",
                  [] { return detail::zeta0_state(); },
                  0.707, 0.0});
  rows.push_back({"zeta1",
                  "(|1001>+|1010>+|1100>+|1111>)/2",
                  [] { return detail::zeta1_state(); },
                  0.707, 0.0});
  rows.push_back({"psi5",
                  "((|0000>-|0011>-|0101>+|0110>)/2+(|1001>+|1010>+|1100>+|1111>)/2)/2^(1/2)",
                  [] { return detail::chi00_state(); },
                  0.866, 1.0});
  rows.push_back({"psi6",
                  "(|0000>+|1111>)/2^(1/2)",
                  [] { return ghz_state(4); },
                  0.707, 1.0});
  rows.push_back({"psi7",
                  "(|0001>+|0010>+|0100>+|1000>)/2",
                  [] { return w_state(4); },
                  0.76, 0.14903});
  rows.push_back({"psi8",
                  "(|0000>+|0101>+|1000>+|1110>)/2",
                  [] { return four_term_state({0b0000, 0b0101, 0b1000, 0b1110}, {1, 1, 1, 1}); },
                  0.707, 0.25993});
  rows.push_back({"psi9",
                  "(|0000>+|1011>+|1101>+|1110>)/2",
                  [] { return four_term_state({0b0000, 0b1011, 0b1101, 0b1110}, {1, 1, 1, 1}); },
                  0.81, 0.75});
  rows.push_back({"psi10",
                  "(|0001>+|0110>+|1000>)/3^(1/2)",
                  [] {
                    std::vector<cplx> amps(16, cplx{0.0, 0.0});
                    const double a = 1.0 / std::sqrt(3.0);
                    amps[0b0001] = a;
                    amps[0b0110] = a;
                    amps[0b1000] = a;
                    return PureState(4, std::move(amps));
                  },
                  0.81, 0.40861});
  rows.push_back({"psi8b",
                  "(|0000>+|0111>+|1011>+|1100>)/2",
                  [] { return four_term_state({0b0000, 0b0111, 0b1011, 0b1100}, {1, 1, 1, 1}); },
                  0.866, 1.0});
  rows.push_back({"psi9b",
                  "(|0000>-|0101>+|1010>+|1111>)/2",
                  [] { return four_term_state({0b0000, 0b0101, 0b1010, 0b1111}, {1, -1, 1, 1}); },
                  0.866, 1.0});
  return rows;
}

// Resource used for the two-qubit gate teleportation scheme (Table 1 row
// psi9b) and the one used for the alpha|00> + beta|11> scheme.
inline PureState gate_teleport_resource() {
  return detail::four_term_state({0b0000, 0b0101, 0b1010, 0b1111}, {1, -1, 1, 1});
}

inline PureState bipartite_teleport_resource() {
  return detail::four_term_state({0b0000, 0b0111, 0b1000, 0b1111}, {1, -1, 1, 1});
}

// Lookup by registry id or by a few convenience aliases.
inline std::optional<PureState> named_state(const std::string& id) {
  for (const auto& row : table1_registry())
    if (row.id == id) return row.build();
  if (id == "ghz4") return ghz_state(4);
  if (id == "ghz3") return ghz_state(3);
  if (id == "ghz2" || id == "bell") return ghz_state(2);
  if (id == "w4") return w_state(4);
  if (id == "w3") return w_state(3);
  if (id == "chi00") return detail::chi00_state();
  if (id == "chi11") return chi11_state();
  if (id == "cnot_resource") return detail::four_term_state(
      {0b0000, 0b0111, 0b1011, 0b1100}, {1, 1, 1, 1});
  if (id == "fig9_resource") return bipartite_teleport_resource();
  return std::nullopt;
}

inline std::vector<std::string> named_state_ids() {
  std::vector<std::string> ids;
  for (const auto& row : table1_registry()) ids.push_back(row.id);
  for (const char* alias : {"ghz4", "ghz3", "ghz2", "bell", "w4", "w3", "chi00",
                            "chi11", "cnot_resource", "fig9_resource"})
    ids.emplace_back(alias);
  return ids;
}

}  // namespace qent
