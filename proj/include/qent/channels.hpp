#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qent/format.hpp"
#include "qent/gates.hpp"
#include "qent/measures.hpp"
#include "qent/state.hpp"
#include "qent/statelib.hpp"

namespace qent {

struct ChannelAngles {
  double theta = 0.0;  // coupling of qubit A to its environment
  double phi = 0.0;    // coupling of qubit B to its environment
};

// exp(i angle X(x)X) = cos(angle) I + i sin(angle) X(x)X, since (X(x)X)^2 = I.
inline CMatrix xx_coupling(double angle) {
  const CMatrix xx = kron(gates::x(), gates::x());
  CMatrix m = CMatrix::identity(4) * cplx{std::cos(angle), 0.0} +
              xx * cplx{0.0, std::sin(angle)};
  if (!m.is_unitary()) throw NumericalError("coupling matrix lost unitarity");
  return m;
}

// Fourpartite state over qubits (e1, A, B, e2): both environments start in
// |0>, the pair (A, B) starts maximally entangled, the first coupling acts on
// (e1, A) and the second on (B, e2).
inline PureState channel_state(const ChannelAngles& a) {
  PureState psi = tensor(PureState::basis(1, 0), ghz_state(2), PureState::basis(1, 0));
  psi = apply_unitary(psi, xx_coupling(a.theta), QubitSubset{1, 2});
  psi = apply_unitary(psi, xx_coupling(a.phi), QubitSubset{3, 4});
  return psi;
}

struct ChannelOutputs {
  double pi4 = 0.0;
  double negativity = 0.0;  // of the surviving (A, B) pair
};

inline ChannelOutputs channel_outputs(const ChannelAngles& a) {
  const PureState psi = channel_state(a);
  ChannelOutputs out;
  out.pi4 = pi4(psi).value;
  out.negativity = vidal_werner_negativity(partial_trace(psi, QubitSubset{2, 3}));
  return out;
}

struct ChannelPoint {
  double theta = 0.0, phi = 0.0, pi4 = 0.0, negativity = 0.0;
};

struct AngleGrid {
  double theta_lo = 0.0, theta_hi = 1.5707963267948966;
  int n_theta = 41;
  double phi_lo = 0.0, phi_hi = 1.5707963267948966;
  int n_phi = 41;
};

// Row order is theta-major, phi-minor, fixed regardless of evaluation order.
inline std::vector<ChannelPoint> channel_sweep(const AngleGrid& grid) {
  if (grid.n_theta < 1 || grid.n_phi < 1) throw BadDim("grid must be at least 1x1");
  std::vector<ChannelPoint> rows;
  rows.reserve(static_cast<std::size_t>(grid.n_theta) * grid.n_phi);
  for (int i = 0; i < grid.n_theta; ++i) {
    const double t = grid.n_theta == 1
                         ? grid.theta_lo
                         : grid.theta_lo + (grid.theta_hi - grid.theta_lo) * i /
                                               (grid.n_theta - 1);
    for (int j = 0; j < grid.n_phi; ++j) {
      const double p = grid.n_phi == 1
                           ? grid.phi_lo
                           : grid.phi_lo + (grid.phi_hi - grid.phi_lo) * j /
                                               (grid.n_phi - 1);
      const ChannelOutputs o = channel_outputs({t, p});
      rows.push_back({t, p, o.pi4, o.negativity});
    }
  }
  return rows;
}

// Data rows in the wire format: theta,phi,pi4,negativity, 6 significant
// digits. Callers prepend their own metadata comment.
inline std::string channel_csv(const std::vector<ChannelPoint>& rows) {
  std::string out = "theta,phi,pi4,negativity\n";
  for (const auto& r : rows)
    out += fmt_g6(r.theta) + "," + fmt_g6(r.phi) + "," + fmt_g6(r.pi4) + "," +
           fmt_g6(r.negativity) + "\n";
  return out;
}

}  // namespace qent
