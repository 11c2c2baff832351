#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "qent/eigen.hpp"
#include "qent/errors.hpp"
#include "qent/state.hpp"

namespace qent {

// Residual magnitudes below this are numerical noise around an exact zero and
// snap to 0, so the geometric mean annihilates cleanly for product factors.
// Genuinely negative residuals below -1e-6 are clamped too but flagged.
inline constexpr double kResidualSnap = 1e-12;
inline constexpr double kResidualViolation = -1e-6;

struct PiComponents {
  std::array<double, 4> raw{};      // per qubit A..D
  std::array<double, 4> clamped{};  // max(raw, 0), with noise snapped to 0
  std::array<bool, 4> clamp_applied{};
  std::array<bool, 4> flagged{};  // raw below -1e-6: possible monogamy violation

  bool any_flagged() const {
    return flagged[0] || flagged[1] || flagged[2] || flagged[3];
  }
};

// Pairwise negativities over the six unordered qubit pairs, plus the squared
// one-vs-rest negativities for each single qubit.
struct NegativityReport {
  static const std::array<std::pair<int, int>, 6>& pair_order() {
    static const std::array<std::pair<int, int>, 6> order = {
        {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};
    return order;
  }

  std::array<double, 6> pairwise{};
  std::array<double, 4> one_vs_rest_sq{};

  double pair(int a, int b) const {
    const auto& order = pair_order();
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == std::pair<int, int>{a, b}) return pairwise[i];
    throw BadTargets("unknown qubit pair");
  }
};

struct Pi4Result {
  double value = 0.0;
  PiComponents components;
  NegativityReport negativities;
};

struct Pi3Result {
  double value = 0.0;
  std::array<double, 3> components{};
};

// Normalized negativity: trace norm of the partial transpose minus one.
// 1 for maximally entangled two-qubit pure states, 0 for PPT states.
inline double negativity(const DensityMatrix& rho, const QubitSubset& transpose_side) {
  if (rho.dim() != 4) throw BadDim("negativity expects a two-qubit state");
  if (rho.transposed())
    throw Unnormalized("negativity expects a genuine (untransposed) state");
  transpose_side.check_within(2);
  return trace_norm(partial_transpose(rho, transpose_side).matrix()) - 1.0;
}

inline double vidal_werner_negativity(const DensityMatrix& rho) {
  return negativity(rho, QubitSubset{1});
}

// N^2 of the split (qubit | rest) for a pure state equals 2(1 - Tr rho^2) of
// the single-qubit marginal.
inline double one_vs_rest_negativity_sq(const PureState& psi, int qubit) {
  if (!psi.is_normalized()) throw Unnormalized("state must be normalized");
  if (qubit < 1 || qubit > psi.n_qubits()) throw BadTargets("qubit out of range");
  const DensityMatrix marginal = partial_trace(psi, QubitSubset{qubit});
  return 2.0 * (1.0 - marginal.purity());
}

namespace detail {

inline double pairwise_negativity(const PureState& psi, int a, int b) {
  const DensityMatrix pair = partial_trace(psi, QubitSubset{a, b});
  // Transpose over the first qubit of the pair; the trace-norm symmetry
  // property makes the choice immaterial.
  return negativity(pair, QubitSubset{1});
}

}  // namespace detail

// Tripartite residual: arithmetic mean of the three raw per-qubit residuals.
inline Pi3Result pi3(const PureState& psi) {
  if (psi.n_qubits() != 3) throw BadDim("pi3 expects a three-qubit state");
  if (!psi.is_normalized()) throw Unnormalized("state must be normalized");
  Pi3Result res;
  double n2_pair[4][4] = {};
  for (int a = 1; a <= 3; ++a)
    for (int b = a + 1; b <= 3; ++b) {
      const double n = detail::pairwise_negativity(psi, a, b);
      n2_pair[a][b] = n2_pair[b][a] = n * n;
    }
  for (int q = 1; q <= 3; ++q) {
    double c = one_vs_rest_negativity_sq(psi, q);
    for (int other = 1; other <= 3; ++other)
      if (other != q) c -= n2_pair[q][other];
    res.components[q - 1] = c;
  }
  res.value = (res.components[0] + res.components[1] + res.components[2]) / 3.0;
  return res;
}

// Fourpartite residual: geometric mean of the four clamped per-qubit
// residuals. All intermediates are returned for audit.
inline Pi4Result pi4(const PureState& psi) {
  if (psi.n_qubits() != 4) throw BadDim("pi4 expects a four-qubit state");
  if (!psi.is_normalized()) throw Unnormalized("state must be normalized");

  Pi4Result res;
  double n2_pair[5][5] = {};
  const auto& order = NegativityReport::pair_order();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto [a, b] = order[i];
    const double n = detail::pairwise_negativity(psi, a, b);
    res.negativities.pairwise[i] = n;
    n2_pair[a][b] = n2_pair[b][a] = n * n;
  }
  for (int q = 1; q <= 4; ++q)
    res.negativities.one_vs_rest_sq[q - 1] = one_vs_rest_negativity_sq(psi, q);

  double product = 1.0;
  for (int q = 1; q <= 4; ++q) {
    double c = res.negativities.one_vs_rest_sq[q - 1];
    for (int other = 1; other <= 4; ++other)
      if (other != q) c -= n2_pair[q][other];
    res.components.raw[q - 1] = c;
    res.components.clamp_applied[q - 1] = c < 0.0;
    res.components.flagged[q - 1] = c < kResidualViolation;
    const double clamped = c < kResidualSnap ? 0.0 : c;
    res.components.clamped[q - 1] = clamped;
    product *= clamped;
  }
  res.value = std::pow(product, 0.25);
  return res;
}

}  // namespace qent
