#pragma once

namespace qent {

// Central tolerance knobs. Structural checks (Hermiticity, unit trace,
// unitarity) use `structural`; iterative kernels (Jacobi sweeps, ascent
// plateaus) stop at `convergence`; eigenvalues of physical states may dip
// below zero by `positivity_slack` before we call it an error.
struct Tolerances {
  double structural = 1e-10;
  double convergence = 1e-12;
  double positivity_slack = 1e-9;
};

inline constexpr Tolerances tol{};

}  // namespace qent
