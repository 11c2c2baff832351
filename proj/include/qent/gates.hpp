#pragma once

#include "qent/linalg.hpp"

namespace qent {
namespace gates {

inline CMatrix identity(std::size_t dim) { return CMatrix::identity(dim); }

inline CMatrix x() {
  CMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

inline CMatrix y() {
  CMatrix m(2, 2);
  m(0, 1) = cplx{0.0, -1.0};
  m(1, 0) = cplx{0.0, 1.0};
  return m;
}

inline CMatrix z() {
  CMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

inline CMatrix h() {
  const double s = 0.7071067811865475244;
  CMatrix m(2, 2);
  m(0, 0) = s;
  m(0, 1) = s;
  m(1, 0) = s;
  m(1, 1) = -s;
  return m;
}

// Controlled phase: |11> picks up a minus sign. Symmetric in its two qubits.
inline CMatrix cz() {
  CMatrix m = CMatrix::identity(4);
  m(3, 3) = -1.0;
  return m;
}

inline CMatrix cnot() {
  CMatrix m(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return m;
}

inline CMatrix swap2() {
  CMatrix m(4, 4);
  m(0, 0) = 1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 3) = 1.0;
  return m;
}

inline CMatrix diag4(cplx d0, cplx d1, cplx d2, cplx d3) {
  CMatrix m(4, 4);
  m(0, 0) = d0;
  m(1, 1) = d1;
  m(2, 2) = d2;
  m(3, 3) = d3;
  return m;
}

}  // namespace gates
}  // namespace qent
