#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qent/eigen.hpp"
#include "qent/errors.hpp"
#include "qent/linalg.hpp"
#include "qent/tolerances.hpp"

namespace qent {

// Qubit 1 is the most significant bit: |q1 q2 ... qn> maps to the integer
// q1*2^(n-1) + ... + qn, so printed kets read left to right.
inline int bit_of(std::size_t index, int n_qubits, int qubit) {
  return static_cast<int>((index >> (n_qubits - qubit)) & 1u);
}

// Ordered set of distinct 1-based qubit indices.
class QubitSubset {
 public:
  QubitSubset(std::vector<int> qubits) : q_(std::move(qubits)) {
    if (q_.empty()) throw BadTargets("empty qubit subset");
    for (std::size_t i = 0; i < q_.size(); ++i) {
      if (q_[i] < 1) throw BadTargets("qubit indices are 1-based");
      if (i > 0 && q_[i] <= q_[i - 1])
        throw BadTargets("qubit subset must be strictly increasing");
    }
  }
  QubitSubset(std::initializer_list<int> qubits)
      : QubitSubset(std::vector<int>(qubits)) {}

  void check_within(int n_qubits) const {
    if (q_.back() > n_qubits) throw BadTargets("qubit index exceeds system size");
  }

  static QubitSubset complement(const QubitSubset& s, int n_qubits) {
    s.check_within(n_qubits);
    std::vector<int> rest;
    for (int q = 1; q <= n_qubits; ++q)
      if (!s.contains(q)) rest.push_back(q);
    return QubitSubset(std::move(rest));
  }

  int size() const { return static_cast<int>(q_.size()); }
  int operator[](int i) const { return q_[i]; }
  bool contains(int qubit) const {
    return std::binary_search(q_.begin(), q_.end(), qubit);
  }
  const std::vector<int>& indices() const { return q_; }

 private:
  std::vector<int> q_;
};

namespace detail {

// Builds a full basis index from a bit pattern over `sub` (MSB-first within
// the subset) and a pattern over the remaining qubits (MSB-first as well).
inline std::size_t merge_index(int n, const QubitSubset& sub, std::size_t sub_bits,
                               std::size_t rest_bits) {
  std::size_t idx = 0;
  int si = 0, ri = 0;
  const int k = sub.size();
  for (int q = 1; q <= n; ++q) {
    int b;
    if (si < k && sub[si] == q) {
      b = static_cast<int>((sub_bits >> (k - 1 - si)) & 1u);
      ++si;
    } else {
      b = static_cast<int>((rest_bits >> (n - k - 1 - ri)) & 1u);
      ++ri;
    }
    idx = (idx << 1) | static_cast<unsigned>(b);
  }
  return idx;
}

inline void check_finite(const std::vector<cplx>& amps) {
  for (const auto& a : amps)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw NumericalError("non-finite amplitude");
}

}  // namespace detail

// Dense complex amplitude vector over n qubits. Values are immutable after
// construction; all operations below are pure functions.
class PureState {
 public:
  // Requires unit norm within the structural tolerance.
  PureState(int n_qubits, std::vector<cplx> amps)
      : PureState(n_qubits, std::move(amps), /*require_normalized=*/true) {}

  // Explicitly unnormalized values are allowed but tagged; measure-level
  // operations reject them.
  static PureState raw(int n_qubits, std::vector<cplx> amps) {
    return PureState(n_qubits, std::move(amps), /*require_normalized=*/false);
  }

  // Scales to unit norm; optionally reports the pre-normalization norm.
  static PureState normalized(int n_qubits, std::vector<cplx> amps,
                              double* pre_norm = nullptr) {
    detail::check_finite(amps);
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    const double nrm = std::sqrt(s);
    if (pre_norm) *pre_norm = nrm;
    if (nrm < 1e-14) throw ZeroVector("cannot normalize a zero vector");
    for (auto& a : amps) a /= nrm;
    return PureState(n_qubits, std::move(amps), true);
  }

  static PureState basis(int n_qubits, std::size_t index) {
    std::vector<cplx> amps(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps.at(index) = 1.0;
    return PureState(n_qubits, std::move(amps));
  }

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<cplx>& amps() const { return amps_; }
  cplx amp(std::size_t i) const { return amps_[i]; }
  int bit(std::size_t index, int qubit) const { return bit_of(index, n_, qubit); }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  bool is_normalized() const { return normalized_; }

  PureState normalized_copy(double* pre_norm = nullptr) const {
    return normalized(n_, amps_, pre_norm);
  }

  // Human-readable ket, nonzero amplitudes only.
  std::string to_ket_string(double cutoff = 1e-12) const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (std::abs(amps_[i]) <= cutoff) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << amps_[i].real() << (amps_[i].imag() < 0 ? "-" : "+")
         << std::abs(amps_[i].imag()) << "i)|";
      for (int q = 1; q <= n_; ++q) os << bit(i, q);
      os << ">";
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  PureState(int n_qubits, std::vector<cplx> amps, bool require_normalized)
      : n_(n_qubits), amps_(std::move(amps)) {
    if (n_ < 1 || n_ > 20) throw BadDim("qubit count must be in [1, 20]");
    if (amps_.size() != (std::size_t{1} << n_))
      throw ShapeMismatch("amplitude count must be 2^n");
    detail::check_finite(amps_);
    const double deviation = std::abs(norm() - 1.0);
    normalized_ = deviation <= tol.structural;
    if (require_normalized && !normalized_)
      throw Unnormalized("state norm deviates from 1 beyond tolerance");
  }

  int n_;
  std::vector<cplx> amps_;
  bool normalized_ = true;
};

inline cplx inner_product(const PureState& a, const PureState& b) {
  if (a.n_qubits() != b.n_qubits()) throw ShapeMismatch("qubit count mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amp(i)) * b.amp(i);
  return s;
}

inline double fidelity(const PureState& a, const PureState& b) {
  return std::norm(inner_product(a, b));
}

// Hermitian unit-trace matrix over k qubits. Partial-transpose outputs carry
// a `transposed` tag: they stay Hermitian and unit trace but may have
// negative eigenvalues, and measure-level entry points must reject them as
// inputs.
class DensityMatrix {
 public:
  static DensityMatrix from_pure(const PureState& psi) {
    const std::size_t d = psi.dim();
    CMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        m(i, j) = psi.amp(i) * std::conj(psi.amp(j));
    return DensityMatrix(std::move(m), psi.n_qubits(), false, false);
  }

  static DensityMatrix from_matrix(CMatrix m, bool transposed_tag = false) {
    if (m.rows() != m.cols()) throw ShapeMismatch("density matrix must be square");
    int n = 0;
    while ((std::size_t{1} << n) < m.rows()) ++n;
    if ((std::size_t{1} << n) != m.rows())
      throw BadDim("density matrix dimension must be a power of 2");
    return DensityMatrix(std::move(m), n, transposed_tag, true);
  }

  int n_qubits() const { return n_; }
  std::size_t dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  cplx entry(std::size_t i, std::size_t j) const { return m_(i, j); }
  bool transposed() const { return transposed_; }

  double purity() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) s += std::norm(m_(i, j));
    return s;
  }

 private:
  friend DensityMatrix partial_transpose(const DensityMatrix&, const QubitSubset&);

  DensityMatrix(CMatrix m, int n, bool transposed, bool validate)
      : m_(std::move(m)), n_(n), transposed_(transposed) {
    if (!m_.all_finite()) throw NumericalError("non-finite density matrix entry");
    if (validate) {
      if (!m_.is_hermitian()) throw NotHermitian("density matrix is not Hermitian");
      if (std::abs(m_.trace() - cplx{1.0, 0.0}) > tol.structural)
        throw Unnormalized("density matrix trace deviates from 1");
      if (!transposed_ && m_.rows() <= 64) {
        const auto eig = hermitian_eigenvalues(m_);
        if (eig.front() < -tol.positivity_slack)
          throw NumericalError("density matrix has a negative eigenvalue");
      }
    }
  }

  CMatrix m_;
  int n_;
  bool transposed_;
};

// -----------------------------------------------------------------------------
// Kernel operations
// -----------------------------------------------------------------------------

inline PureState tensor(const PureState& left, const PureState& right) {
  if (!left.is_normalized() || !right.is_normalized())
    throw Unnormalized("tensor requires normalized factors");
  const int n = left.n_qubits() + right.n_qubits();
  if (n > 20) throw BadDim("tensor product exceeds 20 qubits");
  std::vector<cplx> amps(std::size_t{1} << n);
  for (std::size_t i = 0; i < left.dim(); ++i) {
    if (left.amp(i) == cplx{0.0, 0.0}) continue;
    for (std::size_t j = 0; j < right.dim(); ++j)
      amps[(i << right.n_qubits()) | j] = left.amp(i) * right.amp(j);
  }
  return PureState(n, std::move(amps));
}

template <typename... Rest>
inline PureState tensor(const PureState& a, const PureState& b, const Rest&... rest) {
  return tensor(tensor(a, b), rest...);
}

// Applies a 2^k x 2^k unitary to the target qubits (increasing order; the
// gate's most significant input bit is the smallest target index).
inline PureState apply_unitary(const PureState& state, const CMatrix& gate,
                               const QubitSubset& targets) {
  targets.check_within(state.n_qubits());
  const int k = targets.size();
  const std::size_t gd = std::size_t{1} << k;
  if (gate.rows() != gd || gate.cols() != gd)
    throw ShapeMismatch("gate dimension does not match target count");
  if (!gate.is_unitary()) throw NonUnitary("gate is not unitary within tolerance");

  const int n = state.n_qubits();
  std::vector<cplx> out(state.dim());
  const std::size_t rest_count = state.dim() >> k;
  std::vector<std::size_t> idx(gd);
  std::vector<cplx> sub(gd);
  for (std::size_t rest = 0; rest < rest_count; ++rest) {
    for (std::size_t r = 0; r < gd; ++r) {
      idx[r] = detail::merge_index(n, targets, r, rest);
      sub[r] = state.amp(idx[r]);
    }
    for (std::size_t r = 0; r < gd; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < gd; ++c) acc += gate(r, c) * sub[c];
      out[idx[r]] = acc;
    }
  }
  return PureState::raw(n, std::move(out));
}

inline DensityMatrix partial_trace(const PureState& psi, const QubitSubset& keep) {
  keep.check_within(psi.n_qubits());
  const int n = psi.n_qubits();
  const int k = keep.size();
  const std::size_t kd = std::size_t{1} << k;
  const std::size_t ed = psi.dim() >> k;
  CMatrix m(kd, kd);
  for (std::size_t i = 0; i < kd; ++i)
    for (std::size_t j = 0; j < kd; ++j) {
      cplx acc = 0.0;
      for (std::size_t e = 0; e < ed; ++e)
        acc += psi.amp(detail::merge_index(n, keep, i, e)) *
               std::conj(psi.amp(detail::merge_index(n, keep, j, e)));
      m(i, j) = acc;
    }
  return DensityMatrix::from_matrix(std::move(m));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const QubitSubset& keep) {
  if (rho.transposed())
    throw BadTargets("partial trace of a transposed-tagged matrix");
  keep.check_within(rho.n_qubits());
  const int n = rho.n_qubits();
  const int k = keep.size();
  const std::size_t kd = std::size_t{1} << k;
  const std::size_t ed = rho.dim() >> k;
  CMatrix m(kd, kd);
  for (std::size_t i = 0; i < kd; ++i)
    for (std::size_t j = 0; j < kd; ++j) {
      cplx acc = 0.0;
      for (std::size_t e = 0; e < ed; ++e)
        acc += rho.entry(detail::merge_index(n, keep, i, e),
                         detail::merge_index(n, keep, j, e));
      m(i, j) = acc;
    }
  return DensityMatrix::from_matrix(std::move(m));
}

// <i_A i_B| sigma |j_A j_B> = <j_A i_B| rho |i_A j_B>: a pure entry
// permutation, so applying it twice restores the input exactly.
inline DensityMatrix partial_transpose(const DensityMatrix& rho,
                                       const QubitSubset& subsystem) {
  subsystem.check_within(rho.n_qubits());
  const int n = rho.n_qubits();
  const std::size_t d = rho.dim();
  CMatrix m(d, d);
  std::size_t mask = 0;
  for (int q : subsystem.indices()) mask |= std::size_t{1} << (n - q);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t r2 = (r & ~mask) | (c & mask);
      const std::size_t c2 = (c & ~mask) | (r & mask);
      m(r, c) = rho.entry(r2, c2);
    }
  return DensityMatrix(std::move(m), n, /*transposed=*/true, /*validate=*/false);
}

// Contracts <bra|_subset |psi>, leaving the remaining qubits in their
// original relative order. The result is intentionally unnormalized: its
// squared norm is the probability of the projection.
inline PureState partial_inner(const PureState& psi, const QubitSubset& subset,
                               const PureState& bra) {
  subset.check_within(psi.n_qubits());
  if (bra.n_qubits() != subset.size())
    throw ShapeMismatch("bra arity does not match subset size");
  const int n = psi.n_qubits();
  const int k = subset.size();
  if (k == n) throw BadTargets("projection must leave at least one qubit");
  const std::size_t sd = std::size_t{1} << k;
  const std::size_t rd = psi.dim() >> k;
  std::vector<cplx> out(rd, cplx{0.0, 0.0});
  for (std::size_t s = 0; s < sd; ++s) {
    const cplx w = std::conj(bra.amp(s));
    if (w == cplx{0.0, 0.0}) continue;
    for (std::size_t r = 0; r < rd; ++r)
      out[r] += w * psi.amp(detail::merge_index(n, subset, s, r));
  }
  return PureState::raw(n - k, std::move(out));
}

struct PhaseComparison {
  bool equal;
  double phase;  // gamma with a ~ e^{i gamma} b
};

// Phase-insensitive state equality; gamma is fitted from the pair of
// amplitudes with the largest joint magnitude.
inline PhaseComparison equal_up_to_global_phase(const PureState& a,
                                                const PureState& b, double eps) {
  if (a.n_qubits() != b.n_qubits()) throw ShapeMismatch("qubit count mismatch");
  std::size_t best_k = 0;
  double best = -1.0;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const double mag = std::abs(a.amp(k)) * std::abs(b.amp(k));
    if (mag > best) {
      best = mag;
      best_k = k;
    }
  }
  double gamma = 0.0;
  if (best > 0.0) gamma = std::arg(a.amp(best_k) / b.amp(best_k));
  const cplx rot = std::polar(1.0, gamma);
  double max_diff = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k)
    max_diff = std::max(max_diff, std::abs(a.amp(k) - rot * b.amp(k)));
  return {max_diff <= eps, gamma};
}

// Result qubit k holds input qubit perm[k-1] (perm is a permutation of 1..n).
inline PureState permute_qubits(const PureState& psi, const std::vector<int>& perm) {
  const int n = psi.n_qubits();
  if (static_cast<int>(perm.size()) != n) throw BadTargets("permutation size mismatch");
  std::vector<bool> seen(n + 1, false);
  for (int q : perm) {
    if (q < 1 || q > n || seen[q]) throw BadTargets("not a permutation of 1..n");
    seen[q] = true;
  }
  std::vector<cplx> out(psi.dim());
  for (std::size_t y = 0; y < psi.dim(); ++y) {
    std::size_t x = 0;
    for (int k = 1; k <= n; ++k) {
      const int b = bit_of(y, n, k);
      x |= static_cast<std::size_t>(b) << (n - perm[k - 1]);
    }
    out[y] = psi.amp(x);
  }
  return PureState::raw(n, std::move(out));
}

}  // namespace qent
