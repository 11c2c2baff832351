#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qent/errors.hpp"
#include "qent/tolerances.hpp"

namespace qent {

using cplx = std::complex<double>;

// Small dense complex matrix, row-major. Dimensions here never exceed a few
// hundred, so no blocking or expression templates.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

  static CMatrix identity(std::size_t dim) {
    CMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  CMatrix operator*(const CMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw ShapeMismatch("matrix product shape mismatch");
    CMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const cplx v = (*this)(i, k);
        if (v == cplx{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += v * rhs(k, j);
      }
    return out;
  }

  CMatrix operator+(const CMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
      throw ShapeMismatch("matrix sum shape mismatch");
    CMatrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] += rhs.a_[i];
    return out;
  }

  CMatrix operator-(const CMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
      throw ShapeMismatch("matrix difference shape mismatch");
    CMatrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] -= rhs.a_[i];
    return out;
  }

  CMatrix operator*(cplx s) const {
    CMatrix out = *this;
    for (auto& v : out.a_) v *= s;
    return out;
  }

  CMatrix dagger() const {
    CMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  double max_abs_diff(const CMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
      throw ShapeMismatch("matrix comparison shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i)
      m = std::max(m, std::abs(a_[i] - rhs.a_[i]));
    return m;
  }

  bool is_hermitian(double eps = tol.structural) const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > eps) return false;
    return true;
  }

  bool is_unitary(double eps = tol.structural) const {
    if (rows_ != cols_) return false;
    return (dagger() * (*this)).max_abs_diff(identity(rows_)) <= eps;
  }

  bool all_finite() const {
    for (const auto& v : a_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> a_;
};

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx v = a(i, j);
      if (v == cplx{0.0, 0.0}) continue;
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c)
          out(i * b.rows() + r, j * b.cols() + c) = v * b(r, c);
    }
  return out;
}

// True when a = e^{i gamma} b for some gamma; the phase is fitted from the
// largest-magnitude entry pair.
inline bool equal_up_to_phase(const CMatrix& a, const CMatrix& b, double eps) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  std::size_t bi = 0, bj = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double mag = std::abs(a(i, j)) * std::abs(b(i, j));
      if (mag > best) {
        best = mag;
        bi = i;
        bj = j;
      }
    }
  if (best <= 0.0) return a.max_abs_diff(b) <= eps;
  const cplx phase = a(bi, bj) / b(bi, bj);
  if (std::abs(std::abs(phase) - 1.0) > eps) return false;
  return a.max_abs_diff(b * phase) <= eps;
}

}  // namespace qent
