#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <vector>

#include "mzi/tolerances.hpp"

namespace mzi {

using cx = std::complex<double>;
using CVector = std::vector<cx>;

// Dense row-major complex matrix. Everything in this project is tiny
// (joint particle/detector operators top out around 8x8), so the kernel
// favors clarity over asymptotics.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, cx{0.0, 0.0}) {}

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cx& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return entries_[i * cols_ + j];
  }
  const cx& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return entries_[i * cols_ + j];
  }

  CMatrix adjoint() const;
  cx trace() const;
  double max_abs() const;
  bool all_finite() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cx scale);

  const std::vector<cx>& entries() const { return entries_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cx> entries_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);  // matrix product
CMatrix operator*(cx scale, CMatrix m);
CMatrix operator*(double scale, CMatrix m);

// Largest |a(i,j) - b(i,j)|; matrices must share a shape.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

// Kronecker (tensor) product; dimensions multiply.
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Reduce a (dim_first * dim_second) square matrix over one tensor factor.
// keep = 0 retains the first factor, keep = 1 the second; trace is preserved.
CMatrix partial_trace(const CMatrix& m, std::size_t dim_first, std::size_t dim_second,
                      int keep);

struct HermitianCheckReport {
  double max_asymmetry = 0.0;  // max |A(i,j) - conj(A(j,i))|
  double min_eigenvalue = 0.0;
  cx trace{0.0, 0.0};
};

HermitianCheckReport hermitian_report(const CMatrix& m);

// Eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi rotations.
// Requires max asymmetry <= tol::hermitian_gate; the matrix is symmetrized
// before sweeping. Throws on non-Hermitian input or failure to converge.
std::vector<double> eig_hermitian(const CMatrix& m);

// True iff every eigenvalue is >= -tolerance. Hermitian input required.
bool is_psd(const CMatrix& m, double tolerance);

// --- vector helpers -------------------------------------------------------

// <u|v>, conjugate-linear in the first argument.
cx inner(const CVector& u, const CVector& v);
double norm(const CVector& v);
CMatrix outer(const CVector& u, const CVector& v);  // |u><v|
inline CMatrix outer(const CVector& u) { return outer(u, u); }
CVector matvec(const CMatrix& m, const CVector& v);

// --- fixed 2x2 operators ---------------------------------------------------

const CMatrix& pauli_x();
const CMatrix& pauli_y();
const CMatrix& pauli_z();

}  // namespace mzi
