#include "mzi/qmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mzi {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = cx{1.0, 0.0};
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

cx CMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace: matrix not square");
  cx t{0.0, 0.0};
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const cx& e : entries_) m = std::max(m, std::abs(e));
  return m;
}

bool CMatrix::all_finite() const {
  for (const cx& e : entries_)
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
  return true;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("operator+=: shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("operator-=: shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(cx scale) {
  for (cx& e : entries_) e *= scale;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matmul: inner dimensions differ (" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + ")");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cx aik = a(i, k);
      if (aik == cx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

CMatrix operator*(cx scale, CMatrix m) { return m *= scale; }
CMatrix operator*(double scale, CMatrix m) { return m *= cx{scale, 0.0}; }

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cx aij = a(i, j);
      if (aij == cx{0.0, 0.0}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

CMatrix partial_trace(const CMatrix& m, std::size_t dim_first, std::size_t dim_second,
                      int keep) {
  const std::size_t total = dim_first * dim_second;
  if (!m.is_square() || m.rows() != total)
    throw std::invalid_argument("partial_trace: matrix size does not match factor dims");
  if (keep != 0 && keep != 1) throw std::invalid_argument("partial_trace: keep must be 0 or 1");

  if (keep == 0) {
    CMatrix out(dim_first, dim_first);
    for (std::size_t i = 0; i < dim_first; ++i)
      for (std::size_t j = 0; j < dim_first; ++j)
        for (std::size_t k = 0; k < dim_second; ++k)
          out(i, j) += m(i * dim_second + k, j * dim_second + k);
    return out;
  }
  CMatrix out(dim_second, dim_second);
  for (std::size_t k = 0; k < dim_second; ++k)
    for (std::size_t l = 0; l < dim_second; ++l)
      for (std::size_t i = 0; i < dim_first; ++i)
        out(k, l) += m(i * dim_second + k, i * dim_second + l);
  return out;
}

namespace {

double off_diagonal_norm(const CMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

double frobenius_norm(const CMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

double max_asymmetry(const CMatrix& m) {
  double a = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      a = std::max(a, std::abs(m(i, j) - std::conj(m(j, i))));
  return a;
}

}  // namespace

HermitianCheckReport hermitian_report(const CMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("hermitian_report: matrix not square");
  HermitianCheckReport rep;
  rep.max_asymmetry = max_asymmetry(m);
  rep.trace = m.trace();
  const std::vector<double> ev = eig_hermitian(m);
  rep.min_eigenvalue = ev.front();
  return rep;
}

std::vector<double> eig_hermitian(const CMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("eig_hermitian: matrix not square");
  if (max_asymmetry(m) > tol::hermitian_gate)
    throw std::invalid_argument("eig_hermitian: input is not Hermitian within tolerance");

  const std::size_t n = m.rows();
  CMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

  // Convergence target scales with the input size so well-conditioned but
  // large-trace matrices (e.g. diag(3,1,2)) still terminate cleanly.
  const double target = tol::jacobi_offdiag * std::max(1.0, frobenius_norm(h));

  for (int sweep = 0; sweep < tol::jacobi_max_sweeps; ++sweep) {
    if (off_diagonal_norm(h) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cx hpq = h(p, q);
        const double mag = std::abs(hpq);
        if (mag == 0.0) continue;
        // Factor out the phase of h(p,q), then apply the classic real Jacobi
        // rotation that annihilates the (p,q) element.
        const cx phase = hpq / mag;
        const double app = h(p, p).real();
        const double aqq = h(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Column rotation: H <- H * J with J(p,p)=c, J(p,q)=s,
        // J(q,p)=-s*conj(phase), J(q,q)=c*conj(phase).
        for (std::size_t k = 0; k < n; ++k) {
          const cx hp = h(k, p);
          const cx hq = h(k, q);
          h(k, p) = c * hp - s * std::conj(phase) * hq;
          h(k, q) = s * hp + c * std::conj(phase) * hq;
        }
        // Row rotation: H <- J^dagger * H.
        for (std::size_t k = 0; k < n; ++k) {
          const cx hp = h(p, k);
          const cx hq = h(q, k);
          h(p, k) = c * hp - s * phase * hq;
          h(q, k) = s * hp + c * phase * hq;
        }
      }
    }
  }
  if (off_diagonal_norm(h) > target)
    throw std::runtime_error("eig_hermitian: Jacobi sweeps failed to converge");

  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = h(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

bool is_psd(const CMatrix& m, double tolerance) {
  const std::vector<double> ev = eig_hermitian(m);
  return ev.front() >= -tolerance;
}

cx inner(const CVector& u, const CVector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("inner: length mismatch");
  cx s{0.0, 0.0};
  for (std::size_t k = 0; k < u.size(); ++k) s += std::conj(u[k]) * v[k];
  return s;
}

double norm(const CVector& v) { return std::sqrt(inner(v, v).real()); }

CMatrix outer(const CVector& u, const CVector& v) {
  CMatrix out(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = u[i] * std::conj(v[j]);
  return out;
}

CVector matvec(const CMatrix& m, const CVector& v) {
  if (m.cols() != v.size()) throw std::invalid_argument("matvec: shape mismatch");
  CVector out(m.rows(), cx{0.0, 0.0});
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

namespace {
CMatrix make_pauli(char which) {
  CMatrix m(2, 2);
  switch (which) {
    case 'x':
      m(0, 1) = cx{1.0, 0.0};
      m(1, 0) = cx{1.0, 0.0};
      break;
    case 'y':
      m(0, 1) = cx{0.0, -1.0};
      m(1, 0) = cx{0.0, 1.0};
      break;
    default:
      m(0, 0) = cx{1.0, 0.0};
      m(1, 1) = cx{-1.0, 0.0};
      break;
  }
  return m;
}
}  // namespace

const CMatrix& pauli_x() {
  static const CMatrix m = make_pauli('x');
  return m;
}
const CMatrix& pauli_y() {
  static const CMatrix m = make_pauli('y');
  return m;
}
const CMatrix& pauli_z() {
  static const CMatrix m = make_pauli('z');
  return m;
}

}  // namespace mzi
