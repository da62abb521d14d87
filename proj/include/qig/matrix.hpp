#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace qig {

using cx = std::complex<double>;

inline constexpr double kHermitianCheckTol = 1e-12;

// Dense row-major complex matrix. Shapes are fixed at construction.
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, cx{0.0, 0.0}) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("ComplexMatrix: dimensions must be at least 1");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = cx{1.0, 0.0};
    return m;
  }

  static ComplexMatrix matrix_unit(std::size_t n, std::size_t i, std::size_t j) {
    ComplexMatrix m(n, n);
    m(i, j) = cx{1.0, 0.0};
    return m;
  }

  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cx>> rows) {
    const std::size_t r = rows.size();
    if (r == 0) throw std::invalid_argument("ComplexMatrix: no rows given");
    const std::size_t c = rows.begin()->size();
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw std::invalid_argument("ComplexMatrix: ragged rows");
      std::size_t j = 0;
      for (const cx& v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  cx trace() const {
    if (!is_square()) throw std::invalid_argument("trace: matrix not square");
    cx t{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cx& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double s = 0.0;
    for (const cx& v : a_) s = std::max(s, std::abs(v));
    return s;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<cx> a_;
};

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix sum: shape mismatch");
  ComplexMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j) + b(i, j);
  return m;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix difference: shape mismatch");
  ComplexMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j) - b(i, j);
  return m;
}

inline ComplexMatrix operator-(const ComplexMatrix& a) {
  ComplexMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = -a(i, j);
  return m;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  ComplexMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cx aik = a(i, k);
      if (aik == cx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

inline ComplexMatrix operator*(const cx& s, const ComplexMatrix& a) {
  ComplexMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = s * a(i, j);
  return m;
}

inline ComplexMatrix operator*(double s, const ComplexMatrix& a) { return cx{s, 0.0} * a; }
inline ComplexMatrix operator*(const ComplexMatrix& a, const cx& s) { return s * a; }
inline ComplexMatrix operator*(const ComplexMatrix& a, double s) { return cx{s, 0.0} * a; }

// Hilbert-Schmidt inner product Tr(A* B), conjugate-linear in the first slot.
inline cx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_inner: shape mismatch");
  cx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::conj(a(i, j)) * b(i, j);
  return s;
}

// Discards an imaginary part that should be rounding noise; a residue above
// 1e-9 (relative) signals a wiring bug and is raised, not hidden.
inline double real_checked(const cx& z, const std::string& context) {
  if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z.real())))
    throw std::runtime_error(context + ": imaginary residue " + std::to_string(z.imag()));
  return z.real();
}

// Square matrix validated Hermitian at construction and stored exactly
// symmetrized: entry (i,j) is the average of m(i,j) and conj(m(j,i)).
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m) : mat_(symmetrize_checked(m)) {}

  static HermitianMatrix diagonal(const std::vector<double>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = cx{d[i], 0.0};
    return HermitianMatrix(m);
  }

  static HermitianMatrix identity(std::size_t n) {
    return HermitianMatrix(ComplexMatrix::identity(n));
  }

  std::size_t dim() const { return mat_.rows(); }
  const ComplexMatrix& matrix() const { return mat_; }
  const cx& operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }

  double trace() const { return mat_.trace().real(); }

 private:
  static ComplexMatrix symmetrize_checked(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("HermitianMatrix: matrix not square");
    const std::size_t n = m.rows();
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
    const double tol = kHermitianCheckTol * std::max(1.0, m.max_abs());
    if (dev > tol)
      throw std::invalid_argument("HermitianMatrix: hermiticity deviation " +
                                  std::to_string(dev) + " exceeds tolerance " +
                                  std::to_string(tol));
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      out(i, i) = cx{m(i, i).real(), 0.0};
      for (std::size_t j = i + 1; j < n; ++j) {
        const cx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
        out(i, j) = v;
        out(j, i) = std::conj(v);
      }
    }
    return out;
  }

  ComplexMatrix mat_;
};

inline HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.matrix() + b.matrix());
}

inline HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.matrix() - b.matrix());
}

inline HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(s * a.matrix());
}

}  // namespace qig
