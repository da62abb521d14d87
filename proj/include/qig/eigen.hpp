#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qig/matrix.hpp"

namespace qig {

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, same order

  std::size_t dim() const { return eigenvalues.size(); }
};

namespace detail {

inline double offdiag_norm(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation zeroing A(p,q). W acts on columns p,q:
// W = [[c, s], [-conj(phase) s, conj(phase) c]] with phase = A(p,q)/|A(p,q)|,
// the rotation angle chosen from the stable root of t^2 + 2 tau t - 1 = 0.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const cx b = a(p, q);
  const double ab = std::abs(b);
  if (ab == 0.0) return;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * ab);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const cx phase = b / ab;
  const cx w11{c, 0.0};
  const cx w12{s, 0.0};
  const cx w21 = -std::conj(phase) * s;
  const cx w22 = std::conj(phase) * c;

  const std::size_t n = a.rows();
  for (std::size_t r = 0; r < n; ++r) {
    const cx arp = a(r, p), arq = a(r, q);
    a(r, p) = arp * w11 + arq * w21;
    a(r, q) = arp * w12 + arq * w22;
  }
  for (std::size_t col = 0; col < n; ++col) {
    const cx apc = a(p, col), aqc = a(q, col);
    a(p, col) = std::conj(w11) * apc + std::conj(w21) * aqc;
    a(q, col) = std::conj(w12) * apc + std::conj(w22) * aqc;
  }
  a(p, q) = cx{0.0, 0.0};
  a(q, p) = cx{0.0, 0.0};
  a(p, p) = cx{a(p, p).real(), 0.0};
  a(q, q) = cx{a(q, q).real(), 0.0};

  for (std::size_t r = 0; r < n; ++r) {
    const cx vrp = v(r, p), vrq = v(r, q);
    v(r, p) = vrp * w11 + vrq * w21;
    v(r, q) = vrp * w12 + vrq * w22;
  }
}

}  // namespace detail

// Cyclic complex Jacobi. Deterministic: fixed sweep order, no pivot search,
// so identical input bits give identical output bits on every run.
inline SpectralDecomposition hermitian_eig(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(1.0, a.frobenius_norm());
  const double target = 1e-14 * scale;

  if (n > 1) {
    constexpr int kMaxSweeps = 60;
    const double pivot_floor = target / (2.0 * static_cast<double>(n));
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      if (detail::offdiag_norm(a) <= target) {
        converged = true;
        break;
      }
      for (std::size_t p = 0; p + 1 < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q)
          if (std::abs(a(p, q)) > pivot_floor) detail::jacobi_rotate(a, v, p, q);
    }
    if (!converged && detail::offdiag_norm(a) > target)
      throw std::runtime_error("hermitian_eig: Jacobi sweeps did not converge; off-diagonal residual " +
                               std::to_string(detail::offdiag_norm(a)));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  SpectralDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

// U diag(values) U* for real values; the result is Hermitian by construction.
inline HermitianMatrix spectral_assemble(const SpectralDecomposition& e,
                                         const std::vector<double>& values) {
  const std::size_t n = e.dim();
  if (values.size() != n) throw std::invalid_argument("spectral_assemble: size mismatch");
  ComplexMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (values[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cx uik = e.eigenvectors(i, k) * values[k];
      for (std::size_t j = 0; j < n; ++j)
        m(i, j) += uik * std::conj(e.eigenvectors(j, k));
    }
  }
  return HermitianMatrix(m);
}

inline HermitianMatrix spectral_map(const SpectralDecomposition& e,
                                    const std::function<double(double)>& fn) {
  std::vector<double> y(e.dim());
  for (std::size_t k = 0; k < e.dim(); ++k) {
    y[k] = fn(e.eigenvalues[k]);
    if (!std::isfinite(y[k]))
      throw std::domain_error("spectral_map: function value not finite at eigenvalue " +
                              std::to_string(e.eigenvalues[k]));
  }
  return spectral_assemble(e, y);
}

inline HermitianMatrix matrix_function(const HermitianMatrix& h,
                                       const std::function<double(double)>& fn) {
  return spectral_map(hermitian_eig(h), fn);
}

inline double trace_norm(const HermitianMatrix& h) {
  const SpectralDecomposition e = hermitian_eig(h);
  double s = 0.0;
  for (double lam : e.eigenvalues) s += std::abs(lam);
  return s;
}

inline double min_eigenvalue(const HermitianMatrix& h) {
  return hermitian_eig(h).eigenvalues.front();
}

inline bool is_positive_definite(const HermitianMatrix& h, double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("is_positive_definite: floor must be positive");
  return min_eigenvalue(h) >= floor;
}

}  // namespace qig
