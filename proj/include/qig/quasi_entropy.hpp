#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qig/eigen.hpp"
#include "qig/functions.hpp"
#include "qig/matrix.hpp"
#include "qig/states.hpp"

namespace qig {

struct ProbabilityVector {
  std::vector<double> entries;

  explicit ProbabilityVector(std::vector<double> p) : entries(std::move(p)) {
    if (entries.empty()) throw std::invalid_argument("ProbabilityVector: empty");
    double sum = 0.0;
    for (double& v : entries) {
      if (v < -1e-12)
        throw std::invalid_argument("ProbabilityVector: negative entry " + std::to_string(v));
      if (v < 0.0) v = 0.0;
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10)
      throw std::invalid_argument("ProbabilityVector: entries sum to " + std::to_string(sum));
  }

  std::size_t size() const { return entries.size(); }
};

// rho1 B rho2^{-1}, the inverse taken spectrally.
inline ComplexMatrix relative_modular_apply(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                            const ComplexMatrix& b) {
  const std::size_t n = rho1.dim();
  if (rho2.dim() != n || b.rows() != n || b.cols() != n)
    throw std::invalid_argument("relative_modular_apply: dimension mismatch");
  const HermitianMatrix inv2 = spectral_map(rho2.eig(), [](double x) { return 1.0 / x; });
  return rho1.matrix() * b * inv2.matrix();
}

namespace detail {

// Double spectral sum over the eigenpairs of two positive matrices:
// sum_ij m_f(lambda_i, mu_j) |(U1* A U2)_ij|^2. Real by construction.
inline double quasi_entropy_sum(const MonotoneFunction& f, const ComplexMatrix& a,
                                const SpectralDecomposition& e1, const SpectralDecomposition& e2) {
  const std::size_t n = e1.dim();
  const ComplexMatrix m = e1.eigenvectors.adjoint() * a * e2.eigenvectors;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double w = std::norm(m(i, j));
      if (w == 0.0) continue;
      s += eval_mean(f, e1.eigenvalues[i], e2.eigenvalues[j]) * w;
    }
  return s;
}

}  // namespace detail

inline double quasi_entropy(const MonotoneFunction& f, const ComplexMatrix& a,
                            const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const std::size_t n = rho1.dim();
  if (rho2.dim() != n || a.rows() != n || a.cols() != n)
    throw std::invalid_argument("quasi_entropy: dimension mismatch");
  return detail::quasi_entropy_sum(f, a, rho1.eig(), rho2.eig());
}

inline double f_divergence(const MonotoneFunction& f, const DensityMatrix& rho1,
                           const DensityMatrix& rho2) {
  return quasi_entropy(f, ComplexMatrix::identity(rho1.dim()), rho1, rho2);
}

// Tr rho1 (log rho1 - log rho2), an independent path from f_divergence(xlogx).
inline double umegaki(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw std::invalid_argument("umegaki: dimension mismatch");
  const HermitianMatrix log1 = spectral_map(rho1.eig(), [](double x) { return std::log(x); });
  const HermitianMatrix log2 = spectral_map(rho2.eig(), [](double x) { return std::log(x); });
  const cx v = (rho1.matrix() * (log1.matrix() - log2.matrix())).trace();
  return real_checked(v, "umegaki");
}

// (Tr rho1^{1+beta} rho2^{-beta} - 1) / beta.
inline double s_beta(double beta, const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("s_beta: beta must lie in (0, 1)");
  if (rho1.dim() != rho2.dim()) throw std::invalid_argument("s_beta: dimension mismatch");
  const HermitianMatrix p1 = spectral_map(rho1.eig(), [beta](double x) { return std::pow(x, 1.0 + beta); });
  const HermitianMatrix p2 = spectral_map(rho2.eig(), [beta](double x) { return std::pow(x, -beta); });
  const double v = real_checked((p1.matrix() * p2.matrix()).trace(), "s_beta");
  return (v - 1.0) / beta;
}

// Tr (I - rho1^alpha rho2^{-alpha}) rho2 / (alpha (1 - alpha)). Note the
// argument order: this is the degree-alpha entropy of rho2 relative to rho1.
inline double s_alpha_degree(double alpha, const DensityMatrix& rho2, const DensityMatrix& rho1) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("s_alpha_degree: alpha must lie in (0, 1)");
  if (rho1.dim() != rho2.dim()) throw std::invalid_argument("s_alpha_degree: dimension mismatch");
  const std::size_t n = rho1.dim();
  const HermitianMatrix p1 = spectral_map(rho1.eig(), [alpha](double x) { return std::pow(x, alpha); });
  const HermitianMatrix p2 = spectral_map(rho2.eig(), [alpha](double x) { return std::pow(x, -alpha); });
  const ComplexMatrix inner = ComplexMatrix::identity(n) - p1.matrix() * p2.matrix();
  const double v = real_checked((inner * rho2.matrix()).trace(), "s_alpha_degree");
  return v / (alpha * (1.0 - alpha));
}

// Wigner-Yanase-Dyson correlation: the quasi-entropy with f = g_p over a pair
// of positive definite matrices (no unit trace required).
inline double wyd_J(double p, const ComplexMatrix& k, const HermitianMatrix& a,
                    const HermitianMatrix& b) {
  if (!(p >= 0.5 && p <= 2.0)) throw std::invalid_argument("wyd_J: p must lie in [1/2, 2]");
  const std::size_t n = a.dim();
  if (b.dim() != n || k.rows() != n || k.cols() != n)
    throw std::invalid_argument("wyd_J: dimension mismatch");
  const SpectralDecomposition ea = hermitian_eig(a);
  const SpectralDecomposition eb = hermitian_eig(b);
  if (ea.eigenvalues.front() <= 0.0 || eb.eigenvalues.front() <= 0.0)
    throw std::domain_error("wyd_J: inputs must be positive definite");
  const MonotoneFunction g = catalog_get("wyd_gp", {{"p", p}});
  return detail::quasi_entropy_sum(g, k, ea, eb);
}

// sum_i q_i f(p_i / q_i); zero p-entries fall back to the stored f(0+) limit.
inline double classical_f_divergence(const MonotoneFunction& f, const ProbabilityVector& p,
                                     const ProbabilityVector& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("classical_f_divergence: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(q.entries[i] > 0.0))
      throw std::invalid_argument("classical_f_divergence: zero entry in q");
    if (p.entries[i] == 0.0) {
      if (std::isinf(f.at_zero)) return f.at_zero;
      s += q.entries[i] * f.at_zero;
    } else {
      s += q.entries[i] * f.eval(p.entries[i] / q.entries[i]);
    }
  }
  return s;
}

}  // namespace qig
