#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qig/eigen.hpp"
#include "qig/functions.hpp"
#include "qig/matrix.hpp"
#include "qig/quasi_entropy.hpp"
#include "qig/states.hpp"

namespace qig {

// J^f_{D1,D2} held spectrally: the two eigenbases plus the mean table
// m_f(lambda_i, mu_j). Apply/invert are Hadamard scalings in the rotated
// frame; nothing n^2 x n^2 is ever materialized here.
class JOperator {
 public:
  JOperator(MonotoneFunction f, SpectralDecomposition left, SpectralDecomposition right,
            double floor)
      : f_(std::move(f)), left_(std::move(left)), right_(std::move(right)),
        table_(mean_table(f_, left_.eigenvalues, right_.eigenvalues)) {
    if (left_.dim() != right_.dim()) throw std::invalid_argument("JOperator: dimension mismatch");
    if (!(floor > 0.0)) throw std::invalid_argument("JOperator: floor must be positive");
    if (left_.eigenvalues.front() < floor || right_.eigenvalues.front() < floor)
      throw std::invalid_argument("JOperator: spectrum below positivity floor " +
                                  std::to_string(floor));
    for (double m : table_.values) {
      if (m == 0.0) throw std::domain_error("JOperator: mean table has a zero entry");
      if (f_.operator_monotone && !(m > 0.0))
        throw std::domain_error("JOperator: mean table must be positive for operator monotone f");
    }
  }

  std::size_t dim() const { return left_.dim(); }
  const MonotoneFunction& function() const { return f_; }
  const SpectralDecomposition& left() const { return left_; }
  const SpectralDecomposition& right() const { return right_; }
  const MeanTable& table() const { return table_; }

  ComplexMatrix apply(const ComplexMatrix& a) const { return scaled(a, false); }
  ComplexMatrix apply_inverse(const ComplexMatrix& c) const { return scaled(c, true); }

  // <A, J B> as a coefficient sum, avoiding the second basis rotation.
  cx form(const ComplexMatrix& a, const ComplexMatrix& b) const { return pair_sum(a, b, false); }
  cx inverse_form(const ComplexMatrix& a, const ComplexMatrix& b) const {
    return pair_sum(a, b, true);
  }

 private:
  ComplexMatrix rotate_in(const ComplexMatrix& x) const {
    return left_.eigenvectors.adjoint() * x * right_.eigenvectors;
  }

  ComplexMatrix scaled(const ComplexMatrix& x, bool invert) const {
    const std::size_t n = dim();
    if (x.rows() != n || x.cols() != n)
      throw std::invalid_argument("JOperator: operand dimension mismatch");
    ComplexMatrix t = rotate_in(x);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        t(i, j) = invert ? t(i, j) / table_(i, j) : t(i, j) * table_(i, j);
    return left_.eigenvectors * t * right_.eigenvectors.adjoint();
  }

  cx pair_sum(const ComplexMatrix& a, const ComplexMatrix& b, bool invert) const {
    const std::size_t n = dim();
    if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != n)
      throw std::invalid_argument("JOperator: operand dimension mismatch");
    const ComplexMatrix ta = rotate_in(a);
    const ComplexMatrix tb = rotate_in(b);
    cx s{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const cx w = std::conj(ta(i, j)) * tb(i, j);
        s += invert ? w / table_(i, j) : w * table_(i, j);
      }
    return s;
  }

  MonotoneFunction f_;
  SpectralDecomposition left_;
  SpectralDecomposition right_;
  MeanTable table_;
};

inline JOperator make_j_operator(const MonotoneFunction& f, const DensityMatrix& d1,
                                 const DensityMatrix& d2) {
  return JOperator(f, d1.eig(), d2.eig(), std::min(d1.floor(), d2.floor()));
}

inline JOperator make_j_operator(const MonotoneFunction& f, const HermitianMatrix& d1,
                                 const HermitianMatrix& d2, double floor = kDefaultFloor) {
  return JOperator(f, hermitian_eig(d1), hermitian_eig(d2), floor);
}

inline ComplexMatrix j_apply(const MonotoneFunction& f, const HermitianMatrix& d1,
                             const HermitianMatrix& d2, const ComplexMatrix& a,
                             double floor = kDefaultFloor) {
  return make_j_operator(f, d1, d2, floor).apply(a);
}

inline ComplexMatrix j_apply(const MonotoneFunction& f, const DensityMatrix& d1,
                             const DensityMatrix& d2, const ComplexMatrix& a) {
  return make_j_operator(f, d1, d2).apply(a);
}

inline ComplexMatrix j_inverse_apply(const MonotoneFunction& f, const HermitianMatrix& d1,
                                     const HermitianMatrix& d2, const ComplexMatrix& c,
                                     double floor = kDefaultFloor) {
  return make_j_operator(f, d1, d2, floor).apply_inverse(c);
}

inline ComplexMatrix j_inverse_apply(const MonotoneFunction& f, const DensityMatrix& d1,
                                     const DensityMatrix& d2, const ComplexMatrix& c) {
  return make_j_operator(f, d1, d2).apply_inverse(c);
}

// gamma_D(A, B) = <A, (J_D^f)^{-1} B>. The admission gate is the symmetry
// identity x f(1/x) = f(x), which is what makes the form symmetric; the
// normalization f(1) = 1 is deliberately not required here.
inline double monotone_metric(const MonotoneFunction& f, const DensityMatrix& d,
                              const HermitianMatrix& a, const HermitianMatrix& b) {
  if (d.dim() != a.dim() || d.dim() != b.dim())
    throw std::invalid_argument("monotone_metric: dimension mismatch");
  if (!check_symmetric(f))
    throw std::invalid_argument("monotone_metric: f must satisfy x*f(1/x) = f(x)");
  const JOperator j = make_j_operator(f, d, d);
  return real_checked(j.inverse_form(a.matrix(), b.matrix()), "monotone_metric");
}

inline double two_param_metric(const MonotoneFunction& f, const HermitianMatrix& d1,
                               const HermitianMatrix& d2, const ComplexMatrix& a,
                               const ComplexMatrix& b, double floor = kDefaultFloor) {
  const JOperator j = make_j_operator(f, d1, d2, floor);
  return real_checked(j.inverse_form(a, b), "two_param_metric");
}

inline double two_param_metric(const MonotoneFunction& f, const DensityMatrix& d1,
                               const DensityMatrix& d2, const ComplexMatrix& a,
                               const ComplexMatrix& b) {
  const JOperator j = make_j_operator(f, d1, d2);
  return real_checked(j.inverse_form(a, b), "two_param_metric");
}

// BKM metric straight from the logarithmic-mean coefficients, written without
// the function catalog so it cross-checks monotone_metric(bkm) independently.
inline double bkm_metric_integral(const DensityMatrix& d, const HermitianMatrix& a,
                                  const HermitianMatrix& b) {
  if (d.dim() != a.dim() || d.dim() != b.dim())
    throw std::invalid_argument("bkm_metric_integral: dimension mismatch");
  const SpectralDecomposition& e = d.eig();
  const std::size_t n = e.dim();
  const ComplexMatrix ta = e.eigenvectors.adjoint() * a.matrix() * e.eigenvectors;
  const ComplexMatrix tb = e.eigenvectors.adjoint() * b.matrix() * e.eigenvectors;
  cx s{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = e.eigenvalues[i], y = e.eigenvalues[j];
      double w;
      if (std::abs(x - y) <= 1e-9 * std::max(x, y)) {
        w = 1.0 / x;
      } else {
        w = (std::log(x) - std::log(y)) / (x - y);
      }
      s += ta(i, j) * tb(j, i) * w;
    }
  return real_checked(s, "bkm_metric_integral");
}

// qCov^f_rho(A, B) = <A, J_rho^f B> - (Tr rho A*)(Tr rho B).
inline cx generalized_covariance(const MonotoneFunction& f, const DensityMatrix& rho,
                                 const ComplexMatrix& a, const ComplexMatrix& b) {
  if (rho.dim() != a.rows() || !a.is_square() || rho.dim() != b.rows() || !b.is_square())
    throw std::invalid_argument("generalized_covariance: dimension mismatch");
  if (!check_standard(f))
    throw std::invalid_argument("generalized_covariance: f must be standard");
  const JOperator j = make_j_operator(f, rho, rho);
  const cx first = j.form(a, b);
  const cx ta = (rho.matrix() * a.adjoint()).trace();
  const cx tb = (rho.matrix() * b).trace();
  return first - ta * tb;
}

// K_rho(A, B) = b(Tr rho) Tr A* Tr B + c <A, (J_rho^f)^{-1} B>.
inline cx kumagai_metric(const MonotoneFunction& f, const std::function<double(double)>& b_fn,
                         double c, const HermitianMatrix& rho, const ComplexMatrix& a,
                         const ComplexMatrix& b, double floor = kDefaultFloor) {
  if (!(c > 0.0)) throw std::invalid_argument("kumagai_metric: c must be positive");
  if (!f.operator_monotone || std::abs(f.eval(1.0) - 1.0) > 1e-12)
    throw std::invalid_argument("kumagai_metric: f must be operator monotone with f(1) = 1");
  if (rho.dim() != a.rows() || !a.is_square() || rho.dim() != b.rows() || !b.is_square())
    throw std::invalid_argument("kumagai_metric: dimension mismatch");
  const JOperator j = make_j_operator(f, rho, rho, floor);
  const cx first = b_fn(rho.trace()) * std::conj(a.trace()) * b.trace();
  return first + c * j.inverse_form(a, b);
}

// chi^2_k(rho, sigma) = gamma_sigma^{1/k}(rho - sigma, rho - sigma); the
// second reading gamma_sigma^{1/k}(rho, rho) - 1 is computed alongside and
// the two must agree.
inline double chi2_k(const MonotoneFunction& k_inv, const DensityMatrix& rho,
                     const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("chi2_k: dimension mismatch");
  if (!check_standard(k_inv)) throw std::invalid_argument("chi2_k: 1/k must be standard");
  const JOperator j = make_j_operator(k_inv, sigma, sigma);
  const ComplexMatrix diff = rho.matrix() - sigma.matrix();
  const double v1 = real_checked(j.inverse_form(diff, diff), "chi2_k");
  const double v2 = real_checked(j.inverse_form(rho.matrix(), rho.matrix()), "chi2_k") - 1.0;
  if (std::abs(v1 - v2) > 1e-9 * std::max(1.0, std::abs(v1)))
    throw std::runtime_error("chi2_k: centered and uncentered paths disagree by " +
                             std::to_string(v1 - v2));
  return v1;
}

// Tr rho sigma^{-alpha} rho sigma^{alpha-1} - 1.
inline double chi2_alpha(double alpha, const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("chi2_alpha: alpha must lie in [0, 1]");
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("chi2_alpha: dimension mismatch");
  const HermitianMatrix sa = spectral_map(sigma.eig(), [alpha](double x) { return std::pow(x, -alpha); });
  const HermitianMatrix sb =
      spectral_map(sigma.eig(), [alpha](double x) { return std::pow(x, alpha - 1.0); });
  const cx v = (rho.matrix() * sa.matrix() * rho.matrix() * sb.matrix()).trace();
  return real_checked(v, "chi2_alpha") - 1.0;
}

inline double chi2_bures(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double v1 = chi2_k(catalog_get("bures"), rho, sigma);
  const SpectralDecomposition& e = sigma.eig();
  const std::size_t n = e.dim();
  const ComplexMatrix tr = e.eigenvectors.adjoint() * rho.matrix() * e.eigenvectors;
  double v2 = -1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      v2 += 2.0 * std::norm(tr(i, j)) / (e.eigenvalues[i] + e.eigenvalues[j]);
  if (std::abs(v1 - v2) > 1e-9 * std::max(1.0, std::abs(v1)))
    throw std::runtime_error("chi2_bures: resolvent and spectral paths disagree by " +
                             std::to_string(v1 - v2));
  return v1;
}

// f(t) = (t-1)^2 / (F(t) + t F(1/t)). Near t = 1 the quotient is 0/0, so a
// local least-squares quadratic through four points just outside the switch
// zone replaces it.
inline MonotoneFunction ruskai_f_from_F(const MonotoneFunction& F) {
  if (std::abs(F.eval(1.0)) > 1e-12)
    throw std::invalid_argument("ruskai_f_from_F: F(1) must vanish");
  const std::function<double(double)> base = F.eval;
  const std::string fname = F.name;
  auto direct = [base, fname](double t) {
    const double u = t - 1.0;
    const double denom = base(t) + t * base(1.0 / t);
    if (!std::isfinite(denom) || denom <= 0.0)
      throw std::domain_error("ruskai_f_from_F(" + fname + "): denominator " +
                              std::to_string(denom) + " at t = " + std::to_string(t));
    return u * u / denom;
  };

  MonotoneFunction f;
  f.name = "ruskai_" + F.name;
  f.params = F.params;
  f.at_zero = 0.0;
  f.eval = [direct](double t) {
    const double u = t - 1.0;
    if (std::abs(u) >= 1e-3) return direct(t);
    constexpr double a = 1.5e-3;
    const double us[4] = {-2.0 * a, -a, a, 2.0 * a};
    double sg = 0.0, sgu = 0.0, sgu2 = 0.0;
    for (double uk : us) {
      const double g = direct(1.0 + uk);
      sg += g;
      sgu += g * uk;
      sgu2 += g * uk * uk;
    }
    const double s2 = 10.0 * a * a;
    const double s4 = 34.0 * a * a * a * a;
    const double det = 4.0 * s4 - s2 * s2;
    const double c0 = (s4 * sg - s2 * sgu2) / det;
    const double c2 = (4.0 * sgu2 - s2 * sg) / det;
    const double c1 = sgu / s2;
    return c0 + c1 * u + c2 * u * u;
  };
  return f;
}

// Mixed central difference of (t, s) -> S_F(D + tA || D + sB), Richardson
// extrapolated over h and h/2. The stencil evaluates to the negative of the
// metric, so the result is negated before returning.
inline double metric_from_divergence_hessian(const MonotoneFunction& F, const DensityMatrix& d,
                                             const HermitianMatrix& a, const HermitianMatrix& b,
                                             double h = 1e-4) {
  if (!F.operator_convex)
    throw std::invalid_argument("metric_from_divergence_hessian: F must be operator convex");
  if (!(h > 0.0)) throw std::invalid_argument("metric_from_divergence_hessian: h must be positive");
  if (std::abs(a.trace()) > 1e-10 || std::abs(b.trace()) > 1e-10)
    throw std::invalid_argument("metric_from_divergence_hessian: directions must be traceless");
  if (d.dim() != a.dim() || d.dim() != b.dim())
    throw std::invalid_argument("metric_from_divergence_hessian: dimension mismatch");

  auto perturbed = [&](const HermitianMatrix& dir, double t) {
    return DensityMatrix(HermitianMatrix(d.matrix() + t * dir.matrix()), d.floor());
  };
  auto stencil = [&](double step) {
    const DensityMatrix dpa = perturbed(a, step), dma = perturbed(a, -step);
    const DensityMatrix dpb = perturbed(b, step), dmb = perturbed(b, -step);
    const double spp = f_divergence(F, dpa, dpb);
    const double spm = f_divergence(F, dpa, dmb);
    const double smp = f_divergence(F, dma, dpb);
    const double smm = f_divergence(F, dma, dmb);
    return (spp - spm - smp + smm) / (4.0 * step * step);
  };
  const double g1 = stencil(h);
  const double g2 = stencil(0.5 * h);
  return -(4.0 * g2 - g1) / 3.0;
}

// Dense matrix of a linear map on n x n matrices in the matrix-unit basis,
// row-major vectorization. Linearity is probed on a fixed random combination.
inline ComplexMatrix superop_matrix(const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                                    std::size_t n) {
  ComplexMatrix m(n * n, n * n);
  Rng probe_rng(0xC0FFEEULL);
  ComplexMatrix probe_in(n, n);
  ComplexMatrix probe_expected(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const ComplexMatrix y = map(ComplexMatrix::matrix_unit(n, a, b));
      if (y.rows() != n || y.cols() != n)
        throw std::invalid_argument("superop_matrix: map must preserve dimension");
      const cx coeff = probe_rng.complex_gaussian();
      probe_in(a, b) = coeff;
      probe_expected = probe_expected + coeff * y;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i * n + j, a * n + b) = y(i, j);
    }
  const ComplexMatrix probe_out = map(probe_in);
  const double scale = std::max(1.0, probe_expected.frobenius_norm());
  if ((probe_out - probe_expected).frobenius_norm() > 1e-9 * scale)
    throw std::invalid_argument("superop_matrix: map failed the linearity probe");
  return m;
}

// Minimum eigenvalue of the Hermitian part; asymmetry beyond tolerance is an
// error in its own right rather than something to be averaged away.
inline double symmetrized_min_eigenvalue(const ComplexMatrix& m, double asym_tol = 1e-9) {
  if (!m.is_square())
    throw std::invalid_argument("symmetrized_min_eigenvalue: matrix not square");
  const ComplexMatrix adj = m.adjoint();
  double dev = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) dev = std::max(dev, std::abs(m(i, j) - adj(i, j)));
  if (dev > asym_tol * std::max(1.0, m.max_abs()))
    throw std::runtime_error("symmetrized_min_eigenvalue: asymmetry " + std::to_string(dev) +
                             " exceeds tolerance");
  return min_eigenvalue(HermitianMatrix(0.5 * (m + adj)));
}

}  // namespace qig
