#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qig/eigen.hpp"
#include "qig/matrix.hpp"
#include "qig/rng.hpp"

namespace qig {

inline constexpr double kDefaultFloor = 1e-8;

// Strictly positive definite, unit trace. The spectral decomposition is
// computed once at construction; every consumer reuses it.
class DensityMatrix {
 public:
  explicit DensityMatrix(const HermitianMatrix& m, double floor = kDefaultFloor)
      : mat_(m), eig_(hermitian_eig(m)), floor_(floor) {
    if (!(floor > 0.0)) throw std::invalid_argument("DensityMatrix: floor must be positive");
    const double tr = mat_.trace();
    if (std::abs(tr - 1.0) > 1e-10)
      throw std::invalid_argument("DensityMatrix: trace is " + std::to_string(tr) +
                                  ", must be 1 within 1e-10");
    if (eig_.eigenvalues.front() < floor_)
      throw std::invalid_argument("DensityMatrix: minimum eigenvalue " +
                                  std::to_string(eig_.eigenvalues.front()) +
                                  " below positivity floor " + std::to_string(floor_));
  }

  std::size_t dim() const { return mat_.dim(); }
  const HermitianMatrix& hermitian() const { return mat_; }
  const ComplexMatrix& matrix() const { return mat_.matrix(); }
  const SpectralDecomposition& eig() const { return eig_; }
  double floor() const { return floor_; }
  double min_eigenvalue() const { return eig_.eigenvalues.front(); }

 private:
  HermitianMatrix mat_;
  SpectralDecomposition eig_;
  double floor_;
};

struct TangentVector {
  HermitianMatrix matrix;
  bool traceless;

  TangentVector(HermitianMatrix m, bool traceless_flag)
      : matrix(std::move(m)), traceless(traceless_flag) {
    if (traceless && std::abs(matrix.trace()) > 1e-10)
      throw std::invalid_argument("TangentVector: trace " + std::to_string(matrix.trace()) +
                                  " exceeds 1e-10 for a traceless vector");
  }
};

// Completely positive map X -> sum K X K*; no trace-preservation assumed.
struct KrausMap {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<ComplexMatrix> ops;

  ComplexMatrix apply(const ComplexMatrix& x) const {
    if (x.rows() != in_dim || x.cols() != in_dim)
      throw std::invalid_argument("KrausMap: input must be " + std::to_string(in_dim) + "x" +
                                  std::to_string(in_dim));
    ComplexMatrix out(out_dim, out_dim);
    for (const ComplexMatrix& k : ops) out = out + k * x * k.adjoint();
    return out;
  }
};

class KrausChannel {
 public:
  KrausChannel(std::size_t in_dim, std::size_t out_dim, std::vector<ComplexMatrix> ops)
      : map_{in_dim, out_dim, std::move(ops)} {
    if (in_dim == 0 || out_dim == 0)
      throw std::invalid_argument("KrausChannel: dimensions must be at least 1");
    if (map_.ops.empty()) throw std::invalid_argument("KrausChannel: no Kraus operators");
    for (const ComplexMatrix& k : map_.ops)
      if (k.rows() != out_dim || k.cols() != in_dim)
        throw std::invalid_argument("KrausChannel: Kraus operator shape mismatch");
    ComplexMatrix s(in_dim, in_dim);
    for (const ComplexMatrix& k : map_.ops) s = s + k.adjoint() * k;
    const ComplexMatrix dev = s - ComplexMatrix::identity(in_dim);
    if (dev.max_abs() > 1e-10)
      throw std::invalid_argument("KrausChannel: sum K*K deviates from identity by " +
                                  std::to_string(dev.max_abs()));
  }

  std::size_t in_dim() const { return map_.in_dim; }
  std::size_t out_dim() const { return map_.out_dim; }
  const std::vector<ComplexMatrix>& ops() const { return map_.ops; }
  const KrausMap& map() const { return map_; }

 private:
  KrausMap map_;
};

inline ComplexMatrix apply_channel(const KrausChannel& ch, const ComplexMatrix& x) {
  return ch.map().apply(x);
}

// Hilbert-Schmidt adjoint X -> sum K* X K. Unital, not trace preserving.
inline KrausMap adjoint_channel(const KrausChannel& ch) {
  KrausMap adj{ch.out_dim(), ch.in_dim(), {}};
  adj.ops.reserve(ch.ops().size());
  for (const ComplexMatrix& k : ch.ops()) adj.ops.push_back(k.adjoint());
  return adj;
}

// Channel on block matrices diag-summing to the diagonal block total:
// Kraus ops [I 0] and [0 I], so diag(B11, B22) -> B11 + B22.
inline KrausChannel partial_trace_channel(std::size_t n) {
  ComplexMatrix k1(n, 2 * n), k2(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    k1(i, i) = cx{1.0, 0.0};
    k2(i, n + i) = cx{1.0, 0.0};
  }
  return KrausChannel(2 * n, n, {k1, k2});
}

inline HermitianMatrix random_hermitian(std::size_t dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  return HermitianMatrix(0.5 * (g + g.adjoint()));
}

inline TangentVector random_tangent(std::size_t dim, Rng& rng) {
  const HermitianMatrix h = random_hermitian(dim, rng);
  const double shift = h.trace() / static_cast<double>(dim);
  ComplexMatrix m = h.matrix();
  for (std::size_t i = 0; i < dim; ++i) m(i, i) -= cx{shift, 0.0};
  return TangentVector(HermitianMatrix(m), true);
}

inline ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    ComplexMatrix g = ginibre(dim, dim, rng);
    bool ok = true;
    for (std::size_t j = 0; j < dim && ok; ++j) {
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i < j; ++i) {
          cx proj{0.0, 0.0};
          for (std::size_t r = 0; r < dim; ++r) proj += std::conj(g(r, i)) * g(r, j);
          for (std::size_t r = 0; r < dim; ++r) g(r, j) -= proj * g(r, i);
        }
      double nrm = 0.0;
      for (std::size_t r = 0; r < dim; ++r) nrm += std::norm(g(r, j));
      nrm = std::sqrt(nrm);
      if (nrm < 1e-8) {
        ok = false;
        break;
      }
      for (std::size_t r = 0; r < dim; ++r) g(r, j) = g(r, j) * (1.0 / nrm);
    }
    if (ok) return g;
  }
  throw std::runtime_error("random_unitary: repeated rank-deficient draws");
}

inline std::vector<double> random_probability(std::size_t dim, Rng& rng) {
  std::vector<double> p(dim);
  double s = 0.0;
  for (double& v : p) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    v = -std::log(u);
    s += v;
  }
  for (double& v : p) v /= s;
  return p;
}

inline DensityMatrix random_density_rng(std::size_t dim, Rng& rng, double floor = kDefaultFloor) {
  if (dim < 2) throw std::invalid_argument("random_density: dim must be at least 2");
  const ComplexMatrix g = ginibre(dim, dim, rng);
  ComplexMatrix w = g * g.adjoint();
  w = (1.0 / w.trace().real()) * w;
  HermitianMatrix h(w);
  for (int pass = 0; pass < 8; ++pass) {
    if (min_eigenvalue(h) >= floor) return DensityMatrix(h, floor);
    const double c = 2.0 * static_cast<double>(dim) * floor;
    ComplexMatrix mixed = (1.0 - c) * h.matrix();
    for (std::size_t i = 0; i < dim; ++i) mixed(i, i) += cx{c / static_cast<double>(dim), 0.0};
    mixed = (1.0 / mixed.trace().real()) * mixed;
    h = HermitianMatrix(mixed);
  }
  return DensityMatrix(h, floor);
}

inline DensityMatrix random_density(std::size_t dim, std::uint64_t rng_seed,
                                    double floor = kDefaultFloor) {
  Rng rng(rng_seed);
  return random_density_rng(dim, rng, floor);
}

// Stinespring draw: orthonormalize a Gaussian (out*env) x in matrix to an
// isometry and slice its row blocks into env Kraus operators.
inline KrausChannel random_cptp_rng(std::size_t in_dim, std::size_t out_dim, std::size_t env_dim,
                                    Rng& rng) {
  if (env_dim < 1) throw std::invalid_argument("random_cptp: env_dim must be at least 1");
  if (out_dim * env_dim < in_dim)
    throw std::invalid_argument("random_cptp: out_dim*env_dim must be at least in_dim");
  const std::size_t rows = out_dim * env_dim;
  for (int attempt = 0; attempt < 8; ++attempt) {
    ComplexMatrix g = ginibre(rows, in_dim, rng);
    bool ok = true;
    for (std::size_t j = 0; j < in_dim && ok; ++j) {
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i < j; ++i) {
          cx proj{0.0, 0.0};
          for (std::size_t r = 0; r < rows; ++r) proj += std::conj(g(r, i)) * g(r, j);
          for (std::size_t r = 0; r < rows; ++r) g(r, j) -= proj * g(r, i);
        }
      double nrm = 0.0;
      for (std::size_t r = 0; r < rows; ++r) nrm += std::norm(g(r, j));
      nrm = std::sqrt(nrm);
      if (nrm < 1e-8) {
        ok = false;
        break;
      }
      for (std::size_t r = 0; r < rows; ++r) g(r, j) = g(r, j) * (1.0 / nrm);
    }
    if (!ok) continue;
    std::vector<ComplexMatrix> ops;
    ops.reserve(env_dim);
    for (std::size_t e = 0; e < env_dim; ++e) {
      ComplexMatrix k(out_dim, in_dim);
      for (std::size_t r = 0; r < out_dim; ++r)
        for (std::size_t c = 0; c < in_dim; ++c) k(r, c) = g(e * out_dim + r, c);
      ops.push_back(k);
    }
    return KrausChannel(in_dim, out_dim, std::move(ops));
  }
  throw std::runtime_error("random_cptp: repeated rank-deficient draws");
}

inline KrausChannel random_cptp(std::size_t in_dim, std::size_t out_dim, std::size_t env_dim,
                                std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return random_cptp_rng(in_dim, out_dim, env_dim, rng);
}

// Float-drift control for densities coming back out of a channel: symmetrize,
// divide out a trace deviation of at most 1e-10, and re-validate the floor.
inline DensityMatrix density_from_channel_output(const ComplexMatrix& x,
                                                 double floor = kDefaultFloor) {
  HermitianMatrix h(x);
  const double tr = h.trace();
  if (std::abs(tr - 1.0) > 1e-10)
    throw std::runtime_error("density_from_channel_output: trace " + std::to_string(tr) +
                             " deviates beyond drift tolerance");
  return DensityMatrix(HermitianMatrix((1.0 / tr) * h.matrix()), floor);
}

inline DensityMatrix mix_density(double lambda, const DensityMatrix& a, const DensityMatrix& b) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("mix_density: lambda must lie in [0, 1]");
  if (a.dim() != b.dim()) throw std::invalid_argument("mix_density: dimension mismatch");
  const ComplexMatrix m = lambda * a.matrix() + (1.0 - lambda) * b.matrix();
  return DensityMatrix(HermitianMatrix(m), std::min(a.floor(), b.floor()));
}

// Diagonal of V* rho V: the classical distribution after pinching to V's columns.
inline std::vector<double> pinch_to_basis(const DensityMatrix& rho, const ComplexMatrix& basis) {
  if (!basis.is_square() || basis.rows() != rho.dim())
    throw std::invalid_argument("pinch_to_basis: basis shape mismatch");
  const ComplexMatrix gram = basis.adjoint() * basis - ComplexMatrix::identity(rho.dim());
  if (gram.frobenius_norm() > 1e-10)
    throw std::invalid_argument("pinch_to_basis: basis is not unitary within 1e-10");
  const ComplexMatrix t = basis.adjoint() * rho.matrix() * basis;
  std::vector<double> p(rho.dim());
  double sum = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    p[i] = t(i, i).real();
    if (p[i] < -1e-12)
      throw std::runtime_error("pinch_to_basis: negative diagonal entry " + std::to_string(p[i]));
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw std::runtime_error("pinch_to_basis: diagonal sums to " + std::to_string(sum));
  return p;
}

// The doubled pair D = diag(D2, D1), A = [[0, B], [B, 0]]. D keeps trace 2.
// A is Hermitian only when B is; other B are rejected by construction.
inline std::pair<HermitianMatrix, HermitianMatrix> block_embed(const DensityMatrix& d1,
                                                               const DensityMatrix& d2,
                                                               const ComplexMatrix& b) {
  const std::size_t n = d1.dim();
  if (d2.dim() != n || b.rows() != n || b.cols() != n)
    throw std::invalid_argument("block_embed: dimension mismatch");
  ComplexMatrix dm(2 * n, 2 * n), am(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      dm(i, j) = d2.matrix()(i, j);
      dm(n + i, n + j) = d1.matrix()(i, j);
      am(i, n + j) = b(i, j);
      am(n + i, j) = b(i, j);
    }
  return {HermitianMatrix(dm), HermitianMatrix(am)};
}

}  // namespace qig
