#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "qig/states.hpp"

using namespace qig;

TEST_CASE("density matrix validation") {
  CHECK_NOTHROW(DensityMatrix(HermitianMatrix::diagonal({0.25, 0.75})));
  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix::diagonal({0.5, 0.6})), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix::diagonal({1e-12, 1.0 - 1e-12})),
                  std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix::diagonal({0.5, 0.5}), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(HermitianMatrix::diagonal({-0.25, 1.25})), std::invalid_argument);

  DensityMatrix d(HermitianMatrix::diagonal({0.25, 0.75}));
  CHECK(d.dim() == 2);
  CHECK(d.min_eigenvalue() == Catch::Approx(0.25));
  CHECK(d.floor() == Catch::Approx(kDefaultFloor));
}

TEST_CASE("random densities satisfy the contract and reproduce by seed") {
  for (std::size_t dim : {2ul, 4ul, 7ul}) {
    DensityMatrix a = random_density(dim, 99);
    DensityMatrix b = random_density(dim, 99);
    DensityMatrix c = random_density(dim, 100);
    CHECK(std::abs(a.hermitian().trace() - 1.0) <= 1e-10);
    CHECK(a.min_eigenvalue() >= a.floor());
    CHECK((a.matrix() - b.matrix()).frobenius_norm() == 0.0);
    CHECK((a.matrix() - c.matrix()).frobenius_norm() > 1e-8);
  }
}

TEST_CASE("tangent vectors are traceless") {
  Rng rng(5);
  TangentVector t = random_tangent(3, rng);
  CHECK(std::abs(t.matrix.trace()) <= 1e-10);
  CHECK(t.traceless);
  CHECK_THROWS_AS(TangentVector(HermitianMatrix::identity(2), true), std::invalid_argument);
}

TEST_CASE("kraus channel validation requires trace preservation") {
  ComplexMatrix k1 = ComplexMatrix::from_rows({{cx{1, 0}, cx{0, 0}}, {cx{0, 0}, cx{0, 0}}});
  CHECK_THROWS_AS(KrausChannel(2, 2, {k1}), std::invalid_argument);

  ComplexMatrix k2 = ComplexMatrix::from_rows({{cx{0, 0}, cx{0, 0}}, {cx{0, 0}, cx{1, 0}}});
  ComplexMatrix swap01 = ComplexMatrix::from_rows({{cx{0, 0}, cx{1, 0}}, {cx{1, 0}, cx{0, 0}}});
  CHECK_NOTHROW(KrausChannel(2, 2, {swap01}));

  // pinching channel: diagonal projection
  KrausChannel pinch(2, 2, {k1, k2});
  DensityMatrix d(HermitianMatrix(
      ComplexMatrix::from_rows({{cx{0.5, 0}, cx{0.2, 0.1}}, {cx{0.2, -0.1}, cx{0.5, 0}}})));
  ComplexMatrix out = apply_channel(pinch, d.matrix());
  CHECK(std::abs(out(0, 1)) < 1e-15);
  CHECK(out(0, 0).real() == Catch::Approx(0.5));
}

TEST_CASE("adjoint channel is unital for CPTP input") {
  Rng rng(17);
  KrausChannel ch = random_cptp_rng(3, 3, 2, rng);
  KrausMap adj = adjoint_channel(ch);
  ComplexMatrix img = adj.apply(ComplexMatrix::identity(3));
  CHECK((img - ComplexMatrix::identity(3)).frobenius_norm() < 1e-10);
}

TEST_CASE("random channels preserve trace and positivity") {
  Rng rng(23);
  for (int rep = 0; rep < 5; ++rep) {
    KrausChannel ch = random_cptp_rng(3, 3, 2, rng);
    DensityMatrix d = random_density_rng(3, rng);
    ComplexMatrix out = apply_channel(ch, d.matrix());
    CHECK(std::abs(out.trace().real() - 1.0) <= 1e-10);
    DensityMatrix dout = density_from_channel_output(out);
    CHECK(dout.min_eigenvalue() >= dout.floor());
  }
}

TEST_CASE("partial trace channel sums diagonal blocks") {
  KrausChannel pt = partial_trace_channel(2);
  CHECK(pt.in_dim() == 4);
  CHECK(pt.out_dim() == 2);
  ComplexMatrix x(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      x(i, j) = cx{static_cast<double>(i * 4 + j + 1), 0};
  ComplexMatrix out = apply_channel(pt, x);
  // block (0,0) is rows/cols {0,1}; block (1,1) is rows/cols {2,3}
  CHECK(out(0, 0) == x(0, 0) + x(2, 2));
  CHECK(out(0, 1) == x(0, 1) + x(2, 3));
  CHECK(out(1, 0) == x(1, 0) + x(3, 2));
  CHECK(out(1, 1) == x(1, 1) + x(3, 3));
}

TEST_CASE("random unitary columns are orthonormal") {
  Rng rng(31);
  for (std::size_t dim : {2ul, 5ul}) {
    ComplexMatrix u = random_unitary(dim, rng);
    CHECK((u.adjoint() * u - ComplexMatrix::identity(dim)).frobenius_norm() < 1e-10);
  }
}

TEST_CASE("random probability vectors are normalized and positive") {
  Rng rng(41);
  std::vector<double> p = random_probability(5, rng);
  double sum = 0.0;
  for (double x : p) {
    CHECK(x > 0.0);
    sum += x;
  }
  CHECK(sum == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("pinching returns the diagonal in the given basis") {
  DensityMatrix d(HermitianMatrix(
      ComplexMatrix::from_rows({{cx{0.5, 0}, cx{0.1, 0.2}}, {cx{0.1, -0.2}, cx{0.5, 0}}})));
  std::vector<double> p = pinch_to_basis(d, ComplexMatrix::identity(2));
  CHECK(p[0] == Catch::Approx(0.5));
  CHECK(p[1] == Catch::Approx(0.5));

  // in the eigenbasis the pinched vector is the spectrum
  std::vector<double> q = pinch_to_basis(d, d.eig().eigenvectors);
  CHECK(q[0] == Catch::Approx(d.eig().eigenvalues[0]));
  CHECK(q[1] == Catch::Approx(d.eig().eigenvalues[1]));

  ComplexMatrix skew = ComplexMatrix::from_rows({{cx{1, 0}, cx{1, 0}}, {cx{0, 0}, cx{1, 0}}});
  CHECK_THROWS_AS(pinch_to_basis(d, skew), std::invalid_argument);
}

TEST_CASE("density mixing is the convex combination") {
  DensityMatrix a(HermitianMatrix::diagonal({0.25, 0.75}));
  DensityMatrix b(HermitianMatrix::diagonal({0.75, 0.25}));
  DensityMatrix m = mix_density(0.25, a, b);
  CHECK(m.matrix()(0, 0).real() == Catch::Approx(0.25 * 0.25 + 0.75 * 0.75));
  CHECK_THROWS_AS(mix_density(-0.1, a, b), std::invalid_argument);
  CHECK_THROWS_AS(mix_density(1.1, a, b), std::invalid_argument);
}

TEST_CASE("block embedding doubles the space") {
  DensityMatrix d1(HermitianMatrix::diagonal({0.25, 0.75}));
  DensityMatrix d2(HermitianMatrix::diagonal({0.5, 0.5}));
  ComplexMatrix b = ComplexMatrix::from_rows({{cx{1, 0}, cx{0, 1}}, {cx{0, -1}, cx{2, 0}}});
  auto [bigd, biga] = block_embed(d1, d2, b);
  CHECK(bigd.dim() == 4);
  CHECK(biga.dim() == 4);
  CHECK(std::abs(bigd.trace() - 2.0) < 1e-12);
  // off-diagonal blocks of the contrast hold b
  CHECK(biga.matrix()(0, 2) == cx{1, 0});
  CHECK(biga.matrix()(0, 3) == cx{0, 1});
  CHECK(biga.matrix()(2, 0) == cx{1, 0});
  // non-Hermitian b is rejected
  ComplexMatrix skew = ComplexMatrix::from_rows({{cx{0, 0}, cx{1, 0}}, {cx{0, 0}, cx{0, 0}}});
  CHECK_THROWS_AS(block_embed(d1, d2, skew), std::invalid_argument);
}

TEST_CASE("channel output normalization handles trace drift") {
  // exact trace: passes through
  DensityMatrix d = density_from_channel_output(
      ComplexMatrix::from_rows({{cx{0.5, 0}, cx{0, 0}}, {cx{0, 0}, cx{0.5, 0}}}));
  CHECK(d.dim() == 2);
  // small drift within 1e-10 is corrected
  CHECK_NOTHROW(density_from_channel_output(
      ComplexMatrix::from_rows({{cx{0.5 + 4e-11, 0}, cx{0, 0}}, {cx{0, 0}, cx{0.5, 0}}})));
  // gross drift is an error
  CHECK_THROWS_AS(density_from_channel_output(ComplexMatrix::from_rows(
                      {{cx{0.6, 0}, cx{0, 0}}, {cx{0, 0}, cx{0.5, 0}}})),
                  std::runtime_error);
}
