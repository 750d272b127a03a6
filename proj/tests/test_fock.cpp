#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "scsgp/errors.hpp"
#include "scsgp/fock.hpp"

using namespace scsgp::fock;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMatrix random_hermitian(Index n, unsigned seed) {
  std::srand(seed);
  const ComplexMatrix r = ComplexMatrix::Random(n, n);
  return (r + r.adjoint()) * 0.5;
}

}  // namespace

TEST_CASE("annihilation operator") {
  ComplexMatrix two(2, 2);
  two << 0, 1, 0, 0;
  CHECK(max_abs(annihilation(2) - two) == 0.0);

  const ComplexMatrix a = annihilation(6);
  for (Index n = 1; n < 6; ++n) CHECK(a(n - 1, n).real() == doctest::Approx(std::sqrt(double(n))));
  const ComplexMatrix comm = a * a.adjoint() - a.adjoint() * a;
  for (Index n = 0; n < 5; ++n) CHECK(std::abs(comm(n, n) - 1.0) < 1e-14);

  Truncation t;
  t.n_max = 5;
  t.buffer = 3;
  CHECK(annihilation(t).rows() == 9);
}

TEST_CASE("truncation validation") {
  Truncation t;
  t.n_max = 0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t.n_max = 4;
  t.tail_tol = -1.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("bogoliubov mode") {
  Truncation t;
  t.n_max = 12;
  CHECK(max_abs(bogoliubov_A(0.0, t) - annihilation(t)) == 0.0);

  // [A, A^dagger] = 1 on the retained levels once the buffer absorbs the edge
  const ComplexMatrix big = bogoliubov_A(0.4, t);
  const ComplexMatrix comm = big * big.adjoint() - big.adjoint() * big;
  const ComplexMatrix kept = project(comm, t.single_dim());
  CHECK(max_abs(kept - ComplexMatrix::Identity(t.single_dim(), t.single_dim())) < 1e-10);
}

TEST_CASE("kron") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK(max_abs(kron(i2, i2) - ComplexMatrix::Identity(4, 4)) == 0.0);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  const ComplexMatrix k = kron(d, i2);
  for (Index i = 0; i < 4; ++i) CHECK(k(i, i).real() == (i < 2 ? 1.0 : 2.0));

  std::srand(3);
  const ComplexMatrix a = ComplexMatrix::Random(3, 3), b = ComplexMatrix::Random(3, 3);
  const ComplexMatrix i3 = ComplexMatrix::Identity(3, 3);
  CHECK(max_abs(kron(a, i3) * kron(i3, b) - kron(a, b)) < 1e-12);

  FockVector u{ComplexVector::Zero(3), 1, 2, 0.0}, v{ComplexVector::Zero(3), 1, 2, 0.0};
  u.amplitudes(1) = 1.0;
  v.amplitudes(2) = 1.0;
  const FockVector uv = kron(u, v);
  CHECK(uv.modes == 2);
  CHECK(uv.amplitudes(1 * 3 + 2) == cplx(1.0));
}

TEST_CASE("hermitian exponential") {
  const ComplexMatrix m = random_hermitian(7, 11);
  CHECK(max_abs(herm_expm(m, 0.0) - ComplexMatrix::Identity(7, 7)) < 1e-13);

  const ComplexMatrix u = herm_expm(m, 0.9);
  CHECK(max_abs(u.adjoint() * u - ComplexMatrix::Identity(7, 7)) < 1e-10);
  CHECK(max_abs(herm_expm(m, 0.4) * herm_expm(m, 0.5) - u) < 1e-12);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.3;
  d(1, 1) = -1.7;
  const ComplexMatrix ed = herm_expm(d, 2.0);
  CHECK(std::abs(ed(0, 0) - std::exp(cplx(0.0, -0.6))) < 1e-14);
  CHECK(std::abs(ed(1, 1) - std::exp(cplx(0.0, 3.4))) < 1e-14);

  // derivative against a central difference
  const HermitianSpectrum spec(m);
  const double h = 1e-5;
  const ComplexMatrix fd = (spec.expm(0.7 + h) - spec.expm(0.7 - h)) / (2 * h);
  CHECK(max_abs(fd - spec.expm_derivative(0.7)) < 1e-8);

  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianSpectrum{bad}, scsgp::SpectralError);
}

TEST_CASE("structured operator matches its dense form") {
  const Index d = 4;
  const ComplexMatrix a = annihilation(d);
  KronOperator op(d);
  op.add(cplx(0.5), a.adjoint(), a).add(cplx(0.0, 0.25), a, a.adjoint());
  const ComplexMatrix dense = op.dense();
  CHECK(max_abs(dense - (0.5 * kron(a.adjoint(), a) + cplx(0.0, 0.25) * kron(a, a.adjoint()))) < 1e-14);

  std::srand(5);
  const ComplexVector v = ComplexVector::Random(d * d);
  CHECK((op.apply(v) - dense * v).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(std::abs(op.element(6, 9) - dense(6, 9)) < 1e-15);
  CHECK(max_abs(op.adjoint().dense() - dense.adjoint()) < 1e-14);
  CHECK(max_abs((op * op).dense() - dense * dense) < 1e-13);
  CHECK(max_abs((op + op.scaled(2.0)).dense() - 3.0 * dense) < 1e-14);
}

TEST_CASE("rank-2 expectation") {
  const Index d = 3;
  std::srand(9);
  FockVector p1{ComplexVector::Random(d * d).normalized(), 2, 2, 0.0};
  FockVector p2{ComplexVector::Random(d * d).normalized(), 2, 2, 0.0};
  const ComplexMatrix id = ComplexMatrix::Identity(d * d, d * d);
  for (double lam : {0.0, 0.3, 1.0}) CHECK(std::abs(rank2_expectation(p1, p2, lam, id) - 1.0) < 1e-14);

  const ComplexMatrix h = random_hermitian(d * d, 4);
  CHECK(std::abs(rank2_expectation(p1, p2, 1.0, h) - p1.amplitudes.dot(h * p1.amplitudes)) == 0.0);

  // against the dense density operator
  const double lam = 0.35;
  const ComplexMatrix rho = lam * p1.amplitudes * p1.amplitudes.adjoint() +
                            (1 - lam) * p2.amplitudes * p2.amplitudes.adjoint();
  CHECK(std::abs(rank2_expectation(p1, p2, lam, h) - (rho * h).trace()) < 1e-13);

  KronOperator op(d);
  const ComplexMatrix a = annihilation(d);
  op.add(1.0, a.adjoint() * a, ComplexMatrix::Identity(d, d));
  CHECK(std::abs(rank2_expectation(p1, p2, lam, op) - (rho * op.dense()).trace()) < 1e-13);
  CHECK_THROWS_AS(rank2_expectation(p1, p2, 1.5, h), std::invalid_argument);
}
