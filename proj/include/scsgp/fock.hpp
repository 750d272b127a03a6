// fock.hpp - truncated Fock-space linear algebra for one and two bosonic modes
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace scsgp::fock {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Photon-number cutoff. Operators are assembled on n_max + buffer + 1 levels
// and projected back to the n_max + 1 retained levels.
struct Truncation {
  int n_max = 24;
  int buffer = 10;
  double tail_tol = 1e-12;

  void validate() const;
  Index single_dim() const { return n_max + 1; }
  Index two_mode_dim() const { return single_dim() * single_dim(); }
  Index buffered_dim() const { return n_max + buffer + 1; }
};

// Amplitudes in the number basis. Two-mode vectors use index i*(n_max+1) + j
// with i the first mode's photon number.
struct FockVector {
  ComplexVector amplitudes;
  int modes = 1;
  int n_max = 0;
  // Probability missing from the retained levels before renormalization.
  double tail_mass = 0.0;

  Index dim() const { return amplitudes.size(); }
  double norm_squared() const { return amplitudes.squaredNorm(); }
};

ComplexMatrix annihilation(Index dim);
// Built on the buffered space, dimension n_max + buffer + 1.
ComplexMatrix annihilation(const Truncation& trunc);

// a cosh(r) + a^dagger sinh(r), the real-parameter Bogoliubov mode.
ComplexMatrix bogoliubov_A(double r_ref, Index dim);
ComplexMatrix bogoliubov_A(double r_ref, const Truncation& trunc);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
FockVector kron(const FockVector& a, const FockVector& b);

// Leading dim x dim block.
ComplexMatrix project(const ComplexMatrix& m, Index dim);

double hermiticity_defect(const ComplexMatrix& m);
ComplexMatrix symmetrized(const ComplexMatrix& m);

// Eigendecomposition m = V diag(w) V^dagger of a Hermitian matrix, kept so that
// exp(-i s m) can be formed for many s at the cost of one decomposition.
class HermitianSpectrum {
 public:
  explicit HermitianSpectrum(const ComplexMatrix& m);

  // exp(-i * scale * m)
  ComplexMatrix expm(double scale) const;
  // d/dscale exp(-i * scale * m) = -i m exp(-i * scale * m)
  ComplexMatrix expm_derivative(double scale) const;

  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const ComplexMatrix& eigenvectors() const { return vectors_; }
  Index dim() const { return values_.size(); }

 private:
  Eigen::VectorXd values_;
  ComplexMatrix vectors_;
};

// exp(-i * scale * m) for Hermitian m (symmetrized before decomposition).
ComplexMatrix herm_expm(const ComplexMatrix& m, double scale);

// Sum of Kronecker products c_k L_k (x) R_k acting on the two-mode space
// without materializing the (n+1)^2-dimensional matrix.
class KronOperator {
 public:
  struct Term {
    cplx coef;
    ComplexMatrix left;
    ComplexMatrix right;
  };

  explicit KronOperator(Index single_dim) : single_dim_(single_dim) {}

  KronOperator& add(cplx coef, ComplexMatrix left, ComplexMatrix right);

  Index single_dim() const { return single_dim_; }
  Index dim() const { return single_dim_ * single_dim_; }
  const std::vector<Term>& terms() const { return terms_; }

  ComplexVector apply(const ComplexVector& v) const;
  cplx element(Index row, Index col) const;
  ComplexMatrix dense() const;

  KronOperator adjoint() const;
  KronOperator scaled(cplx factor) const;
  friend KronOperator operator+(const KronOperator& a, const KronOperator& b);
  // (La (x) Ra)(Lb (x) Rb) = La Lb (x) Ra Rb, term by term.
  friend KronOperator operator*(const KronOperator& a, const KronOperator& b);

 private:
  Index single_dim_;
  std::vector<Term> terms_;
};

// lambda <psi1|op|psi1> + (1 - lambda) <psi2|op|psi2> = Tr[rho op] for the
// rank-2 density operator, without forming rho.
cplx rank2_expectation(const FockVector& psi1, const FockVector& psi2, double lambda,
                       const ComplexMatrix& op);
cplx rank2_expectation(const FockVector& psi1, const FockVector& psi2, double lambda,
                       const KronOperator& op);

}  // namespace scsgp::fock
