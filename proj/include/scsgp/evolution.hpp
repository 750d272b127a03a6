// evolution.hpp - Jordan-Schwinger rotations built from the Bogoliubov modes
#pragma once

#include <vector>

#include "scsgp/fock.hpp"

namespace scsgp::evolution {

using fock::ComplexMatrix;
using fock::ComplexVector;
using fock::Index;
using fock::KronOperator;

struct EvolutionSpec {
  double theta = 0.0;  // y-rotation angle, [0, pi]
  double r_ref = 0.0;  // squeezing of the Bogoliubov modes A and B
  fock::Truncation trunc;
  // Convergence target for the single-mode z-rotation factors as the
  // exponentiation space grows.
  double spectral_tol = 1e-12;
  int max_spectral_dim = 4096;

  void validate() const;
};

// Operators and cached exponentials for U(theta, phi) = exp(-i phi Jz) exp(-i theta Jy)
// on the (n_max+1)^2 two-mode space. Immutable once built; share freely
// between threads.
//
// Jz = (h (x) 1 - 1 (x) h)/2 with h = A^dagger A, so exp(-i phi Jz) factors
// into single-mode exponentials. Those are formed on a larger buffered space
// (grown until the projected factors stop changing) and then projected, since
// exponentiating the n_max-truncated h converges only slowly in n_max.
// Jy conserves the total photon number a^dagger a + b^dagger b and is
// exponentiated block by block.
class EvolutionContext {
 public:
  explicit EvolutionContext(const EvolutionSpec& spec);

  const EvolutionSpec& spec() const { return spec_; }
  int n_max() const { return spec_.trunc.n_max; }
  Index single_dim() const { return single_dim_; }
  Index dim() const { return single_dim_ * single_dim_; }

  const KronOperator& jx() const { return jx_; }
  const KronOperator& jy() const { return jy_; }
  const KronOperator& jz() const { return jz_; }
  // cos(theta) Jz - sin(theta) Jx; U^dagger dU/dphi = -i G for every phi.
  const KronOperator& generator() const { return generator_; }

  ComplexVector apply_unitary(const ComplexVector& v, double phi) const;
  ComplexVector apply_unitary_adjoint(const ComplexVector& v, double phi) const;
  ComplexVector apply_unitary_derivative(const ComplexVector& v, double phi) const;
  // U(theta, 2 pi) from cached factors.
  ComplexVector apply_final(const ComplexVector& v) const;
  ComplexVector apply_rotation_y(const ComplexVector& v, bool adjoint = false) const;

  // Dense matrices; only for small spaces.
  ComplexMatrix unitary_matrix(double phi) const;
  ComplexMatrix final_unitary() const { return unitary_matrix(2.0 * 3.14159265358979323846); }

  // Diagnostics.
  Index spectral_dim() const { return spectral_dim_; }
  double spectral_change() const { return spectral_change_; }
  double jy_block_leak() const { return jy_leak_; }
  std::size_t jy_block_count() const { return y_blocks_.size(); }

 private:
  struct ZFactors {
    ComplexMatrix first;   // P exp(-i phi h / 2) P
    ComplexMatrix second;  // P exp(+i phi h / 2) P
  };
  struct YBlock {
    std::vector<Index> index;
    ComplexMatrix rot;  // exp(-i theta Jy) restricted to the block
  };

  ZFactors z_factors(double phi) const;
  ZFactors z_factor_derivatives(double phi) const;
  static ComplexVector apply_kron(const ComplexMatrix& left, const ComplexMatrix& right,
                                  const ComplexVector& v);

  EvolutionSpec spec_;
  Index single_dim_;
  KronOperator jx_, jy_, jz_, generator_;
  Eigen::VectorXd h_values_;
  ComplexMatrix h_vectors_top_;  // first n_max+1 rows of the buffered eigenvectors
  Index spectral_dim_ = 0;
  double spectral_change_ = 0.0;
  double jy_leak_ = 0.0;
  std::vector<YBlock> y_blocks_;
  ZFactors final_;
};

EvolutionContext build_context(const EvolutionSpec& spec);

// Dense exp(-i phi Jz) exp(-i theta Jy).
ComplexMatrix unitary_at(const EvolutionContext& ctx, double phi);

// Two-mode number states |i, j> with i + j <= photons.
std::vector<Index> interior_indices(const EvolutionContext& ctx, int photons);

// max |U^dagger(phi) [U(phi+h) - U(phi-h)]/(2h) + i G| over matrix elements
// between interior states (total photon number <= interior_photons).
double generator_check(const EvolutionContext& ctx, double phi, double h, int interior_photons);

// Largest violation of [Jx,Jy] = iJz, [Jy,Jz] = iJx, [Jz,Jx] = iJy among
// interior matrix elements.
double commutator_residual(const EvolutionContext& ctx, int interior_photons);

}  // namespace scsgp::evolution
