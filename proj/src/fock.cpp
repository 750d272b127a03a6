#include "scsgp/fock.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "scsgp/errors.hpp"

namespace scsgp::fock {

namespace {

constexpr double kHermitianTol = 1e-12;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("classical weight must lie in [0, 1]");
}

}  // namespace

void Truncation::validate() const {
  if (n_max < 1) throw std::invalid_argument("Truncation: n_max must be >= 1");
  if (buffer < 0) throw std::invalid_argument("Truncation: buffer must be >= 0");
  if (!(tail_tol > 0.0 && tail_tol <= 1e-6))
    throw std::invalid_argument("Truncation: tail_tol must lie in (0, 1e-6]");
}

ComplexMatrix annihilation(Index dim) {
  if (dim < 1) throw std::invalid_argument("annihilation: dimension must be >= 1");
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  for (Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix annihilation(const Truncation& trunc) {
  trunc.validate();
  return annihilation(trunc.buffered_dim());
}

ComplexMatrix bogoliubov_A(double r_ref, Index dim) {
  if (!std::isfinite(r_ref)) throw std::invalid_argument("bogoliubov_A: r_ref must be finite");
  const ComplexMatrix a = annihilation(dim);
  return a * std::cosh(r_ref) + a.adjoint() * std::sinh(r_ref);
}

ComplexMatrix bogoliubov_A(double r_ref, const Truncation& trunc) {
  trunc.validate();
  return bogoliubov_A(r_ref, trunc.buffered_dim());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw std::invalid_argument("kron: operands must be square");
  const Index n = a.rows() * b.rows();
  if (a.rows() != 0 && n / a.rows() != b.rows())
    throw std::overflow_error("kron: dimension overflow");
  ComplexMatrix out(n, n);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

FockVector kron(const FockVector& a, const FockVector& b) {
  if (a.modes != 1 || b.modes != 1 || a.dim() != b.dim())
    throw std::invalid_argument("kron: expected two single-mode vectors of equal dimension");
  FockVector out;
  out.modes = 2;
  out.n_max = a.n_max;
  out.tail_mass = std::max(a.tail_mass, b.tail_mass);
  out.amplitudes.resize(a.dim() * b.dim());
  for (Index i = 0; i < a.dim(); ++i)
    out.amplitudes.segment(i * b.dim(), b.dim()) = a.amplitudes(i) * b.amplitudes;
  return out;
}

ComplexMatrix project(const ComplexMatrix& m, Index dim) {
  if (dim > m.rows() || dim > m.cols()) throw std::invalid_argument("project: block exceeds matrix");
  return m.topLeftCorner(dim, dim);
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermiticity_defect: matrix not square");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix symmetrized(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("symmetrized: matrix not square");
  return (m + m.adjoint()) * 0.5;
}

HermitianSpectrum::HermitianSpectrum(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw SpectralError("HermitianSpectrum: expected a non-empty square matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianTol * scale) {
    std::ostringstream os;
    os << "HermitianSpectrum: matrix is not Hermitian (defect " << defect << ", dim " << m.rows()
       << ")";
    throw SpectralError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetrized(m));
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "HermitianSpectrum: eigendecomposition failed (dim " << m.rows() << ", max |m_ij| "
       << scale << ")";
    throw SpectralError(os.str());
  }
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

ComplexMatrix HermitianSpectrum::expm(double scale) const {
  const ComplexVector phases =
      (values_.cast<cplx>() * cplx(0.0, -scale)).array().exp().matrix();
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

ComplexMatrix HermitianSpectrum::expm_derivative(double scale) const {
  const ComplexVector factors =
      ((values_.cast<cplx>() * cplx(0.0, -scale)).array().exp() *
       (values_.cast<cplx>() * cplx(0.0, -1.0)).array())
          .matrix();
  return vectors_ * factors.asDiagonal() * vectors_.adjoint();
}

ComplexMatrix herm_expm(const ComplexMatrix& m, double scale) {
  if (m.rows() != m.cols()) throw SpectralError("herm_expm: matrix not square");
  return HermitianSpectrum(symmetrized(m)).expm(scale);
}

KronOperator& KronOperator::add(cplx coef, ComplexMatrix left, ComplexMatrix right) {
  if (left.rows() != single_dim_ || left.cols() != single_dim_ || right.rows() != single_dim_ ||
      right.cols() != single_dim_)
    throw std::invalid_argument("KronOperator::add: factor dimension mismatch");
  terms_.push_back({coef, std::move(left), std::move(right)});
  return *this;
}

ComplexVector KronOperator::apply(const ComplexVector& v) const {
  if (v.size() != dim()) throw std::invalid_argument("KronOperator::apply: dimension mismatch");
  // Column-major view M with M(j, i) = v[i*d + j]; (L (x) R) v maps to R M L^T.
  const Eigen::Map<const ComplexMatrix> m(v.data(), single_dim_, single_dim_);
  ComplexVector out = ComplexVector::Zero(dim());
  Eigen::Map<ComplexMatrix> acc(out.data(), single_dim_, single_dim_);
  for (const auto& t : terms_) acc.noalias() += t.coef * (t.right * m * t.left.transpose());
  return out;
}

cplx KronOperator::element(Index row, Index col) const {
  const Index i = row / single_dim_, j = row % single_dim_;
  const Index k = col / single_dim_, l = col % single_dim_;
  cplx sum = 0.0;
  for (const auto& t : terms_) sum += t.coef * t.left(i, k) * t.right(j, l);
  return sum;
}

ComplexMatrix KronOperator::dense() const {
  constexpr Index kDenseLimit = 4096;
  if (dim() > kDenseLimit)
    throw std::length_error("KronOperator::dense: dimension too large to materialize");
  ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
  for (const auto& t : terms_) out += t.coef * kron(t.left, t.right);
  return out;
}

KronOperator KronOperator::adjoint() const {
  KronOperator out(single_dim_);
  for (const auto& t : terms_) out.add(std::conj(t.coef), t.left.adjoint(), t.right.adjoint());
  return out;
}

KronOperator KronOperator::scaled(cplx factor) const {
  KronOperator out = *this;
  for (auto& t : out.terms_) t.coef *= factor;
  return out;
}

KronOperator operator+(const KronOperator& a, const KronOperator& b) {
  if (a.single_dim_ != b.single_dim_) throw std::invalid_argument("KronOperator: dimension mismatch");
  KronOperator out = a;
  out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
  return out;
}

KronOperator operator*(const KronOperator& a, const KronOperator& b) {
  if (a.single_dim_ != b.single_dim_) throw std::invalid_argument("KronOperator: dimension mismatch");
  KronOperator out(a.single_dim_);
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) out.add(ta.coef * tb.coef, ta.left * tb.left, ta.right * tb.right);
  return out;
}

cplx rank2_expectation(const FockVector& psi1, const FockVector& psi2, double lambda,
                       const ComplexMatrix& op) {
  check_lambda(lambda);
  if (psi1.dim() != psi2.dim() || op.rows() != psi1.dim() || op.cols() != psi1.dim())
    throw std::invalid_argument("rank2_expectation: dimension mismatch");
  const cplx e1 = psi1.amplitudes.dot(op * psi1.amplitudes);
  const cplx e2 = psi2.amplitudes.dot(op * psi2.amplitudes);
  return lambda * e1 + (1.0 - lambda) * e2;
}

cplx rank2_expectation(const FockVector& psi1, const FockVector& psi2, double lambda,
                       const KronOperator& op) {
  check_lambda(lambda);
  if (psi1.dim() != psi2.dim() || op.dim() != psi1.dim())
    throw std::invalid_argument("rank2_expectation: dimension mismatch");
  const cplx e1 = psi1.amplitudes.dot(op.apply(psi1.amplitudes));
  const cplx e2 = psi2.amplitudes.dot(op.apply(psi2.amplitudes));
  return lambda * e1 + (1.0 - lambda) * e2;
}

}  // namespace scsgp::fock
