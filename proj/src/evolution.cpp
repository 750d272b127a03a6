#include "scsgp/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "scsgp/errors.hpp"

namespace scsgp::evolution {

using fock::cplx;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Real symmetric eigendecomposition of the buffered h = A^dagger A.
struct RealSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

RealSpectrum number_operator_spectrum(double r_ref, Index dim) {
  const Eigen::MatrixXd a = fock::bogoliubov_A(r_ref, dim).real();
  const Eigen::MatrixXd h = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (h + h.transpose()));
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "number_operator_spectrum: eigendecomposition failed (dim " << dim << ", r_ref " << r_ref
       << ")";
    throw SpectralError(os.str());
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix projected_exp(const Eigen::VectorXd& values, const ComplexMatrix& top, double coef) {
  const fock::ComplexVector phases = (values.cast<cplx>() * cplx(0.0, coef)).array().exp().matrix();
  return top * phases.asDiagonal() * top.adjoint();
}

}  // namespace

void EvolutionSpec::validate() const {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw std::invalid_argument("EvolutionSpec: theta must lie in [0, pi]");
  if (!std::isfinite(r_ref) || r_ref < 0.0)
    throw std::invalid_argument("EvolutionSpec: r_ref must be finite and >= 0");
  if (!(spectral_tol > 0.0)) throw std::invalid_argument("EvolutionSpec: spectral_tol must be > 0");
  trunc.validate();
}

EvolutionContext::EvolutionContext(const EvolutionSpec& spec)
    : spec_(spec),
      single_dim_(spec.trunc.single_dim()),
      jx_(single_dim_),
      jy_(single_dim_),
      jz_(single_dim_),
      generator_(single_dim_) {
  spec_.validate();
  const Index d = single_dim_;

  // Single-mode pieces on the buffered space, projected to n_max + 1 levels.
  const ComplexMatrix a_buf = fock::bogoliubov_A(spec_.r_ref, spec_.trunc);
  const ComplexMatrix h = fock::project(a_buf.adjoint() * a_buf, d);
  const ComplexMatrix a = fock::project(a_buf, d);
  const ComplexMatrix ad = fock::project(a_buf.adjoint(), d);
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);

  jx_.add(0.5, ad, a).add(0.5, a, ad);
  jy_.add(cplx(0.0, -0.5), ad, a).add(cplx(0.0, 0.5), a, ad);
  jz_.add(0.5, h, id).add(-0.5, id, h);
  generator_ = jz_.scaled(std::cos(spec_.theta)) + jx_.scaled(-std::sin(spec_.theta));

  // z-rotation factors: grow the exponentiation space until the projected
  // factors at phi = pi and phi = 2 pi settle.
  Index extra = std::max<Index>(32, 2 * spec_.trunc.buffer);
  RealSpectrum spectrum = number_operator_spectrum(spec_.r_ref, d + extra);
  auto probe = [&](const RealSpectrum& s) {
    const ComplexMatrix top = s.vectors.topRows(d).cast<cplx>();
    return std::pair{projected_exp(s.values, top, -0.5 * std::numbers::pi),
                     projected_exp(s.values, top, -std::numbers::pi)};
  };
  auto previous = probe(spectrum);
  while (true) {
    const Index next_extra = extra + extra / 2;
    if (d + next_extra > spec_.max_spectral_dim) {
      std::ostringstream os;
      os << "EvolutionContext: z-rotation factors did not converge below " << spec_.spectral_tol
         << " (last change " << spectral_change_ << ") within " << spec_.max_spectral_dim
         << " levels";
      throw TruncationError(os.str(), spec_.trunc.n_max);
    }
    RealSpectrum wider = number_operator_spectrum(spec_.r_ref, d + next_extra);
    auto current = probe(wider);
    spectral_change_ = std::max((current.first - previous.first).cwiseAbs().maxCoeff(),
                                (current.second - previous.second).cwiseAbs().maxCoeff());
    spectrum = std::move(wider);
    extra = next_extra;
    previous = std::move(current);
    // Eigenvalues grow with the space, so rounding in the phases sets a floor.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                         static_cast<double>(d + extra) * std::cosh(2.0 * spec_.r_ref);
    if (spectral_change_ <= std::max(spec_.spectral_tol, floor)) break;
  }
  spectral_dim_ = d + extra;
  h_values_ = spectrum.values;
  h_vectors_top_ = spectrum.vectors.topRows(d).cast<cplx>();

  // Jy must not couple different total photon numbers.
  {
    std::unordered_map<long long, cplx> off_block;
    const double drop = 0.0;
    for (const auto& t : jy_.terms()) {
      for (Index i = 0; i < d; ++i)
        for (Index k = 0; k < d; ++k) {
          const cplx l = t.left(i, k);
          if (std::abs(l) <= drop) continue;
          for (Index j = 0; j < d; ++j)
            for (Index m = 0; m < d; ++m) {
              if (i + j == k + m) continue;
              const cplx r = t.right(j, m);
              if (std::abs(r) <= drop) continue;
              off_block[(i * d + j) * d * d + (k * d + m)] += t.coef * l * r;
            }
        }
    }
    for (const auto& [key, value] : off_block) jy_leak_ = std::max(jy_leak_, std::abs(value));
    const double scale = std::cosh(2.0 * spec_.r_ref) * static_cast<double>(d);
    if (jy_leak_ > 1e-12 * scale) {
      std::ostringstream os;
      os << "EvolutionContext: Jy couples different photon-number sectors (leak " << jy_leak_ << ")";
      throw SpectralError(os.str());
    }
  }

  for (Index total = 0; total <= 2 * (d - 1); ++total) {
    YBlock block;
    for (Index i = std::max<Index>(0, total - (d - 1)); i <= std::min(total, d - 1); ++i)
      block.index.push_back(i * d + (total - i));
    const Index k = static_cast<Index>(block.index.size());
    ComplexMatrix sub(k, k);
    for (Index p = 0; p < k; ++p)
      for (Index q = 0; q < k; ++q) sub(p, q) = jy_.element(block.index[p], block.index[q]);
    block.rot = fock::HermitianSpectrum(fock::symmetrized(sub)).expm(spec_.theta);
    y_blocks_.push_back(std::move(block));
  }

  final_ = z_factors(kTwoPi);
}

EvolutionContext::ZFactors EvolutionContext::z_factors(double phi) const {
  return {projected_exp(h_values_, h_vectors_top_, -0.5 * phi),
          projected_exp(h_values_, h_vectors_top_, 0.5 * phi)};
}

EvolutionContext::ZFactors EvolutionContext::z_factor_derivatives(double phi) const {
  const fock::ComplexVector w = h_values_.cast<cplx>();
  const fock::ComplexVector d1 =
      ((w * cplx(0.0, -0.5 * phi)).array().exp() * (w * cplx(0.0, -0.5)).array()).matrix();
  const fock::ComplexVector d2 =
      ((w * cplx(0.0, 0.5 * phi)).array().exp() * (w * cplx(0.0, 0.5)).array()).matrix();
  return {h_vectors_top_ * d1.asDiagonal() * h_vectors_top_.adjoint(),
          h_vectors_top_ * d2.asDiagonal() * h_vectors_top_.adjoint()};
}

ComplexVector EvolutionContext::apply_kron(const ComplexMatrix& left, const ComplexMatrix& right,
                                           const ComplexVector& v) {
  const Index d = left.rows();
  const Eigen::Map<const ComplexMatrix> m(v.data(), d, d);
  ComplexVector out(v.size());
  Eigen::Map<ComplexMatrix> res(out.data(), d, d);
  res.noalias() = right * m * left.transpose();
  return out;
}

ComplexVector EvolutionContext::apply_rotation_y(const ComplexVector& v, bool adjoint) const {
  if (v.size() != dim()) throw std::invalid_argument("apply_rotation_y: dimension mismatch");
  ComplexVector out(v.size());
  for (const auto& block : y_blocks_) {
    const Index k = static_cast<Index>(block.index.size());
    fock::ComplexVector in(k);
    for (Index p = 0; p < k; ++p) in(p) = v(block.index[p]);
    const fock::ComplexVector res = adjoint ? fock::ComplexVector(block.rot.adjoint() * in)
                                            : fock::ComplexVector(block.rot * in);
    for (Index p = 0; p < k; ++p) out(block.index[p]) = res(p);
  }
  return out;
}

ComplexVector EvolutionContext::apply_unitary(const ComplexVector& v, double phi) const {
  const ZFactors z = z_factors(phi);
  return apply_kron(z.first, z.second, apply_rotation_y(v));
}

ComplexVector EvolutionContext::apply_unitary_adjoint(const ComplexVector& v, double phi) const {
  const ZFactors z = z_factors(phi);
  return apply_rotation_y(apply_kron(z.first.adjoint(), z.second.adjoint(), v), true);
}

ComplexVector EvolutionContext::apply_unitary_derivative(const ComplexVector& v, double phi) const {
  const ZFactors z = z_factors(phi);
  const ZFactors dz = z_factor_derivatives(phi);
  const ComplexVector y = apply_rotation_y(v);
  return apply_kron(dz.first, z.second, y) + apply_kron(z.first, dz.second, y);
}

ComplexVector EvolutionContext::apply_final(const ComplexVector& v) const {
  return apply_kron(final_.first, final_.second, apply_rotation_y(v));
}

ComplexMatrix EvolutionContext::unitary_matrix(double phi) const {
  constexpr Index kDenseLimit = 4096;
  if (dim() > kDenseLimit) throw std::length_error("unitary_matrix: space too large to materialize");
  ComplexMatrix out(dim(), dim());
  const ZFactors z = z_factors(phi);
  for (Index col = 0; col < dim(); ++col) {
    ComplexVector e = ComplexVector::Zero(dim());
    e(col) = 1.0;
    out.col(col) = apply_kron(z.first, z.second, apply_rotation_y(e));
  }
  return out;
}

EvolutionContext build_context(const EvolutionSpec& spec) { return EvolutionContext(spec); }

ComplexMatrix unitary_at(const EvolutionContext& ctx, double phi) { return ctx.unitary_matrix(phi); }

std::vector<Index> interior_indices(const EvolutionContext& ctx, int photons) {
  std::vector<Index> idx;
  const Index d = ctx.single_dim();
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      if (i + j <= photons) idx.push_back(i * d + j);
  return idx;
}

double generator_check(const EvolutionContext& ctx, double phi, double h, int interior_photons) {
  if (!(h > 0.0 && h <= 1e-2)) throw std::invalid_argument("generator_check: need 0 < h <= 1e-2");
  if (!(phi > h && phi < kTwoPi - h))
    throw std::invalid_argument("generator_check: phi must lie in (h, 2 pi - h)");
  const auto interior = interior_indices(ctx, interior_photons);
  double worst = 0.0;
  for (const Index col : interior) {
    ComplexVector e = ComplexVector::Zero(ctx.dim());
    e(col) = 1.0;
    const ComplexVector diff = (ctx.apply_unitary(e, phi + h) - ctx.apply_unitary(e, phi - h)) / (2.0 * h);
    const ComplexVector lhs = ctx.apply_unitary_adjoint(diff, phi);
    const ComplexVector rhs = ctx.generator().apply(e) * cplx(0.0, -1.0);
    for (const Index row : interior) worst = std::max(worst, std::abs(lhs(row) - rhs(row)));
  }
  return worst;
}

double commutator_residual(const EvolutionContext& ctx, int interior_photons) {
  const auto interior = interior_indices(ctx, interior_photons);
  const cplx i_unit(0.0, 1.0);
  const KronOperator& x = ctx.jx();
  const KronOperator& y = ctx.jy();
  const KronOperator& z = ctx.jz();
  const KronOperator defects[] = {
      x * y + (y * x).scaled(-1.0) + z.scaled(-i_unit),
      y * z + (z * y).scaled(-1.0) + x.scaled(-i_unit),
      z * x + (x * z).scaled(-1.0) + y.scaled(-i_unit),
  };
  double worst = 0.0;
  for (const auto& d : defects)
    for (const Index col : interior)
      for (const Index row : interior) worst = std::max(worst, std::abs(d.element(row, col)));
  return worst;
}

}  // namespace scsgp::evolution
