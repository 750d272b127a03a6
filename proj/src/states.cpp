#include "scsgp/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "scsgp/errors.hpp"
#include "scsgp/special.hpp"

namespace scsgp::states {

using fock::ComplexVector;
using fock::FockVector;
using fock::Truncation;

void SCSParams::validate(double alpha_cap) const {
  if (!std::isfinite(alpha) || !std::isfinite(r))
    throw std::invalid_argument("SCSParams: alpha and r must be finite");
  if (r < 0.0) throw std::invalid_argument("SCSParams: negative squeezing is not supported");
  if (std::abs(alpha) > alpha_cap)
    throw std::invalid_argument("SCSParams: |alpha| = " + std::to_string(std::abs(alpha)) +
                                " exceeds the cap " + std::to_string(alpha_cap));
}

double eta(const SCSParams& p) { return p.alpha * std::exp(p.r); }

std::string_view to_string(Family f) {
  switch (f) {
    case Family::entangled: return "entangled";
    case Family::sep_unbalanced: return "sep-unbalanced";
    case Family::sep_balanced: return "sep-balanced";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "entangled") return Family::entangled;
  if (name == "sep-unbalanced") return Family::sep_unbalanced;
  if (name == "sep-balanced") return Family::sep_balanced;
  throw std::invalid_argument("unknown state family '" + std::string(name) + "'");
}

void MixedStateSpec::validate(double alpha_cap) const {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("MixedStateSpec: lambda must lie in [0, 1]");
  p0.validate(alpha_cap);
  p1.validate(alpha_cap);
}

FockVector scs_fock_fixed(const SCSParams& p, int n_max) {
  if (n_max < 1) throw std::invalid_argument("scs_fock: n_max must be >= 1");
  p.validate();
  ComplexVector c(n_max + 1);
  if (p.r == 0.0) {
    // Coherent limit: the Hermite argument alpha e^r / sqrt(sinh 2r) diverges at r = 0.
    double amp = std::exp(-0.5 * p.alpha * p.alpha);
    c(0) = amp;
    for (int n = 1; n <= n_max; ++n) {
      amp *= p.alpha / std::sqrt(static_cast<double>(n));
      c(n) = amp;
    }
  } else {
    const double t = 0.5 * std::tanh(p.r);
    const double x = eta(p) / std::sqrt(std::sinh(2.0 * p.r));
    const double pref = std::exp(-0.5 * p.alpha * p.alpha * (1.0 + std::tanh(p.r))) /
                        std::sqrt(std::cosh(p.r));
    const auto h = special::hermite_scaled_seq(n_max, x, t);
    for (int n = 0; n <= n_max; ++n) c(n) = pref * h[static_cast<std::size_t>(n)];
  }
  FockVector v;
  v.modes = 1;
  v.n_max = n_max;
  const double norm2 = c.squaredNorm();
  v.tail_mass = std::max(0.0, 1.0 - norm2);
  v.amplitudes = c / std::sqrt(norm2);
  return v;
}

int required_nmax(const SCSParams& p, const Truncation& trunc) {
  trunc.validate();
  int n = trunc.n_max;
  while (true) {
    const FockVector v = scs_fock_fixed(p, n);
    if (v.tail_mass <= trunc.tail_tol) return n;
    if (n >= kAdaptiveNmaxCap)
      throw TruncationError("scs_fock: tail mass " + std::to_string(v.tail_mass) +
                                " still above tolerance at n_max = " + std::to_string(n),
                            n);
    n = std::min(2 * n, kAdaptiveNmaxCap);
  }
}

FockVector scs_fock(const SCSParams& p, const Truncation& trunc) {
  return scs_fock_fixed(p, required_nmax(p, trunc));
}

OverlapValue overlap_closed(const SCSParams& p0, const SCSParams& p1) {
  p0.validate();
  p1.validate();
  const double prod = std::tanh(p0.r) * std::tanh(p1.r);
  if (!(prod >= 0.0 && prod < 1.0))
    throw std::domain_error("overlap_closed: requires 0 <= tanh r0 tanh r1 < 1");
  const double a0 = p0.alpha, a1 = p1.alpha, r0 = p0.r, r1 = p1.r;
  const double cd = std::cosh(r0 - r1);
  const double gauss = -0.5 * a0 * a0 * (1.0 + std::tanh(r0)) - 0.5 * a1 * a1 * (1.0 + std::tanh(r1));
  const double cross = a0 * a1 * std::exp(r0 + r1) / cd -
                       a0 * a0 * std::exp(2.0 * r0) * std::sinh(r1) / (2.0 * std::cosh(r0) * cd) -
                       a1 * a1 * std::exp(2.0 * r1) * std::sinh(r0) / (2.0 * std::cosh(r1) * cd);
  return {std::exp(gauss + cross) / std::sqrt(cd), OverlapMethod::closed};
}

OverlapValue overlap_series(const SCSParams& p0, const SCSParams& p1, int n_terms) {
  p0.validate();
  p1.validate();
  if (p0.r <= 0.0 || p1.r <= 0.0)
    throw std::domain_error("overlap_series: Hermite series needs r0, r1 > 0; use overlap_closed");
  const double x0 = eta(p0) / std::sqrt(std::sinh(2.0 * p0.r));
  const double x1 = eta(p1) / std::sqrt(std::sinh(2.0 * p1.r));
  const double s = std::sqrt(std::tanh(p0.r) * std::tanh(p1.r));
  const double pref = std::exp(-0.5 * p0.alpha * p0.alpha * (1.0 + std::tanh(p0.r)) -
                               0.5 * p1.alpha * p1.alpha * (1.0 + std::tanh(p1.r))) /
                      std::sqrt(std::cosh(p0.r) * std::cosh(p1.r));
  return {pref * special::mehler_series(x0, x1, s, n_terms), OverlapMethod::series};
}

OverlapValue overlap_fock(const SCSParams& p0, const SCSParams& p1, const Truncation& trunc) {
  const int n = std::max(required_nmax(p0, trunc), required_nmax(p1, trunc));
  const FockVector v0 = scs_fock_fixed(p0, n);
  const FockVector v1 = scs_fock_fixed(p1, n);
  return {v0.amplitudes.dot(v1.amplitudes).real(), OverlapMethod::fock_dot};
}

StatePair build_pair(const MixedStateSpec& spec, const Truncation& trunc) {
  spec.validate();
  const int n = std::max(required_nmax(spec.p0, trunc), required_nmax(spec.p1, trunc));
  const FockVector v0 = scs_fock_fixed(spec.p0, n);
  const FockVector v1 = scs_fock_fixed(spec.p1, n);

  StatePair pair;
  pair.lambda = spec.lambda;
  pair.n_max = n;
  pair.tail_mass = std::max(v0.tail_mass, v1.tail_mass);

  auto finish = [](FockVector v, double& raw) {
    raw = v.norm_squared();
    v.amplitudes /= std::sqrt(raw);
    return v;
  };

  switch (spec.family) {
    case Family::entangled: {
      FockVector a = fock::kron(v0, v0);
      a.amplitudes += fock::kron(v1, v1).amplitudes;
      FockVector b = fock::kron(v0, v1);
      b.amplitudes += fock::kron(v1, v0).amplitudes;
      pair.psi1 = finish(std::move(a), pair.raw_norm1);
      pair.psi2 = finish(std::move(b), pair.raw_norm2);
      break;
    }
    case Family::sep_unbalanced:
      pair.psi1 = finish(fock::kron(v0, v1), pair.raw_norm1);
      pair.psi2 = finish(fock::kron(v1, v0), pair.raw_norm2);
      break;
    case Family::sep_balanced:
      pair.psi1 = finish(fock::kron(v0, v0), pair.raw_norm1);
      pair.psi2 = finish(fock::kron(v1, v1), pair.raw_norm2);
      break;
  }
  return pair;
}

}  // namespace scsgp::states
