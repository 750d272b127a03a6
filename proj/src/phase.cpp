#include "scsgp/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "scsgp/errors.hpp"

namespace scsgp::phase {

using states::SCSParams;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("classical weight must lie in [0, 1]");
}

}  // namespace

std::string_view to_string(NormMode m) {
  return m == NormMode::corrected ? "corrected" : "paper-literal";
}

NormMode parse_norm(std::string_view name) {
  if (name == "corrected") return NormMode::corrected;
  if (name == "paper-literal") return NormMode::paper_literal;
  throw std::invalid_argument("unknown normalization '" + std::string(name) + "'");
}

double wrap(double angle) {
  double w = angle - kTwoPi * std::round(angle / kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  if (w > kPi) w -= kTwoPi;
  return w;
}

double arg(cplx z) {
  const double a = std::arg(z);
  return a <= -kPi ? kPi : a;
}

TotalPhase total_phase(const states::StatePair& pair, const evolution::EvolutionContext& ctx) {
  check_lambda(pair.lambda);
  if (pair.psi1.dim() != ctx.dim() || pair.psi2.dim() != ctx.dim())
    throw std::invalid_argument("total_phase: state and context dimensions differ");
  const cplx t1 = pair.psi1.amplitudes.dot(ctx.apply_final(pair.psi1.amplitudes));
  const cplx t2 = pair.psi2.amplitudes.dot(ctx.apply_final(pair.psi2.amplitudes));
  TotalPhase out;
  out.trace = pair.lambda * t1 + (1.0 - pair.lambda) * t2;
  out.undefined = std::abs(out.trace) < kUndefinedTraceThreshold;
  out.phase = arg(out.trace);
  return out;
}

double dynamical_phase_closed(const states::StatePair& pair, const evolution::EvolutionContext& ctx,
                              double* imag_residual) {
  const cplx e = fock::rank2_expectation(pair.psi1, pair.psi2, pair.lambda, ctx.generator());
  if (imag_residual) *imag_residual = std::abs(e.imag());
  if (std::abs(e.imag()) > kImagResidualTol) {
    std::ostringstream os;
    os << "dynamical_phase_closed: Tr[rho G] has imaginary part " << e.imag();
    throw HermiticityError(os.str());
  }
  return -kTwoPi * e.real();
}

double dynamical_phase_quadrature(const states::StatePair& pair,
                                  const evolution::EvolutionContext& ctx, int intervals) {
  if (intervals < 1) throw std::invalid_argument("dynamical_phase_quadrature: need >= 1 interval");
  check_lambda(pair.lambda);
  auto integrand = [&](double phi) {
    cplx sum = 0.0;
    const std::pair<const fock::FockVector*, double> parts[] = {{&pair.psi1, pair.lambda},
                                                                 {&pair.psi2, 1.0 - pair.lambda}};
    for (const auto& [psi, w] : parts) {
      if (w == 0.0) continue;
      const auto u = ctx.apply_unitary(psi->amplitudes, phi);
      const auto du = ctx.apply_unitary_derivative(psi->amplitudes, phi);
      sum += w * u.dot(du);
    }
    return sum;
  };
  const double step = kTwoPi / intervals;
  cplx integral = 0.5 * (integrand(0.0) + integrand(kTwoPi));
  for (int k = 1; k < intervals; ++k) integral += integrand(k * step);
  integral *= step;
  return (cplx(0.0, -1.0) * integral).real();
}

PhaseResult evaluate(const states::MixedStateSpec& spec, const evolution::EvolutionContext& ctx) {
  fock::Truncation trunc = ctx.spec().trunc;
  const states::StatePair pair = states::build_pair(spec, trunc);
  if (pair.n_max != ctx.n_max())
    throw TruncationError("evaluate: states need n_max = " + std::to_string(pair.n_max) +
                              " but the context was built at " + std::to_string(ctx.n_max()),
                          pair.n_max);
  PhaseResult out;
  const TotalPhase tp = total_phase(pair, ctx);
  out.total = tp.phase;
  out.trace_final = tp.trace;
  out.dynamical = dynamical_phase_closed(pair, ctx, &out.diagnostics.imag_residual);
  out.geometric = out.total - out.dynamical;
  out.geometric_wrapped = wrap(out.geometric);
  out.diagnostics.n_max = ctx.n_max();
  out.diagnostics.spectral_dim = static_cast<long>(ctx.spectral_dim());
  out.diagnostics.tail_mass = pair.tail_mass;
  out.diagnostics.trace_abs = std::abs(tp.trace);
  out.diagnostics.undefined_phase = tp.undefined;
  return out;
}

PhaseResult geometric_phase_numeric(const states::MixedStateSpec& spec,
                                    const evolution::EvolutionSpec& evo) {
  spec.validate();
  evolution::EvolutionSpec sized = evo;
  sized.trunc.n_max = std::max(states::required_nmax(spec.p0, evo.trunc),
                               states::required_nmax(spec.p1, evo.trunc));
  const evolution::EvolutionContext ctx(sized);
  return evaluate(spec, ctx);
}

double gp_entangled(const SCSParams& p0, const SCSParams& p1, double lambda, double theta,
                    NormMode norm) {
  check_lambda(lambda);
  const double p01 = states::overlap_closed(p0, p1).p01;
  const double e0 = states::eta(p0), e1 = states::eta(p1);
  const double p2 = p01 * p01;
  const double n = norm == NormMode::corrected ? 2.0 + 2.0 * p2 : 2.0 + 2.0 * p01;
  const double balanced = e0 * e0 + e1 * e1 + 2.0 * e0 * e1 * p2;
  const double unbalanced = (e0 * e0 + e1 * e1) * p2 + 2.0 * e0 * e1;
  return -kTwoPi * std::sin(theta) / n * (lambda * balanced + (1.0 - lambda) * unbalanced);
}

double gp_sep_unbalanced(const SCSParams& p0, const SCSParams& p1, double lambda, double theta) {
  check_lambda(lambda);
  p0.validate();
  p1.validate();
  const double e0 = states::eta(p0), e1 = states::eta(p1);
  return kTwoPi * (-e0 * e1 * std::sin(theta) + (e0 * e0 - e1 * e1) * (lambda - 0.5) * std::cos(theta));
}

double gp_sep_balanced(const SCSParams& p0, const SCSParams& p1, double lambda, double theta) {
  check_lambda(lambda);
  p0.validate();
  p1.validate();
  const double e0 = states::eta(p0), e1 = states::eta(p1);
  return -kTwoPi * std::sin(theta) * (lambda * e0 * e0 + (1.0 - lambda) * e1 * e1);
}

double gp_analytic(const states::MixedStateSpec& spec, double theta, NormMode norm) {
  switch (spec.family) {
    case states::Family::entangled: return gp_entangled(spec.p0, spec.p1, spec.lambda, theta, norm);
    case states::Family::sep_unbalanced: return gp_sep_unbalanced(spec.p0, spec.p1, spec.lambda, theta);
    case states::Family::sep_balanced: return gp_sep_balanced(spec.p0, spec.p1, spec.lambda, theta);
  }
  throw std::invalid_argument("gp_analytic: unknown family");
}

}  // namespace scsgp::phase
