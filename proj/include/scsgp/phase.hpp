// phase.hpp - total, dynamical and geometric phase of the rank-2 mixed states
#pragma once

#include <string_view>

#include "scsgp/evolution.hpp"
#include "scsgp/states.hpp"

namespace scsgp::phase {

using fock::cplx;

// Normalization of the entangled superpositions inside the closed-form GP.
// corrected: N = 2 + 2 p01^2 (the actual squared norm); paper_literal: N = 2 + 2 p01.
enum class NormMode { corrected, paper_literal };

std::string_view to_string(NormMode m);
NormMode parse_norm(std::string_view name);  // corrected | paper-literal

// Principal value in (-pi, pi]; -pi maps to +pi.
double wrap(double angle);
// arg z in (-pi, pi] under the same tie rule.
double arg(cplx z);

inline constexpr double kUndefinedTraceThreshold = 1e-12;
inline constexpr double kImagResidualTol = 1e-10;

struct TotalPhase {
  double phase = 0.0;
  cplx trace;
  bool undefined = false;  // |trace| below kUndefinedTraceThreshold
};

// arg Tr[rho(0) U(theta, 2 pi)].
TotalPhase total_phase(const states::StatePair& pair, const evolution::EvolutionContext& ctx);

// -2 pi Tr[rho(0) G]; throws HermiticityError when the expectation carries an
// imaginary part above kImagResidualTol. The residual is returned through
// imag_residual when non-null.
double dynamical_phase_closed(const states::StatePair& pair, const evolution::EvolutionContext& ctx,
                              double* imag_residual = nullptr);

// -i times the trapezoid rule over phi in [0, 2 pi] of Tr[rho U^dagger dU/dphi].
double dynamical_phase_quadrature(const states::StatePair& pair,
                                  const evolution::EvolutionContext& ctx, int intervals = 64);

struct Diagnostics {
  int n_max = 0;
  long spectral_dim = 0;
  double tail_mass = 0.0;
  double imag_residual = 0.0;
  double trace_abs = 0.0;
  bool undefined_phase = false;
};

struct PhaseResult {
  double total = 0.0;
  double dynamical = 0.0;
  double geometric = 0.0;  // total - dynamical
  double geometric_wrapped = 0.0;
  cplx trace_final;
  Diagnostics diagnostics;
};

// Numeric phases against a prebuilt context. States are built at the context's
// cutoff; TruncationError if they need more.
PhaseResult evaluate(const states::MixedStateSpec& spec, const evolution::EvolutionContext& ctx);

// Builds states and a context (cutoff chosen from the states' tails) and evaluates.
PhaseResult geometric_phase_numeric(const states::MixedStateSpec& spec,
                                    const evolution::EvolutionSpec& evo);

// Closed-form geometric phases.
double gp_entangled(const states::SCSParams& p0, const states::SCSParams& p1, double lambda,
                    double theta, NormMode norm = NormMode::corrected);
double gp_sep_unbalanced(const states::SCSParams& p0, const states::SCSParams& p1, double lambda,
                         double theta);
double gp_sep_balanced(const states::SCSParams& p0, const states::SCSParams& p1, double lambda,
                       double theta);
double gp_analytic(const states::MixedStateSpec& spec, double theta,
                   NormMode norm = NormMode::corrected);

}  // namespace scsgp::phase
