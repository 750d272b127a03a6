// states.hpp - squeezed-coherent states and the three two-mode mixed-state families
#pragma once

#include <string>
#include <string_view>

#include "scsgp/fock.hpp"
#include "scsgp/special.hpp"

namespace scsgp::states {

inline constexpr double kDefaultAlphaCap = 4.0;
inline constexpr int kAdaptiveNmaxCap = 512;

// Real coherence amplitude and squeezing magnitude (squeezing angle 0).
struct SCSParams {
  double alpha = 0.0;
  double r = 0.0;

  void validate(double alpha_cap = kDefaultAlphaCap) const;
};

// Eigenvalue of the Bogoliubov mode on |alpha, r>: alpha * e^r.
double eta(const SCSParams& p);

enum class Family {
  entangled,       // psi1 ~ |00> + |11>, psi2 ~ |01> + |10>
  sep_unbalanced,  // psi1 = |0>|1>, psi2 = |1>|0>
  sep_balanced,    // psi1 = |0>|0>, psi2 = |1>|1>
};

std::string_view to_string(Family f);
Family parse_family(std::string_view name);  // entangled | sep-unbalanced | sep-balanced

struct MixedStateSpec {
  Family family = Family::sep_balanced;
  double lambda = 0.5;
  SCSParams p0;
  SCSParams p1;

  void validate(double alpha_cap = kDefaultAlphaCap) const;
};

enum class OverlapMethod { closed, series, fock_dot };

struct OverlapValue {
  double p01 = 0.0;
  OverlapMethod method = OverlapMethod::closed;
};

// Fock amplitudes of |alpha, r>, renormalized. Starting from trunc.n_max the
// cutoff doubles until the missing probability is <= trunc.tail_tol; throws
// TruncationError past kAdaptiveNmaxCap.
fock::FockVector scs_fock(const SCSParams& p, const fock::Truncation& trunc);

// Same amplitudes at a fixed cutoff, no adaptivity; tail_mass records the deficit.
fock::FockVector scs_fock_fixed(const SCSParams& p, int n_max);

// Smallest cutoff the doubling schedule of scs_fock settles on.
int required_nmax(const SCSParams& p, const fock::Truncation& trunc);

// Closed form of <alpha0, r0 | alpha1, r1> after Mehler resummation.
OverlapValue overlap_closed(const SCSParams& p0, const SCSParams& p1);
// Hermite-product series of the same overlap; needs r0, r1 > 0.
OverlapValue overlap_series(const SCSParams& p0, const SCSParams& p1, int n_terms = special::kDefaultMehlerTerms);
// Inner product of the two Fock vectors.
OverlapValue overlap_fock(const SCSParams& p0, const SCSParams& p1, const fock::Truncation& trunc);

// The rank-2 decomposition rho = lambda |psi1><psi1| + (1-lambda) |psi2><psi2|.
struct StatePair {
  fock::FockVector psi1;
  fock::FockVector psi2;
  double lambda = 1.0;
  int n_max = 0;
  // Squared norms of the unnormalized superpositions (2 + 2 p01^2 for the
  // entangled family, 1 otherwise).
  double raw_norm1 = 1.0;
  double raw_norm2 = 1.0;
  double tail_mass = 0.0;
};

StatePair build_pair(const MixedStateSpec& spec, const fock::Truncation& trunc);

}  // namespace scsgp::states
