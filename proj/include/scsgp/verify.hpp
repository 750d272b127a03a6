// verify.hpp - verification suites shared by the CLI and the acceptance binary
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace scsgp::verify {

using json = nlohmann::json;

struct SuiteResult {
  std::string name;
  bool hard = true;  // claims is reporting-only
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  json details = json::object();
};

json to_json(const SuiteResult& r);

// phase: numeric vs closed-form GP on the r0 = r1 = r_ref grid, corrected norm.
SuiteResult oracle(double tol = 1e-5);
// special: Mehler series vs closed form on random (x, y, s).
SuiteResult mehler(double tol = 1e-10, int samples = 1000, std::uint64_t seed = 20240611);
// states: closed vs series vs Fock dot product of the overlap.
SuiteResult overlap(double tol = 1e-8);
// evolution: central-difference generator residual and its h^2 scaling.
SuiteResult generator(double tol = 1e-5);
// Claim checks; reports only, never fails.
SuiteResult claims();
// Level-set structure of the closed forms at lambda = 1/2.
SuiteResult morphology(double tol = 1e-10);
// Serial vs parallel scan bytes and manifest reruns.
SuiteResult determinism();

// oracle, mehler, overlap, generator, claims, morphology, determinism
const std::vector<std::string>& suite_names();

// name may be "all". tol overrides the primary tolerance of a named suite;
// under "all" it applies to the oracle suite only.
std::vector<SuiteResult> run(std::string_view name, std::optional<double> tol = std::nullopt);

}  // namespace scsgp::verify
