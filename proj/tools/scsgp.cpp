// scsgp - geometric-phase scans and verification for squeezed-coherent mixed states
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "scsgp/errors.hpp"
#include "scsgp/scan.hpp"
#include "scsgp/verify.hpp"

namespace {

using namespace scsgp;

enum Exit { kOk = 0, kValidation = 1, kAcceptance = 2, kTruncation = 3 };

struct Common {
  std::string state = "sep-balanced";
  std::string theta = "pi/4";
  double lambda = 0.5;
  double r0 = 0.2, r1 = 0.2;
  std::optional<double> r_ref;
  std::string norm = "corrected";
  int nmax = 24, buffer = 10;
  double tail_tol = 1e-12;
  std::string out, json_path, from_manifest;
  int workers = 0;
  bool force = false;
};

scan::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read manifest '" + path + "'");
  return scan::json::parse(in);
}

// CSV goes to --out or stdout; the manifest to --json or <out>.json.
void emit(const Common& c, const std::string& csv, const scan::json& manifest) {
  if (c.out.empty() || c.out == "-") {
    std::cout << csv;
  } else {
    scan::write_file(c.out, csv);
  }
  std::string mpath = c.json_path;
  if (mpath.empty() && !c.out.empty() && c.out != "-") mpath = c.out + ".json";
  if (!mpath.empty()) scan::write_file(mpath, manifest.dump(2) + "\n");
}

int cmd_scan(const Common& c, const std::string& a0, const std::string& a1, const std::string& mode) {
  scan::GridSpec g;
  if (!c.from_manifest.empty()) {
    g = scan::grid_from_manifest(read_json(c.from_manifest));
    if (c.workers > 0) g.workers = c.workers;
  } else {
    g.family = states::parse_family(c.state);
    g.theta = scan::parse_angle(c.theta);
    g.lambda = c.lambda;
    g.r0 = c.r0;
    g.r1 = c.r1;
    g.r_ref = c.r_ref;
    g.alpha0 = scan::parse_range(a0);
    g.alpha1 = scan::parse_range(a1);
    g.mode = scan::parse_mode(mode);
    g.norm = phase::parse_norm(c.norm);
    g.trunc = {c.nmax, c.buffer, c.tail_tol};
    g.force = c.force;
    g.workers = c.workers;
  }
  const auto rep = scan::run_scan(g);
  for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  emit(c, scan::to_csv(rep), scan::manifest(rep));
  if (g.numeric())
    std::fprintf(stderr, "%zu points, nmax %d, max |wrap(analytic - numeric)| %.3e, %.2f s\n", rep.rows.size(),
                 rep.n_max_reached, rep.summary.max_abs_err_mod2pi, rep.wall_seconds);
  return kOk;
}

int cmd_line(const Common& c, const std::string& alpha) {
  scan::LineSpec s;
  if (!c.from_manifest.empty()) {
    s = scan::line_from_manifest(read_json(c.from_manifest));
  } else {
    s.theta = scan::parse_angle(c.theta);
    s.lambda = c.lambda;
    s.r0 = c.r0;
    s.r1 = c.r1;
    s.alpha = scan::parse_range(alpha);
    s.norm = phase::parse_norm(c.norm);
  }
  const auto rep = scan::run_line(s);
  emit(c, scan::to_csv(rep), scan::manifest(rep));
  return kOk;
}

int cmd_verify(const std::string& suite, std::optional<double> tol, const std::string& json_path) {
  const auto results = verify::run(suite, tol);
  bool ok = true;
  scan::json report = {{"version", scan::kVersion}, {"suites", scan::json::array()}};
  for (const auto& r : results) {
    const char* tag = !r.hard ? "INFO" : (r.pass ? "PASS" : "FAIL");
    std::printf("%-4s %-12s measured=%.3e tol=%.1e (%.2f s)\n", tag, r.name.c_str(), r.measured, r.tolerance,
                r.seconds);
    if (!r.hard) std::printf("%s\n", r.details.dump(2).c_str());
    if (r.hard && !r.pass) ok = false;
    report["suites"].push_back(verify::to_json(r));
  }
  report["pass"] = ok;
  if (!json_path.empty()) scan::write_file(json_path, report.dump(2) + "\n");
  return ok ? kOk : kAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric phases of squeezed-coherent mixed states"};
  app.require_subcommand(1);
  Common c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--theta", c.theta, "rotation angle, radians (pi/4 style accepted)");
    sub->add_option("--lambda", c.lambda, "classical weight");
    sub->add_option("--r0", c.r0, "squeezing of the first SCS");
    sub->add_option("--r1", c.r1, "squeezing of the second SCS");
    sub->add_option("--norm", c.norm, "corrected | paper-literal");
    sub->add_flag_callback("--paper-literal-norm", [&] { c.norm = "paper-literal"; }, "same as --norm paper-literal");
    sub->add_option("--out", c.out, "CSV path (default stdout)");
    sub->add_option("--json", c.json_path, "manifest path (default <out>.json)");
    sub->add_option("--from-manifest", c.from_manifest, "rerun the inputs recorded in a manifest");
  };

  auto* scan_cmd = app.add_subcommand("scan", "contour grid over (alpha0, alpha1)");
  std::string a0 = "-1:1:21", a1 = "-1:1:21", mode = "analytic";
  add_common(scan_cmd);
  scan_cmd->add_option("--state", c.state, "entangled | sep-unbalanced | sep-balanced");
  scan_cmd->add_option("--r-ref", c.r_ref, "Bogoliubov squeezing of the evolution (default r0 when r0 == r1)");
  scan_cmd->add_option("--alpha0", a0, "start:stop:count");
  scan_cmd->add_option("--alpha1", a1, "start:stop:count");
  scan_cmd->add_option("--mode", mode, "analytic | numeric | both");
  scan_cmd->add_option("--nmax", c.nmax, "starting Fock cutoff");
  scan_cmd->add_option("--buffer", c.buffer, "extra levels for operator construction");
  scan_cmd->add_option("--tail-tol", c.tail_tol, "allowed missing probability per mode");
  scan_cmd->add_option("--workers", c.workers, "threads (default: available parallelism)");
  scan_cmd->add_flag("--force", c.force, "lift numeric-mode bounds");

  auto* line_cmd = app.add_subcommand("line", "|GP| of all families along alpha0 = alpha1");
  std::string alpha = "-2:2:41";
  add_common(line_cmd);
  line_cmd->add_option("--alpha", alpha, "start:stop:count");

  auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
  std::string suite = "all", vjson;
  std::optional<double> tol;
  verify_cmd->add_option("--suite", suite, "oracle | mehler | overlap | generator | claims | morphology | "
                                           "determinism | all");
  verify_cmd->add_option("--tol", tol, "override the suite tolerance");
  verify_cmd->add_option("--json", vjson, "report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (scan_cmd->parsed()) return cmd_scan(c, a0, a1, mode);
    if (line_cmd->parsed()) return cmd_line(c, alpha);
    return cmd_verify(suite, tol, vjson);
  } catch (const TruncationError& e) {
    std::fprintf(stderr, "truncation: %s\n", e.what());
    return kTruncation;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  } catch (const scan::json::exception& e) {
    std::fprintf(stderr, "manifest: %s\n", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  }
}
