// scan.hpp - contour-grid and line scans with CSV and JSON manifest output
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scsgp/phase.hpp"

namespace scsgp::scan {

using json = nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

// Numeric-mode bounds lifted by --force.
inline constexpr double kNumericAlphaBound = 1.5;
inline constexpr double kNumericRBound = 0.5;

// Inclusive axis start:stop:count.
struct Range {
  double start = 0.0;
  double stop = 0.0;
  int count = 2;

  void validate(std::string_view name) const;
  std::vector<double> values() const;
  double max_abs() const;
};

Range parse_range(std::string_view text);
std::string format_range(const Range& r);

// Radians; accepts plain numbers and forms like "pi", "-pi/2", "3*pi/4", "0.5*pi".
double parse_angle(std::string_view text);

// Floats as "%.17g".
std::string format_double(double x);

enum class Mode { analytic, numeric, both };
std::string_view to_string(Mode m);
Mode parse_mode(std::string_view name);

struct GridSpec {
  states::Family family = states::Family::sep_balanced;
  double theta = 0.0;
  double lambda = 0.5;
  double r0 = 0.0;
  double r1 = 0.0;
  std::optional<double> r_ref;  // defaults to r0 when r0 == r1
  Range alpha0{-1.0, 1.0, 5};
  Range alpha1{-1.0, 1.0, 5};
  Mode mode = Mode::analytic;
  phase::NormMode norm = phase::NormMode::corrected;
  fock::Truncation trunc;
  bool force = false;
  int workers = 0;  // 0: hardware concurrency

  // Throws std::invalid_argument. Returns warnings (forced bounds, r0 != r1).
  std::vector<std::string> validate() const;
  double resolved_r_ref() const;
  bool numeric() const { return mode != Mode::analytic; }
};

struct Row {
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double gp_analytic = 0.0;
  double gp_wrapped = 0.0;
  // numeric columns; unset in analytic mode
  double gp_numeric = 0.0;
  double gp_total = 0.0;
  double gp_dynamical = 0.0;
  double abs_err_mod2pi = 0.0;
  double re_trace = 0.0;
  bool undefined_phase = false;
};

struct Summary {
  double max_abs_err_mod2pi = 0.0;
  double max_abs_sin_total = 0.0;
  double min_re_trace = 0.0;
  int undefined_points = 0;
  // |sin total| <= 1e-6 and Re trace > 0 at every point
  bool total_phase_claim = true;
};

struct ScanReport {
  GridSpec spec;
  std::vector<Row> rows;
  Summary summary;
  int n_max_reached = 0;
  long spectral_dim = 0;
  int workers_used = 1;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
};

ScanReport run_scan(const GridSpec& spec);
void write_csv(std::ostream& os, const ScanReport& report);
std::string to_csv(const ScanReport& report);
json manifest(const ScanReport& report);
GridSpec grid_from_manifest(const json& j);

// |unwrapped analytic GP| of each family along alpha0 = alpha1 = alpha.
struct LineSpec {
  double theta = 0.0;
  double lambda = 0.5;
  double r0 = 0.0;
  double r1 = 0.0;
  Range alpha{-1.0, 1.0, 5};
  phase::NormMode norm = phase::NormMode::corrected;

  void validate() const;
};

struct LineRow {
  double alpha = 0.0;
  double abs_gp_ent = 0.0;
  double abs_gp_sep_unbal = 0.0;
  double abs_gp_sep_bal = 0.0;
};

struct LineReport {
  LineSpec spec;
  std::vector<LineRow> rows;
  double wall_seconds = 0.0;
};

LineReport run_line(const LineSpec& spec);
void write_csv(std::ostream& os, const LineReport& report);
std::string to_csv(const LineReport& report);
json manifest(const LineReport& report);
LineSpec line_from_manifest(const json& j);

// Writes text to path, throwing std::runtime_error when the file cannot be written.
void write_file(const std::string& path, const std::string& text);

}  // namespace scsgp::scan
