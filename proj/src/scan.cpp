#include "scsgp/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace scsgp::scan {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x))
    throw std::invalid_argument("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  return x;
}

double parse_factor(std::string_view s) {
  s = trim(s);
  bool neg = false;
  while (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg ^= s.front() == '-';
    s.remove_prefix(1);
  }
  const double v = (s == "pi" || s == "PI" || s == "Pi") ? std::numbers::pi : parse_number(s, "angle");
  return neg ? -v : v;
}

// Work items are handed out by an atomic counter; results land by index so
// completion order never shows up in the output.
template <class Fn>
int parallel_for(std::size_t n, int workers, Fn&& fn) {
  int w = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  w = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(w), std::max<std::size_t>(n, 1)));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return 1;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::size_t err_index = n;
  std::exception_ptr err;
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  for (int k = 0; k < w; ++k) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return w;
}

json range_json(const Range& r) { return {{"start", r.start}, {"stop", r.stop}, {"count", r.count}}; }

Range range_from_json(const json& j) {
  return Range{j.at("start").get<double>(), j.at("stop").get<double>(), j.at("count").get<int>()};
}

json trunc_json(const fock::Truncation& t) {
  return {{"nmax", t.n_max}, {"buffer", t.buffer}, {"tail_tol", t.tail_tol}};
}

fock::Truncation trunc_from_json(const json& j) {
  fock::Truncation t;
  t.n_max = j.at("nmax").get<int>();
  t.buffer = j.at("buffer").get<int>();
  t.tail_tol = j.at("tail_tol").get<double>();
  return t;
}

void check_theta_lambda(double theta, double lambda) {
  if (!std::isfinite(theta) || theta < 0.0 || theta > std::numbers::pi)
    throw std::invalid_argument("theta must lie in [0, pi]");
  if (!std::isfinite(lambda) || lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("lambda must lie in [0, 1]");
}

void check_r(double r, const char* name) {
  if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void Range::validate(std::string_view name) const {
  if (!std::isfinite(start) || !std::isfinite(stop))
    throw std::invalid_argument(std::string(name) + ": endpoints must be finite");
  if (count < 2) throw std::invalid_argument(std::string(name) + ": count must be >= 2");
  if (!(start < stop)) throw std::invalid_argument(std::string(name) + ": start must be < stop");
}

std::vector<double> Range::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  const double step = (stop - start) / (count - 1);
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = start + step * i;
  v.back() = stop;
  return v;
}

double Range::max_abs() const { return std::max(std::abs(start), std::abs(stop)); }

Range parse_range(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos)
    throw std::invalid_argument("range must be start:stop:count, got '" + std::string(text) + "'");
  Range r;
  r.start = parse_number(text.substr(0, c1), "range start");
  r.stop = parse_number(text.substr(c1 + 1, c2 - c1 - 1), "range stop");
  const double c = parse_number(text.substr(c2 + 1), "range count");
  if (c != std::floor(c) || c > 1e7) throw std::invalid_argument("range count must be an integer");
  r.count = static_cast<int>(c);
  return r;
}

std::string format_range(const Range& r) {
  return format_double(r.start) + ":" + format_double(r.stop) + ":" + std::to_string(r.count);
}

double parse_angle(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty angle");
  double value = 1.0;
  char op = '*';
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find_first_of("*/", pos);
    const double f = parse_factor(text.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (op == '*') {
      value *= f;
    } else {
      if (f == 0.0) throw std::invalid_argument("angle divides by zero");
      value /= f;
    }
    if (next == std::string_view::npos) break;
    op = text[next];
    pos = next + 1;
  }
  return value;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::analytic: return "analytic";
    case Mode::numeric: return "numeric";
    case Mode::both: return "both";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  if (name == "analytic") return Mode::analytic;
  if (name == "numeric") return Mode::numeric;
  if (name == "both") return Mode::both;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

double GridSpec::resolved_r_ref() const {
  if (r_ref) return *r_ref;
  if (r0 == r1) return r0;
  throw std::invalid_argument("--r-ref is required when r0 != r1");
}

std::vector<std::string> GridSpec::validate() const {
  std::vector<std::string> warnings;
  check_theta_lambda(theta, lambda);
  check_r(r0, "r0");
  check_r(r1, "r1");
  alpha0.validate("alpha0");
  alpha1.validate("alpha1");
  const double rr = resolved_r_ref();
  check_r(rr, "r_ref");
  trunc.validate();
  for (const Range* a : {&alpha0, &alpha1})
    if (a->max_abs() > states::kDefaultAlphaCap)
      throw std::invalid_argument("alpha range exceeds |alpha| <= " + format_double(states::kDefaultAlphaCap));
  if (numeric()) {
    const bool out = std::max(alpha0.max_abs(), alpha1.max_abs()) > kNumericAlphaBound ||
                     std::max({r0, r1, rr}) > kNumericRBound;
    if (out && !force)
      throw std::invalid_argument("numeric mode is bounded to |alpha| <= 1.5 and r <= 0.5; pass --force to override");
    if (out) warnings.push_back("numeric bounds exceeded under --force; truncation may fail or be slow");
    if (r0 != r1 || rr != r0)
      warnings.push_back("r0, r1, r_ref differ: numeric-vs-analytic difference is reported as data only");
  }
  return warnings;
}

ScanReport run_scan(const GridSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  ScanReport rep;
  rep.warnings = spec.validate();
  rep.spec = spec;
  rep.spec.r_ref = spec.resolved_r_ref();

  const auto a0 = spec.alpha0.values();
  const auto a1 = spec.alpha1.values();
  const std::size_t n = a0.size() * a1.size();
  rep.rows.resize(n);

  std::optional<evolution::EvolutionContext> ctx;
  if (spec.numeric()) {
    int nmax = spec.trunc.n_max;
    for (double a : a0) nmax = std::max(nmax, states::required_nmax({a, spec.r0}, spec.trunc));
    for (double a : a1) nmax = std::max(nmax, states::required_nmax({a, spec.r1}, spec.trunc));
    evolution::EvolutionSpec es;
    es.theta = spec.theta;
    es.r_ref = *rep.spec.r_ref;
    es.trunc = spec.trunc;
    es.trunc.n_max = nmax;
    ctx.emplace(es);
    rep.n_max_reached = nmax;
    rep.spectral_dim = static_cast<long>(ctx->spectral_dim());
  }

  rep.workers_used = parallel_for(n, spec.workers, [&](std::size_t k) {
    Row& row = rep.rows[k];
    row.alpha0 = a0[k / a1.size()];
    row.alpha1 = a1[k % a1.size()];
    const states::MixedStateSpec ms{spec.family, spec.lambda, {row.alpha0, spec.r0}, {row.alpha1, spec.r1}};
    row.gp_analytic = phase::gp_analytic(ms, spec.theta, spec.norm);
    row.gp_wrapped = phase::wrap(row.gp_analytic);
    if (ctx) {
      const auto res = phase::evaluate(ms, *ctx);
      row.gp_numeric = res.geometric;
      row.gp_total = res.total;
      row.gp_dynamical = res.dynamical;
      row.abs_err_mod2pi = std::abs(phase::wrap(row.gp_analytic - res.geometric));
      row.re_trace = res.trace_final.real();
      row.undefined_phase = res.diagnostics.undefined_phase;
    }
  });

  if (ctx) {
    Summary& s = rep.summary;
    s.min_re_trace = rep.rows.empty() ? 0.0 : rep.rows.front().re_trace;
    for (const Row& r : rep.rows) {
      s.max_abs_err_mod2pi = std::max(s.max_abs_err_mod2pi, r.abs_err_mod2pi);
      s.max_abs_sin_total = std::max(s.max_abs_sin_total, std::abs(std::sin(r.gp_total)));
      s.min_re_trace = std::min(s.min_re_trace, r.re_trace);
      s.undefined_points += r.undefined_phase ? 1 : 0;
    }
    s.total_phase_claim = s.max_abs_sin_total <= 1e-6 && s.min_re_trace > 0.0;
  }
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

void write_csv(std::ostream& os, const ScanReport& report) {
  const bool num = report.spec.numeric();
  os << "alpha0,alpha1,gp_analytic,gp_wrapped";
  if (num) os << ",gp_numeric,gp_total,gp_dynamical,abs_err_mod2pi";
  os << '\n';
  for (const Row& r : report.rows) {
    os << format_double(r.alpha0) << ',' << format_double(r.alpha1) << ',' << format_double(r.gp_analytic)
       << ',' << format_double(r.gp_wrapped);
    if (num)
      os << ',' << format_double(r.gp_numeric) << ',' << format_double(r.gp_total) << ','
         << format_double(r.gp_dynamical) << ',' << format_double(r.abs_err_mod2pi);
    os << '\n';
  }
}

std::string to_csv(const ScanReport& report) {
  std::ostringstream os;
  write_csv(os, report);
  return os.str();
}

json manifest(const ScanReport& report) {
  const GridSpec& s = report.spec;
  json inputs = {{"state", std::string(states::to_string(s.family))},
                 {"theta", s.theta},
                 {"lambda", s.lambda},
                 {"r0", s.r0},
                 {"r1", s.r1},
                 {"r_ref", s.resolved_r_ref()},
                 {"alpha0", range_json(s.alpha0)},
                 {"alpha1", range_json(s.alpha1)},
                 {"mode", std::string(to_string(s.mode))},
                 {"norm", std::string(phase::to_string(s.norm))},
                 {"truncation", trunc_json(s.trunc)},
                 {"force", s.force},
                 {"workers", s.workers}};
  json j = {{"command", "scan"},
            {"version", kVersion},
            {"inputs", inputs},
            {"rows", report.rows.size()},
            {"workers_used", report.workers_used},
            {"wall_seconds", report.wall_seconds},
            {"warnings", report.warnings}};
  if (s.numeric()) {
    j["truncation_reached"] = {{"nmax", report.n_max_reached}, {"spectral_dim", report.spectral_dim}};
    j["summary"] = {{"max_abs_err_mod2pi", report.summary.max_abs_err_mod2pi},
                    {"max_abs_sin_total", report.summary.max_abs_sin_total},
                    {"min_re_trace", report.summary.min_re_trace},
                    {"undefined_points", report.summary.undefined_points},
                    {"total_phase_claim", report.summary.total_phase_claim}};
  }
  return j;
}

GridSpec grid_from_manifest(const json& j) {
  if (j.at("command").get<std::string>() != "scan") throw std::invalid_argument("manifest is not a scan manifest");
  const json& in = j.at("inputs");
  GridSpec s;
  s.family = states::parse_family(in.at("state").get<std::string>());
  s.theta = in.at("theta").get<double>();
  s.lambda = in.at("lambda").get<double>();
  s.r0 = in.at("r0").get<double>();
  s.r1 = in.at("r1").get<double>();
  s.r_ref = in.at("r_ref").get<double>();
  s.alpha0 = range_from_json(in.at("alpha0"));
  s.alpha1 = range_from_json(in.at("alpha1"));
  s.mode = parse_mode(in.at("mode").get<std::string>());
  s.norm = phase::parse_norm(in.at("norm").get<std::string>());
  s.trunc = trunc_from_json(in.at("truncation"));
  s.force = in.at("force").get<bool>();
  s.workers = in.value("workers", 0);
  return s;
}

void LineSpec::validate() const {
  check_theta_lambda(theta, lambda);
  check_r(r0, "r0");
  check_r(r1, "r1");
  alpha.validate("alpha");
  if (alpha.max_abs() > states::kDefaultAlphaCap)
    throw std::invalid_argument("alpha range exceeds |alpha| <= " + format_double(states::kDefaultAlphaCap));
}

LineReport run_line(const LineSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  spec.validate();
  LineReport rep;
  rep.spec = spec;
  for (double a : spec.alpha.values()) {
    const states::SCSParams p0{a, spec.r0}, p1{a, spec.r1};
    LineRow row;
    row.alpha = a;
    row.abs_gp_ent = std::abs(phase::gp_entangled(p0, p1, spec.lambda, spec.theta, spec.norm));
    row.abs_gp_sep_unbal = std::abs(phase::gp_sep_unbalanced(p0, p1, spec.lambda, spec.theta));
    row.abs_gp_sep_bal = std::abs(phase::gp_sep_balanced(p0, p1, spec.lambda, spec.theta));
    rep.rows.push_back(row);
  }
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

void write_csv(std::ostream& os, const LineReport& report) {
  os << "alpha,abs_gp_ent,abs_gp_sep_unbal,abs_gp_sep_bal\n";
  for (const LineRow& r : report.rows)
    os << format_double(r.alpha) << ',' << format_double(r.abs_gp_ent) << ',' << format_double(r.abs_gp_sep_unbal)
       << ',' << format_double(r.abs_gp_sep_bal) << '\n';
}

std::string to_csv(const LineReport& report) {
  std::ostringstream os;
  write_csv(os, report);
  return os.str();
}

json manifest(const LineReport& report) {
  const LineSpec& s = report.spec;
  return {{"command", "line"},
          {"version", kVersion},
          {"inputs",
           {{"theta", s.theta},
            {"lambda", s.lambda},
            {"r0", s.r0},
            {"r1", s.r1},
            {"alpha", range_json(s.alpha)},
            {"norm", std::string(phase::to_string(s.norm))}}},
          {"rows", report.rows.size()},
          {"wall_seconds", report.wall_seconds}};
}

LineSpec line_from_manifest(const json& j) {
  if (j.at("command").get<std::string>() != "line") throw std::invalid_argument("manifest is not a line manifest");
  const json& in = j.at("inputs");
  LineSpec s;
  s.theta = in.at("theta").get<double>();
  s.lambda = in.at("lambda").get<double>();
  s.r0 = in.at("r0").get<double>();
  s.r1 = in.at("r1").get<double>();
  s.alpha = range_from_json(in.at("alpha"));
  s.norm = phase::parse_norm(in.at("norm").get<std::string>());
  return s;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace scsgp::scan
