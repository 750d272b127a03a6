#include "scsgp/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace scsgp::special {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(what) + " must be finite");
}

void require_kernel_domain(double x, double y, double s) {
  require_finite(x, "x");
  require_finite(y, "y");
  require_finite(s, "s");
  if (!(std::abs(s) < 1.0))
    throw std::domain_error("Mehler kernel requires |s| < 1, got s = " + std::to_string(s));
}

template <class Real>
struct PartialSum {
  Real sum;
  Real abs_sum;
  int terms;
  bool converged;
};

// Scaled recurrence run simultaneously for x and y with t = |s|/2; the n-th
// summand is h_n(x) h_n(y) sign(s)^n.
template <class Real>
PartialSum<Real> mehler_partial(double xd, double yd, double sd, int n_terms) {
  using std::abs;
  using std::sqrt;
  const Real x(xd);
  const Real y(yd);
  const Real t = Real(std::abs(sd)) / 2;
  const bool alternate = sd < 0;

  Real hx_prev = 1, hy_prev = 1;
  Real hx = 2 * x * sqrt(t);
  Real hy = 2 * y * sqrt(t);
  Real sum = 1, abs_sum = 1;
  int terms = 1;
  int quiet_run = 0;
  const Real cutoff(1e-16);
  for (int n = 1; n < n_terms; ++n) {
    Real term = hx * hy;
    if (alternate && (n % 2 == 1)) term = -term;
    sum += term;
    abs_sum += abs(term);
    ++terms;
    if (abs(term) < cutoff * abs(sum)) {
      if (++quiet_run >= 10) return {sum, abs_sum, terms, true};
    } else {
      quiet_run = 0;
    }
    const Real up = sqrt(t / Real(n + 1));
    const Real down = sqrt(Real(n) / Real(n + 1));
    Real hx_next = 2 * x * up * hx - 2 * t * down * hx_prev;
    Real hy_next = 2 * y * up * hy - 2 * t * down * hy_prev;
    hx_prev = hx;
    hx = hx_next;
    hy_prev = hy;
    hy = hy_next;
  }
  return {sum, abs_sum, terms, false};
}

template <class Real>
bool try_precision(double x, double y, double s, int n_terms, MehlerSeriesInfo& info) {
  const int bits = std::numeric_limits<Real>::digits;
  const auto p = mehler_partial<Real>(x, y, s, n_terms);
  const double sum = static_cast<double>(p.sum);
  const double abs_sum = static_cast<double>(p.abs_sum);
  const double ratio = sum == 0.0 ? std::numeric_limits<double>::infinity() : abs_sum / std::abs(sum);
  info.value = sum;
  info.terms_used = p.terms;
  info.precision_bits = bits;
  info.cancellation = ratio;
  info.converged = p.converged;
  // Rounding error of the sum is bounded by a few ulps of sum|term|.
  const double unit = std::ldexp(1.0, -bits);
  return ratio * unit * 64.0 <= 1e-13;
}

using boost::multiprecision::cpp_bin_float_50;
using boost::multiprecision::cpp_bin_float_100;
using Float250 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<250>>;

}  // namespace

double hermite(int n, double x) {
  if (n < 0) throw std::domain_error("hermite: degree must be non-negative");
  require_finite(x, "hermite argument");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
    if (!std::isfinite(cur))
      throw std::overflow_error("hermite: H_" + std::to_string(n) + "(" + std::to_string(x) +
                                ") overflows double precision");
  }
  return cur;
}

std::vector<double> hermite_scaled_seq(int n_max, double x, double t) {
  if (n_max < 0) throw std::domain_error("hermite_scaled_seq: n_max must be non-negative");
  require_finite(x, "hermite_scaled_seq argument");
  if (!(t >= 0.0 && t < 1.0))
    throw std::domain_error("hermite_scaled_seq: scale t must lie in [0, 1), got " + std::to_string(t));
  std::vector<double> h(static_cast<std::size_t>(n_max) + 1, 0.0);
  h[0] = 1.0;
  if (n_max == 0) return h;
  h[1] = 2.0 * x * std::sqrt(t);
  for (int n = 1; n < n_max; ++n) {
    const double np1 = n + 1.0;
    h[n + 1] = 2.0 * x * std::sqrt(t / np1) * h[n] - 2.0 * t * std::sqrt(n / np1) * h[n - 1];
  }
  return h;
}

double mehler_closed(double x, double y, double s) {
  require_kernel_domain(x, y, s);
  const double one_minus = 1.0 - s * s;
  const double exponent = (2.0 * x * y * s - (x * x + y * y) * s * s) / one_minus;
  const double value = std::exp(exponent) / std::sqrt(one_minus);
  if (!std::isfinite(value)) throw std::overflow_error("mehler_closed: kernel overflows");
  return value;
}

MehlerSeriesInfo mehler_series_info(double x, double y, double s, int n_terms) {
  require_kernel_domain(x, y, s);
  if (n_terms < 1) throw std::domain_error("mehler_series: n_terms must be >= 1");
  MehlerSeriesInfo info;
  if (try_precision<double>(x, y, s, n_terms, info)) return info;
  if (try_precision<cpp_bin_float_50>(x, y, s, n_terms, info)) return info;
  if (try_precision<cpp_bin_float_100>(x, y, s, n_terms, info)) return info;
  if (try_precision<Float250>(x, y, s, n_terms, info)) return info;
  throw std::range_error("mehler_series: cancellation ratio " + std::to_string(info.cancellation) +
                         " exceeds the widest working precision");
}

double mehler_series(double x, double y, double s, int n_terms) {
  return mehler_series_info(x, y, s, n_terms).value;
}

}  // namespace scsgp::special
