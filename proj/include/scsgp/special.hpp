// special.hpp - physicists' Hermite polynomials and the Mehler kernel
#pragma once

#include <vector>

namespace scsgp::special {

// H_n(x) with H_0 = 1, H_1 = 2x. Throws std::overflow_error instead of
// returning inf.
double hermite(int n, double x);

// h_n = t^{n/2} H_n(x) / sqrt(n!) for n = 0..n_max, via the scaled three-term
// recurrence. Requires 0 <= t < 1.
std::vector<double> hermite_scaled_seq(int n_max, double x, double t);

// (1-s^2)^{-1/2} exp[(2xys - (x^2+y^2)s^2)/(1-s^2)], |s| < 1.
double mehler_closed(double x, double y, double s);

// 400 terms are not enough when the summands cancel: at x*y*s < 0 with
// |x|, |y| near 3 and |s| near 0.9 the partial sums need well over 1000 terms.
// The early exit keeps the larger cap cheap for benign arguments.
inline constexpr int kDefaultMehlerTerms = 4000;

// Partial sum over n < n_terms of H_n(x)H_n(y)s^n/(2^n n!).
//
// Stops early once ten consecutive summands fall below 1e-16 of the running
// sum. When the summands cancel strongly (x*y*s < 0 with large arguments) the
// double-precision sum loses all its digits; the cancellation ratio
// sum|term| / |sum| is measured and the sum is redone in wider binary
// floating point until the result carries at least 13 good digits.
double mehler_series(double x, double y, double s, int n_terms = kDefaultMehlerTerms);

// Diagnostics of the last evaluation path, for reports.
struct MehlerSeriesInfo {
  double value = 0.0;
  int terms_used = 0;
  int precision_bits = 53;
  double cancellation = 1.0;  // sum|term| / |sum|
  bool converged = false;     // early exit reached before n_terms
};
MehlerSeriesInfo mehler_series_info(double x, double y, double s,
                                    int n_terms = kDefaultMehlerTerms);

}  // namespace scsgp::special
