#include "deconv/psf.hpp"

#include <cmath>
#include <stdexcept>

namespace deconv {
namespace detail {

double shifted_sin(int r, double x) {
  switch (r & 3) {
    case 0: return std::sin(x);
    case 1: return std::cos(x);
    case 2: return -std::sin(x);
    default: return -std::cos(x);
  }
}

// Differentiating sin(x)/x = sum_k (-1)^k x^{2k}/(2k+1)! term by term gives
//   f^{(r)}(x) = sum_{2k >= r} (-1)^k x^{2k-r} / ((2k-r)! (2k+1)).
// The sum is over powers m = 2k-r of the parity of r. Terms alternate, so the
// loop may only stop once the power has passed |x| (the peak of the terms).
double sinc_derivative_series(int order, double x) {
  const int m0 = order % 2;
  double pow_over_fact = (m0 == 0) ? 1.0 : x;  // x^m / m!
  double sign = (((order + m0) / 2) % 2 == 0) ? 1.0 : -1.0;
  double sum = 0.0;
  const double ax = std::abs(x);
  for (int m = m0; m < 4000; m += 2) {
    const double term = sign * pow_over_fact / (m + order + 1);
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum) + 1e-300 && m >= ax) break;
    pow_over_fact *= x * x / ((m + 1.0) * (m + 2.0));
    sign = -sign;
  }
  return sum;
}

// Leibniz on x*f(x) = sin(x):  x f^{(r)}(x) + r f^{(r-1)}(x) = sin(x + r pi/2).
double sinc_derivative_forward(int order, double x) {
  double f = std::sin(x) / x;
  for (int r = 1; r <= order; ++r) f = (shifted_sin(r, x) - r * f) / x;
  return f;
}

// The same recurrence run downward damps errors by |x|/r per step, so it is
// the stable direction for |x| < r. The seed at a higher order comes from the
// series; its error is crushed by the accumulated damping.
double sinc_derivative_backward(int order, double x) {
  const int start = order + 60;
  double f = sinc_derivative_series(start, x);
  for (int r = start; r > order; --r) f = (shifted_sin(r, x) - x * f) / r;
  return f;
}

bool forward_recurrence_stable(int order, double abs_x) {
  if (abs_x >= order) return true;
  // Worst error amplification is about exp(r ln(r/a) - (r - a)).
  const double growth =
      order * std::log(order / abs_x) - (order - abs_x);
  return growth <= 3.0;
}

} // namespace detail

double sinc_derivative(int order, double x) {
  if (order < 0) throw std::invalid_argument("sinc_derivative: negative order");
  if (!std::isfinite(x)) throw std::invalid_argument("sinc_derivative: non-finite x");
  const double ax = std::abs(x);
  if (ax <= 10.0) return detail::sinc_derivative_series(order, x);
  if (detail::forward_recurrence_stable(order, ax))
    return detail::sinc_derivative_forward(order, x);
  return detail::sinc_derivative_backward(order, x);
}

} // namespace deconv
