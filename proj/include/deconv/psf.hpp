#ifndef DECONV_PSF_HPP
#define DECONV_PSF_HPP

namespace deconv {

/// Evaluates the r-th derivative of the point spread function
/// f(x) = sin(x)/x. Total on finite inputs; absolute error stays below
/// 1e-12 for order <= 40 and |x| <= 200.
///
/// Throws std::invalid_argument for negative order or non-finite x.
double sinc_derivative(int order, double x);

namespace detail {

// Individual evaluation branches, exposed for cross-checking.
// sinc_derivative() selects between them based on (order, |x|).
double sinc_derivative_series(int order, double x);
double sinc_derivative_forward(int order, double x);
double sinc_derivative_backward(int order, double x);

// sin(x + r*pi/2) through quadrant selection, so the shift is exact.
double shifted_sin(int r, double x);

// True when the upward recurrence keeps rounding errors below ~1e-13.
bool forward_recurrence_stable(int order, double abs_x);

} // namespace detail

} // namespace deconv

#endif
