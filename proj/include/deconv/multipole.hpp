#ifndef DECONV_MULTIPOLE_HPP
#define DECONV_MULTIPOLE_HPP

#include <Eigen/Core>

#include "deconv/model.hpp"

namespace deconv {

/// Grid evaluation of the multipole vectors h_r = sqrt(2r+1) (f^{(r)}(x_t))_t
/// for r = 0..s-1, stacked as the N x s matrix H(s), together with
/// sigma_min(sqrt(h) H(s)). Immutable after construction.
struct MultipoleBasis {
  SamplingGrid grid;
  int order_count;        // s
  Eigen::MatrixXd matrix; // N x s, column r = h_r
  double sigma_min;       // smallest singular value of sqrt(h) H(s)
};

/// Largest supported order count; beyond this the scaled multipole matrix is
/// numerically rank deficient in double precision.
inline constexpr int kMaxOrderCount = 60;

MultipoleBasis build_basis(const SamplingGrid& grid, int order_count);

/// r! sqrt(2r+1), the denominator of the r-th multipole coefficient.
double coefficient_scale(int r);
double log_coefficient_scale(int r);

/// Exact multipole coefficients c_r = sum_j a_j (-y_j)^r / (r! sqrt(2r+1)),
/// r = 0..s-1.
Eigen::VectorXd multipole_coefficients(const DiscreteMeasure& measure,
                                       int order_count);

/// Tail bound 2 e^d sqrt(pi) M d^s / (s! sqrt(2s+1)) on the image norm of the
/// multipole expansion truncated at order s, for a pair of measures with TV
/// at most M supported in [-d, d].
double truncation_residual_bound(const ProblemPriors& priors, int s);

/// R -> infinity limit of h H(s)^T H(s): entry (p, j) equals
/// (-1)^{(p-j)/2} pi sqrt(2p+1) sqrt(2j+1) / (p+j+1) when p+j is even, else 0.
Eigen::MatrixXd limiting_gram(int s);

/// sigma_min derived from the limiting Gram matrix (smallest eigenvalue).
double sigma_min_from_limiting_gram(int s);

} // namespace deconv

#endif
