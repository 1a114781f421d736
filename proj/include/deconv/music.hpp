#ifndef DECONV_MUSIC_HPP
#define DECONV_MUSIC_HPP

#include <Eigen/Core>
#include <optional>

#include "deconv/model.hpp"
#include "deconv/multipole.hpp"

namespace deconv {

/// Least-squares recovery of the first s multipole coefficients from an
/// image: argmin || sqrt(h) H(s) theta - sqrt(h) Y ||_2 through a
/// column-pivoted QR factorization. Throws when the basis is numerically
/// rank deficient (use a smaller order count).
Eigen::VectorXd recover_coefficients(const Eigen::VectorXd& image,
                                     const MultipoleBasis& basis);

/// Hankel data matrix of rescaled coefficients: for odd s and m = (s+1)/2,
/// X[i][j] = (i+j)! sqrt(2(i+j)+1) theta[i+j], 0 <= i, j < m.
Eigen::MatrixXd build_data_matrix(const Eigen::VectorXd& theta, int s);

/// Singular-value threshold 2 pi (s-1)! sqrt(2s-1) sigma / (sqrt(6) sigma_min).
double detection_threshold(int s, double sigma, double sigma_min_s_star);

struct DetectionResult {
  int estimated_n = 0;
  Eigen::VectorXd singular_values;  // decreasing
  double threshold = 0.0;
  int s_used = 0;
  Eigen::VectorXd coefficients;     // recovered theta (length = basis order)
};

/// Full detection pipeline: recover coefficients on the basis, form the
/// order-s data matrix, count singular values strictly above the threshold.
DetectionResult detect_source_number(const Eigen::VectorXd& image,
                                     const MultipoleBasis& basis, int s,
                                     double sigma);

struct MusicSeparation {
  double required = 0.0;    // (1+d) (4 pi n (s-1)! sqrt(2s-1) / (sqrt6 zeta(n)^2) ...)^(1/(2n-2))
  double simplified = 0.0;  // 4.75 (1+d) ((n+1)^3.2 / sigma_min * sigma/m_min)^(1/(2n-2)), s = 2n+1 form
};
MusicSeparation music_separation_requirement(int n, double d, int s, double sigma,
                                             double m_min, double sigma_min_s_star);

/// Exact n-th singular value of the noiseless factorization D A D^T at data
/// matrix order s, with the separation-driven lower bound
/// m_min zeta(n)^2 d_min^(2n-2) / (n (1+d)^(2n-2)) (absent for n = 1).
struct SigmaNBound {
  double exact = 0.0;
  std::optional<double> bound;
};
SigmaNBound dadt_sigma_n_bound(const DiscreteMeasure& measure, double d, int s);

} // namespace deconv

#endif
