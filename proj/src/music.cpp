#include "deconv/music.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "deconv/vandermonde.hpp"

namespace deconv {

namespace {
const double kPi = std::acos(-1.0);
}

Eigen::VectorXd recover_coefficients(const Eigen::VectorXd& image,
                                     const MultipoleBasis& basis) {
  if (image.size() != basis.grid.sample_count())
    throw std::invalid_argument("recover_coefficients: image/basis grid mismatch");
  const double root_h = std::sqrt(basis.grid.spacing());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(root_h * basis.matrix);
  qr.setThreshold(1e-13);
  if (qr.rank() < basis.order_count)
    throw std::runtime_error(
        "recover_coefficients: multipole matrix numerically rank deficient; "
        "use a smaller order count");
  return qr.solve(root_h * image);
}

Eigen::MatrixXd build_data_matrix(const Eigen::VectorXd& theta, int s) {
  if (s < 1 || s % 2 == 0)
    throw std::invalid_argument("build_data_matrix: s must be odd and positive");
  if (s > theta.size())
    throw std::invalid_argument("build_data_matrix: s exceeds coefficient count");
  const int m = (s + 1) / 2;
  Eigen::MatrixXd x(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      x(i, j) = coefficient_scale(i + j) * theta[i + j];
  return x;
}

double detection_threshold(int s, double sigma, double sigma_min_s_star) {
  if (s < 3 || s % 2 == 0)
    throw std::invalid_argument("detection_threshold: s must be odd and >= 3");
  if (sigma < 0.0 || !(sigma_min_s_star > 0.0))
    throw std::invalid_argument("detection_threshold: invalid noise inputs");
  return 2.0 * kPi * std::exp(std::lgamma(static_cast<double>(s)) +
                              0.5 * std::log(2.0 * s - 1.0)) *
         sigma / (std::sqrt(6.0) * sigma_min_s_star);
}

DetectionResult detect_source_number(const Eigen::VectorXd& image,
                                     const MultipoleBasis& basis, int s,
                                     double sigma) {
  if (s > basis.order_count)
    throw std::invalid_argument("detect_source_number: s exceeds basis order");
  DetectionResult result;
  result.s_used = s;
  result.coefficients = recover_coefficients(image, basis);
  const Eigen::MatrixXd x = build_data_matrix(result.coefficients, s);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  result.singular_values = svd.singularValues();
  result.threshold = detection_threshold(s, sigma, basis.sigma_min);
  result.estimated_n = 0;
  for (int j = 0; j < result.singular_values.size(); ++j)
    if (result.singular_values[j] > result.threshold) ++result.estimated_n;
  return result;
}

MusicSeparation music_separation_requirement(int n, double d, int s, double sigma,
                                             double m_min, double sigma_min_s_star) {
  if (n < 2) throw std::invalid_argument("music_separation_requirement: n must be >= 2");
  if (s < 2 * n + 1)
    throw std::invalid_argument("music_separation_requirement: need s >= 2n+1");
  if (!(sigma > 0.0 && m_min > 0.0 && sigma_min_s_star > 0.0 && d > 0.0))
    throw std::invalid_argument("music_separation_requirement: positive inputs required");
  MusicSeparation out;
  const double root = 1.0 / (2.0 * n - 2.0);
  const double log_inner = std::log(4.0 * kPi * n) +
                           std::lgamma(static_cast<double>(s)) +
                           0.5 * std::log(2.0 * s - 1.0) - 0.5 * std::log(6.0) -
                           2.0 * log_zeta(n) + std::log(sigma) -
                           std::log(sigma_min_s_star) - std::log(m_min);
  out.required = (1.0 + d) * std::exp(root * log_inner);
  out.simplified = 4.75 * (1.0 + d) *
                   std::exp(root * (3.2 * std::log(n + 1.0) -
                                    std::log(sigma_min_s_star) + std::log(sigma) -
                                    std::log(m_min)));
  return out;
}

SigmaNBound dadt_sigma_n_bound(const DiscreteMeasure& measure, double d, int s) {
  const int n = measure.size();
  if (n < 1) throw std::invalid_argument("dadt_sigma_n_bound: empty measure");
  if (s % 2 == 0 || s < 2 * n + 1)
    throw std::invalid_argument("dadt_sigma_n_bound: s must be odd with s >= 2n+1");
  const int m = (s + 1) / 2;
  Eigen::MatrixXd dmat(m, n);
  for (int j = 0; j < n; ++j) {
    const double node = -measure.positions()[j];
    double power = 1.0;
    for (int i = 0; i < m; ++i) {
      dmat(i, j) = power;
      power *= node;
    }
  }
  const Eigen::MatrixXd dad =
      dmat * Eigen::Map<const Eigen::VectorXd>(measure.amplitudes().data(), n)
                 .asDiagonal() *
      dmat.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dad);
  SigmaNBound out;
  out.exact = svd.singularValues()(n - 1);
  if (n >= 2) {
    const double d_min = measure.min_separation();
    const double z = zeta_constant(n);
    out.bound = measure.min_amplitude() * z * z *
                std::pow(d_min, 2.0 * n - 2.0) /
                (n * std::pow(1.0 + d, 2.0 * n - 2.0));
  }
  return out;
}

} // namespace deconv
