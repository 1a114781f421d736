#include "deconv/multipole.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "deconv/psf.hpp"

namespace deconv {

MultipoleBasis build_basis(const SamplingGrid& grid, int order_count) {
  if (order_count < 1)
    throw std::invalid_argument("build_basis: order count must be >= 1");
  if (order_count > kMaxOrderCount)
    throw std::invalid_argument("build_basis: order count exceeds numerical cap");
  if (grid.sample_count() < order_count)
    throw std::invalid_argument("build_basis: grid too small for the order count");
  const int n = grid.sample_count();
  Eigen::MatrixXd h(n, order_count);
  for (int r = 0; r < order_count; ++r) {
    const double norm = std::sqrt(2.0 * r + 1.0);
    for (int t = 0; t < n; ++t)
      h(t, r) = norm * sinc_derivative(r, grid.point(t));
  }
  // sigma_min is defined on the explicitly scaled matrix sqrt(h) H(s).
  const Eigen::MatrixXd scaled = std::sqrt(grid.spacing()) * h;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const double sigma_min = svd.singularValues()(order_count - 1);
  return MultipoleBasis{grid, order_count, std::move(h), sigma_min};
}

double log_coefficient_scale(int r) {
  return std::lgamma(r + 1.0) + 0.5 * std::log(2.0 * r + 1.0);
}

double coefficient_scale(int r) { return std::exp(log_coefficient_scale(r)); }

Eigen::VectorXd multipole_coefficients(const DiscreteMeasure& measure,
                                       int order_count) {
  if (order_count < 1)
    throw std::invalid_argument("multipole_coefficients: order count must be >= 1");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(order_count);
  for (int j = 0; j < measure.size(); ++j) {
    const double d = -measure.positions()[j];  // d_j = 0 - y_j
    const double a = measure.amplitudes()[j];
    double power = 1.0;
    for (int r = 0; r < order_count; ++r) {
      c[r] += a * power / coefficient_scale(r);
      power *= d;
    }
  }
  return c;
}

double truncation_residual_bound(const ProblemPriors& priors, int s) {
  if (s < 0) throw std::invalid_argument("truncation_residual_bound: s < 0");
  validate(priors);
  const double log_term = s * std::log(priors.d) - log_coefficient_scale(s);
  return 2.0 * std::exp(priors.d + log_term) * std::sqrt(std::acos(-1.0)) * priors.M;
}

Eigen::MatrixXd limiting_gram(int s) {
  if (s < 1) throw std::invalid_argument("limiting_gram: s must be >= 1");
  const double pi = std::acos(-1.0);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(s, s);
  for (int p = 0; p < s; ++p)
    for (int j = 0; j < s; ++j) {
      if ((p + j) % 2 != 0) continue;
      const double sign = (((p - j) / 2) % 2 == 0) ? 1.0 : -1.0;
      g(p, j) = sign * pi * std::sqrt(2.0 * p + 1.0) * std::sqrt(2.0 * j + 1.0) /
                (p + j + 1.0);
    }
  return g;
}

double sigma_min_from_limiting_gram(int s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(limiting_gram(s));
  const double lambda_min = eig.eigenvalues()(0);
  return lambda_min > 0.0 ? std::sqrt(lambda_min) : 0.0;
}

} // namespace deconv
