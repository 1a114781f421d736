#include "deconv/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "deconv/psf.hpp"

namespace deconv {

DiscreteMeasure::DiscreteMeasure(std::vector<double> positions,
                                 std::vector<double> amplitudes) {
  if (positions.size() != amplitudes.size())
    throw std::invalid_argument("DiscreteMeasure: size mismatch");
  const std::size_t n = positions.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return positions[a] < positions[b]; });
  positions_.reserve(n);
  amplitudes_.reserve(n);
  for (std::size_t i : order) {
    if (!std::isfinite(positions[i]) || !std::isfinite(amplitudes[i]))
      throw std::invalid_argument("DiscreteMeasure: non-finite atom");
    if (amplitudes[i] == 0.0)
      throw std::invalid_argument("DiscreteMeasure: zero amplitude");
    if (!positions_.empty() && positions[i] <= positions_.back())
      throw std::invalid_argument("DiscreteMeasure: coincident positions");
    positions_.push_back(positions[i]);
    amplitudes_.push_back(amplitudes[i]);
  }
}

double DiscreteMeasure::total_variation() const {
  double tv = 0.0;
  for (double a : amplitudes_) tv += std::abs(a);
  return tv;
}

double DiscreteMeasure::min_amplitude() const {
  double m = std::numeric_limits<double>::infinity();
  for (double a : amplitudes_) m = std::min(m, std::abs(a));
  return m;
}

double DiscreteMeasure::min_separation() const {
  if (size() < 2) return std::numeric_limits<double>::infinity();
  double sep = std::numeric_limits<double>::infinity();
  for (int i = 1; i < size(); ++i)
    sep = std::min(sep, positions_[i] - positions_[i - 1]);
  return sep;
}

SamplingGrid::SamplingGrid(double radius, double spacing)
    : radius_(radius), spacing_(spacing) {
  if (!(radius > 0.0)) throw std::invalid_argument("SamplingGrid: radius must be positive");
  if (!(spacing > 0.0) || spacing > std::acos(-1.0))
    throw std::invalid_argument("SamplingGrid: need 0 < h <= pi");
  count_ = static_cast<int>(std::floor(2.0 * radius / spacing + 1e-9)) + 1;
}

Eigen::VectorXd SamplingGrid::points() const {
  Eigen::VectorXd x(count_);
  for (int t = 0; t < count_; ++t) x[t] = point(t);
  return x;
}

void validate(const ProblemPriors& priors) {
  if (!(priors.d > 0.0 && priors.sigma > 0.0 && priors.M > 0.0 && priors.omega > 0.0))
    throw std::invalid_argument("ProblemPriors: d, sigma, M, omega must be positive");
}

Eigen::VectorXd forward_image(const DiscreteMeasure& measure,
                              const SamplingGrid& grid) {
  return forward_image_scaled(measure, grid, 1.0);
}

Eigen::VectorXd forward_image_scaled(const DiscreteMeasure& measure,
                                     const SamplingGrid& grid, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("forward_image: omega must be positive");
  for (double y : measure.positions())
    if (std::abs(y) > grid.radius())
      throw std::invalid_argument("forward_image: source outside grid support");
  const int n = grid.sample_count();
  const double root_omega = std::sqrt(omega);
  Eigen::VectorXd image = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < measure.size(); ++j) {
    const double y = measure.positions()[j];
    const double a = measure.amplitudes()[j];
    for (int t = 0; t < n; ++t)
      image[t] += a * root_omega * sinc_derivative(0, omega * (grid.point(t) - y));
  }
  return image;
}

namespace detail {

Rng::Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

std::uint64_t Rng::next_u64() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::standard_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double twopi = 2.0 * std::acos(-1.0);
  spare_ = r * std::sin(twopi * u2);
  have_spare_ = true;
  return r * std::cos(twopi * u2);
}

} // namespace detail

Eigen::VectorXd generate_noise(const SamplingGrid& grid, const NoiseSpec& spec) {
  if (spec.sigma < 0.0) throw std::invalid_argument("generate_noise: negative sigma");
  const int n = grid.sample_count();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  if (spec.sigma == 0.0) return w;

  detail::Rng rng(spec.seed);
  if (spec.model == NoiseModel::kUniformExperiment) {
    const double hi = spec.sigma / std::sqrt(2.0 * grid.radius());
    for (int t = 0; t < n; ++t) w[t] = hi * rng.uniform01();
  } else {
    for (int t = 0; t < n; ++t) w[t] = rng.standard_normal();
    const double norm = std::sqrt(grid.spacing()) * w.norm();
    if (norm > 0.0) w *= spec.sigma / norm;
  }
  // Noise contract: sqrt(h)||W||_2 <= sigma, whatever the draw. The rescale
  // undershoots by a few ulp so the recomputed norm cannot land above.
  const double achieved = std::sqrt(grid.spacing()) * w.norm();
  if (achieved > spec.sigma) w *= spec.sigma / achieved * (1.0 - 1e-14);
  return w;
}

AdmissibilityResult is_admissible(const DiscreteMeasure& candidate,
                                  const Eigen::VectorXd& image,
                                  const SamplingGrid& grid,
                                  const ProblemPriors& priors) {
  validate(priors);
  if (image.size() != grid.sample_count())
    throw std::invalid_argument("is_admissible: image/grid size mismatch");
  AdmissibilityResult result;
  result.support_ok = true;
  for (double y : candidate.positions())
    if (std::abs(y) > priors.d) result.support_ok = false;
  result.tv_ok = candidate.total_variation() <= priors.M;
  const Eigen::VectorXd predicted = forward_image(candidate, grid);
  result.misfit = std::sqrt(grid.spacing()) * (predicted - image).norm();
  result.misfit_ok = result.misfit <= priors.sigma;
  result.admissible = result.support_ok && result.tv_ok && result.misfit_ok;
  return result;
}

} // namespace deconv
