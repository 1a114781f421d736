#ifndef DECONV_MODEL_HPP
#define DECONV_MODEL_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace deconv {

/// A discrete measure mu = sum_j a_j delta_{y_j}: strictly increasing
/// positions with nonzero real amplitudes. The constructor sorts atoms by
/// position and rejects coincident positions and zero amplitudes.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<double> positions, std::vector<double> amplitudes);

  int size() const { return static_cast<int>(positions_.size()); }
  const std::vector<double>& positions() const { return positions_; }
  const std::vector<double>& amplitudes() const { return amplitudes_; }

  double total_variation() const;
  double min_amplitude() const;
  /// Smallest gap between atoms; +inf for fewer than two atoms.
  double min_separation() const;

 private:
  std::vector<double> positions_;
  std::vector<double> amplitudes_;
};

/// Uniform sample points x_t = -R + (t-1)h, t = 1..N, N = floor(2R/h) + 1.
/// Requires 0 < h <= pi (Shannon spacing) and R > 0.
class SamplingGrid {
 public:
  SamplingGrid(double radius, double spacing);

  double radius() const { return radius_; }
  double spacing() const { return spacing_; }
  int sample_count() const { return count_; }
  double point(int t) const { return -radius_ + t * spacing_; }  // t = 0..N-1
  Eigen::VectorXd points() const;

 private:
  double radius_ = 0.0;
  double spacing_ = 0.0;
  int count_ = 0;
};

enum class NoiseModel {
  kUniformExperiment,      // i.i.d. uniform on (0, sigma/sqrt(2R))
  kScaledGaussianClipped,  // i.i.d. Gaussian rescaled so sqrt(h)||W||_2 = sigma
};

struct NoiseSpec {
  double sigma = 0.0;
  NoiseModel model = NoiseModel::kUniformExperiment;
  std::uint64_t seed = 0;
};

/// A simulation scenario: sources, sampling grid, noise. The canonical
/// interchange object of the CLI.
struct Scene {
  DiscreteMeasure measure;
  SamplingGrid grid;
  NoiseSpec noise;
};

/// A-priori data (d, sigma, M) plus the cutoff frequency Omega (default 1).
struct ProblemPriors {
  double d = 1.0;
  double sigma = 1.0;
  double M = 1.0;
  double omega = 1.0;
};
void validate(const ProblemPriors& priors);

/// Noiseless image [mu*f](x_t) = sum_j a_j f(x_t - y_j) on the grid.
/// All positions must lie within [-R, R].
Eigen::VectorXd forward_image(const DiscreteMeasure& measure,
                              const SamplingGrid& grid);

/// Image under the rescaled kernel f_Omega(x) = sqrt(Omega) f(Omega x).
Eigen::VectorXd forward_image_scaled(const DiscreteMeasure& measure,
                                     const SamplingGrid& grid, double omega);

/// Deterministic noise vector; both models guarantee sqrt(h)||W||_2 <= sigma
/// (the draw is rescaled down in the rare case the bound is exceeded).
Eigen::VectorXd generate_noise(const SamplingGrid& grid, const NoiseSpec& spec);

struct AdmissibilityResult {
  bool admissible = false;
  double misfit = 0.0;  // sqrt(h) || [mu*f] - Y ||_2, always reported
  bool support_ok = false;
  bool tv_ok = false;
  bool misfit_ok = false;
};

/// Checks the three admissibility conditions of a candidate measure against
/// an observed image: support in [-d, d], TV norm <= M, misfit <= sigma.
AdmissibilityResult is_admissible(const DiscreteMeasure& candidate,
                                  const Eigen::VectorXd& image,
                                  const SamplingGrid& grid,
                                  const ProblemPriors& priors);

namespace detail {
// Minimal deterministic generators (uniform in [0,1), standard normal) on top
// of a splitmix/xorshift state so outputs are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform01();
  double standard_normal();

 private:
  std::uint64_t next_u64();
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};
} // namespace detail

} // namespace deconv

#endif
