#ifndef DECONV_RESOLUTION_LIMITS_HPP
#define DECONV_RESOLUTION_LIMITS_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "deconv/model.hpp"

namespace deconv {

/// Smallest l >= 0 with d^l / (l! sqrt(2l+1)) <= sigma / (2 e^d sqrt(pi) M):
/// the number of multipole coefficients recoverable at the given noise level.
/// Throws if no l <= 200 qualifies.
int compute_s_star(const ProblemPriors& priors);

/// Separation beyond which no measure with fewer than n atoms is admissible:
/// 4.7 (1+d)/Omega * (3 sigma / (sigma_min m_min))^(1/(2n-2)).
double number_separation_bound(int n, const ProblemPriors& priors, double m_min,
                               double sigma_min_s_star);

struct StabilityBounds {
  double separation = 0.0;      // 6.24 (1+d)/Omega * (...)^(1/(2n-1))
  double position_error = 0.0;  // C(n,d)/Omega * SRF^(2n-2) * 3 sigma/(sigma_min m_min)
  double constant = 0.0;        // C(n,d)
  double srf = 0.0;             // pi / (Omega d_min)
};
StabilityBounds stability_bounds(int n, const ProblemPriors& priors,
                                 double m_min, double d_min,
                                 double sigma_min_s_star);

/// A pair of measures with different atom counts (or mirrored supports) whose
/// images agree to within sigma; the constructive side of the limit bounds.
struct ConstructionPair {
  DiscreteMeasure target;
  DiscreteMeasure decoy;
  double d_solved = 0.0;
  double image_distance = 0.0;  // sqrt(h) || [target*f] - [decoy*f] ||_2
  double sigma = 0.0;
  bool multiple_roots = false;  // bracketing saw more than one sign change
};

/// n-atom target vs (n-1)-atom decoy on 2n-1 equally spaced nodes, with the
/// interval half-width d solved from
///   d/(n-1) = (2/e) ((2n-2)/e^d)^(1/(2n-2)) (sigma/m*)^(1/(2n-2)).
ConstructionPair construct_number_ambiguity(int n, double sigma, double m_star,
                                            const SamplingGrid& grid);

/// Mirror-supported n-atom pair on {±tau, ..., ±n tau} with d solved from
///   d/n = (2/e) ((2n-1)/e^(1+d))^(1/(2n-1)) (sigma/m*)^(1/(2n-1)).
ConstructionPair construct_support_ambiguity(int n, double sigma, double m_star,
                                             const SamplingGrid& grid);

/// Scene mapped to cutoff frequency omega: positions and grid scaled by
/// 1/omega, amplitudes and noise level unchanged.
Scene rescale_scene(const Scene& scene, double omega);

/// Image misfit at cutoff omega: sqrt(grid spacing) * ||[mu * f_omega] - Y||_2
/// (the grid is the already-rescaled one).
double scaled_misfit(const DiscreteMeasure& candidate, const Eigen::VectorXd& image,
                     const SamplingGrid& grid, double omega);

/// One verified inequality, normalized to log_lhs <= log_rhs form.
struct InequalityRecord {
  std::string name;
  int index = 0;       // the n or k it was evaluated at
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  double margin = 0.0;  // log_rhs - log_lhs, >= 0 when the inequality holds
  bool holds = false;
};

/// Evaluates the factorial inequalities behind the explicit constants
/// (residual bounds, 6.24 and 7.73 constants, the scaled-bound constant, the
/// Stirling sandwich) over the given index ranges.
std::vector<InequalityRecord> verify_appendix_inequalities(int n_lo, int n_hi,
                                                           int k_lo, int k_hi);

struct LimitReport {
  int s_star = 0;
  int basis_order = 0;          // min(s_star, numerical cap)
  double sigma_min_s_star = 0.0;
  double number_upper_bound = 0.0;
  double stability_separation = 0.0;
  double position_error_constant = 0.0;
  double position_error_bound = 0.0;
  int music_s = 0;              // 0 when no admissible odd order exists
  double music_separation = 0.0;
  double music_threshold = 0.0;
  double srf = 0.0;
  double omega = 1.0;
};

/// Evaluates every closed-form bound for the given scenario. d_min defaults
/// to the stability separation (so srf is reported at the critical point);
/// music_s defaults to the largest odd order <= s*.
LimitReport make_limit_report(int n, const ProblemPriors& priors, double m_min,
                              const SamplingGrid& grid,
                              std::optional<int> music_s = std::nullopt,
                              std::optional<double> d_min = std::nullopt);

} // namespace deconv

#endif
