#include "deconv/resolution_limits.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "deconv/multipole.hpp"
#include "deconv/music.hpp"
#include "deconv/vandermonde.hpp"

namespace deconv {

namespace {
const double kPi = std::acos(-1.0);
}

int compute_s_star(const ProblemPriors& priors) {
  validate(priors);
  const double rhs = priors.sigma /
                     (2.0 * std::exp(priors.d) * std::sqrt(kPi) * priors.M);
  int l = 0;
  double term = 1.0;  // d^l / (l! sqrt(2l+1))
  while (term > rhs) {
    ++l;
    if (l > 200)
      throw std::runtime_error("compute_s_star: no order below cap qualifies");
    term *= priors.d / l * std::sqrt((2.0 * l - 1.0) / (2.0 * l + 1.0));
  }
  return l;
}

double number_separation_bound(int n, const ProblemPriors& priors, double m_min,
                               double sigma_min_s_star) {
  if (n < 2) throw std::invalid_argument("number_separation_bound: n must be >= 2");
  if (!(m_min > 0.0 && sigma_min_s_star > 0.0))
    throw std::invalid_argument("number_separation_bound: positive inputs required");
  validate(priors);
  const double snr = 3.0 * priors.sigma / (sigma_min_s_star * m_min);
  return 4.7 * (1.0 + priors.d) / priors.omega *
         std::pow(snr, 1.0 / (2.0 * n - 2.0));
}

StabilityBounds stability_bounds(int n, const ProblemPriors& priors,
                                 double m_min, double d_min,
                                 double sigma_min_s_star) {
  if (n < 2) throw std::invalid_argument("stability_bounds: n must be >= 2");
  if (!(m_min > 0.0 && d_min > 0.0 && sigma_min_s_star > 0.0))
    throw std::invalid_argument("stability_bounds: positive inputs required");
  validate(priors);
  StabilityBounds out;
  const double snr = 3.0 * priors.sigma / (sigma_min_s_star * m_min);
  out.separation = 6.24 * (1.0 + priors.d) / priors.omega *
                   std::pow(snr, 1.0 / (2.0 * n - 1.0));
  const double log_c = std::log(7.73) + 0.5 * std::log(4.0 * n - 1.0) +
                       std::log(2.0 * n - 1.0) +
                       (2.0 * n - 1.0) * std::log(4.0 + 4.0 * priors.d) -
                       std::log(4.0 * std::exp(1.0)) -
                       (2.0 * n - 0.5) * std::log(kPi);
  out.constant = std::exp(log_c);
  out.srf = kPi / (priors.omega * d_min);
  out.position_error = out.constant / priors.omega *
                       std::exp((2.0 * n - 2.0) * std::log(out.srf)) * snr;
  return out;
}

namespace {

// Both constructions solve d = g(d) with g strictly decreasing, so the root
// is unique; bisection on [lo, hi] after a sign-change scan.
double solve_interval_width(const std::function<double(double)>& g,
                            bool* multiple_roots) {
  const double lo0 = 1e-12, hi0 = 50.0;
  int sign_changes = 0;
  double lo = lo0, hi = hi0;
  double prev = g(lo0);
  bool bracketed = false;
  const int scan = 256;
  for (int i = 1; i <= scan; ++i) {
    const double x = lo0 + (hi0 - lo0) * i / scan;
    const double val = g(x);
    if ((prev < 0.0) != (val < 0.0)) {
      ++sign_changes;
      if (!bracketed) {
        lo = lo0 + (hi0 - lo0) * (i - 1) / scan;
        hi = x;
        bracketed = true;
      }
    }
    prev = val;
  }
  if (multiple_roots) *multiple_roots = sign_changes > 1;
  if (!bracketed)
    throw std::runtime_error("construction: interval equation has no root in (0, 50]");
  double flo = g(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = g(mid);
    if ((flo < 0.0) == (fmid < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Null vector of the widest scaled-Vandermonde system on the given symmetric
// node family, oriented and split per the construction: the first block keeps
// its sign, the complementary block is negated into the decoy.
ConstructionPair assemble_pair(double sigma, double m_star,
                               const SamplingGrid& grid,
                               const std::vector<double>& node_values,
                               int rows, int target_atoms, double d_solved,
                               bool multiple_roots) {
  const int count = static_cast<int>(node_values.size());
  NodeSet nodes(node_values, std::abs(node_values.front()));
  const Eigen::MatrixXd a = scaled_vandermonde(nodes, rows);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  Eigen::VectorXd null_vec = svd.matrixV().col(count - 1);

  const double amax = null_vec.cwiseAbs().maxCoeff();
  for (int j = 0; j < count; ++j)
    if (std::abs(null_vec[j]) < 1e-14 * amax)
      throw std::runtime_error("construction: vanishing null-vector entry");

  double tv_first = 0.0, tv_rest = 0.0;
  for (int j = 0; j < count; ++j)
    (j < target_atoms ? tv_first : tv_rest) += std::abs(null_vec[j]);
  if (tv_first < tv_rest) {
    // Mirror the construction: the node family is symmetric, so reversing
    // the amplitude vector re-labels the halves.
    Eigen::VectorXd reversed(count);
    for (int j = 0; j < count; ++j) reversed[j] = null_vec[count - 1 - j];
    null_vec = reversed;
    tv_first = 0.0;
    for (int j = 0; j < target_atoms; ++j) tv_first += std::abs(null_vec[j]);
  }
  if (null_vec[0] < 0.0) null_vec = -null_vec;
  null_vec *= m_star / tv_first;

  std::vector<double> target_pos, target_amp, decoy_pos, decoy_amp;
  for (int j = 0; j < count; ++j) {
    const double y = -node_values[j];  // positions are y_j = -d_j
    if (j < target_atoms) {
      target_pos.push_back(y);
      target_amp.push_back(null_vec[j]);
    } else {
      decoy_pos.push_back(y);
      decoy_amp.push_back(-null_vec[j]);
    }
  }

  ConstructionPair pair;
  pair.target = DiscreteMeasure(target_pos, target_amp);
  pair.decoy = DiscreteMeasure(decoy_pos, decoy_amp);
  pair.d_solved = d_solved;
  pair.sigma = sigma;
  pair.multiple_roots = multiple_roots;
  const Eigen::VectorXd diff =
      forward_image(pair.target, grid) - forward_image(pair.decoy, grid);
  pair.image_distance = std::sqrt(grid.spacing()) * diff.norm();
  if (pair.image_distance > sigma)
    throw std::runtime_error("construction: image distance " +
                             std::to_string(pair.image_distance) +
                             " exceeds sigma");
  return pair;
}

} // namespace

ConstructionPair construct_number_ambiguity(int n, double sigma, double m_star,
                                            const SamplingGrid& grid) {
  if (n < 2) throw std::invalid_argument("construct_number_ambiguity: n must be >= 2");
  if (!(sigma > 0.0 && m_star > 0.0))
    throw std::invalid_argument("construct_number_ambiguity: positive sigma, m* required");
  const double root = 1.0 / (2.0 * n - 2.0);
  const auto g = [&](double d) {
    return d / (n - 1) - 2.0 / std::exp(1.0) *
                             std::pow((2.0 * n - 2.0) / std::exp(d), root) *
                             std::pow(sigma / m_star, root);
  };
  bool multi = false;
  const double d = solve_interval_width(g, &multi);
  const double tau = d / (n - 1);
  std::vector<double> nodes(2 * n - 1);
  for (int j = 0; j < 2 * n - 1; ++j) nodes[j] = -d + j * tau;
  return assemble_pair(sigma, m_star, grid, nodes, 2 * n - 2, n, d, multi);
}

ConstructionPair construct_support_ambiguity(int n, double sigma, double m_star,
                                             const SamplingGrid& grid) {
  if (n < 2) throw std::invalid_argument("construct_support_ambiguity: n must be >= 2");
  if (!(sigma > 0.0 && m_star > 0.0))
    throw std::invalid_argument("construct_support_ambiguity: positive sigma, m* required");
  const double root = 1.0 / (2.0 * n - 1.0);
  const auto g = [&](double d) {
    return d / n - 2.0 / std::exp(1.0) *
                       std::pow((2.0 * n - 1.0) / std::exp(1.0 + d), root) *
                       std::pow(sigma / m_star, root);
  };
  bool multi = false;
  const double d = solve_interval_width(g, &multi);
  const double tau = d / n;
  std::vector<double> nodes;
  for (int j = n; j >= 1; --j) nodes.push_back(-j * tau);
  for (int j = 1; j <= n; ++j) nodes.push_back(j * tau);
  return assemble_pair(sigma, m_star, grid, nodes, 2 * n - 1, n, d, multi);
}

Scene rescale_scene(const Scene& scene, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("rescale_scene: omega must be positive");
  std::vector<double> positions = scene.measure.positions();
  for (double& y : positions) y /= omega;
  return Scene{DiscreteMeasure(positions, scene.measure.amplitudes()),
               SamplingGrid(scene.grid.radius() / omega, scene.grid.spacing() / omega),
               scene.noise};
}

double scaled_misfit(const DiscreteMeasure& candidate, const Eigen::VectorXd& image,
                     const SamplingGrid& grid, double omega) {
  if (image.size() != grid.sample_count())
    throw std::invalid_argument("scaled_misfit: image/grid size mismatch");
  const Eigen::VectorXd predicted = forward_image_scaled(candidate, grid, omega);
  return std::sqrt(grid.spacing()) * (predicted - image).norm();
}

namespace {

void push(std::vector<InequalityRecord>& out, const std::string& name, int index,
          double log_lhs, double log_rhs) {
  InequalityRecord rec;
  rec.name = name;
  rec.index = index;
  rec.log_lhs = log_lhs;
  rec.log_rhs = log_rhs;
  rec.margin = log_rhs - log_lhs;
  rec.holds = rec.margin >= 0.0;
  out.push_back(std::move(rec));
}

} // namespace

std::vector<InequalityRecord> verify_appendix_inequalities(int n_lo, int n_hi,
                                                           int k_lo, int k_hi) {
  if (n_lo < 2 || k_lo < 1 || n_hi > 200 || k_hi > 200)
    throw std::invalid_argument("verify_appendix_inequalities: range out of reach");
  std::vector<InequalityRecord> out;
  const double log2 = std::log(2.0);
  const double log_2root_pi = std::log(2.0 * std::sqrt(kPi));

  for (int n = n_lo; n <= n_hi; ++n) {
    // Residual margin of the number-ambiguity construction.
    push(out, "number-construction-residual", n,
         log_2root_pi + (2.0 * n - 2.0) * std::log(n - 1.0) + std::log(2.0 * n - 2.0) -
             std::lgamma(2.0 * n - 1.0) - 0.5 * std::log(4.0 * n - 3.0) +
             (2.0 * n - 2.0) * (log2 - 1.0),
         0.0);
    // Residual margin of the support-ambiguity construction.
    push(out, "support-construction-residual", n,
         log_2root_pi + (2.0 * n - 1.0) * std::log(static_cast<double>(n)) +
             std::log(2.0 * n - 1.0) - 1.0 - std::lgamma(2.0 * n) -
             0.5 * std::log(4.0 * n - 1.0) + (2.0 * n - 1.0) * (log2 - 1.0),
         0.0);
    // The stability separation constant 6.24.
    push(out, "stability-separation-constant", n,
         (std::log(4.0) + 0.5 * std::log(4.0 * n - 1.0) + std::lgamma(2.0 * n) -
          log_zeta(n) - log_lambda(n)) /
             (2.0 * n - 1.0),
         std::log(6.24));
    // The position-error constant 7.73.
    push(out, "position-error-constant", n,
         (n - 1.0) * log2 + std::lgamma(2.0 * n) + 0.5 * std::log(4.0 * n - 1.0) -
             log_zeta(n) - std::lgamma(n - 1.0),
         std::log(7.73) + 0.5 * std::log(4.0 * n - 1.0) + std::log(2.0 * n - 1.0) +
             (2.0 * n - 1.0) * std::log(4.0) - std::log(4.0 * std::exp(1.0)) -
             1.5 * std::log(kPi));
    // Stirling sandwich sqrt(2 pi) n^{n+1/2} e^{-n} <= n! <= e n^{n+1/2} e^{-n}.
    const double core = (n + 0.5) * std::log(static_cast<double>(n)) - n;
    push(out, "stirling-lower", n, 0.5 * std::log(2.0 * kPi) + core,
         std::lgamma(n + 1.0));
    push(out, "stirling-upper", n, std::lgamma(n + 1.0), 1.0 + core);
  }

  for (int k = k_lo; k <= k_hi; ++k) {
    // Scaled-bound constant: zeta(k+1) xi(k) / ((2k)! sqrt(4k+1)) >= 1.15/(2^{4k} k).
    push(out, "scaled-bound-constant", k,
         std::log(1.15) - 4.0 * k * log2 - std::log(static_cast<double>(k)),
         log_zeta(k + 1) + log_xi(k) - std::lgamma(2.0 * k + 1.0) -
             0.5 * std::log(4.0 * k + 1.0));
  }
  return out;
}

LimitReport make_limit_report(int n, const ProblemPriors& priors, double m_min,
                              const SamplingGrid& grid,
                              std::optional<int> music_s,
                              std::optional<double> d_min) {
  if (n < 2) throw std::invalid_argument("make_limit_report: n must be >= 2");
  LimitReport report;
  report.omega = priors.omega;
  report.s_star = compute_s_star(priors);
  if (report.s_star < 1)
    throw std::runtime_error("make_limit_report: noise level admits no multipole");
  report.basis_order = std::min(report.s_star, kMaxOrderCount);
  report.sigma_min_s_star = build_basis(grid, report.basis_order).sigma_min;
  report.number_upper_bound =
      number_separation_bound(n, priors, m_min, report.sigma_min_s_star);

  const StabilityBounds prelim = stability_bounds(n, priors, m_min, 1.0,
                                                  report.sigma_min_s_star);
  const double dmin = d_min.value_or(prelim.separation);
  const StabilityBounds stab =
      stability_bounds(n, priors, m_min, dmin, report.sigma_min_s_star);
  report.stability_separation = stab.separation;
  report.position_error_constant = stab.constant;
  report.position_error_bound = stab.position_error;
  report.srf = stab.srf;

  int s = music_s.value_or(report.basis_order % 2 == 1 ? report.basis_order
                                                       : report.basis_order - 1);
  if (s >= 2 * n + 1 && s >= 3 && s % 2 == 1) {
    report.music_s = s;
    report.music_separation =
        music_separation_requirement(n, priors.d, s, priors.sigma, m_min,
                                     report.sigma_min_s_star)
            .required / priors.omega;
    report.music_threshold =
        detection_threshold(s, priors.sigma, report.sigma_min_s_star);
  }
  return report;
}

} // namespace deconv
