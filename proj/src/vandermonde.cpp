#include "deconv/vandermonde.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "deconv/model.hpp"
#include "deconv/multipole.hpp"

namespace deconv {

NodeSet::NodeSet(std::vector<double> nodes, double bound)
    : nodes_(std::move(nodes)), bound_(bound) {
  if (!(bound_ > 0.0)) throw std::invalid_argument("NodeSet: bound must be positive");
  std::sort(nodes_.begin(), nodes_.end());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i]) || std::abs(nodes_[i]) > bound_)
      throw std::invalid_argument("NodeSet: node outside [-bound, bound]");
    if (i > 0 && nodes_[i] <= nodes_[i - 1])
      throw std::invalid_argument("NodeSet: nodes must be distinct");
  }
}

NodeSet NodeSet::inferred(std::vector<double> nodes) {
  double b = 0.0;
  for (double d : nodes) b = std::max(b, std::abs(d));
  return NodeSet(std::move(nodes), b > 0.0 ? b : 1.0);
}

double NodeSet::min_separation() const {
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    sep = std::min(sep, nodes_[i] - nodes_[i - 1]);
  return sep;
}

double log_zeta(int m) {
  if (m < 1) throw std::invalid_argument("zeta: argument must be >= 1");
  const int k = m - 1;
  if (k == 0) return 0.0;
  if (k % 2 == 1)  // zeta(k+1) = ((k+1)/2)! ((k-1)/2)!
    return std::lgamma((k + 1) / 2 + 1.0) + std::lgamma((k - 1) / 2 + 1.0);
  return 2.0 * std::lgamma(k / 2 + 1.0);  // (k/2 !)^2
}

double log_xi(int k) {
  if (k < 1) throw std::invalid_argument("xi: argument must be >= 1");
  if (k == 1) return std::log(0.5);
  const double log4 = std::log(4.0);
  if (k % 2 == 1)
    return std::lgamma((k - 1) / 2 + 1.0) + std::lgamma((k - 3) / 2 + 1.0) - log4;
  return 2.0 * std::lgamma((k - 2) / 2 + 1.0) - log4;
}

double log_lambda(int n) {
  if (n < 2) throw std::invalid_argument("lambda: argument must be >= 2");
  return n == 2 ? 0.0 : log_xi(n - 2);
}

double zeta_constant(int k) { return std::exp(log_zeta(k)); }
double xi_constant(int k) { return std::exp(log_xi(k)); }
double lambda_constant(int n) { return std::exp(log_lambda(n)); }

namespace {

Eigen::MatrixXd monomial_rows(const std::vector<double>& nodes, int rows,
                              bool scaled) {
  const int k = static_cast<int>(nodes.size());
  Eigen::MatrixXd m(rows, k);
  for (int j = 0; j < k; ++j) {
    double power = 1.0;
    for (int r = 0; r < rows; ++r) {
      m(r, j) = scaled ? power / coefficient_scale(r) : power;
      power *= nodes[j];
    }
  }
  return m;
}

} // namespace

Eigen::MatrixXd vandermonde_matrix(const NodeSet& nodes, int max_power) {
  if (max_power < 0) throw std::invalid_argument("vandermonde_matrix: negative power");
  return monomial_rows(nodes.nodes(), max_power + 1, false);
}

Eigen::MatrixXd scaled_vandermonde(const NodeSet& nodes, int rows) {
  if (rows < 1) throw std::invalid_argument("scaled_vandermonde: rows must be >= 1");
  return monomial_rows(nodes.nodes(), rows, true);
}

double elementary_symmetric(const NodeSet& nodes, int j) {
  const int k = nodes.size();
  if (j < 0 || j > k) throw std::invalid_argument("elementary_symmetric: j out of range");
  std::vector<double> e(j + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < k; ++i)
    for (int t = std::min(j, i + 1); t >= 1; --t) e[t] += nodes.nodes()[i] * e[t - 1];
  return e[j];
}

Eigen::MatrixXd VandermondeReduction::combined() const {
  if (ops.empty()) return Eigen::MatrixXd();
  Eigen::MatrixXd t = ops.front();
  for (std::size_t i = 1; i < ops.size(); ++i) t = t * ops[i];
  return t;
}

VandermondeReduction reduce_vandermonde(const NodeSet& nodes) {
  const int n = nodes.size();
  if (n < 1) throw std::invalid_argument("reduce_vandermonde: empty node set");
  Eigen::MatrixXd work = vandermonde_matrix(nodes, n);  // (n+1) x n
  VandermondeReduction out;

  // Phase 1: column additions bringing V to lower triangular form with
  // pivots prod_{p<c}(d_c - d_p).
  for (int c = 0; c + 1 < n; ++c) {
    const double pivot = work(c, c);
    if (std::abs(pivot) < 1e-300)
      throw std::invalid_argument("reduce_vandermonde: coincident nodes");
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
    for (int j = c + 1; j < n; ++j) g(c, j) = -work(c, j) / pivot;
    work = work * g;
    out.ops.push_back(std::move(g));
  }

  // Factor extraction: unit diagonal.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < n; ++c) {
    if (std::abs(work(c, c)) < 1e-300)
      throw std::invalid_argument("reduce_vandermonde: coincident nodes");
    d(c, c) = 1.0 / work(c, c);
  }
  work = work * d;
  out.ops.push_back(std::move(d));

  // Phase 2: back-elimination, clearing rows n-1, n-2, ..., 1 left of the
  // diagonal; only the last row keeps accumulating.
  for (int t = 1; t < n; ++t) {
    const int p = n - t;  // pivot column, unit entry at row p
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
    for (int j = 0; j < p; ++j) q(p, j) = -work(p, j);
    work = work * q;
    out.ops.push_back(std::move(q));
  }

  out.reduced = std::move(work);
  return out;
}

double det_ratio(const NodeSet& nodes) {
  const int n = nodes.size();
  double sum = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double e = elementary_symmetric(nodes, j);
    sum += e * e;
  }
  return std::sqrt(sum);
}

namespace {

// Volume of the parallelotope spanned by the columns, as the product of the
// QR diagonal magnitudes.
double column_volume(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  double vol = 1.0;
  const int k = static_cast<int>(a.cols());
  for (int i = 0; i < k; ++i) vol *= std::abs(qr.matrixQR()(i, i));
  return vol;
}

} // namespace

double projection_distance(const NodeSet& base, const Eigen::VectorXd& v) {
  const int k = base.size();
  if (v.size() != k + 1)
    throw std::invalid_argument("projection_distance: v must have length k+1");
  const Eigen::MatrixXd a = vandermonde_matrix(base, k);  // (k+1) x k
  const double vol_a = column_volume(a);
  if (!(vol_a > 0.0))
    throw std::invalid_argument("projection_distance: rank deficient base");
  Eigen::MatrixXd hat(k + 1, k + 1);
  hat << a, v;
  return column_volume(hat) / vol_a;
}

Eigen::VectorXd eta_vector(const std::vector<double>& targets,
                           const std::vector<double>& probes) {
  Eigen::VectorXd eta(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    double prod = 1.0;
    for (double p : probes) prod *= targets[i] - p;
    eta[i] = prod;
  }
  return eta;
}

Eigen::VectorXd eta_vector(const NodeSet& targets, const NodeSet& probes) {
  return eta_vector(targets.nodes(), probes.nodes());
}

namespace {

// Enumerates nondecreasing q-tuples of grid values (the objectives are
// symmetric in the probes).
void for_each_sorted_tuple(const std::vector<double>& grid, int q,
                           std::vector<double>& tuple,
                           const std::function<void(const std::vector<double>&)>& fn,
                           int depth = 0, int start = 0) {
  if (depth == q) {
    fn(tuple);
    return;
  }
  for (int i = start; i < static_cast<int>(grid.size()); ++i) {
    tuple[depth] = grid[i];
    for_each_sorted_tuple(grid, q, tuple, fn, depth + 1, i);
  }
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("oracle: resolution must be positive");
  const int count = std::max(2, static_cast<int>(std::round((hi - lo) / step)) + 1);
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return g;
}

double golden_section(double lo, double hi,
                      const std::function<double(double)>& f) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 60 && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - phi * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + phi * (b - a); f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

// Coordinate-wise golden-section polish of a probe tuple; a move is kept
// only when it improves the objective.
void refine(std::vector<double>& probes, double window, double lo, double hi,
            int rounds, const std::function<double(const std::vector<double>&)>& objective) {
  double current = objective(probes);
  for (int round = 0; round < rounds; ++round) {
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const double a = std::max(lo, probes[i] - window);
      const double b = std::min(hi, probes[i] + window);
      const double candidate = golden_section(a, b, [&](double x) {
        std::vector<double> trial = probes;
        trial[i] = x;
        return objective(trial);
      });
      std::vector<double> trial = probes;
      trial[i] = candidate;
      const double value = objective(trial);
      if (value < current) {
        probes = std::move(trial);
        current = value;
      }
    }
  }
}

} // namespace

double min_eta_oracle(const NodeSet& targets, double resolution) {
  const int k = targets.size() - 1;
  if (k < 1) throw std::invalid_argument("min_eta_oracle: need at least two targets");
  if (k > 5) throw std::invalid_argument("min_eta_oracle: instance too large");
  const double lo = targets.nodes().front();
  const double hi = targets.nodes().back();
  const auto objective = [&](const std::vector<double>& probes) {
    return eta_vector(targets.nodes(), probes).lpNorm<Eigen::Infinity>();
  };

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_probes;
  const auto consider = [&](const std::vector<double>& probes) {
    const double v = objective(probes);
    if (v < best) {
      best = v;
      best_probes = probes;
    }
  };

  if (k <= 3) {
    const std::vector<double> grid = make_grid(lo, hi, resolution);
    std::vector<double> tuple(k);
    for_each_sorted_tuple(grid, k, tuple, consider);
  } else {
    // Multistart coordinate descent: target midpoints, an equispaced tuple,
    // and seeded random tuples.
    std::vector<std::vector<double>> starts;
    std::vector<double> mid(k);
    for (int i = 0; i < k; ++i)
      mid[i] = 0.5 * (targets.nodes()[i] + targets.nodes()[i + 1]);
    starts.push_back(mid);
    std::vector<double> equi(k);
    for (int i = 0; i < k; ++i) equi[i] = lo + (hi - lo) * (i + 1.0) / (k + 1.0);
    starts.push_back(equi);
    detail::Rng rng(20240);
    for (int s = 0; s < 64; ++s) {
      std::vector<double> r(k);
      for (int i = 0; i < k; ++i) r[i] = lo + (hi - lo) * rng.uniform01();
      std::sort(r.begin(), r.end());
      starts.push_back(std::move(r));
    }
    for (auto& start : starts) {
      refine(start, hi - lo, lo, hi, 5, objective);
      consider(start);
    }
  }

  refine(best_probes, resolution, lo, hi, 3, objective);
  consider(best_probes);
  return best;
}

ApproxOracleResult nonlinear_approx_oracle(const NodeSet& targets,
                                           const Eigen::VectorXd& amplitudes,
                                           int probe_count, int rows,
                                           bool scaled, double resolution) {
  if (amplitudes.size() != targets.size())
    throw std::invalid_argument("nonlinear_approx_oracle: amplitude count mismatch");
  if (probe_count < 0 || probe_count > 4)
    throw std::invalid_argument("nonlinear_approx_oracle: instance too large");
  if (rows < 1) throw std::invalid_argument("nonlinear_approx_oracle: rows must be >= 1");

  const Eigen::VectorXd v =
      monomial_rows(targets.nodes(), rows, scaled) * amplitudes;
  ApproxOracleResult result;
  if (probe_count == 0) {
    result.value = v.norm();
    return result;
  }

  Eigen::VectorXd best_amps;
  const auto residual = [&](const std::vector<double>& probes,
                            Eigen::VectorXd* amps_out) {
    const Eigen::MatrixXd a = monomial_rows(probes, rows, scaled);
    const Eigen::VectorXd coeffs = a.colPivHouseholderQr().solve(v);
    if (amps_out) *amps_out = coeffs;
    return (a * coeffs - v).norm();
  };
  const auto objective = [&](const std::vector<double>& probes) {
    return residual(probes, nullptr);
  };

  const double d = targets.bound();
  const std::vector<double> grid = make_grid(-d, d, resolution);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_probes;
  std::vector<double> tuple(probe_count);
  for_each_sorted_tuple(grid, probe_count, tuple, [&](const std::vector<double>& probes) {
    const double val = objective(probes);
    if (val < best) {
      best = val;
      best_probes = probes;
    }
  });

  refine(best_probes, resolution, -d, d, 3, objective);
  result.value = residual(best_probes, &best_amps);
  result.probes = best_probes;
  result.amplitudes = best_amps;
  return result;
}

SharpnessConstruction sharpness_construction(int k, double d) {
  if (k < 1) throw std::invalid_argument("sharpness_construction: k must be >= 1");
  if (!(d > 0.0)) throw std::invalid_argument("sharpness_construction: d must be positive");
  const int count = 2 * k + 1;
  std::vector<double> nodes(count);
  for (int j = 0; j < count; ++j) nodes[j] = -d + d * j / k;
  NodeSet node_set(nodes, d);

  // Null vector of the rows 0..2k-1 Vandermonde (kernel has dimension one).
  const Eigen::MatrixXd v = vandermonde_matrix(node_set, 2 * k - 1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeFullV);
  Eigen::VectorXd a = svd.matrixV().col(count - 1);
  if (a[0] < 0.0) a = -a;
  const double amax = a.cwiseAbs().maxCoeff();
  for (int j = 0; j < count; ++j)
    if (std::abs(a[j]) < 1e-14 * amax)
      throw std::runtime_error("sharpness_construction: vanishing null-vector entry");

  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int p, int q) {
    return std::abs(a[p]) > std::abs(a[q]);
  });

  SharpnessConstruction out;
  double target_tv = 0.0;
  for (int i = 0; i <= k; ++i) target_tv += std::abs(a[order[i]]);
  const double scale = 1.0 / target_tv;  // normalize to m* = 1
  a *= scale;

  out.target_nodes.resize(k + 1);
  out.target_amplitudes.resize(k + 1);
  for (int i = 0; i <= k; ++i) {
    out.target_nodes[i] = nodes[order[i]];
    out.target_amplitudes[i] = a[order[i]];
  }
  out.probe_nodes.resize(k);
  out.probe_amplitudes.resize(k);
  for (int i = 0; i < k; ++i) {
    out.probe_nodes[i] = nodes[order[k + 1 + i]];
    out.probe_amplitudes[i] = -a[order[k + 1 + i]];
  }
  out.m_star = 1.0;
  out.d_min = d / k;

  // ||A* a* - A(k) a(k)||_2 collapses to the absolute last-row sum.
  double top = 0.0;
  for (int j = 0; j < count; ++j) top += a[j] * std::pow(nodes[j], 2 * k);
  out.achieved = std::abs(top);
  out.bound = 2.0 * out.m_star * std::pow(k, 2 * k) * std::pow(out.d_min, 2 * k);
  return out;
}

InverseNormBounds inverse_inf_norm_bound(const NodeSet& nodes) {
  const int k = nodes.size();
  if (k < 1 || k > 12)
    throw std::invalid_argument("inverse_inf_norm_bound: size out of range");
  const Eigen::MatrixXd v = vandermonde_matrix(nodes, k - 1);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(v);
  if (!lu.isInvertible())
    throw std::runtime_error("inverse_inf_norm_bound: numerically singular");
  const Eigen::MatrixXd inv = lu.inverse();

  InverseNormBounds out;
  out.exact = inv.cwiseAbs().rowwise().sum().maxCoeff();
  out.row_product_bound = 0.0;
  for (int i = 0; i < k; ++i) {
    double prod = 1.0;
    for (int p = 0; p < k; ++p) {
      if (p == i) continue;
      prod *= (1.0 + std::abs(nodes.nodes()[p])) /
              std::abs(nodes.nodes()[i] - nodes.nodes()[p]);
    }
    out.row_product_bound = std::max(out.row_product_bound, prod);
  }
  const double d_min = k >= 2 ? nodes.min_separation() : 1.0;
  out.separation_bound = std::pow(1.0 + nodes.bound(), k - 1) /
                        (zeta_constant(k) * std::pow(d_min, k - 1));
  return out;
}

MinSingularBound min_singular_bound(const NodeSet& nodes, int S) {
  const int k = nodes.size();
  if (S < k - 1)
    throw std::invalid_argument("min_singular_bound: need S >= k-1 rows");
  const Eigen::MatrixXd w = vandermonde_matrix(nodes, S);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(w);
  MinSingularBound out;
  out.exact = svd.singularValues()(k - 1);
  double min_prod = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    double prod = 1.0;
    for (int p = 0; p < k; ++p) {
      if (p == i) continue;
      prod *= std::abs(nodes.nodes()[i] - nodes.nodes()[p]) /
              (1.0 + std::abs(nodes.nodes()[p]));
    }
    min_prod = std::min(min_prod, prod);
  }
  out.bound = min_prod / std::sqrt(static_cast<double>(k));
  return out;
}

} // namespace deconv
