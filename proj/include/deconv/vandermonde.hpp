#ifndef DECONV_VANDERMONDE_HPP
#define DECONV_VANDERMONDE_HPP

#include <Eigen/Core>
#include <vector>

namespace deconv {

/// Ordered set of distinct real nodes with an a-priori box bound
/// (all |d_i| <= bound). The constructor sorts and rejects duplicates.
class NodeSet {
 public:
  NodeSet(std::vector<double> nodes, double bound);
  /// Bound inferred as max |d_i|.
  static NodeSet inferred(std::vector<double> nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  double bound() const { return bound_; }
  double min_separation() const;

 private:
  std::vector<double> nodes_;
  double bound_ = 0.0;
};

// Combinatorial constants entering the explicit bounds. zeta(1) = 1 (empty
// products); lambda(2) = 1 and lambda(n) = xi(n-2) for n >= 3.
double zeta_constant(int k);
double xi_constant(int k);
double lambda_constant(int n);
double log_zeta(int k);
double log_xi(int k);
double log_lambda(int n);

/// Plain Vandermonde matrix with entry (i, j) = d_j^i, i = 0..max_power.
Eigen::MatrixXd vandermonde_matrix(const NodeSet& nodes, int max_power);

/// Row r of the plain matrix divided by r! sqrt(2r+1), r = 0..rows-1.
Eigen::MatrixXd scaled_vandermonde(const NodeSet& nodes, int rows);

/// Elementary symmetric polynomial e_j(d_1, ..., d_k); e_0 = 1.
double elementary_symmetric(const NodeSet& nodes, int j);

/// Column reduction of the (n+1) x n Vandermonde V_n(n) to an identity-topped
/// matrix whose last row carries signed elementary symmetric polynomials:
/// entry j equals (-1)^{n-j-1} e_{n-j}(d_1..d_n) (0-based columns).
/// `ops` records every right multiplier in application order, so
/// V * ops[0] * ... * ops.back() == reduced.
struct VandermondeReduction {
  Eigen::MatrixXd reduced;
  std::vector<Eigen::MatrixXd> ops;
  Eigen::MatrixXd combined() const;
};
VandermondeReduction reduce_vandermonde(const NodeSet& nodes);

/// sqrt(det(V_n(n)^T V_n(n)) / det(V_n(n-1)^T V_n(n-1))) evaluated through
/// the closed form sqrt(sum_j e_j^2).
double det_ratio(const NodeSet& nodes);

/// Distance from v (length k+1) to span{phi_k(w_1), ..., phi_k(w_k)} via the
/// Gram determinant ratio, computed as a quotient of QR volumes.
double projection_distance(const NodeSet& base, const Eigen::VectorXd& v);

/// Component i = prod_q (targets_i - probes_q). Probes may contain ties.
Eigen::VectorXd eta_vector(const std::vector<double>& targets,
                           const std::vector<double>& probes);
Eigen::VectorXd eta_vector(const NodeSet& targets, const NodeSet& probes);

/// Brute-force minimizer of ||eta(targets, probes)||_inf over k probes in
/// [d_1, d_{k+1}] for k+1 targets. Exhaustive grid for k <= 3, multistart
/// coordinate descent for k <= 5. `resolution` is the grid step.
double min_eta_oracle(const NodeSet& targets, double resolution);

/// Brute-force solution of the nonlinear Vandermonde approximation problem:
/// minimize over probe positions (grid + golden-section refinement) and
/// amplitudes (exact least squares) the distance ||A(q) a - A* a*||_2, with
/// plain monomial rows 0..rows-1, or their scaled counterparts.
struct ApproxOracleResult {
  double value = 0.0;
  std::vector<double> probes;
  Eigen::VectorXd amplitudes;
};
ApproxOracleResult nonlinear_approx_oracle(const NodeSet& targets,
                                           const Eigen::VectorXd& amplitudes,
                                           int probe_count, int rows,
                                           bool scaled, double resolution);

/// The equally spaced 2k+1 node construction showing the approximation bound
/// is attained up to 2 m* k^{2k} (d_min)^{2k}: the null vector of the plain
/// Vandermonde rows 0..2k-1 is split into the k+1 largest-magnitude atoms
/// (target) and the rest (probe, negated); TV of the target is scaled to 1.
struct SharpnessConstruction {
  std::vector<double> target_nodes;
  Eigen::VectorXd target_amplitudes;
  std::vector<double> probe_nodes;
  Eigen::VectorXd probe_amplitudes;
  double achieved = 0.0;
  double bound = 0.0;
  double d_min = 0.0;
  double m_star = 0.0;
};
SharpnessConstruction sharpness_construction(int k, double d);

/// Exact ||V^{-1}||_inf of the square Vandermonde on the nodes together with
/// two analytic upper bounds, one from node-wise products and one from the
/// minimum separation alone; exact <= row_product_bound <= separation_bound.
struct InverseNormBounds {
  double exact = 0.0;
  double row_product_bound = 0.0;
  double separation_bound = 0.0;
};
InverseNormBounds inverse_inf_norm_bound(const NodeSet& nodes);

/// sigma_min of the (rows 0..S) Vandermonde and its product lower bound
/// (1/sqrt(k)) min_i prod_{p != i} |d_i - d_p| / (1 + |d_p|).
struct MinSingularBound {
  double exact = 0.0;
  double bound = 0.0;
};
MinSingularBound min_singular_bound(const NodeSet& nodes, int S);

} // namespace deconv

#endif
