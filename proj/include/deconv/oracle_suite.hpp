#ifndef DECONV_ORACLE_SUITE_HPP
#define DECONV_ORACLE_SUITE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace deconv {

/// Aggregate outcome of one brute-force validation suite: the analytic
/// identity or bound it checks, how many random instances ran, how many
/// violated it, and the smallest margin seen (negative means a violation).
struct OracleSuiteResult {
  std::string name;
  int instances = 0;
  int failures = 0;
  double worst_margin = 0.0;
};

/// Runs every Vandermonde-space oracle suite with deterministic sampling:
/// column-reduction and determinant-ratio identities (200 instances, k <= 8,
/// 1e-8 relative), nonlinear-approximation lower bounds plain and scaled
/// (50 instances, k <= 3), the eta product bound (50 instances), and the
/// inverse-norm / minimum-singular-value chains (200 instances).
std::vector<OracleSuiteResult> run_oracle_suites(std::uint64_t seed);

} // namespace deconv

#endif
