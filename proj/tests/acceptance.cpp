// Acceptance suite: every criterion below runs end to end against the
// library and prints one PASS/FAIL line. The exit status is the number of
// failed criteria.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "deconv/model.hpp"
#include "deconv/multipole.hpp"
#include "deconv/music.hpp"
#include "deconv/oracle_suite.hpp"
#include "deconv/resolution_limits.hpp"

using namespace deconv;

namespace {

struct Criterion {
  int id;
  bool pass;
  std::string detail;
};

std::vector<Criterion> results;

void report(int id, bool pass, const std::string& detail) {
  results.push_back({id, pass, detail});
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

Eigen::VectorXd noisy_image(const DiscreteMeasure& m, const SamplingGrid& grid,
                            double sigma, std::uint64_t seed) {
  Eigen::VectorXd image = forward_image(m, grid);
  image += generate_noise(grid, {sigma, NoiseModel::kUniformExperiment, seed});
  return image;
}

} // namespace

int main() {
  const SamplingGrid grid(100.0, 2.0);
  const ProblemPriors example{1.0, 5.8e-5, 2.0, 1.0};
  const ProblemPriors exp1{0.5, 7.1e-6, 3.0, 1.0};
  const ProblemPriors exp2{0.5, 1.38e-9, 4.0, 1.0};

  // 1. s* regression (exact integers 8, 7, 10)
  {
    const int s1 = compute_s_star(example);
    const int s2 = compute_s_star(exp1);
    const int s3 = compute_s_star(exp2);
    report(1, s1 == 8 && s2 == 7 && s3 == 10,
           fmt("s* regression: got (%d, %d, %d), expected (8, 7, 10)", s1, s2, s3));
  }

  // 2. upper bounds 0.7597 / 0.1353 / 0.2083 within 1e-3 at the published orders
  const double sm8 = build_basis(grid, 8).sigma_min;
  const MultipoleBasis basis7 = build_basis(grid, 7);
  const MultipoleBasis basis10 = build_basis(grid, 10);
  {
    const double b1 = number_separation_bound(2, example, 1.0, sm8);
    const double b2 = number_separation_bound(2, exp1, 1.0, basis7.sigma_min);
    const double b3 = number_separation_bound(3, exp2, 1.0, basis10.sigma_min);
    const bool ok = std::abs(b1 - 0.7597) <= 1e-3 && std::abs(b2 - 0.1353) <= 1e-3 &&
                    std::abs(b3 - 0.2083) <= 1e-3;
    report(2, ok,
           fmt("upper bounds: %.4f / %.4f / %.4f vs 0.7597 / 0.1353 / 0.2083 "
               "(tol 1e-3)", b1, b2, b3));
  }

  // 3. detection thresholds and the separation requirement
  {
    const double t1 = detection_threshold(5, exp1.sigma, basis7.sigma_min);
    const double t2 = detection_threshold(7, exp2.sigma, basis10.sigma_min);
    const double sep =
        music_separation_requirement(2, 0.5, 5, exp1.sigma, 1.0, basis7.sigma_min)
            .required;
    const bool ok = std::abs(t1 - 0.0227) <= 2e-4 && std::abs(t2 - 0.0017) <= 2e-5 &&
                    std::abs(sep - 0.4519) <= 2e-3;
    report(3, ok,
           fmt("thresholds %.5f / %.6f vs 0.0227 / 0.0017; separation %.4f vs "
               "0.4519", t1, t2, sep));
  }

  // 4. detection outcomes across 100 seeds
  {
    const DiscreteMeasure m1({-0.37, 0.37}, {1.0, 1.0});
    const DiscreteMeasure m2({-0.4, 0.0, 0.4}, {1.0, 1.0, 1.0});
    int ok1 = 0, ok2 = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const DetectionResult d1 = detect_source_number(
          noisy_image(m1, grid, exp1.sigma, seed), basis7, 5, exp1.sigma);
      ok1 += d1.estimated_n == 2 && std::abs(d1.singular_values[0] - 2.0375) <= 5e-3 &&
             std::abs(d1.singular_values[1] - 0.2738) <= 5e-3 &&
             d1.singular_values[2] < 1e-2;
      const DetectionResult d2 = detect_source_number(
          noisy_image(m2, grid, exp2.sigma, seed), basis10, 7, exp2.sigma);
      ok2 += d2.estimated_n == 3 && std::abs(d2.singular_values[0] - 3.0343) <= 5e-3 &&
             std::abs(d2.singular_values[1] - 0.3282) <= 5e-3 &&
             std::abs(d2.singular_values[2] - 0.0169) <= 5e-3;
    }
    report(4, ok1 >= 95 && ok2 >= 95,
           fmt("detection outcomes: %d/100 and %d/100 seeds within tolerance "
               "(need 95)", ok1, ok2));
  }

  // 5. phase transition of the minimal reliably-detected separation
  {
    const auto smallest = [&](int mode) {
      for (double sep = 0.05; sep <= 0.5; sep += 0.025) {
        int good = 0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
          const DiscreteMeasure m =
              mode == 1 ? DiscreteMeasure({-sep / 2, sep / 2}, {1.0, 1.0})
                        : DiscreteMeasure({-sep, 0.0, sep}, {1.0, 1.0, 1.0});
          const double sigma = mode == 1 ? exp1.sigma : exp2.sigma;
          const DetectionResult det = detect_source_number(
              noisy_image(m, grid, sigma, seed), mode == 1 ? basis7 : basis10,
              mode == 1 ? 5 : 7, sigma);
          good += det.estimated_n == (mode == 1 ? 2 : 3);
        }
        if (good >= 18) return sep;
      }
      return 1.0;
    };
    const double p1 = smallest(1);
    const double p2 = smallest(2);
    report(5, p1 <= 0.25 && p2 <= 0.30,
           fmt("phase transition: %.3f (need <= 0.25) and %.3f (need <= 0.30)",
               p1, p2));
  }

  // 6. ambiguity constructions stay within sigma
  {
    bool ok = true;
    std::string note = "constructions within sigma:";
    for (int n : {2, 3, 4}) {
      for (double sigma : {1e-3, 1e-5}) {
        try {
          const ConstructionPair num = construct_number_ambiguity(n, sigma, 2.0, grid);
          const ConstructionPair sup = construct_support_ambiguity(n, sigma, 2.0, grid);
          ok = ok && num.image_distance <= sigma && sup.image_distance <= sigma;
        } catch (const std::exception& e) {
          ok = false;
          note += std::string(" [n=") + std::to_string(n) + " failed: " + e.what() + "]";
        }
      }
    }
    report(6, ok, note + (ok ? " all 12 pairs verified" : ""));
  }

  // 7.-8. brute-force oracle suites
  {
    const auto suites = run_oracle_suites(7);
    int identity_failures = 0, bound_failures = 0;
    std::string detail7 = "identity suites:", detail8 = "bound-vs-oracle suites:";
    for (const auto& s : suites) {
      const bool identity = s.name.rfind("reduction", 0) == 0 || s.name == "det-ratio";
      (identity ? identity_failures : bound_failures) += s.failures;
      (identity ? detail7 : detail8) +=
          fmt(" %s %d/%d", s.name.c_str(), s.instances - s.failures, s.instances);
    }
    report(7, identity_failures == 0, detail7);
    report(8, bound_failures == 0, detail8);
  }

  // 9. coefficient recovery contract over 50 seeds
  {
    const DiscreteMeasure m({-0.37, 0.37}, {1.0, 1.0});
    const Eigen::VectorXd theta_star = multipole_coefficients(m, 7);
    int ok = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Eigen::VectorXd theta = recover_coefficients(
          noisy_image(m, grid, exp1.sigma, seed), basis7);
      const double err = (theta - theta_star).norm();
      worst = std::max(worst, err);
      ok += err <= 2.0 * exp1.sigma / basis7.sigma_min;
    }
    report(9, ok == 50,
           fmt("coefficient contract: %d/50 seeds, worst ||theta-theta*|| = %.3g "
               "(bound %.3g)", ok, worst, 2.0 * exp1.sigma / basis7.sigma_min));
  }

  // 10. factorial inequality verifier over 2..60
  {
    const auto records = verify_appendix_inequalities(2, 60, 1, 60);
    int violations = 0;
    for (const auto& rec : records) violations += rec.holds ? 0 : 1;
    report(10, violations == 0,
           fmt("inequality verifier: %zu checks, %d violations", records.size(),
               violations));
  }

  int failures = 0;
  for (const auto& c : results) failures += c.pass ? 0 : 1;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
              results.size());
  return failures;
}
