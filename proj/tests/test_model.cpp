#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "deconv/model.hpp"
#include "deconv/psf.hpp"
#include "deconv/scene_io.hpp"

using namespace deconv;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_SUITE("model") {

TEST_CASE("measure validation and derived quantities") {
  const DiscreteMeasure m({0.4, -0.3}, {-2.0, 1.0});
  CHECK(m.positions()[0] == -0.3);  // sorted on construction
  CHECK(m.amplitudes()[0] == 1.0);
  CHECK(m.total_variation() == 3.0);
  CHECK(m.min_amplitude() == 1.0);
  CHECK(m.min_separation() == doctest::Approx(0.7));
  CHECK(std::isinf(DiscreteMeasure({0.0}, {1.0}).min_separation()));

  CHECK_THROWS_AS(DiscreteMeasure({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteMeasure({0.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteMeasure({0.0, 1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("grid layout") {
  const SamplingGrid grid(100.0, 2.0);
  CHECK(grid.sample_count() == 101);
  CHECK(grid.point(0) == -100.0);
  CHECK(grid.point(100) == doctest::Approx(100.0));
  CHECK_THROWS_AS(SamplingGrid(100.0, 3.5), std::invalid_argument);  // h > pi
  CHECK_THROWS_AS(SamplingGrid(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("centered point source image") {
  const SamplingGrid grid(100.0, 2.0);
  const Eigen::VectorXd image = forward_image(DiscreteMeasure({0.0}, {1.0}), grid);
  CHECK(image[50] == 1.0);
  for (int t : {0, 10, 49, 51, 90}) {
    const double x = grid.point(t);
    if (t != 50) CHECK(image[t] == doctest::Approx(std::sin(x) / x).epsilon(1e-14));
  }
  const Eigen::VectorXd doubled = forward_image(DiscreteMeasure({0.0}, {2.0}), grid);
  CHECK((doubled - 2.0 * image).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("image is linear in the amplitudes") {
  const SamplingGrid grid(50.0, 2.0);
  const DiscreteMeasure a({-0.8, 0.2}, {1.3, -0.4});
  const DiscreteMeasure b({-0.1, 0.9}, {0.7, 2.1});
  const DiscreteMeasure sum({-0.8, 0.2, -0.1, 0.9}, {1.3, -0.4, 0.7, 2.1});
  const Eigen::VectorXd lhs = forward_image(sum, grid);
  const Eigen::VectorXd rhs = forward_image(a, grid) + forward_image(b, grid);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("close pair renders as a single lobe") {
  const SamplingGrid grid(100.0, 2.0);
  const Eigen::VectorXd image =
      forward_image(DiscreteMeasure({-0.38, 0.38}, {1.0, 1.0}), grid);
  const int c = 50;  // x = 0
  CHECK(image[c] > image[c - 1]);
  CHECK(image[c] > image[c + 1]);
  CHECK(image[c + 1] > image[c + 2]);
  CHECK(image[c - 1] > image[c - 2]);
  for (int t = 0; t < grid.sample_count(); ++t)
    if (t != c) CHECK(image[t] < image[c]);
}

TEST_CASE("source outside the grid support is rejected") {
  const SamplingGrid grid(10.0, 2.0);
  CHECK_THROWS_AS(forward_image(DiscreteMeasure({11.0}, {1.0}), grid),
                  std::invalid_argument);
}

TEST_CASE("image norm bound from the multipole expansion") {
  const SamplingGrid grid(100.0, 2.0);
  for (double d : {0.5, 1.0}) {
    const DiscreteMeasure m({-d, -0.2 * d, 0.7 * d}, {1.0, -2.0, 0.5});
    const Eigen::VectorXd image = forward_image(m, grid);
    const double lhs = std::sqrt(grid.spacing()) * image.norm();
    CHECK(lhs <= std::sqrt(kPi) * m.total_variation() * std::exp(d));
  }
}

TEST_CASE("noise contract") {
  const SamplingGrid grid(100.0, 2.0);
  CHECK(generate_noise(grid, {0.0, NoiseModel::kUniformExperiment, 5}).norm() == 0.0);

  for (auto model : {NoiseModel::kUniformExperiment, NoiseModel::kScaledGaussianClipped}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Eigen::VectorXd w = generate_noise(grid, {5.8e-5, model, seed});
      CHECK(std::sqrt(grid.spacing()) * w.norm() <= 5.8e-5);
    }
  }
  // the clipped Gaussian model lands on the bound exactly
  const Eigen::VectorXd g =
      generate_noise(grid, {1.0, NoiseModel::kScaledGaussianClipped, 3});
  CHECK(std::sqrt(grid.spacing()) * g.norm() == doctest::Approx(1.0).epsilon(1e-12));

  const Eigen::VectorXd w1 = generate_noise(grid, {1.0, NoiseModel::kUniformExperiment, 9});
  const Eigen::VectorXd w2 = generate_noise(grid, {1.0, NoiseModel::kUniformExperiment, 9});
  const Eigen::VectorXd w3 = generate_noise(grid, {1.0, NoiseModel::kUniformExperiment, 10});
  CHECK((w1 - w2).norm() == 0.0);
  CHECK((w1 - w3).norm() != 0.0);
  CHECK(w1.minCoeff() >= 0.0);  // uniform-experiment draws are positive
  CHECK(w1.maxCoeff() <= 1.0 / std::sqrt(200.0));
}

TEST_CASE("admissibility conditions") {
  const SamplingGrid grid(100.0, 2.0);
  const DiscreteMeasure truth({-0.4, 0.4}, {1.0, 1.0});
  const Eigen::VectorXd image = forward_image(truth, grid);
  const ProblemPriors priors{1.0, 1e-6, 3.0, 1.0};

  const AdmissibilityResult same = is_admissible(truth, image, grid, priors);
  CHECK(same.admissible);
  CHECK(same.misfit <= 1e-12);

  const ProblemPriors tight_tv{1.0, 1e-6, 1.5, 1.0};
  const AdmissibilityResult tv = is_admissible(truth, image, grid, tight_tv);
  CHECK_FALSE(tv.admissible);
  CHECK_FALSE(tv.tv_ok);

  const ProblemPriors tight_support{0.2, 1e-6, 3.0, 1.0};
  CHECK_FALSE(is_admissible(truth, image, grid, tight_support).support_ok);

  const DiscreteMeasure off({-0.4, 0.35}, {1.0, 1.0});
  const AdmissibilityResult far = is_admissible(off, image, grid, priors);
  CHECK_FALSE(far.admissible);
  CHECK(far.misfit > priors.sigma);
}

TEST_CASE("scene json round trip") {
  const Scene scene{DiscreteMeasure({-0.37, 0.37}, {1.0, -2.5}), SamplingGrid(100.0, 2.0),
                    NoiseSpec{7.1e-6, NoiseModel::kScaledGaussianClipped, 17}};
  const Scene back = scene_from_json(scene_to_json(scene));
  CHECK(back.measure.positions() == scene.measure.positions());
  CHECK(back.measure.amplitudes() == scene.measure.amplitudes());
  CHECK(back.grid.radius() == scene.grid.radius());
  CHECK(back.grid.spacing() == scene.grid.spacing());
  CHECK(back.noise.sigma == scene.noise.sigma);
  CHECK(back.noise.model == scene.noise.model);
  CHECK(back.noise.seed == scene.noise.seed);
}

TEST_CASE("csv round trips") {
  const DiscreteMeasure m({-0.123456789012, 0.5}, {1.5, -2.25e-7});
  write_measure_csv(m, "tmp_measure.csv");
  const DiscreteMeasure back = read_measure_csv("tmp_measure.csv");
  for (int j = 0; j < m.size(); ++j) {
    CHECK(back.positions()[j] == doctest::Approx(m.positions()[j]).epsilon(1e-11));
    CHECK(back.amplitudes()[j] == doctest::Approx(m.amplitudes()[j]).epsilon(1e-11));
  }

  const SamplingGrid grid(10.0, 2.0);
  const Eigen::VectorXd image = forward_image(DiscreteMeasure({0.0}, {1.0}), grid);
  write_image_csv(grid, image, "tmp_image.csv");
  const auto [xs, values] = read_image_csv("tmp_image.csv");
  const SamplingGrid inferred = grid_from_points(xs);
  CHECK(inferred.sample_count() == grid.sample_count());
  CHECK(inferred.radius() == doctest::Approx(grid.radius()));
  CHECK((values - image).cwiseAbs().maxCoeff() <= 1e-11);
  std::remove("tmp_measure.csv");
  std::remove("tmp_image.csv");
}

} // TEST_SUITE
