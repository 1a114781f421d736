#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "deconv/model.hpp"
#include "deconv/psf.hpp"

using deconv::sinc_derivative;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_SUITE("psf") {

TEST_CASE("values at the origin") {
  CHECK(sinc_derivative(0, 0.0) == 1.0);
  CHECK(sinc_derivative(1, 0.0) == 0.0);
  CHECK(sinc_derivative(2, 0.0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  // f^{(2k)}(0) = (-1)^k / (2k+1), odd orders vanish
  for (int k = 0; k <= 15; ++k) {
    const double expected = (k % 2 == 0 ? 1.0 : -1.0) / (2.0 * k + 1.0);
    CHECK(sinc_derivative(2 * k, 0.0) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(sinc_derivative(2 * k + 1, 0.0) == 0.0);
  }
}

TEST_CASE("zero of sin at pi") {
  CHECK(std::abs(sinc_derivative(0, kPi)) < 1e-15);
}

TEST_CASE("third derivative against a finite difference of the second") {
  const double x = 0.7, step = 1e-4;
  const double fd =
      (sinc_derivative(2, x + step) - sinc_derivative(2, x - step)) / (2 * step);
  CHECK(sinc_derivative(3, x) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("recurrence consistency over [0.5, 50]") {
  for (int i = 0; i <= 99; ++i) {
    const double x = 0.5 + 49.5 * i / 99.0;
    for (int r = 1; r <= 20; ++r) {
      const double lhs = x * sinc_derivative(r, x) + r * sinc_derivative(r - 1, x);
      CHECK(std::abs(lhs - deconv::detail::shifted_sin(r, x)) <= 1e-10);
    }
  }
}

TEST_CASE("finite differences tie consecutive orders together") {
  deconv::detail::Rng rng(42);
  const double step = 1e-5;
  for (int r = 1; r <= 10; ++r) {
    int accepted = 0;
    while (accepted < 20) {
      double x = -10.0 + 20.0 * rng.uniform01();
      if (std::abs(x) < 0.1) continue;
      const double exact = sinc_derivative(r, x);
      if (std::abs(exact) < 1e-3) continue;  // relative comparison needs a scale
      const double fd =
          (sinc_derivative(r - 1, x + step) - sinc_derivative(r - 1, x - step)) /
          (2 * step);
      CHECK(std::abs(fd - exact) <= 1e-5 * std::abs(exact));
      ++accepted;
    }
  }
}

TEST_CASE("evaluation branches agree at the switching radius") {
  using namespace deconv::detail;
  for (double x : {10.0, -10.0, 10.000000001}) {
    for (int r = 0; r <= 12; ++r)
      CHECK(std::abs(sinc_derivative_series(r, x) - sinc_derivative_forward(r, x)) <=
            1e-10);
    for (int r = 13; r <= 30; ++r)
      CHECK(std::abs(sinc_derivative_series(r, x) - sinc_derivative_backward(r, x)) <=
            1e-10);
  }
  // Backward and forward overlap at the branch handoff point.
  for (int r : {20, 30, 40}) {
    double x = 10.5;
    while (!forward_recurrence_stable(r, x)) x += 0.5;
    CHECK(std::abs(sinc_derivative_backward(r, x) - sinc_derivative_forward(r, x)) <=
          1e-12);
  }
}

TEST_CASE("high orders stay consistent through the recurrence") {
  // r up to 40 across every branch region, |x| up to 200.
  for (double x : {0.3, 2.0, 9.0, 15.0, 22.0, 31.0, 60.0, 200.0}) {
    for (int r = 1; r <= 40; ++r) {
      const double lhs = x * sinc_derivative(r, x) + r * sinc_derivative(r - 1, x);
      CHECK(std::abs(lhs - deconv::detail::shifted_sin(r, x)) <= 1e-11);
    }
  }
}

TEST_CASE("rejects invalid input") {
  CHECK_THROWS_AS((void)sinc_derivative(-1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)sinc_derivative(0, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS((void)sinc_derivative(0, INFINITY), std::invalid_argument);
}

} // TEST_SUITE
