#include <doctest.h>

#include <cmath>

#include "levelset/kernels.hpp"
#include "oracles.hpp"

using namespace levelset;

namespace {
const KernelKind kAllKinds[] = {KernelKind::spherical, KernelKind::biweight,
                                KernelKind::triweight,
                                KernelKind::truncated_gaussian};
}

TEST_CASE("profile values at reference radii") {
  CHECK(kernel_profile(KernelKind::spherical, 0.5) == 1.0);
  CHECK(kernel_profile(KernelKind::biweight, 1.0) == 0.0);
  for (auto kind : kAllKinds) {
    CHECK(kernel_profile(kind, 2.0) == 0.0);  // compact support
    CHECK(kernel_profile(kind, 0.0) > 0.0);
  }
  CHECK(kernel_profile(KernelKind::triweight, 0.5) ==
        doctest::Approx(std::pow(0.75, 3)).epsilon(1e-15));
  CHECK(kernel_profile(KernelKind::truncated_gaussian, 1.0) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
}

TEST_CASE("negative radius is rejected") {
  CHECK_THROWS_AS(kernel_profile(KernelKind::spherical, -0.1),
                  std::invalid_argument);
}

TEST_CASE("spherical normalizing constants are ball volumes") {
  CHECK(normalizing_constant(KernelKind::spherical, 1) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(normalizing_constant(KernelKind::spherical, 2) ==
        doctest::Approx(M_PI).epsilon(1e-14));
}

TEST_CASE("biweight c_1 matches the closed form 16/15") {
  // 2 * int_0^1 (1 - r^2)^2 dr = 2 * (1 - 2/3 + 1/5) = 16/15
  CHECK(normalizing_constant(KernelKind::biweight, 1) ==
        doctest::Approx(16.0 / 15.0).epsilon(1e-12));
  // cross-check with the test-side quadrature
  const double q = 2.0 * oracles::simpson(
                             [](double r) {
                               const double t = 1 - r * r;
                               return t * t;
                             },
                             0.0, 1.0);
  CHECK(normalizing_constant(KernelKind::biweight, 1) ==
        doctest::Approx(q).epsilon(1e-10));
}

TEST_CASE("self-normalization up to d = 5") {
  for (auto kind : kAllKinds) {
    for (int d = 1; d <= 5; ++d) {
      const double c_d = normalizing_constant(kind, d);
      CHECK(c_d > 0.0);
      const double radial = oracles::simpson(
          [kind, d](double r) {
            return kernel_profile(kind, r) * std::pow(r, d - 1);
          },
          0.0, 1.0, 20000);
      const double total = unit_ball_volume(d) * d * radial;
      CHECK(total / c_d == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("profiles are nonincreasing in r") {
  for (auto kind : kAllKinds) {
    double prev = kernel_profile(kind, 0.0);
    for (int i = 1; i <= 10000; ++i) {
      const double r = 1.2 * i / 10000.0;
      const double v = kernel_profile(kind, r);
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("KernelSpec::make is coherent") {
  const auto spec = KernelSpec::make(KernelKind::triweight, 3);
  CHECK(spec.dim == 3);
  CHECK(spec.c_d == doctest::Approx(normalizing_constant(KernelKind::triweight, 3)));
  CHECK(kernel_kind_from_string("triweight") == KernelKind::triweight);
  CHECK(to_string(KernelKind::truncated_gaussian) == "truncated_gaussian");
  CHECK_THROWS_AS(kernel_kind_from_string("epanechnikov"),
                  std::invalid_argument);
}
