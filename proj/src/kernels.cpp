#include "levelset/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace levelset {

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "spherical") return KernelKind::spherical;
  if (name == "biweight") return KernelKind::biweight;
  if (name == "triweight") return KernelKind::triweight;
  if (name == "truncated_gaussian") return KernelKind::truncated_gaussian;
  throw std::invalid_argument("unknown kernel kind '" + std::string(name) +
                              "'");
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::spherical: return "spherical";
    case KernelKind::biweight: return "biweight";
    case KernelKind::triweight: return "triweight";
    case KernelKind::truncated_gaussian: return "truncated_gaussian";
  }
  return "?";
}

double kernel_profile(KernelKind kind, double r) {
  if (r < 0.0 || !std::isfinite(r)) {
    throw std::invalid_argument("kernel_profile: radius must be >= 0");
  }
  if (r > 1.0) return 0.0;
  switch (kind) {
    case KernelKind::spherical:
      return 1.0;
    case KernelKind::biweight: {
      const double t = 1.0 - r * r;
      return t * t;
    }
    case KernelKind::triweight: {
      const double t = 1.0 - r * r;
      return t * t * t;
    }
    case KernelKind::truncated_gaussian:
      return std::exp(-0.5 * r * r);
  }
  return 0.0;
}

double unit_ball_volume(int d) {
  if (d < 1) {
    throw std::invalid_argument("unit_ball_volume: d must be >= 1");
  }
  // v_d = v_{d-2} * 2 pi / d keeps the small-d values exact (v_1 = 2,
  // v_2 = pi), which the closed-form kernel examples rely on
  double v_even = 1.0;  // v_0
  double v_odd = 2.0;   // v_1
  for (int k = 2; k <= d; ++k) {
    if (k % 2 == 0) {
      v_even = v_even * 2.0 * M_PI / k;
    } else {
      v_odd = v_odd * 2.0 * M_PI / k;
    }
  }
  return d % 2 == 0 ? v_even : v_odd;
}

double normalizing_constant(KernelKind kind, int d) {
  if (d < 1) {
    throw std::invalid_argument("normalizing_constant: d must be >= 1");
  }
  const double v_d = unit_ball_volume(d);
  if (kind == KernelKind::spherical) {
    return v_d;
  }
  const auto integrand = [kind, d](double r) {
    return kernel_profile(kind, r) * std::pow(r, d - 1);
  };
  double error = 0.0;
  const double radial =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          integrand, 0.0, 1.0, 12, 1e-12, &error);
  return v_d * d * radial;
}

KernelSpec KernelSpec::make(KernelKind kind, int dim) {
  return KernelSpec{kind, dim, normalizing_constant(kind, dim)};
}

}  // namespace levelset
