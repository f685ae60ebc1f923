#pragma once

#include <string>
#include <string_view>

namespace levelset {

/// Radial kernel profiles supported on the closed unit ball. All kinds
/// are symmetric, bounded, nonnegative and vanish for r > 1. The
/// spherical (indicator) kernel is kept despite being non-smooth because
/// the stability theory is stated for it; the truncated Gaussian is cut
/// at the unit ball with the lost tail mass absorbed into the
/// normalizing constant.
enum class KernelKind { spherical, biweight, triweight, truncated_gaussian };

KernelKind kernel_kind_from_string(std::string_view name);
std::string to_string(KernelKind kind);

/// Profile value K(r) for scaled radius r = ||u||; exactly 0 for r > 1,
/// inclusive K(1) at the support boundary. Throws on negative r.
double kernel_profile(KernelKind kind, double r);

/// Volume of the d-dimensional unit ball.
double unit_ball_volume(int d);

/// c_d = integral of K over R^d. Spherical kind has the closed form
/// v_d; the rest use the radial reduction v_d * d * int_0^1 K(r) r^{d-1} dr
/// evaluated by adaptive quadrature (relative error <= 1e-10).
double normalizing_constant(KernelKind kind, int d);

/// A kernel fixed to a dimension, with its normalizing constant.
struct KernelSpec {
  KernelKind kind = KernelKind::spherical;
  int dim = 1;
  double c_d = 2.0;

  static KernelSpec make(KernelKind kind, int dim);
};

}  // namespace levelset
