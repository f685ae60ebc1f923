#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levelset/kde.hpp"
#include "levelset/point_set.hpp"
#include "levelset/rng.hpp"

namespace levelset {

/// Importance-sampled Lebesgue volume of an estimated level set.
struct VolumeEstimate {
  double value = 0.0;
  std::size_t draws = 0;
  double pilot_bandwidth = 0.0;
  double std_error = 0.0;
};

/// Draws one point from the KDE law: X_I + h V with I uniform over the
/// data and V distributed as K / c_d on the unit ball (uniform ball for
/// the spherical kernel, rejection against the uniform-ball envelope
/// otherwise). Appends the coordinates to `out`.
void sample_from_kde_one(const DensityEstimate& est, Rng& rng,
                         std::vector<double>& out);

/// m i.i.d. draws from the KDE law; deterministic given seed.
PointSet sample_from_kde(const DensityEstimate& est, std::size_t m,
                         std::uint64_t seed);

/// mu(L_h) ~= (1/M) sum_i I(p_h(U_i) in level) / g(U_i) with U_i drawn
/// from the pilot estimate g = p_H. Requires H >= h so that the pilot
/// support dominates the level set. Throws NumericalError if a draw
/// lands in the level set where the pilot density underflows.
VolumeEstimate estimate_volume(const DensityEstimate& est, double lambda,
                               const DensityEstimate& pilot,
                               std::size_t m_draws, std::uint64_t seed);

/// E_hat(h) = (1/|test|) sum_i I(test_i in level set) - lambda * volume.
double empirical_excess_mass(const DensityEstimate& est, double lambda,
                             const PointSet& test, const VolumeEstimate& vol);

/// Evaluated excess-mass criterion over a bandwidth grid. `defined[j]`
/// is false when the level set was empty at grid[j] (no data point
/// reaches the level); such entries score 0 and are excluded from the
/// argmax. `selected` is empty iff selection failed, with `error`
/// explaining why (the curve itself is still usable).
struct ExcessMassCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<bool> defined;
  double lambda = 0.0;
  std::size_t volume_draws = 0;
  std::uint64_t seed = 0;
  std::optional<double> selected;
  std::optional<std::string> error;
};

/// The data-splitting selector: halves the data (seeded), fits each
/// grid bandwidth on the first half, scores the excess mass on the
/// second half with the pilot at the largest grid bandwidth, and picks
/// the argmax (ties to the smallest h). At lambda = 0 the volume term
/// vanishes and the rule becomes: smallest h with full coverage
/// (value exactly 1), falling back to the argmax if none reaches 1.
ExcessMassCurve select_bandwidth_excess_mass(const PointSet& ps,
                                             KernelKind kernel,
                                             const std::vector<double>& grid,
                                             double lambda,
                                             std::size_t volume_draws,
                                             std::uint64_t seed);

std::size_t default_volume_draws(std::size_t n);

/// Intermediate quantities of the adaptive bandwidth grid, kept for
/// inspection and testing. Vectors are indexed by theta - 1.
struct GridParams {
  std::size_t n = 0;
  int d = 0;
  double a_n = 0.0;
  double w_n = 0.0;
  std::vector<double> big_a;     // A_n(theta)
  std::vector<double> delta;     // delta_n(theta)
  std::vector<double> upsilon;   // Upsilon_n(theta)
  std::vector<std::size_t> count;  // N(theta), clamped to >= 0
};

struct AdaptiveGrid {
  GridParams params;
  std::vector<double> bandwidths;  // sorted, duplicate-free, in (0,1)
};

/// The rate-adaptive bandwidth grid
///   { a_n^{(gamma+1)/(2 theta + d (gamma+1))} :
///     theta in {1..d}, gamma = (j-1) delta_n(theta), j = 1..N(theta) }
/// with a_n = log n / n. If the deduplicated list exceeds `max_size`
/// it is thinned to `max_size` geometrically spaced entries.
AdaptiveGrid adaptive_grid(std::size_t n, int d, std::size_t max_size);

/// 40 (by default) log-spaced bandwidths spanning
/// [0.01 * coordinate spread, 2 * diameter].
std::vector<double> default_bandwidth_grid(const PointSet& ps,
                                           std::size_t count = 40);

}  // namespace levelset
