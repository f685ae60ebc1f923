#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levelset/kde.hpp"
#include "levelset/point_set.hpp"

namespace levelset {

enum class StabilityRule { original, modified };

StabilityRule stability_rule_from_string(std::string_view name);
std::string to_string(StabilityRule rule);

/// Instability of the level set across a bandwidth grid, from a
/// three-way data split: Xi(h) is the fraction of the held-out third on
/// which the level sets of the two independently fitted estimators
/// disagree. `selected` is set by select_bandwidth_stability.
struct InstabilityCurve {
  std::vector<double> grid;
  std::vector<double> xi;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  StabilityRule rule = StabilityRule::original;
  std::optional<double> h0;        // argmax location (modified rule)
  std::optional<double> selected;
  std::optional<std::string> error;
};

/// Fraction of z-points where exactly one of the two estimators' level
/// sets contains the point. Requires matching kernel kind and bandwidth.
double instability_at(const DensityEstimate& est_x,
                      const DensityEstimate& est_y, const PointSet& z,
                      double lambda);

/// Splits ps into thirds X/Y/Z (seeded) and evaluates Xi over the grid.
InstabilityCurve instability_curve(const PointSet& ps, KernelKind kernel,
                                   const std::vector<double>& grid,
                                   double lambda, std::uint64_t seed);

/// Applies a selection rule to an evaluated curve.
///
/// original: the first grid point after the last alpha-exceedance, i.e.
///   the smallest grid h with Xi(t) <= alpha for every grid t >= h
///   (discrete version of inf{h : sup_{t>h} Xi(t) <= alpha}).
/// modified: h0 = argmax Xi (ties to the smallest h), then the smallest
///   grid h >= h0 with Xi(h) <= alpha. Safer when lambda > 0 produces
///   instability peaks at large h.
InstabilityCurve select_bandwidth_stability(InstabilityCurve curve,
                                            double alpha, StabilityRule rule);

}  // namespace levelset
