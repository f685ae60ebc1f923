#include "levelset/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levelset {

StabilityRule stability_rule_from_string(std::string_view name) {
  if (name == "original") return StabilityRule::original;
  if (name == "modified") return StabilityRule::modified;
  throw std::invalid_argument("unknown stability rule '" + std::string(name) +
                              "'");
}

std::string to_string(StabilityRule rule) {
  return rule == StabilityRule::original ? "original" : "modified";
}

double instability_at(const DensityEstimate& est_x,
                      const DensityEstimate& est_y, const PointSet& z,
                      double lambda) {
  if (est_x.kernel().kind != est_y.kernel().kind ||
      est_x.bandwidth() != est_y.bandwidth()) {
    throw std::invalid_argument(
        "instability_at: estimators must share kernel and bandwidth");
  }
  if (z.size() == 0) {
    throw std::invalid_argument("instability_at: empty evaluation set");
  }
  std::size_t disagree = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto p = z.point(i);
    const bool in_x = level_contains(est_x.evaluate(p), lambda);
    const bool in_y = level_contains(est_y.evaluate(p), lambda);
    if (in_x != in_y) ++disagree;
  }
  return static_cast<double>(disagree) / static_cast<double>(z.size());
}

InstabilityCurve instability_curve(const PointSet& ps, KernelKind kernel,
                                   const std::vector<double>& grid,
                                   double lambda, std::uint64_t seed) {
  if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()) ||
      !(grid.front() > 0.0)) {
    throw std::invalid_argument(
        "instability_curve: grid must be ascending and positive");
  }
  const SplitPlan plan = split(ps, 3, seed);
  const PointSet x = subset(ps, plan.parts[0]);
  const PointSet y = subset(ps, plan.parts[1]);
  const PointSet z = subset(ps, plan.parts[2]);
  const KernelSpec spec = KernelSpec::make(kernel, static_cast<int>(ps.dim));

  InstabilityCurve curve;
  curve.grid = grid;
  curve.lambda = lambda;
  curve.seed = seed;
  curve.xi.reserve(grid.size());
  for (double h : grid) {
    const DensityEstimate est_x = DensityEstimate::fit(x, spec, h);
    const DensityEstimate est_y = DensityEstimate::fit(y, spec, h);
    curve.xi.push_back(instability_at(est_x, est_y, z, lambda));
  }
  return curve;
}

InstabilityCurve select_bandwidth_stability(InstabilityCurve curve,
                                            double alpha,
                                            StabilityRule rule) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument(
        "select_bandwidth_stability: alpha must be in (0, 1)");
  }
  if (curve.xi.size() != curve.grid.size() || curve.grid.empty()) {
    throw std::invalid_argument("select_bandwidth_stability: malformed curve");
  }
  curve.alpha = alpha;
  curve.rule = rule;
  curve.selected.reset();
  curve.error.reset();
  curve.h0.reset();

  const std::size_t m = curve.grid.size();
  if (rule == StabilityRule::original) {
    std::optional<std::size_t> pick;
    bool tail_ok = true;
    for (std::size_t r = m; r-- > 0;) {
      tail_ok = tail_ok && curve.xi[r] <= alpha;
      if (tail_ok) pick = r;
    }
    if (pick) {
      curve.selected = curve.grid[*pick];
    } else {
      curve.error = "no grid bandwidth has instability <= alpha from it on";
    }
    return curve;
  }

  std::size_t argmax = 0;
  for (std::size_t j = 1; j < m; ++j) {
    if (curve.xi[j] > curve.xi[argmax]) argmax = j;
  }
  curve.h0 = curve.grid[argmax];
  for (std::size_t j = argmax; j < m; ++j) {
    if (curve.xi[j] <= alpha) {
      curve.selected = curve.grid[j];
      break;
    }
  }
  if (!curve.selected) {
    curve.error = "no grid bandwidth at or after the instability peak is "
                  "below alpha";
  }
  return curve;
}

}  // namespace levelset
