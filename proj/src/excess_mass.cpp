#include "levelset/excess_mass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levelset/errors.hpp"

namespace levelset {

void sample_from_kde_one(const DensityEstimate& est, Rng& rng,
                         std::vector<double>& out) {
  const PointSet& data = est.data();
  const std::size_t d = data.dim;
  const double h = est.bandwidth();
  const KernelKind kind = est.kernel().kind;
  const std::size_t i = rng.uniform_index(data.size());

  // V uniform on the unit ball: Gaussian direction times radius u^{1/d};
  // non-spherical kinds then thin V by rejection with envelope K(0).
  thread_local std::vector<double> v;
  for (;;) {
    v.assign(d, 0.0);
    double norm2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      v[k] = rng.normal();
      norm2 += v[k] * v[k];
    }
    const double norm = std::sqrt(norm2);
    double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    if (norm == 0.0) radius = 0.0;  // vanishing-probability guard
    const double scale = norm > 0.0 ? radius / norm : 0.0;
    for (std::size_t k = 0; k < d; ++k) v[k] *= scale;
    if (kind == KernelKind::spherical) break;
    const double accept =
        kernel_profile(kind, radius) / kernel_profile(kind, 0.0);
    if (rng.uniform() < accept) break;
  }
  const auto center = data.point(i);
  for (std::size_t k = 0; k < d; ++k) {
    out.push_back(center[k] + h * v[k]);
  }
}

PointSet sample_from_kde(const DensityEstimate& est, std::size_t m,
                         std::uint64_t seed) {
  Rng rng(seed);
  PointSet out;
  out.dim = est.data().dim;
  out.coords.reserve(m * out.dim);
  for (std::size_t j = 0; j < m; ++j) {
    sample_from_kde_one(est, rng, out.coords);
  }
  return out;
}

VolumeEstimate estimate_volume(const DensityEstimate& est, double lambda,
                               const DensityEstimate& pilot,
                               std::size_t m_draws, std::uint64_t seed) {
  if (pilot.bandwidth() < est.bandwidth()) {
    throw std::invalid_argument(
        "estimate_volume: pilot bandwidth must be >= target bandwidth");
  }
  if (m_draws < 1) {
    throw std::invalid_argument("estimate_volume: need at least one draw");
  }
  Rng rng(seed);
  std::vector<double> u;
  CompensatedSum sum, sum_sq;
  for (std::size_t j = 0; j < m_draws; ++j) {
    u.clear();
    sample_from_kde_one(pilot, rng, u);
    double w = 0.0;
    if (level_contains(est.evaluate(u), lambda)) {
      const double g = pilot.evaluate(u);
      if (g < 1e-300) {
        throw NumericalError(
            "estimate_volume: pilot density underflow inside the level set "
            "(pilot does not dominate)");
      }
      w = 1.0 / g;
    }
    sum.add(w);
    sum_sq.add(w * w);
  }
  VolumeEstimate vol;
  vol.draws = m_draws;
  vol.pilot_bandwidth = pilot.bandwidth();
  const double m = static_cast<double>(m_draws);
  vol.value = sum.value() / m;
  if (m_draws > 1) {
    const double var =
        std::max(0.0, (sum_sq.value() - m * vol.value * vol.value) / (m - 1.0));
    vol.std_error = std::sqrt(var / m);
  }
  return vol;
}

double empirical_excess_mass(const DensityEstimate& est, double lambda,
                             const PointSet& test, const VolumeEstimate& vol) {
  if (test.size() == 0) {
    throw std::invalid_argument("empirical_excess_mass: empty test set");
  }
  std::size_t covered = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (level_contains(est.evaluate(test.point(i)), lambda)) ++covered;
  }
  const double coverage =
      static_cast<double>(covered) / static_cast<double>(test.size());
  return coverage - lambda * vol.value;
}

ExcessMassCurve select_bandwidth_excess_mass(const PointSet& ps,
                                             KernelKind kernel,
                                             const std::vector<double>& grid,
                                             double lambda,
                                             std::size_t volume_draws,
                                             std::uint64_t seed) {
  if (grid.empty()) {
    throw std::invalid_argument("select_bandwidth_excess_mass: empty grid");
  }
  if (!std::is_sorted(grid.begin(), grid.end()) || !(grid.front() > 0.0)) {
    throw std::invalid_argument(
        "select_bandwidth_excess_mass: grid must be ascending and positive");
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("select_bandwidth_excess_mass: lambda < 0");
  }

  const SplitPlan plan = split(ps, 2, seed);
  const PointSet train = subset(ps, plan.parts[0]);
  const PointSet test = subset(ps, plan.parts[1]);
  const KernelSpec spec = KernelSpec::make(kernel, static_cast<int>(ps.dim));

  ExcessMassCurve curve;
  curve.grid = grid;
  curve.lambda = lambda;
  curve.volume_draws = volume_draws;
  curve.seed = seed;
  curve.values.resize(grid.size(), 0.0);
  curve.defined.resize(grid.size(), false);

  std::optional<DensityEstimate> pilot;
  if (lambda > 0.0) {
    pilot = DensityEstimate::fit(train, spec, grid.back());
  }

  for (std::size_t j = 0; j < grid.size(); ++j) {
    const DensityEstimate est = DensityEstimate::fit(train, spec, grid[j]);
    bool any_node = false;
    for (double v : est.values_at_data()) {
      if (level_contains(v, lambda)) {
        any_node = true;
        break;
      }
    }
    if (!any_node) continue;  // empty level set: value stays 0, undefined
    curve.defined[j] = true;
    VolumeEstimate vol;
    if (lambda > 0.0) {
      vol = estimate_volume(est, lambda, *pilot, volume_draws,
                            substream_seed(seed, j));
    }
    curve.values[j] = empirical_excess_mass(est, lambda, test, vol);
  }

  // selection
  std::optional<std::size_t> pick;
  if (lambda == 0.0) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (curve.defined[j] && curve.values[j] == 1.0) {
        pick = j;
        break;
      }
    }
  }
  if (!pick) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (curve.defined[j] && curve.values[j] > best) {
        best = curve.values[j];
        pick = j;
      }
    }
  }
  if (pick) {
    curve.selected = grid[*pick];
  } else {
    curve.error = "level too high: every grid bandwidth has an empty level set";
  }
  return curve;
}

std::size_t default_volume_draws(std::size_t n) {
  const std::size_t cap = 1000000;
  if (n >= 1000) return cap;
  return std::min(cap, n * n);
}

AdaptiveGrid adaptive_grid(std::size_t n, int d, std::size_t max_size) {
  if (n < 3) {
    throw std::invalid_argument("adaptive_grid: need n >= 3");
  }
  if (d < 1) {
    throw std::invalid_argument("adaptive_grid: need d >= 1");
  }
  if (max_size < 2) {
    throw std::invalid_argument("adaptive_grid: max_size must be >= 2");
  }
  AdaptiveGrid out;
  GridParams& gp = out.params;
  gp.n = n;
  gp.d = d;
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  gp.a_n = std::log(nn) / nn;
  gp.w_n = std::log(2.0) / (std::log(nn) - std::log(std::log(nn)));

  std::vector<double> hs;
  for (int theta = 1; theta <= d; ++theta) {
    const double th = static_cast<double>(theta);
    const double big_a = 2.0 * std::abs(std::log(gp.a_n)) *
                         std::pow(gp.a_n, th / (2.0 * th + dd)) * th * th /
                         ((2.0 * th + dd) * (2.0 * th + dd));
    const double delta = std::pow(gp.a_n, th / dd) / (2.0 * big_a);
    const double upsilon =
        2.0 * th * th / (dd * dd * gp.w_n) - 2.0 * th / dd - 1.0;
    std::size_t count = 0;
    if (upsilon > 0.0) {
      count = static_cast<std::size_t>(std::floor(upsilon / delta));
    }
    gp.big_a.push_back(big_a);
    gp.delta.push_back(delta);
    gp.upsilon.push_back(upsilon);
    gp.count.push_back(count);
    for (std::size_t j = 1; j <= count; ++j) {
      const double gamma = static_cast<double>(j - 1) * delta;
      const double expo = (gamma + 1.0) / (2.0 * th + dd * (gamma + 1.0));
      hs.push_back(std::pow(gp.a_n, expo));
    }
  }
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());

  if (hs.size() > max_size) {
    // thin to max_size geometrically spaced targets, snapping each to the
    // nearest grid value
    std::vector<double> thinned;
    const double lo = std::log(hs.front());
    const double hi = std::log(hs.back());
    for (std::size_t k = 0; k < max_size; ++k) {
      const double t = std::exp(
          lo + (hi - lo) * static_cast<double>(k) /
                   static_cast<double>(max_size - 1));
      auto it = std::lower_bound(hs.begin(), hs.end(), t);
      if (it == hs.end()) {
        --it;
      } else if (it != hs.begin() && t - *(it - 1) < *it - t) {
        --it;
      }
      thinned.push_back(*it);
    }
    std::sort(thinned.begin(), thinned.end());
    thinned.erase(std::unique(thinned.begin(), thinned.end()), thinned.end());
    hs = std::move(thinned);
  }
  out.bandwidths = std::move(hs);
  return out;
}

std::vector<double> default_bandwidth_grid(const PointSet& ps,
                                           std::size_t count) {
  if (count < 2) {
    throw std::invalid_argument("default_bandwidth_grid: count must be >= 2");
  }
  double lo = 0.01 * ps.coordinate_spread();
  double hi = 2.0 * ps.diameter();
  if (!(lo > 0.0) || !(hi > lo)) {
    // degenerate data (all points equal or a single point)
    lo = 1e-3;
    hi = 1.0;
  }
  std::vector<double> grid;
  grid.reserve(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) {
    grid.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(k) /
                                      static_cast<double>(count - 1)));
  }
  return grid;
}

}  // namespace levelset
