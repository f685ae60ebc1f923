#include "levelset/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "levelset/excess_mass.hpp"
#include "levelset/rng.hpp"

namespace levelset {

namespace {

constexpr double kPi = 3.14159265358979323846;

double segment_area(const Segment& s) {
  const double dx = s.b[0] - s.a[0], dy = s.b[1] - s.a[1];
  return std::sqrt(dx * dx + dy * dy) * s.thickness;
}

/// Analytic Lebesgue measure of the true level set {p >= lambda} for
/// lambda > 0. Components are assumed support-disjoint.
double true_level_volume(const SyntheticSpec& spec, double lambda) {
  double volume = 0.0;
  for (const auto& c : spec.components) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, UniformBox>) {
            double v = 1.0;
            for (std::size_t k = 0; k < s.lo.size(); ++k) v *= s.hi[k] - s.lo[k];
            if (c.weight / v >= lambda) volume += v;
          } else if constexpr (std::is_same_v<T, GaussianBlob>) {
            const std::size_t d = s.mean.size();
            double sigma_prod = 1.0;
            for (double sd : s.stddev) sigma_prod *= sd;
            const double peak =
                c.weight / (sigma_prod * std::pow(2.0 * kPi, 0.5 * d));
            if (peak >= lambda) {
              const double r2 = 2.0 * std::log(peak / lambda);
              volume += unit_ball_volume(static_cast<int>(d)) * sigma_prod *
                        std::pow(r2, 0.5 * d);
            }
          } else if constexpr (std::is_same_v<T, Segment>) {
            if (s.thickness > 0.0) {
              const double area = segment_area(s);
              if (c.weight / area >= lambda) volume += area;
            }
          } else if constexpr (std::is_same_v<T, Moon>) {
            if (s.noise > 0.0 && s.embed_dim == 2) {
              const double area = 2.0 * kPi * s.noise;
              if (c.weight / area >= lambda) volume += area;
            }
          }
          // point masses, bare segments, spirals and embedded moons have
          // Lebesgue measure zero
        },
        c.shape);
  }
  return volume;
}

}  // namespace

double level_set_risk(const SyntheticSpec& spec, const DensityEstimate& est,
                      double lambda, std::size_t m_draws, std::uint64_t seed) {
  if (m_draws < 1) {
    throw std::invalid_argument("level_set_risk: need at least one draw");
  }
  const PointSet draws = generate(spec, m_draws, seed);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < m_draws; ++i) {
    const auto w = draws.point(i);
    const bool in_true = level_set_member(spec, lambda, w);
    const bool in_est = level_contains(est.evaluate(w), lambda);
    if (in_true != in_est) ++mismatches;
  }
  return static_cast<double>(mismatches) / static_cast<double>(m_draws);
}

double excess_mass_true(const SyntheticSpec& spec, double lambda,
                        std::size_t m_draws, std::uint64_t seed) {
  if (m_draws < 1) {
    throw std::invalid_argument("excess_mass_true: need at least one draw");
  }
  const PointSet draws = generate(spec, m_draws, seed);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < m_draws; ++i) {
    if (level_set_member(spec, lambda, draws.point(i))) ++inside;
  }
  const double p_term =
      static_cast<double>(inside) / static_cast<double>(m_draws);
  if (lambda == 0.0) return p_term;
  return p_term - lambda * true_level_volume(spec, lambda);
}

double excess_mass_estimated(const SyntheticSpec& spec,
                             const DensityEstimate& est, double lambda,
                             std::size_t m_draws, std::uint64_t seed,
                             double pilot_factor) {
  if (m_draws < 1) {
    throw std::invalid_argument("excess_mass_estimated: need draws");
  }
  const PointSet draws = generate(spec, m_draws, seed);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < m_draws; ++i) {
    if (level_contains(est.evaluate(draws.point(i)), lambda)) ++inside;
  }
  const double p_term =
      static_cast<double>(inside) / static_cast<double>(m_draws);
  if (lambda == 0.0) return p_term;
  const DensityEstimate pilot = DensityEstimate::fit(
      est.data(), est.kernel(), pilot_factor * est.bandwidth());
  const VolumeEstimate vol =
      estimate_volume(est, lambda, pilot, m_draws, substream_seed(seed, 1));
  return p_term - lambda * vol.value;
}

double misassignment_fraction(const SyntheticSpec& spec,
                              const DensityEstimate& est, double lambda,
                              const PointSet& sample) {
  if (sample.size() == 0) {
    throw std::invalid_argument("misassignment_fraction: empty sample");
  }
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto x = sample.point(i);
    // sign(0) = +1: p = lambda counts as inside, matching closure
    const bool est_side = est.evaluate(x) >= lambda;
    const bool true_side = geometric_density(spec, x) >= lambda;
    if (est_side != true_side) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(sample.size());
}

NoiseCurve noise_exponent_curve(const SyntheticSpec& spec, double lambda,
                                const std::vector<double>& eps_grid,
                                std::size_t m_draws, std::uint64_t seed) {
  if (eps_grid.empty() || !std::is_sorted(eps_grid.begin(), eps_grid.end()) ||
      !(eps_grid.front() > 0.0)) {
    throw std::invalid_argument(
        "noise_exponent_curve: eps grid must be ascending and positive");
  }
  if (m_draws < 1) {
    throw std::invalid_argument("noise_exponent_curve: need draws");
  }
  NoiseCurve curve;
  curve.epsilons = eps_grid;
  curve.lambda = lambda;

  const PointSet draws = generate(spec, m_draws, seed);
  std::vector<double> gaps;
  gaps.reserve(m_draws);
  for (std::size_t i = 0; i < m_draws; ++i) {
    const double p = geometric_density(spec, draws.point(i));
    // p = +inf counts as |p - lambda| = inf: never within any epsilon
    gaps.push_back(std::isinf(p) ? std::numeric_limits<double>::infinity()
                                 : std::abs(p - lambda));
  }
  std::sort(gaps.begin(), gaps.end());
  curve.probs.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    const auto it = std::lower_bound(gaps.begin(), gaps.end(), eps);
    curve.probs.push_back(static_cast<double>(it - gaps.begin()) /
                          static_cast<double>(m_draws));
  }

  // least-squares slope of log prob vs log eps over the positive entries
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (curve.probs[i] > 0.0) {
      xs.push_back(std::log(eps_grid[i]));
      ys.push_back(std::log(curve.probs[i]));
    }
  }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx > 0.0) curve.fitted_gamma = sxy / sxx;
  }
  return curve;
}

std::optional<double> min_intercluster_distance(const Clustering& c,
                                                const PointSet& ps) {
  if (c.k_hat() < 2) return std::nullopt;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a + 1 < c.components.size(); ++a) {
    for (std::size_t b = a + 1; b < c.components.size(); ++b) {
      for (std::size_t i : c.components[a]) {
        for (std::size_t j : c.components[b]) {
          best = std::min(best, squared_distance(ps.point(i), ps.point(j)));
        }
      }
    }
  }
  return std::sqrt(best);
}

double best_match_agreement(const std::vector<int>& found,
                            const std::vector<int>& truth) {
  if (found.size() != truth.size() || found.empty()) {
    throw std::invalid_argument("best_match_agreement: size mismatch");
  }
  std::vector<int> f_labels, t_labels;
  for (int v : found) {
    if (v != 0 && std::find(f_labels.begin(), f_labels.end(), v) ==
                      f_labels.end()) {
      f_labels.push_back(v);
    }
  }
  for (int v : truth) {
    if (std::find(t_labels.begin(), t_labels.end(), v) == t_labels.end()) {
      t_labels.push_back(v);
    }
  }
  std::sort(f_labels.begin(), f_labels.end());
  std::sort(t_labels.begin(), t_labels.end());
  const std::size_t s = std::max(f_labels.size(), t_labels.size());
  if (s > 8) {
    throw std::invalid_argument(
        "best_match_agreement: too many labels for exhaustive matching");
  }
  // confusion counts padded to an s x s square
  std::vector<std::vector<std::size_t>> counts(s, std::vector<std::size_t>(s));
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (found[i] == 0) continue;  // noise never matches
    const auto fi = std::find(f_labels.begin(), f_labels.end(), found[i]);
    const auto ti = std::find(t_labels.begin(), t_labels.end(), truth[i]);
    if (ti == t_labels.end()) continue;
    counts[fi - f_labels.begin()][ti - t_labels.begin()] += 1;
  }
  std::vector<std::size_t> perm(s);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::size_t best = 0;
  do {
    std::size_t hit = 0;
    for (std::size_t i = 0; i < s; ++i) hit += counts[i][perm[i]];
    best = std::max(best, hit);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(found.size());
}

RiskReport evaluate_risks(const SyntheticSpec& spec,
                          const DensityEstimate& est, double lambda,
                          const PointSet& sample, std::size_t m_draws,
                          std::uint64_t seed) {
  RiskReport report;
  report.mc_draws = m_draws;
  report.seed = seed;
  report.level_set_risk =
      level_set_risk(spec, est, lambda, m_draws, substream_seed(seed, 11));
  report.excess_mass_true =
      excess_mass_true(spec, lambda, m_draws, substream_seed(seed, 12));
  report.excess_mass_estimated = excess_mass_estimated(
      spec, est, lambda, m_draws, substream_seed(seed, 13));
  report.excess_mass_risk =
      report.excess_mass_true - report.excess_mass_estimated;
  report.misassignment_fraction =
      misassignment_fraction(spec, est, lambda, sample);
  return report;
}

}  // namespace levelset
