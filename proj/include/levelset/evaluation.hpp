#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "levelset/cluster_graph.hpp"
#include "levelset/kde.hpp"
#include "levelset/synthetic.hpp"

namespace levelset {

/// Risk estimates of a fitted estimator against a synthetic truth.
struct RiskReport {
  double level_set_risk = 0.0;       // P-mass of the symmetric difference
  double excess_mass_true = 0.0;     // E(L)
  double excess_mass_estimated = 0.0;  // E(L_hat)
  double excess_mass_risk = 0.0;     // E(L) - E(L_hat)
  double misassignment_fraction = 0.0;
  std::size_t mc_draws = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo P-mass of L_hat symmetric-difference L: the fraction of
/// draws W ~ spec on which estimated and true level-set membership
/// disagree. Point-mass draws sit exactly on their support, so the true
/// side is exact for them.
double level_set_risk(const SyntheticSpec& spec, const DensityEstimate& est,
                      double lambda, std::size_t m_draws, std::uint64_t seed);

/// E(L) = P(L) - lambda mu(L) for the true level set: P-term by Monte
/// Carlo from the spec, mu-term analytic (uniform boxes and thick
/// segments contribute their volume when their density reaches lambda,
/// Gaussians the closed-form ellipsoid volume, lower-dimensional
/// components zero).
double excess_mass_true(const SyntheticSpec& spec, double lambda,
                        std::size_t m_draws, std::uint64_t seed);

/// E(L_hat) for the estimated level set: P-term by Monte Carlo from the
/// spec, mu-term by the importance-sampled volume with a pilot at
/// `pilot_factor` times the estimate's bandwidth.
double excess_mass_estimated(const SyntheticSpec& spec,
                             const DensityEstimate& est, double lambda,
                             std::size_t m_draws, std::uint64_t seed,
                             double pilot_factor = 4.0);

/// Fraction of sample points whose estimated side of the level differs
/// from the true side; sign(0) counts as +1, so p = lambda is inside.
double misassignment_fraction(const SyntheticSpec& spec,
                              const DensityEstimate& est, double lambda,
                              const PointSet& sample);

/// Empirical noise-exponent diagnostic: probs[i] = P_hat(|p(X) - lambda|
/// < eps[i]) and the log-log least-squares slope over the positive
/// entries. fitted_gamma is empty when fewer than two probabilities are
/// positive (the gamma = infinity sentinel for sharp clusters).
struct NoiseCurve {
  std::vector<double> epsilons;
  std::vector<double> probs;
  double lambda = 0.0;
  std::optional<double> fitted_gamma;
};

NoiseCurve noise_exponent_curve(const SyntheticSpec& spec, double lambda,
                                const std::vector<double>& eps_grid,
                                std::size_t m_draws, std::uint64_t seed);

/// Exact minimum distance between points of different components;
/// empty when the clustering has fewer than two components.
std::optional<double> min_intercluster_distance(const Clustering& c,
                                                const PointSet& ps);

/// Best-matching agreement between found labels (0 = noise allowed) and
/// ground-truth labels: the maximum over injective relabelings of the
/// fraction of points that agree. Exhaustive over label permutations,
/// intended for small label counts.
double best_match_agreement(const std::vector<int>& found,
                            const std::vector<int>& truth);

/// Full report for an experiment run.
RiskReport evaluate_risks(const SyntheticSpec& spec, const DensityEstimate& est,
                          double lambda, const PointSet& sample,
                          std::size_t m_draws, std::uint64_t seed);

}  // namespace levelset
