#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "levelset/evaluation.hpp"
#include "oracles.hpp"

using namespace levelset;

namespace {

DensityEstimate fit_law(const SyntheticSpec& spec, std::size_t n, double h,
                        std::uint64_t seed) {
  const auto sample = generate(spec, n, seed);
  return DensityEstimate::fit(
      sample,
      KernelSpec::make(KernelKind::spherical, static_cast<int>(sample.dim)),
      h);
}

}  // namespace

TEST_CASE("sharp clusters have vanishing level-set risk") {
  const auto spec = fig1_sharp_law();
  const auto est = fit_law(spec, 3000, 0.04, 1);
  CHECK(level_set_risk(spec, est, 0.04, 20000, 2) <= 0.01);
}

TEST_CASE("level-set risk matches quadrature for the uniform law") {
  SyntheticSpec spec;
  spec.dim = 1;
  spec.components.push_back({1.0, UniformBox{{0.0}, {1.0}}});
  const auto est = fit_law(spec, 2000, 0.05, 3);
  const double lambda = 0.5;
  const std::size_t draws = 100000;
  const double risk = level_set_risk(spec, est, lambda, draws, 4);
  // P(symmetric difference): the true level set is all of [0, 1], so the
  // risk is the P-mass where the estimate dips below lambda
  double truth = 0.0;
  const double step = 1e-5;
  for (double x = step / 2; x < 1.0; x += step) {
    if (est.evaluate(std::span<const double>(&x, 1)) < lambda) truth += step;
  }
  const double se = std::sqrt(truth * (1 - truth) / draws) + 1e-4;
  CHECK(std::abs(risk - truth) <= 3.0 * se);
}

TEST_CASE("true excess mass of the sharp law is analytic") {
  // mass 1, level-set length 2, the point mass adds no length:
  // E(L) = 1 - 0.04 * 2 = 0.92, with the P-term exact because every draw
  // lies in the level set
  CHECK(excess_mass_true(fig1_sharp_law(), 0.04, 20000, 5) ==
        doctest::Approx(0.92).epsilon(1e-12));
  // lambda = 0: the volume term vanishes by convention
  CHECK(excess_mass_true(fig1_sharp_law(), 0.0, 5000, 6) == 1.0);
}

TEST_CASE("estimated excess mass approaches the truth") {
  const auto spec = fig1_sharp_law();
  const auto est = fit_law(spec, 3000, 0.04, 7);
  const double e_true = excess_mass_true(spec, 0.04, 60000, 8);
  const double e_est = excess_mass_estimated(spec, est, 0.04, 60000, 9);
  CHECK(std::abs(e_true - e_est) <= 0.02);
}

TEST_CASE("Gaussian true excess mass matches the closed form") {
  const auto spec = gaussian_law();
  const double lambda = std::exp(-0.5) / std::sqrt(2.0 * M_PI);
  // L = [-1, 1]: P(L) = 2 Phi(1) - 1, mu(L) = 2
  const double p_term = std::erf(1.0 / std::sqrt(2.0));
  const double truth = p_term - lambda * 2.0;
  const std::size_t draws = 200000;
  const double got = excess_mass_true(spec, lambda, draws, 10);
  const double se = std::sqrt(p_term * (1 - p_term) / draws);
  CHECK(std::abs(got - truth) <= 3.0 * se + 1e-4);
}

TEST_CASE("misassignment vanishes in the easy cases") {
  const auto spec = fig1_sharp_law();
  const auto sample = generate(spec, 3000, 11);
  const auto est = DensityEstimate::fit(
      sample, KernelSpec::make(KernelKind::spherical, 1), 0.04);
  CHECK(misassignment_fraction(spec, est, 0.04, sample) == 0.0);
  // lambda = 0 with a compactly supported kernel: both sides positive
  CHECK(misassignment_fraction(spec, est, 0.0, sample) == 0.0);
  // determinism
  CHECK(misassignment_fraction(spec, est, 0.04, sample) ==
        misassignment_fraction(spec, est, 0.04, sample));
}

TEST_CASE("noise exponent of the Gaussian is near one") {
  const auto spec = gaussian_law();
  const double lambda = 0.5 / std::sqrt(2.0 * M_PI);  // half the mode height
  std::vector<double> eps;
  for (int k = 0; k < 8; ++k) {
    eps.push_back(1e-3 * std::pow(30.0, k / 7.0));
  }
  const auto curve = noise_exponent_curve(spec, lambda, eps, 300000, 12);
  REQUIRE(curve.fitted_gamma.has_value());
  CHECK(*curve.fitted_gamma > 0.8);
  CHECK(*curve.fitted_gamma < 1.2);
  // probabilities are nondecreasing by event nesting
  for (std::size_t i = 1; i < curve.probs.size(); ++i) {
    CHECK(curve.probs[i] >= curve.probs[i - 1]);
  }
}

TEST_CASE("flat and sharp laws return the infinite-gamma sentinel") {
  SyntheticSpec unif;
  unif.dim = 1;
  unif.components.push_back({1.0, UniformBox{{0.0}, {1.0}}});
  std::vector<double> eps{0.01, 0.05, 0.1, 0.4};
  const auto a = noise_exponent_curve(unif, 0.5, eps, 20000, 13);
  CHECK(!a.fitted_gamma.has_value());
  for (double p : a.probs) CHECK(p == 0.0);

  const auto b =
      noise_exponent_curve(fig1_sharp_law(), 0.04, {0.01, 0.05, 0.2}, 20000, 14);
  CHECK(!b.fitted_gamma.has_value());
}

TEST_CASE("minimum inter-cluster distance") {
  // two singleton clusters at 0 and 10
  const auto ps = make_point_set(1, {0.0, 10.0});
  Clustering c;
  c.components = {{0}, {1}};
  c.labels = {1, 2};
  CHECK(*min_intercluster_distance(c, ps) == 10.0);

  Clustering single;
  single.components = {{0, 1}};
  single.labels = {1, 1};
  CHECK(!min_intercluster_distance(single, ps).has_value());
}

TEST_CASE("inter-cluster distance equals the brute-force oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto ps = oracles::random_points(100 + seed, 2, 1.0, seed);
    Rng rng(seed * 13);
    Clustering c;
    c.labels.resize(ps.size());
    c.components.assign(3, {});
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::size_t k = rng.uniform_index(3);
      c.components[k].push_back(i);
      c.labels[i] = static_cast<int>(k) + 1;
    }
    if (c.components[0].empty() || c.components[1].empty() ||
        c.components[2].empty()) {
      continue;
    }
    double want = 1e300;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = 0; j < ps.size(); ++j) {
        if (c.labels[i] < c.labels[j]) {
          want = std::min(want, distance(ps.point(i), ps.point(j)));
        }
      }
    }
    CHECK(*min_intercluster_distance(c, ps) == doctest::Approx(want));
  }
}

TEST_CASE("sharp-law clustering keeps clusters far apart") {
  const auto spec = fig1_sharp_law();
  const auto sample = generate(spec, 3000, 15);
  const auto est = DensityEstimate::fit(
      sample, KernelSpec::make(KernelKind::spherical, 1), 0.04);
  const auto c = extract_clusters(est, 0.04, 0.25, 2);
  REQUIRE(c.k_hat() == 3);
  CHECK(*min_intercluster_distance(c, sample) >= 3.5);
}

TEST_CASE("best-match agreement handles label permutations and noise") {
  CHECK(best_match_agreement({1, 1, 2, 2}, {2, 2, 1, 1}) == 1.0);
  CHECK(best_match_agreement({1, 1, 1, 2}, {1, 1, 2, 2}) == 0.75);
  CHECK(best_match_agreement({0, 1, 1, 2}, {3, 1, 1, 2}) == 0.75);  // noise misses
  CHECK(best_match_agreement({3, 3, 7, 7, 1, 1}, {1, 1, 2, 2, 3, 3}) == 1.0);
  CHECK_THROWS_AS(best_match_agreement({1}, {1, 2}), std::invalid_argument);
}

TEST_CASE("Monte Carlo spread shrinks like the square root of the draws") {
  SyntheticSpec spec;
  spec.dim = 1;
  spec.components.push_back({1.0, UniformBox{{0.0}, {1.0}}});
  // a small, wiggly estimate so the symmetric difference has real mass
  const auto est = fit_law(spec, 80, 0.05, 20);
  const double lambda = 0.5;
  const int seeds = 50;
  std::vector<double> sds;
  for (std::size_t draws : {1000u, 10000u, 100000u}) {
    double mean = 0.0, ss = 0.0;
    std::vector<double> values;
    for (int s = 1; s <= seeds; ++s) {
      values.push_back(level_set_risk(spec, est, lambda, draws,
                                      substream_seed(900 + s, draws)));
    }
    for (double v : values) mean += v;
    mean /= seeds;
    for (double v : values) ss += (v - mean) * (v - mean);
    sds.push_back(std::sqrt(ss / (seeds - 1)));
  }
  // each tenfold increase in draws shrinks the spread by about sqrt(10)
  CHECK(sds[0] / sds[1] > 2.5);
  CHECK(sds[0] / sds[1] < 4.0);
  CHECK(sds[1] / sds[2] > 2.5);
  CHECK(sds[1] / sds[2] < 4.0);
}

TEST_CASE("risk report composes the pieces deterministically") {
  const auto spec = two_uniform_law();
  const auto sample = generate(spec, 400, 21);
  const auto est = DensityEstimate::fit(
      sample, KernelSpec::make(KernelKind::spherical, 1), 0.1);
  const auto a = evaluate_risks(spec, est, 0.3, sample, 20000, 22);
  const auto b = evaluate_risks(spec, est, 0.3, sample, 20000, 22);
  CHECK(a.level_set_risk == b.level_set_risk);
  CHECK(a.excess_mass_estimated == b.excess_mass_estimated);
  CHECK(a.excess_mass_risk ==
        a.excess_mass_true - a.excess_mass_estimated);
  CHECK(a.level_set_risk <= 0.2);
  CHECK(a.misassignment_fraction <= 0.2);
}
