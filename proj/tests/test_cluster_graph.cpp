#include <doctest.h>

#include <algorithm>

#include "levelset/cluster_graph.hpp"
#include "oracles.hpp"

using namespace levelset;

namespace {

DensityEstimate fit_1d(std::vector<double> coords, double h) {
  const auto ps = make_point_set(1, std::move(coords));
  return DensityEstimate::fit(ps, KernelSpec::make(KernelKind::spherical, 1),
                              h);
}

}  // namespace

TEST_CASE("far apart pair stays disconnected") {
  const auto est = fit_1d({0.0, 10.0}, 1.0);
  const auto g = build_graph(est, 0.0, 1.0, 2);
  CHECK(g.node_ids.size() == 2);
  CHECK(g.adjacency[0].empty());
  CHECK(g.adjacency[1].empty());
  CHECK(extract_clusters(est, 0.0, 1.0, 2).k_hat() == 2);
}

TEST_CASE("three collinear points form a path") {
  const auto est = fit_1d({0.0, 1.0, 2.0}, 1.0);
  const auto g = build_graph(est, 0.0, 0.6, 2);  // gaps 1 <= 1.2
  REQUIRE(g.node_ids.size() == 3);
  CHECK(g.adjacency[0].size() == 1);  // 0 - 1
  CHECK(g.adjacency[1].size() == 2);  // 1 - 0, 1 - 2
  CHECK(g.adjacency[2].size() == 1);
  const auto comps = connected_components(g);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0] == std::vector<std::size_t>{0, 1, 2});
  // stricter edge rule splits the path
  CHECK(extract_clusters(est, 0.0, 0.6, 1).k_hat() == 3);
}

TEST_CASE("level above the maximum empties the node set") {
  const auto est = fit_1d({0.0, 1.0, 2.0}, 1.0);
  const double max_value = *std::max_element(est.values_at_data().begin(),
                                             est.values_at_data().end());
  const auto g = build_graph(est, max_value * 1.01, 0.5, 2);
  CHECK(g.node_ids.empty());
  CHECK(connected_components(g).empty());
  const auto c = extract_clusters(est, max_value * 1.01, 0.5, 2);
  CHECK(c.k_hat() == 0);
  for (int label : c.labels) CHECK(label == 0);
}

TEST_CASE("DFS components equal the boolean-closure oracle") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + rng.uniform_index(49);
    const std::size_t d = 1 + rng.uniform_index(3);
    const auto ps = oracles::random_points(n, d, 1.0, seed * 7 + 1);
    const auto est = DensityEstimate::fit(
        ps, KernelSpec::make(KernelKind::spherical, static_cast<int>(d)), 0.7);
    const double rho = rng.uniform(0.05, 0.6);
    const auto g = build_graph(est, 0.0, rho, 2);
    REQUIRE(g.node_ids.size() == n);  // lambda = 0: all points are nodes

    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && distance(ps.point(i), ps.point(j)) <= 2.0 * rho) {
          adj[i][j] = true;
        }
      }
    }
    const auto want = oracles::closure_components(adj);
    const auto got = connected_components(g);
    CHECK(got == want);
  }
}

TEST_CASE("node sets shrink as lambda grows") {
  const auto ps = oracles::random_points(150, 2, 1.0, 77);
  const auto est =
      DensityEstimate::fit(ps, KernelSpec::make(KernelKind::biweight, 2), 0.3);
  std::vector<std::size_t> prev;
  for (double lambda : {0.0, 0.05, 0.1, 0.2, 0.4}) {
    const auto g = build_graph(est, lambda, 0.2, 2);
    if (!prev.empty() || lambda > 0.0) {
      CHECK(std::includes(prev.begin(), prev.end(), g.node_ids.begin(),
                          g.node_ids.end()));
    }
    prev = g.node_ids;
  }
}

TEST_CASE("k_hat is nonincreasing in rho") {
  const auto ps = oracles::random_points(120, 2, 1.0, 83);
  const auto est =
      DensityEstimate::fit(ps, KernelSpec::make(KernelKind::spherical, 2), 0.5);
  std::size_t prev_k = SIZE_MAX;
  for (double rho : {0.02, 0.05, 0.1, 0.2, 0.5, 1.5}) {
    const std::size_t k = extract_clusters(est, 0.0, rho, 2).k_hat();
    CHECK(k <= prev_k);
    prev_k = k;
  }
}

TEST_CASE("extract_clusters is deterministic and canonical") {
  const auto ps = oracles::random_points(90, 2, 1.0, 97);
  const auto est =
      DensityEstimate::fit(ps, KernelSpec::make(KernelKind::spherical, 2), 0.4);
  const auto a = extract_clusters(est, 0.02, 0.15, 2);
  const auto b = extract_clusters(est, 0.02, 0.15, 2);
  CHECK(a.components == b.components);
  CHECK(a.labels == b.labels);
  // canonical: members ascending, components ordered by smallest member
  std::size_t prev_front = 0;
  for (std::size_t k = 0; k < a.components.size(); ++k) {
    CHECK(std::is_sorted(a.components[k].begin(), a.components[k].end()));
    if (k > 0) CHECK(a.components[k].front() > prev_front);
    prev_front = a.components[k].front();
  }
  // labels consistent with components
  for (std::size_t k = 0; k < a.components.size(); ++k) {
    for (std::size_t i : a.components[k]) {
      CHECK(a.labels[i] == static_cast<int>(k) + 1);
    }
  }
}

TEST_CASE("single data point clusters as itself") {
  const auto est = fit_1d({3.25}, 0.5);
  const auto c = extract_clusters(est, 0.0, 0.5, 2);
  CHECK(c.k_hat() == 1);
  CHECK(c.labels == std::vector<int>{1});
}

TEST_CASE("assign_point follows the nearest clustered node") {
  // two one-dimensional uniform blobs
  Rng rng(3);
  std::vector<double> coords;
  for (int i = 0; i < 60; ++i) coords.push_back(rng.uniform());
  for (int i = 0; i < 60; ++i) coords.push_back(rng.uniform(5.0, 6.0));
  const auto est = fit_1d(coords, 0.1);
  const auto c = extract_clusters(est, 0.0, 0.25, 2);
  REQUIRE(c.k_hat() == 2);

  // a clustered data point keeps its own label
  const double x0 = coords[0];
  CHECK(assign_point(c, est, std::span<const double>(&x0, 1)) == c.labels[0]);

  // the midpoint of the gap has zero density -> noise
  const double mid = 3.0;
  CHECK(est.evaluate(std::span<const double>(&mid, 1)) == 0.0);
  CHECK(assign_point(c, est, std::span<const double>(&mid, 1)) == 0);
}

TEST_CASE("build_graph argument validation") {
  const auto est = fit_1d({0.0, 1.0}, 1.0);
  CHECK_THROWS_AS(build_graph(est, 0.0, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_graph(est, 0.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("graph is undirected without self-loops") {
  const auto ps = oracles::random_points(70, 2, 1.0, 101);
  const auto est =
      DensityEstimate::fit(ps, KernelSpec::make(KernelKind::spherical, 2), 0.5);
  const auto g = build_graph(est, 0.0, 0.2, 2);
  for (std::size_t p = 0; p < g.adjacency.size(); ++p) {
    for (std::uint32_t q : g.adjacency[p]) {
      CHECK(q != p);
      const auto& back = g.adjacency[q];
      CHECK(std::find(back.begin(), back.end(), p) != back.end());
    }
  }
}
