#include "levelset/bootstrap.hpp"

#include <stdexcept>

#include "levelset/errors.hpp"
#include "levelset/excess_mass.hpp"

namespace levelset {

PointSet sample_conditional(const DensityEstimate& est, double lambda,
                            std::size_t m, std::uint64_t seed,
                            std::size_t max_rejections) {
  if (max_rejections < 1) {
    throw std::invalid_argument("sample_conditional: max_rejections must be >= 1");
  }
  bool feasible = false;
  for (double v : est.values_at_data()) {
    if (level_contains(v, lambda)) {
      feasible = true;
      break;
    }
  }
  if (!feasible) {
    throw NumericalError(
        "sample_conditional: no data point reaches the level (lambda too "
        "high for this estimate)");
  }
  Rng rng(seed);
  PointSet out;
  out.dim = est.data().dim;
  out.coords.reserve(m * out.dim);
  std::vector<double> u;
  for (std::size_t accepted = 0; accepted < m; ++accepted) {
    std::size_t rejections = 0;
    for (;;) {
      u.clear();
      sample_from_kde_one(est, rng, u);
      if (level_contains(est.evaluate(u), lambda)) break;
      if (++rejections > max_rejections) {
        throw NumericalError(
            "sample_conditional: rejection cap exceeded (level set has "
            "nearly no mass under the estimate)");
      }
    }
    out.coords.insert(out.coords.end(), u.begin(), u.end());
  }
  return out;
}

Clustering bootstrap_clusters(const DensityEstimate& est,
                              const BootstrapRequest& request) {
  if (request.sample_size < 1) {
    throw std::invalid_argument("bootstrap_clusters: sample_size must be >= 1");
  }
  const PointSet points =
      sample_conditional(est, request.lambda, request.sample_size,
                         request.seed, request.max_rejections);
  const double radius = static_cast<double>(request.edge_factor) * request.rho;
  const SpatialIndex index(points, radius);
  const NeighborhoodGraph g =
      build_radius_graph(points, index, request.rho, request.edge_factor);
  Clustering c;
  c.components = connected_components(g);
  c.h = est.bandwidth();
  c.lambda = request.lambda;
  c.rho = request.rho;
  c.edge_factor = request.edge_factor;
  c.kernel = est.kernel().kind;
  c.labels.assign(points.size(), 0);
  for (std::size_t k = 0; k < c.components.size(); ++k) {
    for (std::size_t i : c.components[k]) {
      c.labels[i] = static_cast<int>(k) + 1;
    }
  }
  return c;
}

}  // namespace levelset
