#pragma once

#include <cstdint>

#include "levelset/cluster_graph.hpp"
#include "levelset/kde.hpp"

namespace levelset {

struct BootstrapRequest {
  std::size_t sample_size = 0;   // N
  double lambda = 0.0;
  double rho = 0.0;
  int edge_factor = 2;
  std::uint64_t seed = 0;
  std::size_t max_rejections = 10000;  // per accepted draw
};

/// Exactly m draws from p_h conditioned on the level set, by rejection:
/// propose from the KDE law, accept iff the proposal lies in the level
/// set. At lambda = 0 the sampler never rejects. Throws NumericalError
/// when the per-draw rejection cap is exceeded or no data point reaches
/// the level (lambda near the maximum density).
PointSet sample_conditional(const DensityEstimate& est, double lambda,
                            std::size_t m, std::uint64_t seed,
                            std::size_t max_rejections = 10000);

/// Clusters a conditional bootstrap sample: the rho-neighborhood graph
/// is built over all N bootstrap points (they satisfy the level
/// condition by construction, so no node filter is applied) and its
/// DFS components are returned.
Clustering bootstrap_clusters(const DensityEstimate& est,
                              const BootstrapRequest& request);

}  // namespace levelset
