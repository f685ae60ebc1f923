#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "levelset/kde.hpp"

namespace levelset {

/// rho-neighborhood graph over the sample points in the estimated level
/// set. Nodes are data indices i with p_h(X_i) in the level set; there
/// is an (undirected, loop-free) edge between i and j iff
/// ||X_i - X_j|| <= edge_factor * rho. The default edge_factor 2 reads
/// "both belong to a ball of radius rho" geometrically; factor 1 gives
/// the stricter rule.
struct NeighborhoodGraph {
  std::vector<std::size_t> node_ids;                   // ascending data indices
  std::vector<std::vector<std::uint32_t>> adjacency;   // positions in node_ids
  double rho = 0.0;
  int edge_factor = 2;
  double lambda = 0.0;
};

/// Level-set clustering of the sample: k_hat disjoint components (data
/// indices, canonical order) plus per-sample labels, 1..k_hat for
/// clustered points and 0 for points below the level.
struct Clustering {
  std::vector<std::vector<std::size_t>> components;
  std::vector<int> labels;
  double h = 0.0;
  double lambda = 0.0;
  double rho = 0.0;
  int edge_factor = 2;
  KernelKind kernel = KernelKind::spherical;

  std::size_t k_hat() const { return components.size(); }
};

NeighborhoodGraph build_graph(const DensityEstimate& est, double lambda,
                              double rho, int edge_factor = 2);

/// Graph over all the given points regardless of level (used for
/// bootstrap samples, which satisfy the level condition by construction).
NeighborhoodGraph build_radius_graph(const PointSet& points,
                                     const SpatialIndex& index, double rho,
                                     int edge_factor);

/// Maximal connected node sets via iterative depth-first search.
/// Canonical form: members sorted ascending, components ordered by
/// smallest member. Returns data indices.
std::vector<std::vector<std::size_t>> connected_components(
    const NeighborhoodGraph& g);

Clustering extract_clusters(const DensityEstimate& est, double lambda,
                            double rho, int edge_factor = 2);

/// Label for an out-of-sample query point: 0 if the point is below the
/// level, otherwise the label of the nearest clustered sample point
/// within distance rho (0 if none). Nearest ties break to the smallest
/// data index.
int assign_point(const Clustering& c, const DensityEstimate& est,
                 std::span<const double> x);

/// Writes `index,label` rows with a header line.
void save_labels(const Clustering& c, const std::string& path);

}  // namespace levelset
