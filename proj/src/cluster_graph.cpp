#include "levelset/cluster_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace levelset {

namespace {

NeighborhoodGraph graph_over_nodes(const PointSet& points,
                                   const SpatialIndex& index,
                                   std::vector<std::size_t> node_ids,
                                   double lambda, double rho,
                                   int edge_factor) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("build_graph: rho must be > 0");
  }
  if (edge_factor != 1 && edge_factor != 2) {
    throw std::invalid_argument("build_graph: edge_factor must be 1 or 2");
  }
  NeighborhoodGraph g;
  g.rho = rho;
  g.edge_factor = edge_factor;
  g.lambda = lambda;
  g.node_ids = std::move(node_ids);

  // data index -> node position (or npos)
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> position(points.size(), kNone);
  for (std::size_t p = 0; p < g.node_ids.size(); ++p) {
    position[g.node_ids[p]] = static_cast<std::uint32_t>(p);
  }

  const double radius = static_cast<double>(edge_factor) * rho;
  g.adjacency.resize(g.node_ids.size());
  std::vector<std::size_t> hits;
  for (std::size_t p = 0; p < g.node_ids.size(); ++p) {
    const std::size_t i = g.node_ids[p];
    index.radius_query(points.point(i), radius, hits);
    for (std::size_t j : hits) {
      if (j == i) continue;
      const std::uint32_t q = position[j];
      if (q != kNone) g.adjacency[p].push_back(q);
    }
  }
  return g;
}

}  // namespace

NeighborhoodGraph build_graph(const DensityEstimate& est, double lambda,
                              double rho, int edge_factor) {
  std::vector<std::size_t> nodes;
  const auto& values = est.values_at_data();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (level_contains(values[i], lambda)) nodes.push_back(i);
  }
  return graph_over_nodes(est.data(), est.index(), std::move(nodes), lambda,
                          rho, edge_factor);
}

NeighborhoodGraph build_radius_graph(const PointSet& points,
                                     const SpatialIndex& index, double rho,
                                     int edge_factor) {
  std::vector<std::size_t> nodes(points.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = i;
  return graph_over_nodes(points, index, std::move(nodes), 0.0, rho,
                          edge_factor);
}

std::vector<std::vector<std::size_t>> connected_components(
    const NeighborhoodGraph& g) {
  const std::size_t m = g.node_ids.size();
  std::vector<std::vector<std::size_t>> components;
  std::vector<bool> visited(m, false);
  std::vector<std::uint32_t> stack;
  for (std::size_t start = 0; start < m; ++start) {
    if (visited[start]) continue;
    std::vector<std::size_t> comp;
    stack.clear();
    stack.push_back(static_cast<std::uint32_t>(start));
    visited[start] = true;
    while (!stack.empty()) {
      const std::uint32_t p = stack.back();
      stack.pop_back();
      comp.push_back(g.node_ids[p]);
      for (std::uint32_t q : g.adjacency[p]) {
        if (!visited[q]) {
          visited[q] = true;
          stack.push_back(q);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  // node_ids ascend and starts are scanned in order, so components are
  // already ordered by smallest member
  return components;
}

Clustering extract_clusters(const DensityEstimate& est, double lambda,
                            double rho, int edge_factor) {
  const NeighborhoodGraph g = build_graph(est, lambda, rho, edge_factor);
  Clustering c;
  c.components = connected_components(g);
  c.h = est.bandwidth();
  c.lambda = lambda;
  c.rho = rho;
  c.edge_factor = edge_factor;
  c.kernel = est.kernel().kind;
  c.labels.assign(est.data().size(), 0);
  for (std::size_t k = 0; k < c.components.size(); ++k) {
    for (std::size_t i : c.components[k]) {
      c.labels[i] = static_cast<int>(k) + 1;
    }
  }
  return c;
}

int assign_point(const Clustering& c, const DensityEstimate& est,
                 std::span<const double> x) {
  const double value = est.evaluate(x);
  if (!level_contains(value, c.lambda)) return 0;
  const auto hits = est.index().radius_query(x, c.rho);
  int best_label = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i : hits) {
    if (c.labels[i] == 0) continue;
    const double d = distance(x, est.data().point(i));
    if (d < best_dist) {
      best_dist = d;
      best_label = c.labels[i];
    }
  }
  return best_label;
}

void save_labels(const Clustering& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  out << "index,label\n";
  for (std::size_t i = 0; i < c.labels.size(); ++i) {
    out << i << ',' << c.labels[i] << '\n';
  }
}

}  // namespace levelset
