#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "levelset/point_set.hpp"

namespace levelset {

/// Fixed-radius neighbor index over an immutable point set.
///
/// Two backends behind one interface: a uniform hash grid with a given
/// cell side for d <= 3, and a median-split kd-tree for higher
/// dimensions where the grid degenerates. radius_query returns exactly
/// {i : ||x - X_i|| <= r}, sorted ascending, so downstream sums are
/// order-deterministic.
class SpatialIndex {
 public:
  SpatialIndex(const PointSet& points, double cell_size);

  std::vector<std::size_t> radius_query(std::span<const double> x,
                                        double r) const;

  /// Appends matches to `out` (cleared first); avoids re-allocating in
  /// hot loops.
  void radius_query(std::span<const double> x, double r,
                    std::vector<std::size_t>& out) const;

  bool uses_grid() const { return use_grid_; }

 private:
  struct KdNode {
    int axis = -1;              // -1 marks a leaf
    double split = 0.0;
    std::uint32_t left = 0, right = 0;   // children (internal)
    std::uint32_t begin = 0, end = 0;    // leaf range into order_
  };

  using Cell = std::array<std::int64_t, 3>;
  struct CellHash {
    std::size_t operator()(const Cell& c) const {
      std::uint64_t h = 0x9E3779B97F4A7C15ULL;
      for (std::int64_t v : c) {
        h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) +
             (h >> 2);
      }
      return static_cast<std::size_t>(h);
    }
  };

  Cell cell_of(std::span<const double> x) const;
  std::uint32_t build_kd(std::uint32_t begin, std::uint32_t end);
  void query_kd(std::uint32_t node, std::span<const double> x, double r2,
                std::vector<std::size_t>& out) const;

  const PointSet* points_;
  double cell_size_ = 1.0;
  bool use_grid_ = true;
  std::unordered_map<Cell, std::vector<std::uint32_t>, CellHash> grid_;
  std::vector<KdNode> nodes_;
  std::vector<std::uint32_t> order_;
  std::uint32_t root_ = 0;
};

}  // namespace levelset
