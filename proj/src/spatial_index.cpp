#include "levelset/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levelset {

SpatialIndex::SpatialIndex(const PointSet& points, double cell_size)
    : points_(&points), cell_size_(cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw std::invalid_argument("SpatialIndex: cell size must be positive");
  }
  const std::size_t n = points.size();
  use_grid_ = points.dim <= 3;
  if (use_grid_) {
    grid_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      grid_[cell_of(points.point(i))].push_back(static_cast<std::uint32_t>(i));
    }
  } else {
    order_.resize(n);
    for (std::size_t i = 0; i < n; ++i) order_[i] = static_cast<std::uint32_t>(i);
    if (n > 0) root_ = build_kd(0, static_cast<std::uint32_t>(n));
  }
}

SpatialIndex::Cell SpatialIndex::cell_of(std::span<const double> x) const {
  Cell c{0, 0, 0};
  for (std::size_t k = 0; k < x.size(); ++k) {
    c[k] = static_cast<std::int64_t>(std::floor(x[k] / cell_size_));
  }
  return c;
}

std::uint32_t SpatialIndex::build_kd(std::uint32_t begin, std::uint32_t end) {
  constexpr std::uint32_t kLeafSize = 16;
  KdNode node;
  if (end - begin <= kLeafSize) {
    node.begin = begin;
    node.end = end;
    nodes_.push_back(node);
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }
  // split the widest axis at the median
  const std::size_t d = points_->dim;
  int axis = 0;
  double widest = -1.0;
  for (std::size_t k = 0; k < d; ++k) {
    double lo = points_->point(order_[begin])[k], hi = lo;
    for (std::uint32_t i = begin; i < end; ++i) {
      const double v = points_->point(order_[i])[k];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      axis = static_cast<int>(k);
    }
  }
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [this, axis](std::uint32_t a, std::uint32_t b) {
                     const double va = points_->point(a)[axis];
                     const double vb = points_->point(b)[axis];
                     if (va != vb) return va < vb;
                     return a < b;
                   });
  node.axis = axis;
  node.split = points_->point(order_[mid])[axis];
  const std::uint32_t self = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(node);
  const std::uint32_t left = build_kd(begin, mid);
  const std::uint32_t right = build_kd(mid, end);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

void SpatialIndex::query_kd(std::uint32_t idx, std::span<const double> x,
                            double r2, std::vector<std::size_t>& out) const {
  const KdNode& node = nodes_[idx];
  if (node.axis < 0) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const std::uint32_t p = order_[i];
      if (squared_distance(x, points_->point(p)) <= r2) {
        out.push_back(p);
      }
    }
    return;
  }
  const double delta = x[node.axis] - node.split;
  if (delta <= 0.0) {
    query_kd(node.left, x, r2, out);
    if (delta * delta <= r2) query_kd(node.right, x, r2, out);
  } else {
    query_kd(node.right, x, r2, out);
    if (delta * delta <= r2) query_kd(node.left, x, r2, out);
  }
}

void SpatialIndex::radius_query(std::span<const double> x, double r,
                                std::vector<std::size_t>& out) const {
  out.clear();
  if (x.size() != points_->dim) {
    throw std::invalid_argument("radius_query: dimension mismatch");
  }
  if (!(r >= 0.0)) {
    throw std::invalid_argument("radius_query: radius must be >= 0");
  }
  const std::size_t n = points_->size();
  if (n == 0) return;
  const double r2 = r * r;
  if (!use_grid_) {
    query_kd(root_, x, r2, out);
    std::sort(out.begin(), out.end());
    return;
  }
  // number of cells the query box would touch; fall back to a linear
  // scan when that exceeds the point count
  const std::int64_t span = static_cast<std::int64_t>(std::floor(r / cell_size_)) + 1;
  double cells = 1.0;
  for (std::size_t k = 0; k < points_->dim; ++k) cells *= 2.0 * span + 1.0;
  if (cells > static_cast<double>(n)) {
    for (std::size_t i = 0; i < n; ++i) {
      if (squared_distance(x, points_->point(i)) <= r2) out.push_back(i);
    }
    return;
  }
  Cell lo{0, 0, 0}, hi{0, 0, 0};
  for (std::size_t k = 0; k < points_->dim; ++k) {
    lo[k] = static_cast<std::int64_t>(std::floor((x[k] - r) / cell_size_));
    hi[k] = static_cast<std::int64_t>(std::floor((x[k] + r) / cell_size_));
  }
  Cell c = lo;
  const std::size_t d = points_->dim;
  while (true) {
    auto it = grid_.find(c);
    if (it != grid_.end()) {
      for (std::uint32_t p : it->second) {
        if (squared_distance(x, points_->point(p)) <= r2) out.push_back(p);
      }
    }
    // odometer increment over [lo, hi]
    std::size_t k = 0;
    for (; k < d; ++k) {
      if (c[k] < hi[k]) {
        ++c[k];
        break;
      }
      c[k] = lo[k];
    }
    if (k == d) break;
  }
  std::sort(out.begin(), out.end());
}

std::vector<std::size_t> SpatialIndex::radius_query(std::span<const double> x,
                                                    double r) const {
  std::vector<std::size_t> out;
  radius_query(x, r, out);
  return out;
}

}  // namespace levelset
