#include "levelset/kde.hpp"

#include <cmath>
#include <stdexcept>

#include "levelset/rng.hpp"

namespace levelset {

DensityEstimate DensityEstimate::fit(PointSet data, KernelSpec kernel,
                                     double h) {
  if (data.size() == 0) {
    throw std::invalid_argument("DensityEstimate::fit: empty point set");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("DensityEstimate::fit: bandwidth must be > 0");
  }
  if (kernel.dim != static_cast<int>(data.dim)) {
    throw std::invalid_argument("DensityEstimate::fit: kernel dimension " +
                                std::to_string(kernel.dim) +
                                " != data dimension " +
                                std::to_string(data.dim));
  }
  DensityEstimate est;
  est.data_ = std::make_shared<const PointSet>(std::move(data));
  est.kernel_ = kernel;
  est.h_ = h;
  est.norm_ = 1.0 / (static_cast<double>(est.data_->size()) * kernel.c_d *
                     std::pow(h, kernel.dim));
  est.index_ = std::make_shared<const SpatialIndex>(*est.data_, h);
  const std::size_t n = est.data_->size();
  est.data_values_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    est.data_values_.push_back(est.evaluate(est.data_->point(i)));
  }
  return est;
}

double DensityEstimate::evaluate(std::span<const double> x) const {
  if (x.size() != data_->dim) {
    throw std::invalid_argument("DensityEstimate::evaluate: dimension mismatch");
  }
  thread_local std::vector<std::size_t> hits;
  index_->radius_query(x, h_, hits);
  CompensatedSum sum;
  for (std::size_t i : hits) {
    const double r = distance(x, data_->point(i)) / h_;
    sum.add(kernel_profile(kernel_.kind, r));
  }
  return sum.value() * norm_;
}

std::vector<double> DensityEstimate::evaluate_batch(
    const PointSet& points) const {
  if (points.size() > 0 && points.dim != data_->dim) {
    throw std::invalid_argument(
        "DensityEstimate::evaluate_batch: dimension mismatch");
  }
  std::vector<double> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.push_back(evaluate(points.point(i)));
  }
  return out;
}

}  // namespace levelset
