#pragma once

#include <memory>
#include <span>
#include <vector>

#include "levelset/kernels.hpp"
#include "levelset/point_set.hpp"
#include "levelset/spatial_index.hpp"

namespace levelset {

/// Level-set membership convention used throughout: for lambda > 0 a
/// density value belongs to the level set iff value >= lambda; at
/// lambda = 0 the level set is the support, i.e. value > 0 (otherwise
/// every point of R^d would qualify trivially).
inline bool level_contains(double density_value, double lambda) {
  return lambda > 0.0 ? density_value >= lambda : density_value > 0.0;
}

/// Fitted kernel density estimator
///   p_h(x) = (1/n) sum_i K(||x - X_i|| / h) / (c_d h^d),
/// backed by a fixed-radius spatial index exploiting the compact kernel
/// support. Immutable after fit; evaluation is safe under concurrent
/// readers. Summation runs in ascending data-index order with
/// compensated accumulation so results are bit-reproducible.
class DensityEstimate {
 public:
  static DensityEstimate fit(PointSet data, KernelSpec kernel, double h);

  double evaluate(std::span<const double> x) const;
  std::vector<double> evaluate_batch(const PointSet& points) const;

  /// Density values at the fit points themselves (computed once,
  /// cached at fit time; used for node selection and feasibility checks).
  const std::vector<double>& values_at_data() const { return data_values_; }

  const PointSet& data() const { return *data_; }
  const KernelSpec& kernel() const { return kernel_; }
  double bandwidth() const { return h_; }
  const SpatialIndex& index() const { return *index_; }

 private:
  DensityEstimate() = default;

  std::shared_ptr<const PointSet> data_;
  std::shared_ptr<const SpatialIndex> index_;
  KernelSpec kernel_;
  double h_ = 1.0;
  double norm_ = 1.0;  // 1 / (n c_d h^d)
  std::vector<double> data_values_;
};

}  // namespace levelset
