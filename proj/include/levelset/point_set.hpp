#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace levelset {

/// A set of n points in R^d, stored row-major, with optional integer
/// ground-truth labels (0 = noise). Immutable by convention once built.
struct PointSet {
  std::vector<double> coords;             // n * dim values, row-major
  std::size_t dim = 0;
  std::optional<std::vector<int>> labels;

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }

  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dim, dim};
  }

  /// Appends one point; establishes dim on first use, rejects ragged or
  /// non-finite rows.
  void append(std::span<const double> x);

  /// Largest pairwise Euclidean distance (exact double loop).
  double diameter() const;

  /// Max over coordinates of the sample standard deviation.
  double coordinate_spread() const;
};

/// Builds a PointSet with the given dimension from packed coordinates.
PointSet make_point_set(std::size_t dim, std::vector<double> coords,
                        std::optional<std::vector<int>> labels = std::nullopt);

/// Reads a CSV of points: one point per line, '.' decimal separator, no
/// header unless `skip_header`; if `has_labels`, the last column is an
/// integer label. Empty file -> empty PointSet with dim 0.
/// Throws ParseError with the offending line number on ragged rows or
/// non-numeric cells.
PointSet load_points(const std::string& path, bool has_labels,
                     bool skip_header = false);

/// Writes a PointSet as CSV with 17 significant digits so that
/// load_points round-trips coordinates bit-exactly. Labels, when
/// present, become a final integer column.
void save_points(const PointSet& ps, const std::string& path);

/// A disjoint partition of {0, ..., n-1} into 2 or 3 parts of sizes
/// differing by at most one, from a seeded Fisher-Yates permutation.
struct SplitPlan {
  std::vector<std::vector<std::size_t>> parts;  // each sorted ascending
  std::uint64_t seed = 0;
};

/// Uniformly random partition; pure function of (ps.size(), parts, seed).
/// Remainder points go to the earlier parts.
SplitPlan split(const PointSet& ps, int parts, std::uint64_t seed);

/// Extracts the rows listed in `idx` (in that order), labels included.
PointSet subset(const PointSet& ps, const std::vector<std::size_t>& idx);

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace levelset
