#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "levelset/kernels.hpp"
#include "levelset/point_set.hpp"

namespace levelset {

/// Axis-aligned box with the uniform law.
struct UniformBox {
  std::vector<double> lo, hi;
};

/// Degenerate law at a single location.
struct PointMass {
  std::vector<double> location;
};

/// Diagonal-covariance Gaussian.
struct GaussianBlob {
  std::vector<double> mean, stddev;
};

/// Planar segment from a to b, uniform over the rectangle of the given
/// total thickness around it ("fuzzy stick"); thickness 0 degenerates
/// to the bare segment. Ambient dimension must be 2.
struct Segment {
  std::vector<double> a, b;
  double thickness = 0.0;
};

/// Archimedean spiral r(phi) = r0 + rate * phi, phi in [0, 2 pi turns],
/// sampled uniformly by arc length, zero noise. Ambient dimension 2.
struct Spiral {
  std::vector<double> center;
  double r0 = 0.5;
  double rate = 0.3;
  double turns = 1.5;
};

/// One of the two interleaved unit half-circles ("two moons"), living in
/// the first two coordinates and zero-padded to embed_dim. side 0: the
/// upper arc (cos t, sin t); side 1: the lower arc (1 - cos t,
/// gap - sin t), t in [0, pi]. noise > 0 thickens the arc into a tube of
/// that half-width (uniform perpendicular offset).
struct Moon {
  int side = 0;
  int embed_dim = 20;
  double gap = 0.3;
  double noise = 0.0;
};

using Shape =
    std::variant<UniformBox, PointMass, GaussianBlob, Segment, Spiral, Moon>;

/// Mixture description with analytic geometric-density and level-set
/// oracles. Component supports are assumed pairwise disjoint for
/// cluster-truth specs; check_disjoint_supports verifies that
/// numerically.
struct SyntheticSpec {
  struct Component {
    double weight = 1.0;
    Shape shape;
  };
  std::vector<Component> components;
  int dim = 1;
};

/// Validates weights (positive, summing to 1 within 1e-12) and shape
/// dimensions; throws std::invalid_argument on violations.
void validate_spec(const SyntheticSpec& spec);

/// Minimum pairwise distance between component supports, estimated from
/// `probes_per_component` boundary samples per shape.
double min_intercomponent_distance(const SyntheticSpec& spec,
                                   std::size_t probes_per_component,
                                   std::uint64_t seed);

/// n i.i.d. draws; labels are 1-based component indices. Deterministic
/// given seed. Lower-dimensional shapes are generated in their intrinsic
/// plane and zero-padded to the ambient dimension.
PointSet generate(const SyntheticSpec& spec, std::size_t n,
                  std::uint64_t seed);

/// Geometric density p(x) = lim_h P(B(x,h)) / (v_d h^d) as an extended
/// real: full-dimensional components contribute weight/volume (uniform)
/// or the Gaussian density; lower-dimensional supports carry +infinity
/// on the support and 0 off it.
double geometric_density(const SyntheticSpec& spec, std::span<const double> x);

/// Analytic level-set membership: geometric_density(x) >= lambda with
/// inclusive boundaries (closure); at lambda = 0 this is support
/// membership.
bool level_set_member(const SyntheticSpec& spec, double lambda,
                      std::span<const double> x);

struct MollifiedValue {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of the mollified density
/// p_h(x) = E K_h(x - Y), Y ~ spec; point-mass components are folded in
/// exactly, so only the continuous part contributes Monte Carlo error.
MollifiedValue mollified_density(const SyntheticSpec& spec, KernelKind kernel,
                                 double h, std::span<const double> x,
                                 std::size_t m_draws, std::uint64_t seed);

/// Built-in laws used by the experiment presets.
SyntheticSpec fig1_sharp_law();       // (1/3)U(-5.5,-4.5)+(1/3)U(4.5,5.5)+(1/3)delta_0
SyntheticSpec two_uniform_law();      // (1/2)U(0,1)+(1/2)U(5,6)
SyntheticSpec fuzzy_stick_spiral_law();
SyntheticSpec two_moons_law();        // embedded in R^20
SyntheticSpec gaussian_law();         // standard normal, d = 1

/// Lookup by name ("sharp-fig1", "two-uniform", "fuzzy-spiral",
/// "two-moons", "gaussian"); throws std::invalid_argument otherwise.
SyntheticSpec builtin_law(const std::string& name);
std::vector<std::string> builtin_law_names();

}  // namespace levelset
