#include "levelset/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "levelset/rng.hpp"

namespace levelset {

namespace {

constexpr double kOnSupportTol = 1e-9;
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

int shape_dim(const Shape& shape, int ambient) {
  return std::visit(
      [ambient](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformBox>) {
          return static_cast<int>(s.lo.size());
        } else if constexpr (std::is_same_v<T, PointMass>) {
          return static_cast<int>(s.location.size());
        } else if constexpr (std::is_same_v<T, GaussianBlob>) {
          return static_cast<int>(s.mean.size());
        } else if constexpr (std::is_same_v<T, Segment>) {
          return 2;
        } else if constexpr (std::is_same_v<T, Spiral>) {
          return 2;
        } else {
          (void)ambient;
          return s.embed_dim;
        }
      },
      shape);
}

double segment_length(const Segment& s) {
  const double dx = s.b[0] - s.a[0];
  const double dy = s.b[1] - s.a[1];
  return std::sqrt(dx * dx + dy * dy);
}

double dist_to_segment(const Segment& s, double x, double y) {
  const double dx = s.b[0] - s.a[0], dy = s.b[1] - s.a[1];
  const double len2 = dx * dx + dy * dy;
  double t = ((x - s.a[0]) * dx + (y - s.a[1]) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  const double px = s.a[0] + t * dx, py = s.a[1] + t * dy;
  return std::hypot(x - px, y - py);
}

double spiral_phi_max(const Spiral& s) { return 2.0 * kPi * s.turns; }

double spiral_radius(const Spiral& s, double phi) { return s.r0 + s.rate * phi; }

double dist_to_spiral_at(const Spiral& s, double phi, double x, double y) {
  const double r = spiral_radius(s, phi);
  const double px = s.center[0] + r * std::cos(phi);
  const double py = s.center[1] + r * std::sin(phi);
  return std::hypot(x - px, y - py);
}

double dist_to_spiral(const Spiral& s, double x, double y) {
  const double phi_max = spiral_phi_max(s);
  constexpr int kCoarse = 2048;
  double best_phi = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kCoarse; ++i) {
    const double phi = phi_max * i / kCoarse;
    const double d = dist_to_spiral_at(s, phi, x, y);
    if (d < best) {
      best = d;
      best_phi = phi;
    }
  }
  // local golden-section refinement around the best coarse node
  const double step = phi_max / kCoarse;
  double lo = std::max(0.0, best_phi - step);
  double hi = std::min(phi_max, best_phi + step);
  constexpr double kGolden = 0.61803398874989485;
  double m1 = hi - kGolden * (hi - lo);
  double m2 = lo + kGolden * (hi - lo);
  double f1 = dist_to_spiral_at(s, m1, x, y);
  double f2 = dist_to_spiral_at(s, m2, x, y);
  for (int it = 0; it < 90; ++it) {
    if (f1 <= f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - kGolden * (hi - lo);
      f1 = dist_to_spiral_at(s, m1, x, y);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + kGolden * (hi - lo);
      f2 = dist_to_spiral_at(s, m2, x, y);
    }
  }
  return std::min({best, f1, f2});
}

// Cumulative arc-length table for arc-length-uniform spiral sampling.
struct SpiralArcTable {
  std::vector<double> phi, cum;
  double total = 0.0;

  explicit SpiralArcTable(const Spiral& s) {
    constexpr int kNodes = 4096;
    const double phi_max = spiral_phi_max(s);
    phi.resize(kNodes + 1);
    cum.resize(kNodes + 1);
    double acc = 0.0;
    double prev_speed = std::hypot(spiral_radius(s, 0.0), s.rate);
    phi[0] = 0.0;
    cum[0] = 0.0;
    for (int i = 1; i <= kNodes; ++i) {
      const double p = phi_max * i / kNodes;
      const double speed = std::hypot(spiral_radius(s, p), s.rate);
      acc += 0.5 * (prev_speed + speed) * (phi_max / kNodes);
      phi[i] = p;
      cum[i] = acc;
      prev_speed = speed;
    }
    total = acc;
  }

  double invert(double s) const {
    const auto it = std::lower_bound(cum.begin(), cum.end(), s);
    if (it == cum.begin()) return phi.front();
    if (it == cum.end()) return phi.back();
    const std::size_t j = static_cast<std::size_t>(it - cum.begin());
    const double frac = (s - cum[j - 1]) / (cum[j] - cum[j - 1]);
    return phi[j - 1] + frac * (phi[j] - phi[j - 1]);
  }
};

void moon_center(const Moon& m, double& cx, double& cy) {
  if (m.side == 0) {
    cx = 0.0;
    cy = 0.0;
  } else {
    cx = 1.0;
    cy = m.gap;
  }
}

// In-plane distance to the moon's arc (endpoints included).
double dist_to_moon_arc(const Moon& m, double x, double y) {
  double cx, cy;
  moon_center(m, cx, cy);
  const double vx = x - cx, vy = y - cy;
  const double ang = std::atan2(vy, vx);
  const bool on_arc = m.side == 0 ? (ang >= 0.0) : (ang <= 0.0);
  if (on_arc) {
    return std::abs(std::hypot(vx, vy) - 1.0);
  }
  // fall back to the arc endpoints
  const double e0x = cx + (m.side == 0 ? 1.0 : -1.0);
  const double e1x = cx + (m.side == 0 ? -1.0 : 1.0);
  return std::min(std::hypot(x - e0x, y - cy), std::hypot(x - e1x, y - cy));
}

void draw_shape(const Shape& shape, int dim, Rng& rng,
                const SpiralArcTable* spiral_table, std::vector<double>& out) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformBox>) {
          for (std::size_t k = 0; k < s.lo.size(); ++k) {
            out.push_back(rng.uniform(s.lo[k], s.hi[k]));
          }
        } else if constexpr (std::is_same_v<T, PointMass>) {
          out.insert(out.end(), s.location.begin(), s.location.end());
        } else if constexpr (std::is_same_v<T, GaussianBlob>) {
          for (std::size_t k = 0; k < s.mean.size(); ++k) {
            out.push_back(s.mean[k] + s.stddev[k] * rng.normal());
          }
        } else if constexpr (std::is_same_v<T, Segment>) {
          const double t = rng.uniform();
          const double w = (rng.uniform() - 0.5) * s.thickness;
          const double len = segment_length(s);
          const double dx = (s.b[0] - s.a[0]) / len;
          const double dy = (s.b[1] - s.a[1]) / len;
          out.push_back(s.a[0] + t * (s.b[0] - s.a[0]) - w * dy);
          out.push_back(s.a[1] + t * (s.b[1] - s.a[1]) + w * dx);
        } else if constexpr (std::is_same_v<T, Spiral>) {
          const double u = rng.uniform(0.0, spiral_table->total);
          const double phi = spiral_table->invert(u);
          const double r = spiral_radius(s, phi);
          out.push_back(s.center[0] + r * std::cos(phi));
          out.push_back(s.center[1] + r * std::sin(phi));
        } else {  // Moon
          const double t = rng.uniform(0.0, kPi);
          double cx, cy;
          moon_center(s, cx, cy);
          const double sign = s.side == 0 ? 1.0 : -1.0;
          const double rx = sign * std::cos(t), ry = sign * std::sin(t);
          const double w =
              s.noise > 0.0 ? (2.0 * rng.uniform() - 1.0) * s.noise : 0.0;
          out.push_back(cx + (1.0 + w) * rx);
          out.push_back(cy + (1.0 + w) * ry);
          for (int k = 2; k < s.embed_dim; ++k) out.push_back(0.0);
        }
        (void)dim;
      },
      shape);
}

double shape_density(const Shape& shape, int ambient,
                     std::span<const double> x) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformBox>) {
          double volume = 1.0;
          for (std::size_t k = 0; k < s.lo.size(); ++k) {
            if (x[k] < s.lo[k] || x[k] > s.hi[k]) return 0.0;
            volume *= s.hi[k] - s.lo[k];
          }
          return 1.0 / volume;
        } else if constexpr (std::is_same_v<T, PointMass>) {
          for (std::size_t k = 0; k < s.location.size(); ++k) {
            if (x[k] != s.location[k]) return 0.0;
          }
          return kInf;
        } else if constexpr (std::is_same_v<T, GaussianBlob>) {
          double p = 1.0;
          for (std::size_t k = 0; k < s.mean.size(); ++k) {
            const double z = (x[k] - s.mean[k]) / s.stddev[k];
            p *= std::exp(-0.5 * z * z) /
                 (s.stddev[k] * std::sqrt(2.0 * kPi));
          }
          return p;
        } else if constexpr (std::is_same_v<T, Segment>) {
          const double len = segment_length(s);
          if (s.thickness > 0.0) {
            const double dx = (s.b[0] - s.a[0]) / len;
            const double dy = (s.b[1] - s.a[1]) / len;
            const double vx = x[0] - s.a[0], vy = x[1] - s.a[1];
            const double along = vx * dx + vy * dy;
            const double perp = -vx * dy + vy * dx;
            if (along < 0.0 || along > len ||
                std::abs(perp) > 0.5 * s.thickness) {
              return 0.0;
            }
            return 1.0 / (len * s.thickness);
          }
          return dist_to_segment(s, x[0], x[1]) <= kOnSupportTol ? kInf : 0.0;
        } else if constexpr (std::is_same_v<T, Spiral>) {
          return dist_to_spiral(s, x[0], x[1]) <= kOnSupportTol ? kInf : 0.0;
        } else {  // Moon
          for (int k = 2; k < s.embed_dim; ++k) {
            if (std::abs(x[k]) > kOnSupportTol) return 0.0;
          }
          const double d = dist_to_moon_arc(s, x[0], x[1]);
          if (s.noise > 0.0) {
            if (d > s.noise + kOnSupportTol) return 0.0;
            // a tube of half-width `noise` around a unit arc has exact
            // area pi * 2 * noise (curvature terms cancel), so the tube
            // is full-dimensional only when the ambient dimension is 2
            if (ambient == 2) return 1.0 / (2.0 * kPi * s.noise);
            return kInf;
          }
          return d <= kOnSupportTol ? kInf : 0.0;
        }
      },
      shape);
}

}  // namespace

void validate_spec(const SyntheticSpec& spec) {
  if (spec.components.empty()) {
    throw std::invalid_argument("SyntheticSpec: no components");
  }
  if (spec.dim < 1) {
    throw std::invalid_argument("SyntheticSpec: dim must be >= 1");
  }
  double total = 0.0;
  for (const auto& c : spec.components) {
    if (!(c.weight > 0.0)) {
      throw std::invalid_argument("SyntheticSpec: weights must be positive");
    }
    total += c.weight;
    if (shape_dim(c.shape, spec.dim) != spec.dim) {
      throw std::invalid_argument(
          "SyntheticSpec: shape dimension does not match ambient dimension");
    }
    if (const auto* box = std::get_if<UniformBox>(&c.shape)) {
      if (box->lo.size() != box->hi.size()) {
        throw std::invalid_argument("UniformBox: lo/hi size mismatch");
      }
      for (std::size_t k = 0; k < box->lo.size(); ++k) {
        if (!(box->hi[k] > box->lo[k])) {
          throw std::invalid_argument("UniformBox: needs hi > lo per axis");
        }
      }
    }
    if (const auto* g = std::get_if<GaussianBlob>(&c.shape)) {
      if (g->mean.size() != g->stddev.size()) {
        throw std::invalid_argument("GaussianBlob: mean/stddev size mismatch");
      }
      for (double s : g->stddev) {
        if (!(s > 0.0)) {
          throw std::invalid_argument("GaussianBlob: stddev must be positive");
        }
      }
    }
    if (const auto* seg = std::get_if<Segment>(&c.shape)) {
      if (seg->a.size() != 2 || seg->b.size() != 2 ||
          !(segment_length(*seg) > 0.0) || seg->thickness < 0.0) {
        throw std::invalid_argument("Segment: malformed endpoints/thickness");
      }
    }
    if (const auto* sp = std::get_if<Spiral>(&c.shape)) {
      if (sp->center.size() != 2 || !(sp->r0 >= 0.0) || !(sp->turns > 0.0)) {
        throw std::invalid_argument("Spiral: malformed parameters");
      }
    }
    if (const auto* m = std::get_if<Moon>(&c.shape)) {
      if ((m->side != 0 && m->side != 1) || m->embed_dim < 2 ||
          m->noise < 0.0) {
        throw std::invalid_argument("Moon: malformed parameters");
      }
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("SyntheticSpec: weights must sum to 1");
  }
}

double min_intercomponent_distance(const SyntheticSpec& spec,
                                   std::size_t probes_per_component,
                                   std::uint64_t seed) {
  validate_spec(spec);
  const std::size_t m = spec.components.size();
  if (m < 2) return std::numeric_limits<double>::infinity();
  std::vector<PointSet> probes;
  for (std::size_t c = 0; c < m; ++c) {
    SyntheticSpec single;
    single.dim = spec.dim;
    single.components.push_back({1.0, spec.components[c].shape});
    probes.push_back(
        generate(single, probes_per_component, substream_seed(seed, c)));
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a + 1 < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      for (std::size_t i = 0; i < probes[a].size(); ++i) {
        for (std::size_t j = 0; j < probes[b].size(); ++j) {
          best = std::min(
              best, squared_distance(probes[a].point(i), probes[b].point(j)));
        }
      }
    }
  }
  return std::sqrt(best);
}

PointSet generate(const SyntheticSpec& spec, std::size_t n,
                  std::uint64_t seed) {
  validate_spec(spec);
  Rng rng(seed);
  PointSet out;
  out.dim = static_cast<std::size_t>(spec.dim);
  out.coords.reserve(n * out.dim);
  std::vector<int> labels;
  labels.reserve(n);

  // arc-length tables for any spiral components
  std::vector<std::unique_ptr<SpiralArcTable>> tables(spec.components.size());
  for (std::size_t c = 0; c < spec.components.size(); ++c) {
    if (const auto* sp = std::get_if<Spiral>(&spec.components[c].shape)) {
      tables[c] = std::make_unique<SpiralArcTable>(*sp);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t comp = spec.components.size() - 1;
    for (std::size_t c = 0; c < spec.components.size(); ++c) {
      acc += spec.components[c].weight;
      if (u < acc) {
        comp = c;
        break;
      }
    }
    draw_shape(spec.components[comp].shape, spec.dim, rng, tables[comp].get(),
               out.coords);
    labels.push_back(static_cast<int>(comp) + 1);
  }
  out.labels = std::move(labels);
  return out;
}

double geometric_density(const SyntheticSpec& spec,
                         std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(spec.dim)) {
    throw std::invalid_argument("geometric_density: dimension mismatch");
  }
  double total = 0.0;
  for (const auto& c : spec.components) {
    const double p = shape_density(c.shape, spec.dim, x);
    if (p == kInf) return kInf;
    total += c.weight * p;
  }
  return total;
}

bool level_set_member(const SyntheticSpec& spec, double lambda,
                      std::span<const double> x) {
  if (lambda < 0.0) {
    throw std::invalid_argument("level_set_member: lambda must be >= 0");
  }
  const double p = geometric_density(spec, x);
  return lambda > 0.0 ? p >= lambda : p > 0.0;
}

MollifiedValue mollified_density(const SyntheticSpec& spec, KernelKind kernel,
                                 double h, std::span<const double> x,
                                 std::size_t m_draws, std::uint64_t seed) {
  validate_spec(spec);
  if (!(h > 0.0)) {
    throw std::invalid_argument("mollified_density: bandwidth must be > 0");
  }
  if (m_draws < 1) {
    throw std::invalid_argument("mollified_density: need at least one draw");
  }
  const double c_d = normalizing_constant(kernel, spec.dim);
  const double scale = 1.0 / (c_d * std::pow(h, spec.dim));
  const auto kh = [&](std::span<const double> y) {
    const double r = distance(x, y) / h;
    return r > 1.0 ? 0.0 : kernel_profile(kernel, r) * scale;
  };

  MollifiedValue out;
  SyntheticSpec continuous;
  continuous.dim = spec.dim;
  double cont_weight = 0.0;
  for (const auto& c : spec.components) {
    if (const auto* pm = std::get_if<PointMass>(&c.shape)) {
      out.value += c.weight * kh(pm->location);
    } else {
      continuous.components.push_back(c);
      cont_weight += c.weight;
    }
  }
  if (cont_weight == 0.0) return out;
  for (auto& c : continuous.components) c.weight /= cont_weight;

  const PointSet draws = generate(continuous, m_draws, seed);
  CompensatedSum sum, sum_sq;
  for (std::size_t i = 0; i < m_draws; ++i) {
    const double v = kh(draws.point(i));
    sum.add(v);
    sum_sq.add(v * v);
  }
  const double m = static_cast<double>(m_draws);
  const double mean = sum.value() / m;
  out.value += cont_weight * mean;
  if (m_draws > 1) {
    const double var =
        std::max(0.0, (sum_sq.value() - m * mean * mean) / (m - 1.0));
    out.std_error = cont_weight * std::sqrt(var / m);
  }
  return out;
}

SyntheticSpec fig1_sharp_law() {
  SyntheticSpec spec;
  spec.dim = 1;
  spec.components.push_back({1.0 / 3.0, UniformBox{{-5.5}, {-4.5}}});
  spec.components.push_back({1.0 / 3.0, UniformBox{{4.5}, {5.5}}});
  spec.components.push_back({1.0 / 3.0, PointMass{{0.0}}});
  return spec;
}

SyntheticSpec two_uniform_law() {
  SyntheticSpec spec;
  spec.dim = 1;
  spec.components.push_back({0.5, UniformBox{{0.0}, {1.0}}});
  spec.components.push_back({0.5, UniformBox{{5.0}, {6.0}}});
  return spec;
}

SyntheticSpec fuzzy_stick_spiral_law() {
  SyntheticSpec spec;
  spec.dim = 2;
  spec.components.push_back(
      {0.5, Segment{{0.0, -1.0}, {0.0, 1.0}, 0.2}});
  spec.components.push_back({0.5, Spiral{{4.5, 0.0}, 0.5, 0.3, 1.5}});
  return spec;
}

SyntheticSpec two_moons_law() {
  SyntheticSpec spec;
  spec.dim = 20;
  spec.components.push_back({0.5, Moon{0, 20, 0.3, 0.0}});
  spec.components.push_back({0.5, Moon{1, 20, 0.3, 0.0}});
  return spec;
}

SyntheticSpec gaussian_law() {
  SyntheticSpec spec;
  spec.dim = 1;
  spec.components.push_back({1.0, GaussianBlob{{0.0}, {1.0}}});
  return spec;
}

SyntheticSpec builtin_law(const std::string& name) {
  if (name == "sharp-fig1") return fig1_sharp_law();
  if (name == "two-uniform") return two_uniform_law();
  if (name == "fuzzy-spiral") return fuzzy_stick_spiral_law();
  if (name == "two-moons") return two_moons_law();
  if (name == "gaussian") return gaussian_law();
  throw std::invalid_argument("unknown built-in law '" + name + "'");
}

std::vector<std::string> builtin_law_names() {
  return {"sharp-fig1", "two-uniform", "fuzzy-spiral", "two-moons",
          "gaussian"};
}

}  // namespace levelset
