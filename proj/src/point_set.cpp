#include "levelset/point_set.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "levelset/errors.hpp"
#include "levelset/rng.hpp"

namespace levelset {

void PointSet::append(std::span<const double> x) {
  if (dim == 0 && coords.empty()) {
    dim = x.size();
  }
  if (x.size() != dim || dim == 0) {
    throw std::invalid_argument("PointSet::append: row of length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim));
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("PointSet::append: non-finite coordinate");
    }
  }
  coords.insert(coords.end(), x.begin(), x.end());
}

double PointSet::diameter() const {
  const std::size_t n = size();
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      best = std::max(best, squared_distance(point(i), point(j)));
    }
  }
  return std::sqrt(best);
}

double PointSet::coordinate_spread() const {
  const std::size_t n = size();
  if (n < 2) return 0.0;
  double best = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += coords[i * dim + k];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = coords[i * dim + k] - mean;
      ss += d * d;
    }
    best = std::max(best, std::sqrt(ss / static_cast<double>(n - 1)));
  }
  return best;
}

PointSet make_point_set(std::size_t dim, std::vector<double> coords,
                        std::optional<std::vector<int>> labels) {
  if (dim == 0 && !coords.empty()) {
    throw std::invalid_argument("make_point_set: dim 0 with coordinates");
  }
  if (dim != 0 && coords.size() % dim != 0) {
    throw std::invalid_argument("make_point_set: coords not a multiple of dim");
  }
  for (double v : coords) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("make_point_set: non-finite coordinate");
    }
  }
  PointSet ps;
  ps.dim = dim;
  ps.coords = std::move(coords);
  if (labels) {
    if (labels->size() != ps.size()) {
      throw std::invalid_argument("make_point_set: label count mismatch");
    }
    ps.labels = std::move(labels);
  }
  return ps;
}

namespace {

// Parses one numeric cell with strtod; the full cell must be consumed.
double parse_cell(const std::string& cell, std::size_t line_no) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  // allow surrounding spaces
  while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == begin || (end && *end != '\0') || errno == ERANGE ||
      !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": non-numeric cell '" + cell + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

PointSet load_points(const std::string& path, bool has_labels,
                     bool skip_header) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  PointSet ps;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_header && line_no == 1) continue;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    const std::size_t want_coords = cells.size() - (has_labels ? 1 : 0);
    if (want_coords == 0) {
      throw ParseError("line " + std::to_string(line_no) + ": no coordinates");
    }
    if (ps.dim != 0 && want_coords != ps.dim) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(ps.dim) + " coordinates, got " +
                       std::to_string(want_coords));
    }
    row.clear();
    for (std::size_t k = 0; k < want_coords; ++k) {
      row.push_back(parse_cell(cells[k], line_no));
    }
    if (has_labels) {
      const double lv = parse_cell(cells.back(), line_no);
      const int li = static_cast<int>(std::llround(lv));
      if (static_cast<double>(li) != lv) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": label is not an integer");
      }
      labels.push_back(li);
    }
    ps.append(row);
  }
  if (has_labels) ps.labels = std::move(labels);
  return ps;
}

void save_points(const PointSet& ps, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  char buf[64];
  const std::size_t n = ps.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < ps.dim; ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", ps.coords[i * ps.dim + k]);
      if (k) out << ',';
      out << buf;
    }
    if (ps.labels) {
      out << ',' << (*ps.labels)[i];
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed for '" + path + "'");
  }
}

SplitPlan split(const PointSet& ps, int parts, std::uint64_t seed) {
  const std::size_t n = ps.size();
  if (parts != 2 && parts != 3) {
    throw std::invalid_argument("split: parts must be 2 or 3");
  }
  if (n < static_cast<std::size_t>(parts)) {
    throw std::invalid_argument("split: fewer points than parts");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
  }
  SplitPlan plan;
  plan.seed = seed;
  std::size_t offset = 0;
  const std::size_t base = n / static_cast<std::size_t>(parts);
  const std::size_t rem = n % static_cast<std::size_t>(parts);
  for (int p = 0; p < parts; ++p) {
    const std::size_t len = base + (static_cast<std::size_t>(p) < rem ? 1 : 0);
    std::vector<std::size_t> part(perm.begin() + offset,
                                  perm.begin() + offset + len);
    std::sort(part.begin(), part.end());
    plan.parts.push_back(std::move(part));
    offset += len;
  }
  return plan;
}

PointSet subset(const PointSet& ps, const std::vector<std::size_t>& idx) {
  PointSet out;
  out.dim = ps.dim;
  out.coords.reserve(idx.size() * ps.dim);
  std::vector<int> labels;
  for (std::size_t i : idx) {
    const auto p = ps.point(i);
    out.coords.insert(out.coords.end(), p.begin(), p.end());
    if (ps.labels) labels.push_back((*ps.labels)[i]);
  }
  if (ps.labels) out.labels = std::move(labels);
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

}  // namespace levelset
