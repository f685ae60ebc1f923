#include "levelset/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "levelset/errors.hpp"

namespace levelset {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void config_fail(const std::string& message) {
  throw ParseError("config: " + message);
}

double require_number(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number()) {
    config_fail("missing numeric field '" + key + "'");
  }
  return j[key].get<double>();
}

std::vector<double> number_list(const json& j) {
  if (!j.is_array() || j.empty()) config_fail("expected a numeric array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) config_fail("expected a numeric array");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace

SyntheticSpec spec_from_json(const json& j) {
  SyntheticSpec spec;
  if (!j.contains("dim") || !j.contains("components")) {
    config_fail("spec needs 'dim' and 'components'");
  }
  spec.dim = j["dim"].get<int>();
  for (const auto& cj : j["components"]) {
    SyntheticSpec::Component c;
    c.weight = require_number(cj, "weight");
    const auto& sj = cj.at("shape");
    const std::string type = sj.at("type").get<std::string>();
    if (type == "uniform_box") {
      c.shape = UniformBox{number_list(sj.at("lo")), number_list(sj.at("hi"))};
    } else if (type == "point_mass") {
      c.shape = PointMass{number_list(sj.at("location"))};
    } else if (type == "gaussian") {
      c.shape =
          GaussianBlob{number_list(sj.at("mean")), number_list(sj.at("stddev"))};
    } else if (type == "segment") {
      c.shape = Segment{number_list(sj.at("a")), number_list(sj.at("b")),
                        require_number(sj, "thickness")};
    } else if (type == "spiral") {
      c.shape = Spiral{number_list(sj.at("center")), require_number(sj, "r0"),
                       require_number(sj, "rate"), require_number(sj, "turns")};
    } else if (type == "moon") {
      c.shape = Moon{sj.at("side").get<int>(), sj.at("embed_dim").get<int>(),
                     require_number(sj, "gap"), require_number(sj, "noise")};
    } else {
      config_fail("unknown shape type '" + type + "'");
    }
    spec.components.push_back(std::move(c));
  }
  validate_spec(spec);
  return spec;
}

ordered_json spec_to_json(const SyntheticSpec& spec) {
  ordered_json j;
  j["dim"] = spec.dim;
  j["components"] = ordered_json::array();
  for (const auto& c : spec.components) {
    ordered_json cj;
    cj["weight"] = c.weight;
    ordered_json sj;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, UniformBox>) {
            sj["type"] = "uniform_box";
            sj["lo"] = s.lo;
            sj["hi"] = s.hi;
          } else if constexpr (std::is_same_v<T, PointMass>) {
            sj["type"] = "point_mass";
            sj["location"] = s.location;
          } else if constexpr (std::is_same_v<T, GaussianBlob>) {
            sj["type"] = "gaussian";
            sj["mean"] = s.mean;
            sj["stddev"] = s.stddev;
          } else if constexpr (std::is_same_v<T, Segment>) {
            sj["type"] = "segment";
            sj["a"] = s.a;
            sj["b"] = s.b;
            sj["thickness"] = s.thickness;
          } else if constexpr (std::is_same_v<T, Spiral>) {
            sj["type"] = "spiral";
            sj["center"] = s.center;
            sj["r0"] = s.r0;
            sj["rate"] = s.rate;
            sj["turns"] = s.turns;
          } else {
            sj["type"] = "moon";
            sj["side"] = s.side;
            sj["embed_dim"] = s.embed_dim;
            sj["gap"] = s.gap;
            sj["noise"] = s.noise;
          }
        },
        c.shape);
    cj["shape"] = std::move(sj);
    j["components"].push_back(std::move(cj));
  }
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  if (!j.contains("data") || !j["data"].is_object()) {
    config_fail("missing 'data' object");
  }
  const auto& data = j["data"];
  int sources = 0;
  if (data.contains("law")) {
    cfg.law = data["law"].get<std::string>();
    builtin_law(*cfg.law);  // validate the name now
    ++sources;
  }
  if (data.contains("spec")) {
    cfg.spec = spec_from_json(data["spec"]);
    ++sources;
  }
  if (data.contains("csv")) {
    cfg.csv_path = data["csv"].get<std::string>();
    cfg.csv_has_labels = data.value("has_labels", false);
    cfg.csv_header = data.value("header", false);
    ++sources;
  }
  if (sources != 1) config_fail("'data' must name exactly one source");
  if (!cfg.csv_path) {
    if (!j.contains("n")) config_fail("synthetic data needs 'n'");
    cfg.n = j["n"].get<std::size_t>();
  }

  cfg.kernel = kernel_kind_from_string(j.value("kernel", "spherical"));
  cfg.lambda = j.value("lambda", 0.0);
  if (cfg.lambda < 0.0) config_fail("lambda must be >= 0");

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    const std::string type = g.value("type", "default");
    if (type == "default") {
      cfg.grid.type = Grid::Type::defaulted;
      cfg.grid.count = g.value("count", std::size_t{40});
    } else if (type == "log") {
      cfg.grid.type = Grid::Type::log_range;
      cfg.grid.min = require_number(g, "min");
      cfg.grid.max = require_number(g, "max");
      cfg.grid.count = g.value("count", std::size_t{40});
      if (!(cfg.grid.min > 0.0) || !(cfg.grid.max > cfg.grid.min)) {
        config_fail("grid range needs 0 < min < max");
      }
    } else if (type == "explicit") {
      cfg.grid.type = Grid::Type::explicit_list;
      cfg.grid.values = number_list(g.at("values"));
      if (!std::is_sorted(cfg.grid.values.begin(), cfg.grid.values.end()) ||
          !(cfg.grid.values.front() > 0.0)) {
        config_fail("explicit grid must be ascending and positive");
      }
    } else if (type == "adaptive") {
      cfg.grid.type = Grid::Type::adaptive;
      cfg.grid.max_size = g.value("max_size", std::size_t{200});
    } else {
      config_fail("unknown grid type '" + type + "'");
    }
  }

  if (!j.contains("selector") || !j["selector"].is_object()) {
    config_fail("missing 'selector' object");
  }
  const auto& sel = j["selector"];
  const std::string stype = sel.at("type").get<std::string>();
  if (stype == "excess_mass") {
    cfg.selector.type = Selector::Type::excess_mass;
    cfg.selector.volume_draws = sel.value("volume_draws", std::size_t{0});
  } else if (stype == "stability") {
    cfg.selector.type = Selector::Type::stability;
    cfg.selector.rule =
        stability_rule_from_string(sel.value("rule", "modified"));
    cfg.selector.alpha = sel.value("alpha", 0.05);
    if (!(cfg.selector.alpha > 0.0 && cfg.selector.alpha < 1.0)) {
      config_fail("alpha must be in (0, 1)");
    }
  } else if (stype == "fixed") {
    cfg.selector.type = Selector::Type::fixed;
    cfg.selector.fixed_h = require_number(sel, "h");
    if (!(cfg.selector.fixed_h > 0.0)) config_fail("fixed h must be > 0");
  } else {
    config_fail("unknown selector type '" + stype + "'");
  }

  if (j.contains("rho")) {
    cfg.rho = j["rho"].get<double>();
    if (!(*cfg.rho > 0.0)) config_fail("rho must be > 0");
  }
  cfg.edge_factor = j.value("edge_factor", 2);
  if (cfg.edge_factor != 1 && cfg.edge_factor != 2) {
    config_fail("edge_factor must be 1 or 2");
  }

  if (j.contains("bootstrap")) {
    Bootstrap b;
    // sample_size 0 means "match the data size", resolved at run time
    b.sample_size = j["bootstrap"].value("sample_size", std::size_t{0});
    b.max_rejections =
        j["bootstrap"].value("max_rejections", std::size_t{10000});
    cfg.bootstrap = b;
  }
  if (j.contains("evaluation")) {
    Evaluation e;
    e.mc_draws = j["evaluation"].value("mc_draws", std::size_t{100000});
    cfg.evaluation = e;
    if (cfg.csv_path) config_fail("risk evaluation needs a synthetic source");
  }
  if (j.contains("noise_curve")) {
    const auto& nc = j["noise_curve"];
    NoiseCurveRequest req;
    req.lambda = require_number(nc, "lambda");
    if (nc.contains("eps_values")) {
      req.eps_grid = number_list(nc["eps_values"]);
    } else {
      const double lo = require_number(nc, "eps_min");
      const double hi = require_number(nc, "eps_max");
      const std::size_t count = nc.value("eps_count", std::size_t{8});
      if (!(lo > 0.0) || !(hi > lo) || count < 2) {
        config_fail("noise_curve eps range needs 0 < eps_min < eps_max");
      }
      for (std::size_t k = 0; k < count; ++k) {
        req.eps_grid.push_back(
            std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) *
                                        static_cast<double>(k) /
                                        static_cast<double>(count - 1)));
      }
    }
    req.mc_draws = nc.value("mc_draws", std::size_t{1000000});
    cfg.noise_curve = req;
    if (cfg.csv_path) config_fail("noise curve needs a synthetic source");
  }

  cfg.seed = j.value("seed", std::uint64_t{1});
  if (j.contains("output_dir")) {
    cfg.output_dir = j["output_dir"].get<std::string>();
  } else if (const char* env = std::getenv("CLUSTER_OUT_DIR")) {
    cfg.output_dir = env;
  } else {
    cfg.output_dir = "cluster-out";
  }
  return cfg;
}

ordered_json ExperimentConfig::echo() const {
  ordered_json j;
  ordered_json data;
  if (law) data["law"] = *law;
  if (spec) data["spec"] = spec_to_json(*spec);
  if (csv_path) {
    data["csv"] = *csv_path;
    data["has_labels"] = csv_has_labels;
    data["header"] = csv_header;
  }
  j["data"] = data;
  if (!csv_path) j["n"] = n;
  j["kernel"] = to_string(kernel);
  j["lambda"] = lambda;
  ordered_json g;
  switch (grid.type) {
    case Grid::Type::defaulted:
      g["type"] = "default";
      g["count"] = grid.count;
      break;
    case Grid::Type::log_range:
      g["type"] = "log";
      g["min"] = grid.min;
      g["max"] = grid.max;
      g["count"] = grid.count;
      break;
    case Grid::Type::explicit_list:
      g["type"] = "explicit";
      g["values"] = grid.values;
      break;
    case Grid::Type::adaptive:
      g["type"] = "adaptive";
      g["max_size"] = grid.max_size;
      break;
  }
  j["grid"] = g;
  ordered_json s;
  switch (selector.type) {
    case Selector::Type::excess_mass:
      s["type"] = "excess_mass";
      s["volume_draws"] = selector.volume_draws;
      break;
    case Selector::Type::stability:
      s["type"] = "stability";
      s["rule"] = to_string(selector.rule);
      s["alpha"] = selector.alpha;
      break;
    case Selector::Type::fixed:
      s["type"] = "fixed";
      s["h"] = selector.fixed_h;
      break;
  }
  j["selector"] = s;
  if (rho) j["rho"] = *rho;
  j["edge_factor"] = edge_factor;
  if (bootstrap) {
    j["bootstrap"] = {{"sample_size", bootstrap->sample_size},
                      {"max_rejections", bootstrap->max_rejections}};
  }
  if (evaluation) {
    j["evaluation"] = {{"mc_draws", evaluation->mc_draws}};
  }
  if (noise_curve) {
    j["noise_curve"] = {{"lambda", noise_curve->lambda},
                        {"eps_values", noise_curve->eps_grid},
                        {"mc_draws", noise_curve->mc_draws}};
  }
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  return j;
}

json preset_config(const std::string& name) {
  json j;
  if (name == "sharp-fig1") {
    j["data"] = {{"law", "sharp-fig1"}};
    j["n"] = 3000;
    j["kernel"] = "spherical";
    j["lambda"] = 0.04;
    j["selector"] = {{"type", "fixed"}, {"h", 0.04}};
    j["rho"] = 0.25;
    j["evaluation"] = {{"mc_draws", 20000}};
  } else if (name == "onedim-two-uniform") {
    j["data"] = {{"law", "two-uniform"}};
    j["n"] = 200;
    j["kernel"] = "spherical";
    j["lambda"] = 0.3;
    j["selector"] = {{"type", "stability"}, {"rule", "modified"},
                     {"alpha", 0.05}};
    j["rho"] = 0.25;
  } else if (name == "fuzzy-spiral") {
    j["data"] = {{"law", "fuzzy-spiral"}};
    j["n"] = 500;
    j["kernel"] = "spherical";
    j["lambda"] = 0.0;
    j["selector"] = {{"type", "excess_mass"}};
    j["rho"] = 0.4;
  } else if (name == "two-moons") {
    j["data"] = {{"law", "two-moons"}};
    j["n"] = 500;
    j["kernel"] = "spherical";
    j["lambda"] = 0.0;
    j["selector"] = {{"type", "excess_mass"}};
    j["rho"] = 0.15;
  } else if (name == "gaussian-noise") {
    // lambda = half the standard normal mode height
    const double lam = 0.19947114020071635;
    j["data"] = {{"law", "gaussian"}};
    j["n"] = 1000;
    j["kernel"] = "spherical";
    j["lambda"] = lam;
    j["selector"] = {{"type", "fixed"}, {"h", 0.2}};
    j["rho"] = 0.25;
    j["noise_curve"] = {{"lambda", lam},   {"eps_min", 1e-3},
                        {"eps_max", 3e-2}, {"eps_count", 8},
                        {"mc_draws", 1000000}};
  } else {
    throw ParseError("unknown preset '" + name + "'");
  }
  j["seed"] = 1;
  return j;
}

std::vector<std::string> preset_names() {
  return {"sharp-fig1", "onedim-two-uniform", "fuzzy-spiral", "two-moons",
          "gaussian-noise"};
}

namespace {

std::vector<double> build_grid(const ExperimentConfig& cfg,
                               const PointSet& ps) {
  using Grid = ExperimentConfig::Grid;
  switch (cfg.grid.type) {
    case Grid::Type::defaulted:
      return default_bandwidth_grid(ps, cfg.grid.count);
    case Grid::Type::log_range: {
      std::vector<double> grid;
      const double llo = std::log(cfg.grid.min), lhi = std::log(cfg.grid.max);
      for (std::size_t k = 0; k < cfg.grid.count; ++k) {
        grid.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(k) /
                                          static_cast<double>(cfg.grid.count - 1)));
      }
      return grid;
    }
    case Grid::Type::explicit_list:
      return cfg.grid.values;
    case Grid::Type::adaptive:
      return adaptive_grid(ps.size(), static_cast<int>(ps.dim),
                           cfg.grid.max_size)
          .bandwidths;
  }
  return {};
}

void write_excess_curve(const ExcessMassCurve& curve, const std::string& path) {
  std::string text = "h,excess_mass,defined\n";
  for (std::size_t j = 0; j < curve.grid.size(); ++j) {
    text += format_double(curve.grid[j]) + "," +
            format_double(curve.values[j]) + "," +
            (curve.defined[j] ? "1" : "0") + "\n";
  }
  write_text(path, text);
}

void write_instability_curve(const InstabilityCurve& curve,
                             const std::string& path) {
  std::string text = "h,xi\n";
  for (std::size_t j = 0; j < curve.grid.size(); ++j) {
    text += format_double(curve.grid[j]) + "," + format_double(curve.xi[j]) +
            "\n";
  }
  write_text(path, text);
}

void write_noise_curve(const NoiseCurve& curve, const std::string& path) {
  std::string text = "epsilon,prob\n";
  for (std::size_t j = 0; j < curve.epsilons.size(); ++j) {
    text += format_double(curve.epsilons[j]) + "," +
            format_double(curve.probs[j]) + "\n";
  }
  write_text(path, text);
}

void write_density_curve(const DensityEstimate& est, const std::string& path) {
  const PointSet& data = est.data();
  double lo = data.coords[0], hi = data.coords[0];
  for (double v : data.coords) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  lo -= est.bandwidth();
  hi += est.bandwidth();
  std::string text = "x,density\n";
  constexpr int kPoints = 512;
  for (int i = 0; i < kPoints; ++i) {
    const double x = lo + (hi - lo) * i / (kPoints - 1);
    const double v = est.evaluate(std::span<const double>(&x, 1));
    text += format_double(x) + "," + format_double(v) + "\n";
  }
  write_text(path, text);
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  const auto path_of = [&](const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
  };

  RunReport report;
  report.lambda = cfg.lambda;

  // data
  PointSet data;
  std::optional<SyntheticSpec> law;
  if (cfg.csv_path) {
    data = load_points(*cfg.csv_path, cfg.csv_has_labels, cfg.csv_header);
    if (data.size() == 0) config_fail("csv source '" + *cfg.csv_path +
                                      "' holds no points");
  } else {
    law = cfg.spec ? *cfg.spec : builtin_law(*cfg.law);
    data = generate(*law, cfg.n, cfg.seed);
  }
  save_points(data, path_of("points.csv"));
  report.artifacts["points"] = path_of("points.csv");

  // bandwidth selection
  const std::vector<double> grid = build_grid(cfg, data);
  double selected_h = 0.0;
  ordered_json selector_summary;
  using Selector = ExperimentConfig::Selector;
  if (cfg.selector.type == Selector::Type::fixed) {
    selected_h = cfg.selector.fixed_h;
    selector_summary["type"] = "fixed";
    selector_summary["h"] = selected_h;
  } else if (cfg.selector.type == Selector::Type::excess_mass) {
    const std::size_t draws = cfg.selector.volume_draws > 0
                                  ? cfg.selector.volume_draws
                                  : default_volume_draws(data.size());
    const ExcessMassCurve curve = select_bandwidth_excess_mass(
        data, cfg.kernel, grid, cfg.lambda, draws,
        substream_seed(cfg.seed, 101));
    write_excess_curve(curve, path_of("excess_mass_curve.csv"));
    report.artifacts["excess_mass_curve"] = path_of("excess_mass_curve.csv");
    selector_summary["type"] = "excess_mass";
    selector_summary["volume_draws"] = draws;
    if (!curve.selected) throw SelectionError(*curve.error);
    selected_h = *curve.selected;
    selector_summary["selected_h"] = selected_h;
  } else {
    InstabilityCurve curve = instability_curve(
        data, cfg.kernel, grid, cfg.lambda, substream_seed(cfg.seed, 102));
    curve = select_bandwidth_stability(std::move(curve), cfg.selector.alpha,
                                       cfg.selector.rule);
    write_instability_curve(curve, path_of("instability_curve.csv"));
    report.artifacts["instability_curve"] = path_of("instability_curve.csv");
    selector_summary["type"] = "stability";
    selector_summary["rule"] = to_string(cfg.selector.rule);
    selector_summary["alpha"] = cfg.selector.alpha;
    if (curve.h0) selector_summary["h0"] = *curve.h0;
    if (!curve.selected) throw SelectionError(*curve.error);
    selected_h = *curve.selected;
    selector_summary["selected_h"] = selected_h;
  }
  report.selected_h = selected_h;

  // fit on the full sample and cluster
  const KernelSpec kspec =
      KernelSpec::make(cfg.kernel, static_cast<int>(data.dim));
  const DensityEstimate est = DensityEstimate::fit(data, kspec, selected_h);
  const double rho = cfg.rho ? *cfg.rho : selected_h;
  report.rho = rho;
  const Clustering clusters =
      extract_clusters(est, cfg.lambda, rho, cfg.edge_factor);
  report.k_hat = clusters.k_hat();
  save_labels(clusters, path_of("labels.csv"));
  report.artifacts["labels"] = path_of("labels.csv");

  if (data.dim == 1) {
    write_density_curve(est, path_of("density_curve.csv"));
    report.artifacts["density_curve"] = path_of("density_curve.csv");
  }

  if (cfg.bootstrap) {
    BootstrapRequest req;
    req.sample_size = cfg.bootstrap->sample_size;
    req.lambda = cfg.lambda;
    req.rho = rho;
    req.edge_factor = cfg.edge_factor;
    req.seed = substream_seed(cfg.seed, 103);
    req.max_rejections = cfg.bootstrap->max_rejections;
    report.bootstrap_k_hat = bootstrap_clusters(est, req).k_hat();
  }

  if (cfg.evaluation) {
    report.risks = evaluate_risks(*law, est, cfg.lambda, data,
                                  cfg.evaluation->mc_draws,
                                  substream_seed(cfg.seed, 104));
  }

  if (cfg.noise_curve) {
    report.noise = noise_exponent_curve(
        *law, cfg.noise_curve->lambda, cfg.noise_curve->eps_grid,
        cfg.noise_curve->mc_draws, substream_seed(cfg.seed, 105));
    write_noise_curve(*report.noise, path_of("noise_curve.csv"));
    report.artifacts["noise_curve"] = path_of("noise_curve.csv");
  }

  // summary (timings go to a separate file so the rest is reproducible)
  ordered_json summary;
  summary["selected_h"] = report.selected_h;
  summary["k_hat"] = report.k_hat;
  summary["lambda"] = cfg.lambda;
  summary["rho"] = rho;
  summary["edge_factor"] = cfg.edge_factor;
  summary["kernel"] = to_string(cfg.kernel);
  summary["seed"] = cfg.seed;
  summary["selector"] = selector_summary;
  summary["grid"] = grid;
  if (report.bootstrap_k_hat) {
    summary["bootstrap_k_hat"] = *report.bootstrap_k_hat;
  }
  if (report.risks) {
    summary["risks"] = {
        {"level_set_risk", report.risks->level_set_risk},
        {"excess_mass_true", report.risks->excess_mass_true},
        {"excess_mass_estimated", report.risks->excess_mass_estimated},
        {"excess_mass_risk", report.risks->excess_mass_risk},
        {"misassignment_fraction", report.risks->misassignment_fraction},
        {"mc_draws", report.risks->mc_draws}};
  }
  if (report.noise) {
    summary["noise_curve"] = {
        {"lambda", report.noise->lambda},
        {"fitted_gamma", report.noise->fitted_gamma
                             ? ordered_json(*report.noise->fitted_gamma)
                             : ordered_json("infinity")}};
  }
  ordered_json artifacts;
  for (const auto& [name, path] : report.artifacts) artifacts[name] = path;
  summary["artifacts"] = artifacts;
  summary["config"] = cfg.echo();
  report.summary = summary;
  write_text(path_of("summary.json"), summary.dump(2) + "\n");
  report.artifacts["summary"] = path_of("summary.json");

  const auto t_end = std::chrono::steady_clock::now();
  report.wall_seconds =
      std::chrono::duration<double>(t_end - t_start).count();
  ordered_json timings;
  timings["wall_seconds"] = report.wall_seconds;
  write_text(path_of("timings.json"), timings.dump(2) + "\n");
  return report;
}

}  // namespace levelset
