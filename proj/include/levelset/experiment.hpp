#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levelset/bootstrap.hpp"
#include "levelset/cluster_graph.hpp"
#include "levelset/evaluation.hpp"
#include "levelset/excess_mass.hpp"
#include "levelset/stability.hpp"
#include "levelset/synthetic.hpp"

namespace levelset {

/// A fully resolved experiment: one data source, one bandwidth
/// selector, optional bootstrap / risk evaluation / noise-curve
/// add-ons. Built from a JSON document; every default is materialized
/// so the config echo in the report is complete.
struct ExperimentConfig {
  // data source: exactly one of law/spec/csv
  std::optional<std::string> law;
  std::optional<SyntheticSpec> spec;
  std::optional<std::string> csv_path;
  bool csv_has_labels = false;
  bool csv_header = false;
  std::size_t n = 0;  // synthetic sample size

  KernelKind kernel = KernelKind::spherical;
  double lambda = 0.0;

  struct Grid {
    enum class Type { defaulted, log_range, explicit_list, adaptive } type =
        Type::defaulted;
    std::size_t count = 40;
    double min = 0.0, max = 0.0;
    std::vector<double> values;
    std::size_t max_size = 200;
  } grid;

  struct Selector {
    enum class Type { excess_mass, stability, fixed } type = Type::excess_mass;
    StabilityRule rule = StabilityRule::modified;
    double alpha = 0.05;
    std::size_t volume_draws = 0;  // 0 = min(n^2, 1e6)
    double fixed_h = 0.0;
  } selector;

  std::optional<double> rho;  // default: the selected bandwidth
  int edge_factor = 2;

  struct Bootstrap {
    std::size_t sample_size = 0;
    std::size_t max_rejections = 10000;
  };
  std::optional<Bootstrap> bootstrap;

  struct Evaluation {
    std::size_t mc_draws = 100000;
  };
  std::optional<Evaluation> evaluation;

  struct NoiseCurveRequest {
    double lambda = 0.0;
    std::vector<double> eps_grid;
    std::size_t mc_draws = 1000000;
  };
  std::optional<NoiseCurveRequest> noise_curve;

  std::uint64_t seed = 1;
  std::string output_dir;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::ordered_json echo() const;
};

/// Parses a SyntheticSpec from its JSON form and back.
SyntheticSpec spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json spec_to_json(const SyntheticSpec& spec);

/// Named experiment configurations reproducing the reference figures.
nlohmann::json preset_config(const std::string& name);
std::vector<std::string> preset_names();

struct RunReport {
  double selected_h = 0.0;
  std::size_t k_hat = 0;
  double lambda = 0.0;
  double rho = 0.0;
  std::optional<std::size_t> bootstrap_k_hat;
  std::optional<RiskReport> risks;
  std::optional<NoiseCurve> noise;
  std::map<std::string, std::string> artifacts;  // name -> path
  nlohmann::ordered_json summary;
  double wall_seconds = 0.0;
};

/// Runs generate/load -> select bandwidth -> refit on the full sample ->
/// cluster -> optional bootstrap/evaluation, writing plot-ready CSV and
/// JSON artifacts into config.output_dir. Artifacts are byte-identical
/// across runs with the same config and seed; timings go to a separate
/// file excluded from that guarantee.
RunReport run_experiment(const ExperimentConfig& config);

}  // namespace levelset
