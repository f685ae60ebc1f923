#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "levelset/errors.hpp"
#include "levelset/experiment.hpp"

using namespace levelset;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json minimal_config(const std::string& out_dir) {
  json j;
  j["data"] = {{"law", "two-uniform"}};
  j["n"] = 120;
  j["kernel"] = "spherical";
  j["lambda"] = 0.0;
  j["selector"] = {{"type", "stability"}, {"rule", "original"},
                   {"alpha", 0.05}};
  j["rho"] = 0.25;
  j["seed"] = 7;
  j["output_dir"] = out_dir;
  return j;
}

}  // namespace

TEST_CASE("config validation rejects malformed documents") {
  json j;
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ParseError);  // no data

  j = minimal_config("/tmp/levelset_cfg");
  j["data"] = {{"law", "two-uniform"}, {"csv", "x.csv"}};  // two sources
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ParseError);

  j = minimal_config("/tmp/levelset_cfg");
  j["data"] = {{"law", "no-such-law"}};
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);

  j = minimal_config("/tmp/levelset_cfg");
  j.erase("selector");
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ParseError);

  j = minimal_config("/tmp/levelset_cfg");
  j["selector"] = {{"type", "fixed"}};  // missing h
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ParseError);

  j = minimal_config("/tmp/levelset_cfg");
  j["lambda"] = -0.5;
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), ParseError);

  CHECK_THROWS_AS(preset_config("unknown-preset"), ParseError);
}

TEST_CASE("spec JSON round-trips") {
  const auto spec = fuzzy_stick_spiral_law();
  const auto j = spec_to_json(spec);
  const auto back = spec_from_json(j);
  CHECK(back.dim == spec.dim);
  REQUIRE(back.components.size() == spec.components.size());
  CHECK(spec_to_json(back) == j);
}

TEST_CASE("two-uniform stability run recovers two clusters") {
  const std::string out = "/tmp/levelset_run_a";
  std::filesystem::remove_all(out);
  const auto cfg = ExperimentConfig::from_json(minimal_config(out));
  const auto report = run_experiment(cfg);
  CHECK(report.k_hat == 2);
  CHECK(report.selected_h > 0.0);
  for (const auto& name :
       {"points", "labels", "instability_curve", "density_curve", "summary"}) {
    REQUIRE(report.artifacts.count(name) == 1);
    CHECK(std::filesystem::exists(report.artifacts.at(name)));
  }
  // config echo keeps the materialized defaults
  CHECK(report.summary["config"]["edge_factor"] == 2);
  CHECK(report.summary["config"]["grid"]["type"] == "default");
  std::filesystem::remove_all(out);
}

TEST_CASE("artifacts are byte-identical across reruns") {
  const std::string out_a = "/tmp/levelset_run_b1";
  const std::string out_b = "/tmp/levelset_run_b2";
  std::filesystem::remove_all(out_a);
  std::filesystem::remove_all(out_b);

  json j = minimal_config(out_a);
  j["lambda"] = 0.3;
  j["selector"] = {{"type", "excess_mass"}, {"volume_draws", 2000}};
  j["bootstrap"] = {{"sample_size", 200}};
  j["evaluation"] = {{"mc_draws", 5000}};
  const auto report_a = run_experiment(ExperimentConfig::from_json(j));
  j["output_dir"] = out_b;
  const auto report_b = run_experiment(ExperimentConfig::from_json(j));

  CHECK(report_a.k_hat == report_b.k_hat);
  CHECK(report_a.selected_h == report_b.selected_h);
  for (const auto& [name, path_a] : report_a.artifacts) {
    const auto path_b = report_b.artifacts.at(name);
    const auto text_a = read_file(path_a);
    INFO("artifact ", name);
    CHECK(text_a.size() > 0);
    if (name == "summary") {
      // identical except for the differing output_dir echo
      auto sa = json::parse(text_a);
      auto sb = json::parse(read_file(path_b));
      sa["config"].erase("output_dir");
      sb["config"].erase("output_dir");
      for (auto& [k, v] : sa["artifacts"].items()) (void)k, (void)v;
      sa.erase("artifacts");
      sb.erase("artifacts");
      CHECK(sa == sb);
    } else {
      CHECK(text_a == read_file(path_b));
    }
  }
  std::filesystem::remove_all(out_a);
  std::filesystem::remove_all(out_b);
}

TEST_CASE("csv sources round-trip through gen-style output") {
  const std::string out = "/tmp/levelset_run_csv";
  const std::string csv = "/tmp/levelset_gen.csv";
  std::filesystem::remove_all(out);
  const auto sample = generate(two_uniform_law(), 150, 3);
  save_points(sample, csv);

  json j = minimal_config(out);
  j["data"] = {{"csv", csv}, {"has_labels", true}};
  j.erase("n");
  const auto report = run_experiment(ExperimentConfig::from_json(j));
  CHECK(report.k_hat == 2);
  std::filesystem::remove_all(out);
  std::filesystem::remove(csv);
}

TEST_CASE("selector failure surfaces as SelectionError") {
  const std::string out = "/tmp/levelset_run_fail";
  std::filesystem::remove_all(out);
  json j = minimal_config(out);
  j["lambda"] = 50.0;  // far above any estimated density
  j["selector"] = {{"type", "excess_mass"}, {"volume_draws", 200}};
  CHECK_THROWS_AS(run_experiment(ExperimentConfig::from_json(j)),
                  SelectionError);
  // the curve artifact is still written for inspection
  CHECK(std::filesystem::exists(out + "/excess_mass_curve.csv"));
  std::filesystem::remove_all(out);
}

TEST_CASE("presets resolve and carry their documented shapes") {
  for (const auto& name : preset_names()) {
    const auto cfg = ExperimentConfig::from_json(preset_config(name));
    CHECK((cfg.law.has_value() || cfg.spec.has_value()));
  }
  const auto fig1 = ExperimentConfig::from_json(preset_config("sharp-fig1"));
  CHECK(fig1.lambda == 0.04);
  CHECK(fig1.selector.type == ExperimentConfig::Selector::Type::fixed);
  CHECK(fig1.selector.fixed_h == 0.04);
  CHECK(*fig1.rho == 0.25);
  CHECK(fig1.n == 3000);
}

TEST_CASE("gaussian-noise preset emits the noise curve artifacts") {
  const std::string out = "/tmp/levelset_run_noise";
  std::filesystem::remove_all(out);
  json j = preset_config("gaussian-noise");
  j["n"] = 400;
  j["noise_curve"]["mc_draws"] = 50000;
  j["output_dir"] = out;
  const auto report = run_experiment(ExperimentConfig::from_json(j));
  REQUIRE(report.noise.has_value());
  REQUIRE(report.noise->fitted_gamma.has_value());
  CHECK(*report.noise->fitted_gamma > 0.5);
  CHECK(*report.noise->fitted_gamma < 1.5);
  CHECK(std::filesystem::exists(out + "/noise_curve.csv"));
  std::filesystem::remove_all(out);
}
