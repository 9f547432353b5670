// Experiment configuration files and built-in presets.
//
// A config file holds one YAML document per experiment. Scalar keys:
//   experiment_id, manifold (sphere|stiefel), d, n, p, m, distance,
//   distance_pi, seed, tol, max_iters, newton_max_iters, shooting_max_iters,
//   init (chord|perturbed), sigma, init_seed, jacobian, inner_tol,
//   output_dir, timing
// plus `methods` (list). Any of d, n, p, m, distance, distance_pi and seed
// may be a list, in which case the document expands to the cartesian
// product and every run gets a suffixed experiment_id.

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "geoschwarz/bench.hpp"

namespace geoschwarz {

namespace {

constexpr double kPi = std::numbers::pi;

const std::set<std::string> kKnownKeys{
    "experiment_id", "manifold",  "d",          "n",
    "p",             "m",         "distance",   "distance_pi",
    "seed",          "tol",       "max_iters",  "newton_max_iters",
    "shooting_max_iters", "init", "sigma",      "init_seed",
    "jacobian",      "inner_tol", "output_dir", "timing",
    "methods"};

const std::vector<std::string> kSweepKeys{"d", "n", "p", "m", "distance",
                                          "distance_pi", "seed"};

JacobianMode parse_jacobian(const std::string& s) {
  if (s == "dense_analytic") return JacobianMode::dense_analytic;
  if (s == "dense_fd") return JacobianMode::dense_fd;
  if (s == "matrix_free") return JacobianMode::matrix_free;
  throw std::invalid_argument("unknown jacobian mode '" + s + "'");
}

std::string suffix_for(const std::string& key, const YAML::Node& value) {
  const std::string v = value.as<std::string>();
  if (key == "distance_pi") return "_dist" + v + "pi";
  if (key == "distance") return "_dist" + v;
  return "_" + key + v;
}

ExperimentConfig from_flat(const YAML::Node& doc) {
  ExperimentConfig cfg;
  for (const auto& kv : doc) {
    const auto key = kv.first.as<std::string>();
    if (!kKnownKeys.count(key))
      throw std::invalid_argument("unknown config key '" + key + "'");
  }
  if (doc["experiment_id"]) cfg.experiment_id = doc["experiment_id"].as<std::string>();
  const std::string kind =
      doc["manifold"] ? doc["manifold"].as<std::string>() : "sphere";
  if (kind == "sphere") {
    cfg.manifold = ManifoldSpec::sphere(doc["d"] ? doc["d"].as<int>() : 3);
  } else if (kind == "stiefel") {
    cfg.manifold = ManifoldSpec::stiefel(doc["n"] ? doc["n"].as<int>() : 3,
                                         doc["p"] ? doc["p"].as<int>() : 1);
  } else {
    throw std::invalid_argument("unknown manifold '" + kind + "'");
  }
  if (doc["m"]) cfg.m = doc["m"].as<int>();
  if (doc["distance"] && doc["distance_pi"])
    throw std::invalid_argument("give either distance or distance_pi");
  if (doc["distance"]) cfg.distance = doc["distance"].as<double>();
  if (doc["distance_pi"]) cfg.distance = doc["distance_pi"].as<double>() * kPi;
  if (doc["seed"]) cfg.seed = doc["seed"].as<std::uint64_t>();
  if (doc["tol"]) cfg.tol = doc["tol"].as<double>();
  if (doc["max_iters"]) cfg.max_iters = doc["max_iters"].as<int>();
  if (doc["newton_max_iters"]) cfg.newton_max_iters = doc["newton_max_iters"].as<int>();
  if (doc["shooting_max_iters"])
    cfg.shooting_max_iters = doc["shooting_max_iters"].as<int>();
  const std::string init = doc["init"] ? doc["init"].as<std::string>() : "chord";
  if (init == "chord") {
    cfg.init = InitMode::chord();
  } else if (init == "perturbed") {
    const double sigma = doc["sigma"] ? doc["sigma"].as<double>() : 0.1;
    const std::uint64_t seed = doc["init_seed"]
                                   ? doc["init_seed"].as<std::uint64_t>()
                                   : cfg.seed + 1;
    cfg.init = InitMode::perturbed(sigma, seed);
  } else {
    throw std::invalid_argument("unknown init mode '" + init + "'");
  }
  if (doc["jacobian"]) cfg.jacobian = parse_jacobian(doc["jacobian"].as<std::string>());
  if (doc["inner_tol"]) cfg.inner_tol = doc["inner_tol"].as<double>();
  if (doc["output_dir"]) cfg.output_dir = doc["output_dir"].as<std::string>();
  if (doc["timing"]) cfg.record_timing = doc["timing"].as<bool>();
  if (doc["methods"]) {
    cfg.methods.clear();
    for (const auto& m : doc["methods"])
      cfg.methods.push_back(parse_method(m.as<std::string>()));
  }
  cfg.validate();
  return cfg;
}

void expand(const YAML::Node& doc, std::size_t key_index,
            const std::string& suffix, std::vector<ExperimentConfig>& out) {
  if (key_index == kSweepKeys.size()) {
    ExperimentConfig cfg = from_flat(doc);
    cfg.experiment_id += suffix;
    out.push_back(std::move(cfg));
    return;
  }
  const std::string& key = kSweepKeys[key_index];
  const YAML::Node node = doc[key];
  if (!node || !node.IsSequence()) {
    expand(doc, key_index + 1, suffix, out);
    return;
  }
  for (const auto& value : node) {
    YAML::Node copy = YAML::Clone(doc);
    copy[key] = YAML::Clone(value);
    expand(copy, key_index + 1, suffix + suffix_for(key, value), out);
  }
}

std::vector<ExperimentConfig> sweep(ExperimentConfig base,
                                    const std::string& key,
                                    const std::vector<double>& values) {
  std::vector<ExperimentConfig> out;
  const std::string base_id = base.experiment_id;
  for (double v : values) {
    ExperimentConfig cfg = base;
    std::ostringstream id;
    id << base_id;
    if (key == "distance_pi") {
      cfg.distance = v * kPi;
      id << "_dist" << v << "pi";
    } else if (key == "m") {
      cfg.m = int(v);
      id << "_m" << int(v);
    } else if (key == "p") {
      cfg.manifold.p = int(v);
      id << "_p" << int(v);
    }
    cfg.experiment_id = id.str();
    out.push_back(cfg);
  }
  return out;
}

}  // namespace

std::vector<ExperimentConfig> parse_config_text(const std::string& text) {
  std::vector<ExperimentConfig> out;
  try {
    for (const YAML::Node& doc : YAML::LoadAll(text)) {
      if (!doc || doc.IsNull()) continue;
      if (!doc.IsMap())
        throw std::invalid_argument("each config document must be a mapping");
      expand(doc, 0, "", out);
    }
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (out.empty()) throw std::invalid_argument("config: no experiments found");
  return out;
}

std::vector<ExperimentConfig> load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::vector<ExperimentConfig> preset(const std::string& name) {
  ExperimentConfig base;
  base.seed = 1;
  base.init = InitMode::perturbed(0.1, base.seed + 1);
  if (name == "fig2") {
    base.experiment_id = "fig2";
    base.manifold = ManifoldSpec::sphere(100);
    base.m = 4;
    base.methods = {Method::leapfrog_gs, Method::newton_schwarz};
    return sweep(base, "distance_pi", {0.1, 0.5, 0.9});
  }
  if (name == "fig3") {
    base.experiment_id = "fig3";
    base.manifold = ManifoldSpec::sphere(100);
    base.distance = 0.9 * kPi;
    base.methods = {Method::leapfrog_gs, Method::newton_schwarz};
    return sweep(base, "m", {4, 7, 10});
  }
  if (name == "fig4" || name == "fig4-desk") {
    const bool desk = name == "fig4-desk";
    base.experiment_id = desk ? "fig4desk" : "fig4";
    base.manifold = ManifoldSpec::stiefel(desk ? 40 : 100, 2);
    base.m = 4;
    base.distance = 0.8 * kPi;
    base.init = InitMode::chord();
    base.methods = {Method::leapfrog_gs, Method::global_shooting,
                    Method::newton_schwarz};
    return desk ? sweep(base, "p", {2, 6, 12}) : sweep(base, "p", {2, 12, 22});
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace geoschwarz
