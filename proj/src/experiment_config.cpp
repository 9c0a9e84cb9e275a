#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ttroute/experiments.hpp"

namespace ttroute {
namespace {

using nlohmann::json;

std::optional<double> snr_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("snr_db must be a number, \"inf\" or null");
  }
  return j.get<double>();
}

json snr_to_json(const std::optional<double>& snr) {
  if (!snr) return nullptr;
  if (std::isinf(*snr)) return "inf";
  return *snr;
}

template <typename T>
void read_if(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void read_world(const json& j, WorldParams& w) {
  read_if(j, "nominal_speed", w.nominal_speed);
  read_if(j, "discharge_per_second", w.discharge_per_second);
  read_if(j, "noise_cv", w.noise_cv);
  if (j.contains("battery")) {
    const json& b = j.at("battery");
    read_if(b, "beta", w.battery.beta);
    read_if(b, "exponent", w.battery.exponent);
    read_if(b, "hump_enabled", w.battery.hump_enabled);
    read_if(b, "hump_height", w.battery.hump_height);
    read_if(b, "hump_center", w.battery.hump_center);
    read_if(b, "hump_width", w.battery.hump_width);
  }
  if (j.contains("roughness")) {
    const json& r = j.at("roughness");
    read_if(r, "smooth", w.roughness.smooth);
    read_if(r, "light", w.roughness.light);
    read_if(r, "moderate", w.roughness.moderate);
    read_if(r, "heavy", w.roughness.heavy);
  }
}

json world_to_json(const WorldParams& w) {
  return {{"nominal_speed", w.nominal_speed},
          {"discharge_per_second", w.discharge_per_second},
          {"noise_cv", w.noise_cv},
          {"battery",
           {{"beta", w.battery.beta},
            {"exponent", w.battery.exponent},
            {"hump_enabled", w.battery.hump_enabled},
            {"hump_height", w.battery.hump_height},
            {"hump_center", w.battery.hump_center},
            {"hump_width", w.battery.hump_width}}},
          {"roughness",
           {{"smooth", w.roughness.smooth},
            {"light", w.roughness.light},
            {"moderate", w.roughness.moderate},
            {"heavy", w.roughness.heavy}}}};
}

}  // namespace

void ExperimentConfig::validate_runnable() const {
  if (providers.empty()) throw std::invalid_argument("at least one provider is required");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (regression_no < 2) throw std::invalid_argument("regression_no must be >= 2");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (legacy_repeats < 1) throw std::invalid_argument("legacy_repeats must be >= 1");
  for (const auto& [s, d] : od_list) {
    if (s == d) throw std::invalid_argument("od pairs must join distinct nodes");
  }
  world.validate();
  static_kf.p0 >= 0.0 ? void() : throw std::invalid_argument("static p0 must be >= 0");
  DynamicKfConfig dyn = dynamic_kf;
  dyn.regression_no = regression_no;
  dyn.validate();
}

void ExperimentConfig::validate() const {
  validate_runnable();
  constexpr int kRepetitions[] = {20, 40, 60, 80};
  if (std::find(std::begin(kRepetitions), std::end(kRepetitions), repetitions) == std::end(kRepetitions)) {
    throw std::invalid_argument("repetitions must be one of 20, 40, 60, 80");
  }
  if (regression_no < 2 || regression_no > 9) throw std::invalid_argument("regression_no must be in [2, 9]");
  if (snr_db) {
    const double v = *snr_db;
    if (!(std::isinf(v) && v > 0) && v != 10.0 && v != 25.0 && v != 50.0) {
      throw std::invalid_argument("snr_db must be one of 10, 25, 50, inf");
    }
  }
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");

  static const std::set<std::string> kKeys = {"map",     "providers",  "repetitions", "regression_no", "snr_db",
                                              "seeds",   "od_pairs",   "scenario",    "world",         "static_kf",
                                              "dynamic_kf", "legacy_repeats", "threads"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  }

  ExperimentConfig cfg;
  try {
    if (doc.contains("map")) {
      const json& m = doc.at("map");
      cfg.map = m.is_number() ? std::to_string(m.get<int>()) : m.get<std::string>();
    }
    if (doc.contains("providers")) {
      cfg.providers.clear();
      for (const json& p : doc.at("providers")) cfg.providers.push_back(parse_provider_kind(p.get<std::string>()));
    }
    read_if(doc, "repetitions", cfg.repetitions);
    read_if(doc, "regression_no", cfg.regression_no);
    if (doc.contains("snr_db")) cfg.snr_db = snr_from_json(doc.at("snr_db"));
    read_if(doc, "seeds", cfg.seeds);
    if (doc.contains("od_pairs")) {
      for (const json& pair : doc.at("od_pairs")) {
        cfg.od_list.emplace_back(pair.at(0).get<NodeId>(), pair.at(1).get<NodeId>());
      }
    }
    if (doc.contains("scenario")) cfg.scenario = parse_scenario_kind(doc.at("scenario").get<std::string>());
    if (doc.contains("world")) read_world(doc.at("world"), cfg.world);
    if (doc.contains("static_kf")) {
      const json& s = doc.at("static_kf");
      read_if(s, "p0", cfg.static_kf.p0);
      read_if(s, "sigma2_omega", cfg.static_kf.sigma2_omega);
      read_if(s, "sigma2_eta", cfg.static_kf.sigma2_eta);
    }
    if (doc.contains("dynamic_kf")) {
      const json& d = doc.at("dynamic_kf");
      read_if(d, "phi", cfg.dynamic_kf.phi);
      read_if(d, "coef_mean", cfg.dynamic_kf.coef_mean);
      read_if(d, "coef_variance", cfg.dynamic_kf.coef_variance);
      read_if(d, "xi_mean", cfg.dynamic_kf.xi_mean);
      read_if(d, "xi_variance", cfg.dynamic_kf.xi_variance);
      read_if(d, "q_scale", cfg.dynamic_kf.q_scale);
      read_if(d, "r_scale", cfg.dynamic_kf.r_scale);
      read_if(d, "p0_xi", cfg.dynamic_kf.p0_xi);
      read_if(d, "p0_x", cfg.dynamic_kf.p0_x);
    }
    read_if(doc, "legacy_repeats", cfg.legacy_repeats);
    read_if(doc, "threads", cfg.threads);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config does not match the schema: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

std::string serialize_experiment_config(const ExperimentConfig& cfg) {
  json providers = json::array();
  for (ProviderKind p : cfg.providers) providers.push_back(std::string(to_string(p)));
  json od = json::array();
  for (const auto& [s, d] : cfg.od_list) od.push_back({s, d});
  json doc = {{"map", cfg.map},
              {"providers", providers},
              {"repetitions", cfg.repetitions},
              {"regression_no", cfg.regression_no},
              {"snr_db", snr_to_json(cfg.snr_db)},
              {"seeds", cfg.seeds},
              {"od_pairs", od},
              {"scenario", std::string(to_string(cfg.scenario))},
              {"world", world_to_json(cfg.world)},
              {"static_kf",
               {{"p0", cfg.static_kf.p0},
                {"sigma2_omega", cfg.static_kf.sigma2_omega},
                {"sigma2_eta", cfg.static_kf.sigma2_eta}}},
              {"dynamic_kf",
               {{"phi", cfg.dynamic_kf.phi},
                {"coef_mean", cfg.dynamic_kf.coef_mean},
                {"coef_variance", cfg.dynamic_kf.coef_variance},
                {"xi_mean", cfg.dynamic_kf.xi_mean},
                {"xi_variance", cfg.dynamic_kf.xi_variance},
                {"q_scale", cfg.dynamic_kf.q_scale},
                {"r_scale", cfg.dynamic_kf.r_scale},
                {"p0_xi", cfg.dynamic_kf.p0_xi},
                {"p0_x", cfg.dynamic_kf.p0_x}}},
              {"legacy_repeats", cfg.legacy_repeats},
              {"threads", cfg.threads}};
  return doc.dump(2) + "\n";
}

TopologyMap resolve_map(const std::string& selector) {
  if (selector == "1" || selector == "2" || selector == "3") return representative_map(std::stoi(selector));
  return load_map(selector);
}

}  // namespace ttroute
