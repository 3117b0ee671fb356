// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include <json.hpp>

#include "errors.hpp"

namespace nearfocus {

using nlohmann::json;

Figure figure_from_name(const std::string& name) {
  if (name == "run") return Figure::kRun;
  if (name == "fig1") return Figure::kFig1;
  if (name == "fig2") return Figure::kFig2;
  if (name == "fig3") return Figure::kFig3;
  if (name == "fig4") return Figure::kFig4;
  if (name == "fig5") return Figure::kFig5;
  throw ConfigError("unknown figure: " + name + " (expected fig1..fig5 or run)");
}

std::string figure_name(Figure figure) {
  switch (figure) {
    case Figure::kRun: return "run";
    case Figure::kFig1: return "fig1";
    case Figure::kFig2: return "fig2";
    case Figure::kFig3: return "fig3";
    case Figure::kFig4: return "fig4";
    case Figure::kFig5: return "fig5";
  }
  throw ConfigError("unknown figure id");
}

ScenarioConfig figure_preset(Figure figure) {
  ScenarioConfig config;
  switch (figure) {
    case Figure::kRun:
      config.trials = 10;
      break;
    case Figure::kFig1:
      config.antenna_count = 2;
      config.spacing_lambda = 9.0;
      config.users = {{0.1, 0.0}};
      config.cluster_count = 0;
      config.trials = 10000;
      break;
    case Figure::kFig2:
      config.antenna_count = 128;
      config.spacing_lambda = 0.5;
      config.users = {{0.1, 0.0}};
      config.cluster_count = 0;
      config.trials = 500;
      break;
    case Figure::kFig3:
      config.antenna_count = 3;
      config.spacing_lambda = 9.0;
      config.users = {{0.25, 0.0}, {0.5, 0.0}};
      config.cluster_count = 0;
      config.trials = 20;
      break;
    case Figure::kFig4:
      config.trials = 50;
      break;
    case Figure::kFig5:
      config.noise_mode = NoiseMode::kPhysical;
      config.trials = 50;
      break;
  }
  return config;
}

namespace {

void require_keys(const json& object, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!object.is_object()) {
    throw ConfigError("config: " + where + " must be a JSON object");
  }
  for (const auto& item : object.items()) {
    if (allowed.find(item.key()) == allowed.end()) {
      throw ConfigError("config: unknown key \"" + item.key() + "\" in " + where);
    }
  }
}

double get_number(const json& object, const char* key, double fallback) {
  if (!object.contains(key)) {
    return fallback;
  }
  if (!object[key].is_number()) {
    throw ConfigError(std::string("config: ") + key + " must be a number");
  }
  return object[key].get<double>();
}

std::vector<double> get_number_list(const json& object, const char* key,
                                    std::vector<double> fallback) {
  if (!object.contains(key)) {
    return fallback;
  }
  if (!object[key].is_array() || object[key].empty()) {
    throw ConfigError(std::string("config: ") + key + " must be a non-empty array");
  }
  std::vector<double> out;
  for (const auto& v : object[key]) {
    if (!v.is_number()) {
      throw ConfigError(std::string("config: ") + key + " entries must be numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

bool get_bool(const json& object, const char* key, bool fallback) {
  if (!object.contains(key)) {
    return fallback;
  }
  if (!object[key].is_boolean()) {
    throw ConfigError(std::string("config: ") + key + " must be a boolean");
  }
  return object[key].get<bool>();
}

}  // namespace

void apply_json_overrides(ScenarioConfig& config, const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  require_keys(root,
               {"carrier_fc_hz", "antennas", "users", "snr_db", "power_dbm", "clusters",
                "coherence", "bandwidth_fraction_of_fc", "noise", "pilot_fraction",
                "loc_pilot_fraction", "music", "trials", "seed", "threads", "strategies",
                "fig1", "fig2", "fig3", "fig4", "fig5"},
               "top level");

  config.carrier_fc_hz = get_number(root, "carrier_fc_hz", config.carrier_fc_hz);
  if (root.contains("antennas")) {
    const json& a = root["antennas"];
    require_keys(a, {"count", "spacing_lambda"}, "antennas");
    config.antenna_count = static_cast<int>(get_number(a, "count", config.antenna_count));
    config.spacing_lambda = get_number(a, "spacing_lambda", config.spacing_lambda);
  }
  if (root.contains("users")) {
    if (!root["users"].is_array() || root["users"].empty()) {
      throw ConfigError("config: users must be a non-empty array");
    }
    config.users.clear();
    for (const auto& u : root["users"]) {
      require_keys(u, {"r_fraction_of_fraunhofer", "theta_deg"}, "users entry");
      UserSpec spec;
      spec.r_fraction_of_fraunhofer = get_number(u, "r_fraction_of_fraunhofer", 0.5);
      spec.theta_deg = get_number(u, "theta_deg", 0.0);
      config.users.push_back(spec);
    }
  }
  config.snr_db = get_number(root, "snr_db", config.snr_db);
  config.power_dbm = get_number(root, "power_dbm", config.power_dbm);
  if (root.contains("clusters")) {
    const json& c = root["clusters"];
    require_keys(c, {"count", "freeze"}, "clusters");
    config.cluster_count = static_cast<int>(get_number(c, "count", config.cluster_count));
    config.freeze_clusters = get_bool(c, "freeze", config.freeze_clusters);
  }
  if (root.contains("coherence")) {
    const json& c = root["coherence"];
    require_keys(c, {"block_length_ref", "ref_fc_hz"}, "coherence");
    config.coherence_block_ref = get_number(c, "block_length_ref", config.coherence_block_ref);
    config.coherence_ref_fc_hz = get_number(c, "ref_fc_hz", config.coherence_ref_fc_hz);
  }
  config.bandwidth_fraction_of_fc =
      get_number(root, "bandwidth_fraction_of_fc", config.bandwidth_fraction_of_fc);
  if (root.contains("noise")) {
    const json& n = root["noise"];
    require_keys(n, {"mode", "figure_db"}, "noise");
    if (n.contains("mode")) {
      const std::string mode = n["mode"].is_string() ? n["mode"].get<std::string>() : "";
      if (mode == "normalized") {
        config.noise_mode = NoiseMode::kNormalized;
      } else if (mode == "physical") {
        config.noise_mode = NoiseMode::kPhysical;
      } else {
        throw ConfigError("config: noise.mode must be \"normalized\" or \"physical\"");
      }
    }
    config.noise_figure_db = get_number(n, "figure_db", config.noise_figure_db);
  }
  config.pilot_fraction = get_number(root, "pilot_fraction", config.pilot_fraction);
  config.loc_pilot_fraction = get_number(root, "loc_pilot_fraction", config.loc_pilot_fraction);
  if (root.contains("music")) {
    const json& m = root["music"];
    require_keys(m,
                 {"r_step_lambda", "theta_step_deg", "r_min_lambda",
                  "r_max_fraction_of_fraunhofer", "theta_min_deg", "theta_max_deg",
                  "fine_r_step_lambda", "coarse_r_step_lambda", "peak_min_separation_cells",
                  "export_spectrum"},
                 "music");
    MusicSettings& mu = config.music;
    mu.r_step_lambda = get_number(m, "r_step_lambda", mu.r_step_lambda);
    mu.theta_step_deg = get_number(m, "theta_step_deg", mu.theta_step_deg);
    mu.r_min_lambda = get_number(m, "r_min_lambda", mu.r_min_lambda);
    mu.r_max_fraction_of_fraunhofer =
        get_number(m, "r_max_fraction_of_fraunhofer", mu.r_max_fraction_of_fraunhofer);
    mu.theta_min_deg = get_number(m, "theta_min_deg", mu.theta_min_deg);
    mu.theta_max_deg = get_number(m, "theta_max_deg", mu.theta_max_deg);
    mu.fine_r_step_lambda = get_number(m, "fine_r_step_lambda", mu.fine_r_step_lambda);
    mu.coarse_r_step_lambda = get_number(m, "coarse_r_step_lambda", mu.coarse_r_step_lambda);
    mu.peak_min_separation_cells =
        static_cast<int>(get_number(m, "peak_min_separation_cells", mu.peak_min_separation_cells));
    mu.export_spectrum = get_bool(m, "export_spectrum", mu.export_spectrum);
  }
  if (root.contains("trials")) {
    config.trials = static_cast<long long>(get_number(root, "trials", 0.0));
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer()) {
      throw ConfigError("config: seed must be a non-negative integer");
    }
    config.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("threads")) {
    config.threads = static_cast<int>(get_number(root, "threads", 0.0));
  }
  if (root.contains("strategies")) {
    if (!root["strategies"].is_array() || root["strategies"].empty()) {
      throw ConfigError("config: strategies must be a non-empty array");
    }
    config.strategies.clear();
    for (const auto& s : root["strategies"]) {
      if (!s.is_string()) {
        throw ConfigError("config: strategies entries must be strings");
      }
      config.strategies.push_back(s.get<std::string>());
    }
  }
  if (root.contains("fig1")) {
    require_keys(root["fig1"], {"search_width"}, "fig1");
    config.fig1.search_width =
        static_cast<int>(get_number(root["fig1"], "search_width", config.fig1.search_width));
  }
  if (root.contains("fig2")) {
    const json& f = root["fig2"];
    require_keys(f, {"distance_fractions", "window_fraction", "r_step_lambda"}, "fig2");
    config.fig2.distance_fractions =
        get_number_list(f, "distance_fractions", config.fig2.distance_fractions);
    config.fig2.window_fraction = get_number(f, "window_fraction", config.fig2.window_fraction);
    config.fig2.r_step_lambda = get_number(f, "r_step_lambda", config.fig2.r_step_lambda);
  }
  if (root.contains("fig3")) {
    const json& f = root["fig3"];
    require_keys(f, {"snrs_db", "r_step_lambda"}, "fig3");
    config.fig3.snrs_db = get_number_list(f, "snrs_db", config.fig3.snrs_db);
    config.fig3.r_step_lambda = get_number(f, "r_step_lambda", config.fig3.r_step_lambda);
  }
  if (root.contains("fig4")) {
    require_keys(root["fig4"], {"snrs_db"}, "fig4");
    config.fig4.snrs_db = get_number_list(root["fig4"], "snrs_db", config.fig4.snrs_db);
  }
  if (root.contains("fig5")) {
    require_keys(root["fig5"], {"fc_grid_ghz"}, "fig5");
    config.fig5.fc_grid_ghz = get_number_list(root["fig5"], "fc_grid_ghz", config.fig5.fc_grid_ghz);
  }
}

void apply_json_file(ScenarioConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  apply_json_overrides(config, text);
}

void validate(const ScenarioConfig& config, Figure figure) {
  if (!(config.carrier_fc_hz > 0.0)) {
    throw ConfigError("config: carrier frequency must be positive");
  }
  if (config.antenna_count < 1) {
    throw ConfigError("config: antenna count must be at least 1");
  }
  if (!(config.spacing_lambda > 0.0)) {
    throw ConfigError("config: antenna spacing must be positive");
  }
  if (config.users.empty()) {
    throw ConfigError("config: at least one user required");
  }
  for (const auto& u : config.users) {
    if (!(u.r_fraction_of_fraunhofer > 0.0) || u.r_fraction_of_fraunhofer > 1.0) {
      throw ConfigError("config: user distance fraction must be in (0, 1]");
    }
    if (u.theta_deg < -90.0 || u.theta_deg > 90.0) {
      throw ConfigError("config: user angle must be in [-90, 90] degrees");
    }
  }
  if (config.cluster_count < 0) {
    throw ConfigError("config: cluster count must be non-negative");
  }
  if (!(config.coherence_block_ref > 0.0) || !(config.coherence_ref_fc_hz > 0.0)) {
    throw ConfigError("config: coherence block parameters must be positive");
  }
  if (!(config.bandwidth_fraction_of_fc > 0.0)) {
    throw ConfigError("config: bandwidth fraction must be positive");
  }
  if (!(config.pilot_fraction > 0.0) || config.pilot_fraction >= 1.0 ||
      !(config.loc_pilot_fraction > 0.0) || config.loc_pilot_fraction >= 1.0) {
    throw ConfigError("config: pilot fractions must be in (0, 1)");
  }
  const MusicSettings& m = config.music;
  if (!(m.r_step_lambda > 0.0) || !(m.theta_step_deg > 0.0) || !(m.fine_r_step_lambda > 0.0) ||
      !(m.coarse_r_step_lambda > 0.0)) {
    throw ConfigError("config: music grid steps must be positive");
  }
  if (!(m.r_min_lambda > 0.0) || !(m.r_max_fraction_of_fraunhofer > 0.0)) {
    throw ConfigError("config: music grid range must be positive");
  }
  if (m.theta_min_deg > m.theta_max_deg) {
    throw ConfigError("config: music angle bounds are reversed");
  }
  if (m.peak_min_separation_cells < 1) {
    throw ConfigError("config: peak separation must be at least one cell");
  }
  if (config.trials < 1) {
    throw ConfigError("config: trials must be at least 1");
  }
  if (config.fig1.search_width < 1) {
    throw ConfigError("config: fig1 search width must be at least 1");
  }
  if (!(config.fig2.window_fraction > 0.0) || config.fig2.window_fraction >= 1.0) {
    throw ConfigError("config: fig2 window fraction must be in (0, 1)");
  }
  if (!(config.fig2.r_step_lambda > 0.0) || !(config.fig3.r_step_lambda > 0.0)) {
    throw ConfigError("config: figure grid steps must be positive");
  }
  for (const auto& f : config.fig2.distance_fractions) {
    if (!(f > 0.0) || f > 1.0) {
      throw ConfigError("config: fig2 distance fractions must be in (0, 1]");
    }
  }
  for (const auto& s : config.strategies) {
    const auto& known = all_strategies();
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw ConfigError("config: unknown strategy \"" + s + "\"");
    }
  }

  const auto n_users = config.users.size();
  switch (figure) {
    case Figure::kFig1:
      if (config.antenna_count != 2 || n_users != 1) {
        throw ConfigError("fig1 requires 2 antennas and 1 user");
      }
      if (config.cluster_count != 0) {
        throw ConfigError("fig1 requires a pure line-of-sight channel (0 clusters)");
      }
      if (config.noise_mode != NoiseMode::kNormalized) {
        throw ConfigError("fig1 requires normalized noise mode");
      }
      break;
    case Figure::kFig2:
      if ((config.antenna_count != 64 && config.antenna_count != 128) || n_users != 1) {
        throw ConfigError("fig2 requires 64 or 128 antennas and 1 user");
      }
      if (config.cluster_count != 0) {
        throw ConfigError("fig2 requires a pure line-of-sight channel (0 clusters)");
      }
      if (config.noise_mode != NoiseMode::kNormalized) {
        throw ConfigError("fig2 requires normalized noise mode");
      }
      break;
    case Figure::kFig3:
      if (config.antenna_count != 3 || n_users != 2) {
        throw ConfigError("fig3 requires 3 antennas and 2 users");
      }
      if (config.cluster_count != 0) {
        throw ConfigError("fig3 requires a pure line-of-sight channel (0 clusters)");
      }
      if (config.noise_mode != NoiseMode::kNormalized) {
        throw ConfigError("fig3 requires normalized noise mode");
      }
      break;
    case Figure::kFig4:
      if (config.noise_mode != NoiseMode::kNormalized) {
        throw ConfigError("fig4 requires normalized noise mode");
      }
      if (config.strategies.empty()) {
        throw ConfigError("fig4 requires at least one strategy");
      }
      break;
    case Figure::kFig5:
      if (config.noise_mode != NoiseMode::kPhysical) {
        throw ConfigError("fig5 requires physical noise mode");
      }
      if (config.strategies.empty()) {
        throw ConfigError("fig5 requires at least one strategy");
      }
      break;
    case Figure::kRun:
      if (config.strategies.empty()) {
        throw ConfigError("run requires at least one strategy");
      }
      break;
  }
  if (config.antenna_count <= static_cast<int>(n_users)) {
    throw ConfigError("config: antenna count must exceed the user count");
  }
}

ResolvedScenario resolve(const ScenarioConfig& input, Figure figure) {
  ScenarioConfig config = input;
  if (config.paper_scale) {
    if (figure == Figure::kFig4 || figure == Figure::kFig5 || figure == Figure::kRun) {
      config.antenna_count = 512;
    } else {
      throw ConfigError("paper-scale applies only to fig4, fig5, and run");
    }
  }
  validate(config, figure);

  ResolvedScenario out;
  out.config = config;
  out.figure = figure;
  out.carrier = CarrierConfig{config.carrier_fc_hz};
  const double lambda = out.carrier.wavelength();
  out.geometry = UlaGeometry{config.antenna_count, config.spacing_lambda * lambda};
  out.fraunhofer_m = fraunhofer_distance(out.geometry, out.carrier);
  out.coherence_block =
      config.coherence_block_ref * (config.coherence_ref_fc_hz / config.carrier_fc_hz);
  out.tau_pilot = static_cast<int>(std::lround(config.pilot_fraction * out.coherence_block));
  const auto n_users = static_cast<int>(config.users.size());
  out.tau_loc = std::max(
      n_users, static_cast<int>(std::lround(config.loc_pilot_fraction * out.coherence_block)));
  if (out.tau_pilot < n_users) {
    throw ConfigError("config: pilot length shorter than the user count");
  }
  if (out.tau_pilot >= out.coherence_block || out.tau_loc >= out.coherence_block) {
    throw ConfigError("config: training does not fit in the coherence block");
  }
  if (config.noise_mode == NoiseMode::kNormalized) {
    out.sigma_sq = 1.0;
  } else {
    out.sigma_sq = NoiseModel::from_noise_figure(config.noise_figure_db,
                                                 config.bandwidth_fraction_of_fc *
                                                     config.carrier_fc_hz)
                       .sigma_sq;
  }
  for (const auto& u : config.users) {
    out.user_locations.push_back(PolarLocation{
        u.r_fraction_of_fraunhofer * out.fraunhofer_m, u.theta_deg * std::numbers::pi / 180.0});
  }
  const double power_mw = config.noise_mode == NoiseMode::kNormalized
                              ? std::pow(10.0, config.snr_db / 10.0)
                              : dbm_to_mw(config.power_dbm);
  out.powers_mw.assign(config.users.size(), power_mw);
  out.trials = config.trials;
  return out;
}

std::string resolved_config_json(const ResolvedScenario& scenario) {
  const ScenarioConfig& c = scenario.config;
  json root;
  root["figure"] = figure_name(scenario.figure);
  root["carrier_fc_hz"] = c.carrier_fc_hz;
  root["antennas"] = {{"count", c.antenna_count}, {"spacing_lambda", c.spacing_lambda}};
  json users = json::array();
  for (const auto& u : c.users) {
    users.push_back(
        {{"r_fraction_of_fraunhofer", u.r_fraction_of_fraunhofer}, {"theta_deg", u.theta_deg}});
  }
  root["users"] = users;
  root["snr_db"] = c.snr_db;
  root["power_dbm"] = c.power_dbm;
  root["clusters"] = {{"count", c.cluster_count}, {"freeze", c.freeze_clusters}};
  root["coherence"] = {{"block_length_ref", c.coherence_block_ref},
                       {"ref_fc_hz", c.coherence_ref_fc_hz}};
  root["bandwidth_fraction_of_fc"] = c.bandwidth_fraction_of_fc;
  root["noise"] = {{"mode", c.noise_mode == NoiseMode::kNormalized ? "normalized" : "physical"},
                   {"figure_db", c.noise_figure_db}};
  root["pilot_fraction"] = c.pilot_fraction;
  root["loc_pilot_fraction"] = c.loc_pilot_fraction;
  root["music"] = {{"r_step_lambda", c.music.r_step_lambda},
                   {"theta_step_deg", c.music.theta_step_deg},
                   {"r_min_lambda", c.music.r_min_lambda},
                   {"r_max_fraction_of_fraunhofer", c.music.r_max_fraction_of_fraunhofer},
                   {"theta_min_deg", c.music.theta_min_deg},
                   {"theta_max_deg", c.music.theta_max_deg},
                   {"fine_r_step_lambda", c.music.fine_r_step_lambda},
                   {"coarse_r_step_lambda", c.music.coarse_r_step_lambda},
                   {"peak_min_separation_cells", c.music.peak_min_separation_cells},
                   {"export_spectrum", c.music.export_spectrum}};
  root["trials"] = scenario.trials;
  root["seed"] = c.seed;
  root["strategies"] = c.strategies;
  root["fig1"] = {{"search_width", c.fig1.search_width}};
  root["fig2"] = {{"distance_fractions", c.fig2.distance_fractions},
                  {"window_fraction", c.fig2.window_fraction},
                  {"r_step_lambda", c.fig2.r_step_lambda}};
  root["fig3"] = {{"snrs_db", c.fig3.snrs_db}, {"r_step_lambda", c.fig3.r_step_lambda}};
  root["fig4"] = {{"snrs_db", c.fig4.snrs_db}};
  root["fig5"] = {{"fc_grid_ghz", c.fig5.fc_grid_ghz}};
  root["resolved"] = {{"wavelength_m", scenario.carrier.wavelength()},
                      {"spacing_m", scenario.geometry.spacing_m},
                      {"fraunhofer_m", scenario.fraunhofer_m},
                      {"coherence_block", scenario.coherence_block},
                      {"tau_pilot", scenario.tau_pilot},
                      {"tau_loc", scenario.tau_loc},
                      {"sigma_sq", scenario.sigma_sq},
                      {"user_r_m", [&] {
                         std::vector<double> r;
                         for (const auto& u : scenario.user_locations) {
                           r.push_back(u.range_m);
                         }
                         return r;
                       }()},
                      {"powers_mw", scenario.powers_mw}};
  return root.dump();
}

}  // namespace nearfocus
