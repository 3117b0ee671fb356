// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "signaling.hpp"

namespace nearfocus {

enum class Figure { kRun = 0, kFig1 = 1, kFig2 = 2, kFig3 = 3, kFig4 = 4, kFig5 = 5 };

Figure figure_from_name(const std::string& name);
std::string figure_name(Figure figure);

enum class NoiseMode { kNormalized, kPhysical };

// One user given relative to the array's near-field extent, so the same
// config stays geometrically equivalent across carrier frequencies.
struct UserSpec {
  double r_fraction_of_fraunhofer = 0.5;
  double theta_deg = 0.0;
};

struct MusicSettings {
  double r_step_lambda = 10.0;    // grid step for the generic run pipeline
  double theta_step_deg = 0.5;
  double r_min_lambda = 10.0;
  double r_max_fraction_of_fraunhofer = 1.0;
  double theta_min_deg = -90.0;
  double theta_max_deg = 90.0;
  double fine_r_step_lambda = 10.0;    // loc-music-fine strategy
  double coarse_r_step_lambda = 100.0; // loc-music-coarse strategy
  int peak_min_separation_cells = 3;
  bool export_spectrum = false;
};

struct Fig1Settings {
  int search_width = 8;
};

struct Fig2Settings {
  std::vector<double> distance_fractions{0.1, 1.0 / 6.0, 0.25, 1.0 / 3.0, 0.5};
  double window_fraction = 0.2;   // half-width of the search window around truth
  double r_step_lambda = 0.1;
};

struct Fig3Settings {
  std::vector<double> snrs_db{40.0, 50.0, 60.0};
  double r_step_lambda = 0.5;
};

struct Fig4Settings {
  std::vector<double> snrs_db{10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
};

struct Fig5Settings {
  std::vector<double> fc_grid_ghz{10.0, 20.0, 30.0, 40.0, 50.0,
                                  60.0, 70.0, 80.0, 90.0, 100.0};
};

inline const std::vector<std::string>& all_strategies() {
  static const std::vector<std::string> names{"zf-perfect-csi", "zf-pilot", "loc-perfect",
                                              "loc-music-fine", "loc-music-coarse"};
  return names;
}

struct ScenarioConfig {
  double carrier_fc_hz = 1e11;
  int antenna_count = 128;
  double spacing_lambda = 0.5;
  std::vector<UserSpec> users{{0.125, 0.0}, {0.5, 0.0}};
  double snr_db = 20.0;   // per-user transmit SNR in normalized mode
  double power_dbm = 23.0;  // per-user transmit power in physical mode
  int cluster_count = 2;
  bool freeze_clusters = false;
  double coherence_block_ref = 5000.0;  // block length at the reference carrier
  double coherence_ref_fc_hz = 1e11;
  double bandwidth_fraction_of_fc = 0.001;
  NoiseMode noise_mode = NoiseMode::kNormalized;
  double noise_figure_db = 13.0;
  double pilot_fraction = 0.2;
  double loc_pilot_fraction = 0.005;
  MusicSettings music;
  long long trials = 0;  // 0 keeps the figure default
  std::uint64_t seed = 1;
  int threads = 0;  // 0 resolves to the hardware concurrency
  bool paper_scale = false;
  std::vector<std::string> strategies = all_strategies();
  Fig1Settings fig1;
  Fig2Settings fig2;
  Fig3Settings fig3;
  Fig4Settings fig4;
  Fig5Settings fig5;
};

// Everything derived from a config that the runners and output files need.
struct ResolvedScenario {
  ScenarioConfig config;
  Figure figure = Figure::kRun;
  CarrierConfig carrier;
  UlaGeometry geometry;
  double fraunhofer_m = 0.0;
  double coherence_block = 0.0;  // T at this carrier
  int tau_pilot = 0;
  int tau_loc = 0;
  double sigma_sq = 1.0;
  std::vector<PolarLocation> user_locations;
  std::vector<double> powers_mw;
  long long trials = 0;
};

// Figure-specific defaults (array size, user layout, noise mode, trials).
ScenarioConfig figure_preset(Figure figure);

// Merges JSON overrides into an existing config. Unknown keys are rejected.
void apply_json_overrides(ScenarioConfig& config, const std::string& json_text);
void apply_json_file(ScenarioConfig& config, const std::string& path);

// Structural checks for the figure the config will drive. Throws ConfigError.
void validate(const ScenarioConfig& config, Figure figure);

// Validates and computes every derived quantity, including the paper_scale
// substitution (N = 512, applicable to fig4/fig5/run only).
ResolvedScenario resolve(const ScenarioConfig& config, Figure figure);

// Single-line JSON echo of config plus derived values, embedded in every
// output file. Excludes the thread count so outputs are invariant to it.
std::string resolved_config_json(const ResolvedScenario& scenario);

}  // namespace nearfocus
