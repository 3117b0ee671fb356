// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#pragma once

#include <string>
#include <vector>

#include "analysis.hpp"
#include "scenario.hpp"

namespace nearfocus {

// Two-antenna single-user pipeline: draws one localization pilot block,
// extracts the noise eigenvector of the sample covariance, and returns its
// polar form. Deterministic in (scenario, trial index).
NoisePhases fig1_trial_phases(const ResolvedScenario& scenario, long long trial);

struct Fig1Result {
  double true_r_over_lambda = 0.0;
  int m_lower_bound_value = 0;
  long long n_trials = 0;
  long long n_valid = 0;              // trials with a valid wrap-index selection
  long long n_selected_at_bound = 0;  // trials whose selected index equals the bound
  std::vector<double> samples_r_over_lambda;
  double sample_mean = 0.0;      // in wavelengths
  double sample_variance = 0.0;  // in squared wavelengths
  GammaFit fit;
};

// Closed-form distance estimator statistics for the config's single user.
// Writes fig1_samples.csv and fig1_summary.json.
Fig1Result run_fig1(const ResolvedScenario& scenario, const std::string& out_dir);

struct Fig2Result {
  int antenna_count = 0;
  std::vector<double> r_values_m;
  std::vector<double> variances_m2;
  PowerLawFit fit;
};

// Distance-estimation variance versus range via the grid search on a window
// around each true distance. Writes fig2_variance.csv and fig2_summary.json.
Fig2Result run_fig2(const ResolvedScenario& scenario, const std::string& out_dir);

struct Fig3MinimaStats {
  long long trials = 0;
  long long both_match = 0;       // two deepest minima within 2% of r1 and r2
  long long r2_among_deepest = 0; // either of the two deepest within 5% of r2
};

struct Fig3Result {
  std::vector<double> snrs_db;
  std::vector<double> r_values_m;
  std::vector<std::vector<double>> first_trial_denominator;  // [snr][r index]
  std::vector<Fig3MinimaStats> stats;                        // per snr
};

// Three-antenna two-user spectrum denominator curves, one channel/noise draw
// per trial shared across the SNR sweep. Writes fig3_denominator.csv (first
// trial) and fig3_summary.json (per-trial minima statistics).
Fig3Result run_fig3(const ResolvedScenario& scenario, const std::string& out_dir);

struct StrategySeries {
  std::string strategy;
  std::vector<double> per_trial_sum_se;
  double mean = 0.0;
  double std_error = 0.0;
};

struct SweepPoint {
  double x = 0.0;  // snr_db for fig4, fc_hz for fig5
  std::vector<StrategySeries> series;  // config strategy order
};

struct Fig4Result {
  std::vector<SweepPoint> points;
};

// Sum-SE versus SNR for the configured strategies, channel and noise draws
// shared across the sweep within each trial. Writes fig4_sum_se.csv and
// fig4_summary.json.
Fig4Result run_fig4(const ResolvedScenario& scenario, const std::string& out_dir);

struct Fig5Result {
  std::vector<SweepPoint> points;
  std::vector<double> nlos_los_ratio;  // expected scattered-to-direct power, user 1
};

// Sum-SE versus carrier frequency; every derived quantity (wavelength,
// Fraunhofer distance, coherence block, pilot lengths, noise power, user
// radii) is re-resolved per frequency. Writes fig5_sum_se.csv and
// fig5_summary.json.
Fig5Result run_fig5(const ResolvedScenario& scenario, const std::string& out_dir);

struct RunResult {
  SweepPoint point;
};

// Generic single-point Monte-Carlo over the configured strategies. Writes
// run_trials.csv and run_summary.json, plus run_spectrum.csv when spectrum
// export is enabled and a localization strategy is present.
RunResult run_trials(const ResolvedScenario& scenario, const std::string& out_dir);

// Dispatches on scenario.figure.
void run_figure(const ResolvedScenario& scenario, const std::string& out_dir);

}  // namespace nearfocus
