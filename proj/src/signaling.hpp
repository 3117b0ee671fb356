// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "channel.hpp"
#include "rng.hpp"

namespace nearfocus {

// Orthogonal pilot sequences, one column per user, tau symbols long.
// Columns satisfy p_i^H p_j = tau * delta_ij.
struct PilotBook {
  Eigen::MatrixXcd sequences;  // tau x K

  Eigen::Index length() const { return sequences.rows(); }
  Eigen::Index n_users() const { return sequences.cols(); }
};

// Entry (t, k) = exp(-j 2 pi t k / tau). Requires tau >= n_users so the
// assigned columns stay mutually orthogonal.
PilotBook dft_pilot_book(int tau, int n_users);

// Receiver noise power per antenna per symbol. Powers are in mW when built
// from a noise figure, and dimensionless (sigma_sq = 1) in normalized runs.
struct NoiseModel {
  double sigma_sq = 1.0;

  static NoiseModel from_noise_figure(double figure_db, double bandwidth_hz);
  static NoiseModel normalized() { return NoiseModel{1.0}; }
};

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

// Stacked pilot observation Y = sum_k sqrt(rho_k) h_k p_k^T + N, of size
// N x tau. Noise entries are drawn antenna-major (all symbols of antenna 0,
// then antenna 1, ...), each CN(0, sigma_sq).
Eigen::MatrixXcd received_pilot_matrix(const ChannelRealization& realization,
                                       const PilotBook& book,
                                       const std::vector<double>& powers_mw,
                                       const NoiseModel& noise, Rng& rng);

// Least-squares channel estimate for one user: Y conj(p_k) / (sqrt(rho_k) tau).
Eigen::VectorXcd ls_estimate(const Eigen::MatrixXcd& received, const Eigen::VectorXcd& pilot,
                             double power_mw);

}  // namespace nearfocus
