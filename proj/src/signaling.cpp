// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#include "signaling.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace nearfocus {

PilotBook dft_pilot_book(int tau, int n_users) {
  if (n_users < 1) {
    throw ConfigError("dft_pilot_book: at least one user required");
  }
  if (tau < n_users) {
    throw ConfigError("dft_pilot_book: pilot length shorter than the user count");
  }
  PilotBook book;
  book.sequences.resize(tau, n_users);
  for (int t = 0; t < tau; ++t) {
    for (int k = 0; k < n_users; ++k) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(t) *
                           static_cast<double>(k) / static_cast<double>(tau);
      book.sequences(t, k) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  return book;
}

NoiseModel NoiseModel::from_noise_figure(double figure_db, double bandwidth_hz) {
  if (bandwidth_hz <= 0.0) {
    throw ConfigError("NoiseModel: bandwidth must be positive");
  }
  // Thermal floor at 290 K is -174 dBm/Hz; the figure adds receiver noise.
  const double sigma_sq_dbm = figure_db - 174.0 + 10.0 * std::log10(bandwidth_hz);
  return NoiseModel{dbm_to_mw(sigma_sq_dbm)};
}

Eigen::MatrixXcd received_pilot_matrix(const ChannelRealization& realization,
                                       const PilotBook& book,
                                       const std::vector<double>& powers_mw,
                                       const NoiseModel& noise, Rng& rng) {
  const Eigen::Index n_antennas = realization.channels.rows();
  const Eigen::Index n_users = realization.channels.cols();
  const Eigen::Index tau = book.length();
  if (book.n_users() != n_users) {
    throw ConfigError("received_pilot_matrix: pilot book size does not match the user count");
  }
  if (static_cast<Eigen::Index>(powers_mw.size()) != n_users) {
    throw ConfigError("received_pilot_matrix: power list size does not match the user count");
  }
  if (noise.sigma_sq < 0.0) {
    throw ConfigError("received_pilot_matrix: noise power must be non-negative");
  }
  Eigen::MatrixXcd received = Eigen::MatrixXcd::Zero(n_antennas, tau);
  for (Eigen::Index k = 0; k < n_users; ++k) {
    const double rho = powers_mw[static_cast<std::size_t>(k)];
    if (rho <= 0.0) {
      throw ConfigError("received_pilot_matrix: transmit power must be positive");
    }
    received.noalias() +=
        std::sqrt(rho) * realization.channels.col(k) * book.sequences.col(k).transpose();
  }
  // Antenna-major draw order fixes the noise realization independently of how
  // the matrix is later traversed.
  for (Eigen::Index n = 0; n < n_antennas; ++n) {
    for (Eigen::Index t = 0; t < tau; ++t) {
      received(n, t) += rng.complex_gaussian(noise.sigma_sq);
    }
  }
  return received;
}

Eigen::VectorXcd ls_estimate(const Eigen::MatrixXcd& received, const Eigen::VectorXcd& pilot,
                             double power_mw) {
  if (received.cols() != pilot.size()) {
    throw ConfigError("ls_estimate: pilot length does not match the observation");
  }
  if (power_mw <= 0.0) {
    throw ConfigError("ls_estimate: transmit power must be positive");
  }
  const double tau = static_cast<double>(pilot.size());
  return received * pilot.conjugate() / (std::sqrt(power_mw) * tau);
}

}  // namespace nearfocus
