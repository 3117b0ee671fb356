// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#include "channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace nearfocus {

Eigen::VectorXcd ChannelRealization::reconstruct(int user) const {
  Eigen::VectorXcd h = amplitude_scale * los_coefficient(carrier, users[user].range_m) *
                       steering_vector(carrier, users[user], geometry);
  for (std::size_t l = 0; l < clusters.size(); ++l) {
    h += nlos_coeffs(user, static_cast<Eigen::Index>(l)) *
         steering_vector(carrier, clusters[l].location, geometry);
  }
  return h;
}

double reflection_coefficient_db(double fc_hz) {
  return -0.0094 * (fc_hz / 1e9) - 8.18;
}

std::complex<double> los_coefficient(const CarrierConfig& carrier, double range_m) {
  const double lambda = carrier.wavelength();
  const double amplitude = lambda / (4.0 * std::numbers::pi * range_m);
  const double phase = -2.0 * std::numbers::pi * range_m / lambda;
  return amplitude * std::complex<double>(std::cos(phase), std::sin(phase));
}

std::vector<Cluster> draw_clusters(int count, const std::vector<PolarLocation>& users,
                                   const CarrierConfig& carrier, Rng& rng) {
  if (count < 0) {
    throw ConfigError("draw_clusters: cluster count must be non-negative");
  }
  if (users.empty()) {
    throw ConfigError("draw_clusters: at least one user required");
  }
  if (count == 0) {
    return {};
  }
  const double lambda = carrier.wavelength();
  double r_max = 0.0;
  for (const auto& u : users) {
    r_max = std::max(r_max, u.range_m);
  }
  const double r_min = 10.0 * lambda;
  if (r_max < r_min) {
    throw ConfigError("draw_clusters: all users closer than the minimum cluster range");
  }
  const double alpha_db = reflection_coefficient_db(carrier.fc_hz);
  const double alpha_lin = std::pow(10.0, alpha_db / 10.0);
  std::vector<Cluster> clusters(static_cast<std::size_t>(count));
  for (auto& c : clusters) {
    c.location.range_m = rng.uniform(r_min, r_max);
    c.location.angle_rad = rng.uniform(-0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
    c.reflection_db = alpha_db;
    const double path = lambda / (4.0 * std::numbers::pi * c.location.range_m);
    c.gamma_sq = path * path * alpha_lin;
  }
  return clusters;
}

ChannelRealization realize_channel(const std::vector<PolarLocation>& users,
                                   const std::vector<Cluster>& clusters,
                                   const CarrierConfig& carrier, const UlaGeometry& geom,
                                   Rng& rng) {
  if (users.empty()) {
    throw ConfigError("realize_channel: at least one user required");
  }
  const auto n_users = static_cast<Eigen::Index>(users.size());
  const auto n_clusters = static_cast<Eigen::Index>(clusters.size());

  ChannelRealization out;
  out.users = users;
  out.clusters = clusters;
  out.carrier = carrier;
  out.geometry = geom;
  out.amplitude_scale = 1.0;
  out.nlos_coeffs.resize(n_users, n_clusters);
  for (Eigen::Index k = 0; k < n_users; ++k) {
    for (Eigen::Index l = 0; l < n_clusters; ++l) {
      out.nlos_coeffs(k, l) = rng.complex_gaussian(clusters[static_cast<std::size_t>(l)].gamma_sq);
    }
  }

  // Cluster steering vectors are shared across users; compute each once.
  std::vector<SteeringVector> cluster_steering(clusters.size());
  for (std::size_t l = 0; l < clusters.size(); ++l) {
    cluster_steering[l] = steering_vector(carrier, clusters[l].location, geom);
  }

  out.channels.resize(geom.n_antennas, n_users);
  for (Eigen::Index k = 0; k < n_users; ++k) {
    Eigen::VectorXcd h = los_coefficient(carrier, users[static_cast<std::size_t>(k)].range_m) *
                         steering_vector(carrier, users[static_cast<std::size_t>(k)], geom);
    for (Eigen::Index l = 0; l < n_clusters; ++l) {
      h += out.nlos_coeffs(k, l) * cluster_steering[static_cast<std::size_t>(l)];
    }
    out.channels.col(k) = h;
  }
  return out;
}

void normalize_realization(ChannelRealization& realization, int ref_user) {
  if (ref_user < 0 || ref_user >= realization.channels.cols()) {
    throw ConfigError("normalize_realization: reference user out of range");
  }
  const double norm = realization.channels.col(ref_user).norm();
  if (!(norm > 0.0)) {
    throw NumericError("normalize_realization: reference channel has zero norm");
  }
  const double scale = 1.0 / norm;
  realization.channels *= scale;
  realization.nlos_coeffs *= scale;
  realization.amplitude_scale *= scale;
}

}  // namespace nearfocus
