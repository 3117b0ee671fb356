// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"

namespace nearfocus {

// Scatterer shared by every uplink user. gamma_sq is the variance of the
// per-user complex gain for this cluster and is fixed by the cluster's range
// and the carrier, not redrawn per user.
struct Cluster {
  PolarLocation location;
  double reflection_db = 0.0;
  double gamma_sq = 0.0;
};

// Multi-user uplink channel draw. channels column k is user k's N-vector.
// Everything needed to rebuild the columns is retained: line-of-sight terms
// are determined by users/carrier/geometry/amplitude_scale, scattered terms
// by clusters/nlos_coeffs. reconstruct(k) must match channels.col(k) exactly
// up to floating-point roundoff, including after normalization.
struct ChannelRealization {
  std::vector<PolarLocation> users;
  std::vector<Cluster> clusters;
  Eigen::MatrixXcd channels;     // N x K
  Eigen::MatrixXcd nlos_coeffs;  // K x L, scaled complex gains
  double amplitude_scale = 1.0;  // multiplies the line-of-sight amplitude
  CarrierConfig carrier;
  UlaGeometry geometry;

  Eigen::VectorXcd reconstruct(int user) const;
};

// Frequency-dependent mean reflection loss in dB (negative).
double reflection_coefficient_db(double fc_hz);

// Free-space amplitude-and-phase coefficient at range r:
// (lambda / (4 pi r)) * exp(-j 2 pi r / lambda).
std::complex<double> los_coefficient(const CarrierConfig& carrier, double range_m);

// Draws cluster positions uniformly in angle over (-pi/2, pi/2) and in range
// over [10 lambda, max user range]. Per cluster the range is drawn first.
std::vector<Cluster> draw_clusters(int count, const std::vector<PolarLocation>& users,
                                   const CarrierConfig& carrier, Rng& rng);

// Draws the per-user cluster gains and assembles all channel columns.
// Gain draw order: users outer, clusters inner.
ChannelRealization realize_channel(const std::vector<PolarLocation>& users,
                                   const std::vector<Cluster>& clusters,
                                   const CarrierConfig& carrier, const UlaGeometry& geom,
                                   Rng& rng);

// Rescales every channel column by 1 / ||channels.col(ref_user)||, folding
// the factor into amplitude_scale and nlos_coeffs so reconstruct() still
// matches the stored columns.
void normalize_realization(ChannelRealization& realization, int ref_user);

}  // namespace nearfocus
