// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "geometry.hpp"

namespace nearfocus {

// Uplink rate summary for one channel realization and combiner.
struct SeReport {
  std::vector<double> sinr;
  std::vector<double> per_user_se;  // (1 - overhead) * log2(1 + sinr)
  double sum_se = 0.0;
};

// Zero-forcing combiner W = B (B^H B)^{-1} for a presumed channel basis B
// (N x K). Throws NumericError when the basis Gram matrix is singular or its
// condition number exceeds 1e12, since the inverse is then meaningless.
Eigen::MatrixXcd zf_combiner(const Eigen::MatrixXcd& basis);

// Stacks unit-amplitude array responses at the given positions, one column
// per position. This is the presumed basis when only locations are known.
Eigen::MatrixXcd steering_basis(const std::vector<PolarLocation>& locations,
                                const CarrierConfig& carrier, const UlaGeometry& geom);

// Post-combining SINR of one user against the true channels:
// rho_k |w_k^H h_k|^2 / (sum_{i != k} rho_i |w_k^H h_i|^2 + sigma_sq ||w_k||^2).
double sinr(int user, const Eigen::MatrixXcd& combiner, const Eigen::MatrixXcd& channels,
            const std::vector<double>& powers_mw, double sigma_sq);

// Sum spectral efficiency with a training overhead discount. overhead_fraction
// is the share of the coherence block lost to training, in [0, 1).
SeReport sum_spectral_efficiency(const Eigen::MatrixXcd& combiner,
                                 const Eigen::MatrixXcd& channels,
                                 const std::vector<double>& powers_mw, double sigma_sq,
                                 double overhead_fraction);

}  // namespace nearfocus
