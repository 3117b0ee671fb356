// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#include "beamfocus.hpp"

#include <cmath>

#include "errors.hpp"

namespace nearfocus {

Eigen::MatrixXcd zf_combiner(const Eigen::MatrixXcd& basis) {
  if (basis.rows() < basis.cols() || basis.cols() < 1) {
    throw ConfigError("zf_combiner: basis must be tall with at least one column");
  }
  const Eigen::MatrixXcd gram = basis.adjoint() * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram);
  if (solver.info() != Eigen::Success) {
    throw NumericError("zf_combiner: Gram eigensolver failed to converge");
  }
  const double lambda_min = solver.eigenvalues().minCoeff();
  const double lambda_max = solver.eigenvalues().maxCoeff();
  if (!(lambda_min > 0.0) || lambda_max / lambda_min > 1e12) {
    throw NumericError("zf_combiner: basis columns are numerically dependent");
  }
  const Eigen::MatrixXcd gram_inv =
      gram.ldlt().solve(Eigen::MatrixXcd::Identity(gram.rows(), gram.cols()));
  return basis * gram_inv;
}

Eigen::MatrixXcd steering_basis(const std::vector<PolarLocation>& locations,
                                const CarrierConfig& carrier, const UlaGeometry& geom) {
  if (locations.empty()) {
    throw ConfigError("steering_basis: at least one position required");
  }
  Eigen::MatrixXcd basis(geom.n_antennas, static_cast<Eigen::Index>(locations.size()));
  for (std::size_t k = 0; k < locations.size(); ++k) {
    basis.col(static_cast<Eigen::Index>(k)) = steering_vector(carrier, locations[k], geom);
  }
  return basis;
}

double sinr(int user, const Eigen::MatrixXcd& combiner, const Eigen::MatrixXcd& channels,
            const std::vector<double>& powers_mw, double sigma_sq) {
  const Eigen::Index n_users = channels.cols();
  if (combiner.rows() != channels.rows() || combiner.cols() != n_users) {
    throw ConfigError("sinr: combiner shape does not match the channels");
  }
  if (static_cast<Eigen::Index>(powers_mw.size()) != n_users) {
    throw ConfigError("sinr: power list size does not match the user count");
  }
  if (user < 0 || user >= n_users) {
    throw ConfigError("sinr: user index out of range");
  }
  if (sigma_sq < 0.0) {
    throw ConfigError("sinr: noise power must be non-negative");
  }
  const Eigen::VectorXcd w = combiner.col(user);
  double interference = 0.0;
  double signal = 0.0;
  for (Eigen::Index i = 0; i < n_users; ++i) {
    const double gain = std::norm(w.dot(channels.col(i)));  // |w^H h_i|^2
    if (i == user) {
      signal = powers_mw[static_cast<std::size_t>(i)] * gain;
    } else {
      interference += powers_mw[static_cast<std::size_t>(i)] * gain;
    }
  }
  return signal / (interference + sigma_sq * w.squaredNorm());
}

SeReport sum_spectral_efficiency(const Eigen::MatrixXcd& combiner,
                                 const Eigen::MatrixXcd& channels,
                                 const std::vector<double>& powers_mw, double sigma_sq,
                                 double overhead_fraction) {
  if (overhead_fraction < 0.0 || overhead_fraction >= 1.0) {
    throw ConfigError("sum_spectral_efficiency: overhead fraction must be in [0, 1)");
  }
  const auto n_users = static_cast<int>(channels.cols());
  SeReport report;
  report.sinr.resize(static_cast<std::size_t>(n_users));
  report.per_user_se.resize(static_cast<std::size_t>(n_users));
  const double keep = 1.0 - overhead_fraction;
  for (int k = 0; k < n_users; ++k) {
    const double s = sinr(k, combiner, channels, powers_mw, sigma_sq);
    report.sinr[static_cast<std::size_t>(k)] = s;
    report.per_user_se[static_cast<std::size_t>(k)] = keep * std::log2(1.0 + s);
    report.sum_se += report.per_user_se[static_cast<std::size_t>(k)];
  }
  return report;
}

}  // namespace nearfocus
