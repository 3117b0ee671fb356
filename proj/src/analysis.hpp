// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "geometry.hpp"

namespace nearfocus {

// Polar form of a noise-subspace eigenvector; the closed-form range
// expressions below work on magnitudes and phases separately.
struct NoisePhases {
  std::vector<double> magnitudes;
  std::vector<double> phases;

  static NoisePhases from_eigenvector(const Eigen::VectorXcd& u);
};

// Candidate wrap index together with the range it produces.
struct WrapSelection {
  int wrap_index = 0;
  double range_m = 0.0;
};

// Method-of-moments gamma fit: shape * scale = sample mean,
// shape * scale^2 = sample variance (unbiased).
struct GammaFit {
  double shape = 0.0;
  double scale = 0.0;
};

// Power-law fit of variance against range. amplitude is the coefficient of
// the exponent-4 model (geometric mean of variance / r^4); exponent is the
// slope of an unconstrained log-log least-squares line.
struct PowerLawFit {
  double amplitude = 0.0;
  double exponent = 0.0;
};

// Maps any angle to (0, 2 pi].
double wrap_phase(double phase);

// Projection denominator |u^H b(r, theta)|^2 for a two-element array,
// expanded in the eigenvector's magnitudes and phases. Equals the
// pseudospectrum denominator evaluated by the grid search.
double two_antenna_denominator(const NoisePhases& phases, double range_m, double angle_rad,
                               const CarrierConfig& carrier, const UlaGeometry& geom);

// Same expansion for a three-element array (centre element at the reference
// distance).
double three_antenna_denominator(const NoisePhases& phases, double range_m, double angle_rad,
                                 const CarrierConfig& carrier, const UlaGeometry& geom);

// Range that zeroes the two-element denominator for a given inter-element
// phase difference and wrap index. delta_phi must already be wrapped to
// (0, 2 pi]. Returns nullopt when the expression has no positive solution.
std::optional<double> closed_form_range(double delta_phi, int wrap_index, double angle_rad,
                                        const CarrierConfig& carrier, const UlaGeometry& geom);

// Smallest wrap index that can yield a valid range for this spacing:
// ceil(d / lambda - 1), clamped at zero, with a tolerance so exact integer
// ratios do not round up.
int wrap_index_lower_bound(const CarrierConfig& carrier, const UlaGeometry& geom);

// Evaluates the candidate range of every wrap index in
// [lower bound, lower bound + search_width) and keeps the one whose
// denominator at (candidate, angle) is smallest. Ties within a relative
// tolerance resolve to the lowest index. nullopt when no index yields a
// valid range.
std::optional<WrapSelection> select_wrap_index(const NoisePhases& phases, double angle_rad,
                                               const CarrierConfig& carrier,
                                               const UlaGeometry& geom, int search_width);

GammaFit fit_gamma_moments(const std::vector<double>& samples);

PowerLawFit fit_variance_power_law(const std::vector<double>& r_values,
                                   const std::vector<double>& variances);

}  // namespace nearfocus
