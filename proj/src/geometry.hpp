// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace nearfocus {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

// Carrier description. Wavelength is always computed from the frequency so
// the two can never disagree.
struct CarrierConfig {
  double fc_hz = 0.0;

  double wavelength() const { return kSpeedOfLight / fc_hz; }
};

// Uniform linear array centred on the origin, elements along one axis.
// Element n in [0, n_antennas) sits at signed offset element_offset(n) times
// spacing_m from the array centre.
struct UlaGeometry {
  int n_antennas = 0;
  double spacing_m = 0.0;

  // Signed half-integer index: (2n - N + 1) / 2, symmetric about zero.
  double element_offset(int n) const {
    return 0.5 * static_cast<double>(2 * n - n_antennas + 1);
  }

  // Physical end-to-end span of the array.
  double aperture() const {
    return static_cast<double>(n_antennas - 1) * spacing_m;
  }
};

// Source position in array-centred polar coordinates. angle_rad is measured
// from the array broadside, positive towards increasing element offsets.
struct PolarLocation {
  double range_m = 0.0;
  double angle_rad = 0.0;
};

using SteeringVector = Eigen::VectorXcd;

// Boundary between the radiating near field and the far field for this
// array and carrier: 2 D^2 / lambda with D the aperture.
double fraunhofer_distance(const UlaGeometry& geom, const CarrierConfig& carrier);

// Exact distance from the source to element n.
double element_distance(const PolarLocation& loc, const UlaGeometry& geom, int n);

// element_distance(loc, geom, n) - loc.range_m, computed in a form that stays
// accurate when the difference is many orders of magnitude below the range.
double element_path_difference(const PolarLocation& loc, const UlaGeometry& geom, int n);

// Unit-modulus array response referenced to the array centre: entry n is
// exp(-j 2 pi / lambda * (r_n - r)) with r_n the element-n distance.
SteeringVector steering_vector(const CarrierConfig& carrier, const PolarLocation& loc,
                               const UlaGeometry& geom);

}  // namespace nearfocus
