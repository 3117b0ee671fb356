// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#include "geometry.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace nearfocus {

double fraunhofer_distance(const UlaGeometry& geom, const CarrierConfig& carrier) {
  const double aperture = geom.aperture();
  return 2.0 * aperture * aperture / carrier.wavelength();
}

double element_distance(const PolarLocation& loc, const UlaGeometry& geom, int n) {
  const double offset = geom.element_offset(n) * geom.spacing_m;
  const double r = loc.range_m;
  // Law of cosines against the broadside axis: the angle at the array centre
  // between the source and element n is pi/2 + angle for positive offsets.
  return std::sqrt(r * r + offset * offset - 2.0 * r * offset * std::sin(loc.angle_rad));
}

double element_path_difference(const PolarLocation& loc, const UlaGeometry& geom, int n) {
  const double offset = geom.element_offset(n) * geom.spacing_m;
  const double r = loc.range_m;
  const double rn = element_distance(loc, geom, n);
  // (rn - r) via the difference of squares: rn^2 - r^2 has no cancellation,
  // while rn - r loses all precision once r >> aperture.
  return (offset * offset - 2.0 * r * offset * std::sin(loc.angle_rad)) / (rn + r);
}

SteeringVector steering_vector(const CarrierConfig& carrier, const PolarLocation& loc,
                               const UlaGeometry& geom) {
  if (geom.n_antennas <= 0) {
    throw ConfigError("steering_vector: antenna count must be positive");
  }
  if (loc.range_m <= 0.0) {
    throw ConfigError("steering_vector: range must be positive");
  }
  const double wavenumber = 2.0 * std::numbers::pi / carrier.wavelength();
  SteeringVector b(geom.n_antennas);
  for (int n = 0; n < geom.n_antennas; ++n) {
    const double phase = -wavenumber * element_path_difference(loc, geom, n);
    b(n) = std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return b;
}

}  // namespace nearfocus
