// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "geometry.hpp"

using namespace nearfocus;

namespace {

constexpr double kFc = 1e11;

CarrierConfig carrier() { return CarrierConfig{kFc}; }

double lambda() { return kSpeedOfLight / kFc; }

}  // namespace

TEST_CASE("fraunhofer distance matches 2 D^2 / lambda") {
  const double wl = lambda();

  SUBCASE("half-wavelength spacing, 512 antennas") {
    const UlaGeometry geom{512, 0.5 * wl};
    const double aperture = 511.0 * 0.5 * wl;
    CHECK(fraunhofer_distance(geom, carrier()) ==
          doctest::Approx(2.0 * aperture * aperture / wl).epsilon(1e-15));
    CHECK(fraunhofer_distance(geom, carrier()) == doctest::Approx(391.42).epsilon(0.01));
  }

  SUBCASE("wide spacing, two antennas") {
    const UlaGeometry geom{2, 9.0 * wl};
    CHECK(fraunhofer_distance(geom, carrier()) == doctest::Approx(162.0 * wl).epsilon(1e-14));
  }

  SUBCASE("wide spacing, three antennas") {
    const UlaGeometry geom{3, 9.0 * wl};
    CHECK(fraunhofer_distance(geom, carrier()) == doctest::Approx(648.0 * wl).epsilon(1e-14));
  }

  SUBCASE("half-wavelength spacing, 128 antennas") {
    const UlaGeometry geom{128, 0.5 * wl};
    CHECK(fraunhofer_distance(geom, carrier()) == doctest::Approx(8064.5 * wl).epsilon(1e-14));
  }
}

TEST_CASE("element offsets are centred half-integers") {
  const UlaGeometry even{4, 1.0};
  CHECK(even.element_offset(0) == -1.5);
  CHECK(even.element_offset(1) == -0.5);
  CHECK(even.element_offset(2) == 0.5);
  CHECK(even.element_offset(3) == 1.5);

  const UlaGeometry odd{3, 1.0};
  CHECK(odd.element_offset(0) == -1.0);
  CHECK(odd.element_offset(1) == 0.0);
  CHECK(odd.element_offset(2) == 1.0);
}

TEST_CASE("element distance matches the law of cosines") {
  // Two antennas, 9-wavelength spacing, source at 16.2 wavelengths and 30
  // degrees. Hand expansion: r^2 = 262.44, (d/2)^2 = 20.25,
  // 2 r (d/2) sin(theta) = 72.9, all in squared wavelengths.
  const double wl = lambda();
  const UlaGeometry geom{2, 9.0 * wl};
  const PolarLocation loc{16.2 * wl, std::numbers::pi / 6.0};
  CHECK(element_distance(loc, geom, 0) ==
        doctest::Approx(wl * std::sqrt(262.44 + 20.25 + 72.9)).epsilon(1e-12));
  CHECK(element_distance(loc, geom, 1) ==
        doctest::Approx(wl * std::sqrt(262.44 + 20.25 - 72.9)).epsilon(1e-12));
}

TEST_CASE("element path difference stays accurate at long range") {
  // Direct subtraction in extended precision is the second route; the
  // implementation must agree without the cancellation loss a plain double
  // subtraction would suffer at r = 1e8 m.
  const double wl = lambda();
  const UlaGeometry geom{64, 0.5 * wl};
  const PolarLocation loc{1e8, 0.3};
  for (int n = 0; n < 64; n += 7) {
    const long double offset = static_cast<long double>(geom.element_offset(n)) * geom.spacing_m;
    const long double r = loc.range_m;
    const long double exact =
        std::sqrt(r * r + offset * offset - 2.0L * r * offset * std::sin((long double)loc.angle_rad)) - r;
    const double got = element_path_difference(loc, geom, n);
    CHECK(got == doctest::Approx(static_cast<double>(exact)).epsilon(1e-9));
  }
}

TEST_CASE("steering vector entries are unit phasors of the path difference") {
  const double wl = lambda();
  const UlaGeometry geom{16, 0.5 * wl};
  const PolarLocation loc{0.7, -0.4};
  const SteeringVector b = steering_vector(carrier(), loc, geom);
  REQUIRE(b.size() == 16);
  for (int n = 0; n < 16; ++n) {
    CHECK(std::abs(b(n)) == doctest::Approx(1.0).epsilon(1e-14));
    const std::complex<double> expected =
        std::exp(std::complex<double>(0.0, -2.0 * std::numbers::pi / wl *
                                               element_path_difference(loc, geom, n)));
    CHECK(std::abs(b(n) - expected) < 1e-14);
  }
}

TEST_CASE("steering vector approaches the planar response far away") {
  const double wl = lambda();
  const UlaGeometry geom{8, 0.5 * wl};
  const double theta = 0.29;
  const PolarLocation loc{1e9, theta};
  const SteeringVector b = steering_vector(carrier(), loc, geom);
  for (int n = 0; n < 8; ++n) {
    const double planar_phase =
        2.0 * std::numbers::pi / wl * geom.element_offset(n) * geom.spacing_m * std::sin(theta);
    const std::complex<double> expected = std::exp(std::complex<double>(0.0, planar_phase));
    CHECK(std::abs(b(n) - expected) < 1e-6);
  }
}
