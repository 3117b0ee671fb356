// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#include "analysis.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace nearfocus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_antennas(const NoisePhases& phases, const UlaGeometry& geom, int expected,
                      const char* where) {
  if (geom.n_antennas != expected ||
      phases.magnitudes.size() != static_cast<std::size_t>(expected) ||
      phases.phases.size() != static_cast<std::size_t>(expected)) {
    throw ConfigError(std::string(where) + ": expects exactly " + std::to_string(expected) +
                      " antennas");
  }
}

}  // namespace

NoisePhases NoisePhases::from_eigenvector(const Eigen::VectorXcd& u) {
  NoisePhases out;
  out.magnitudes.resize(static_cast<std::size_t>(u.size()));
  out.phases.resize(static_cast<std::size_t>(u.size()));
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    out.magnitudes[static_cast<std::size_t>(i)] = std::abs(u(i));
    out.phases[static_cast<std::size_t>(i)] = std::arg(u(i));
  }
  return out;
}

double wrap_phase(double phase) {
  double wrapped = std::fmod(phase, kTwoPi);
  if (wrapped <= 0.0) {
    wrapped += kTwoPi;
  }
  return wrapped;
}

double two_antenna_denominator(const NoisePhases& phases, double range_m, double angle_rad,
                               const CarrierConfig& carrier, const UlaGeometry& geom) {
  require_antennas(phases, geom, 2, "two_antenna_denominator");
  const double d = geom.spacing_m;
  const double r = range_m;
  const double rd_sin = r * d * std::sin(angle_rad);
  const double quarter = 0.25 * d * d;
  const double r0 = std::sqrt(r * r + quarter + rd_sin);
  const double r1 = std::sqrt(r * r + quarter - rd_sin);
  const double k = kTwoPi / carrier.wavelength();
  const double m1 = phases.magnitudes[0];
  const double m2 = phases.magnitudes[1];
  return m1 * m1 + m2 * m2 +
         2.0 * m1 * m2 * std::cos(k * (r0 - r1) + phases.phases[0] - phases.phases[1]);
}

double three_antenna_denominator(const NoisePhases& phases, double range_m, double angle_rad,
                                 const CarrierConfig& carrier, const UlaGeometry& geom) {
  require_antennas(phases, geom, 3, "three_antenna_denominator");
  const double d = geom.spacing_m;
  const double r = range_m;
  const double two_rd_sin = 2.0 * r * d * std::sin(angle_rad);
  const double r0 = std::sqrt(r * r + d * d + two_rd_sin);
  const double r2 = std::sqrt(r * r + d * d - two_rd_sin);
  const double k = kTwoPi / carrier.wavelength();
  const double m1 = phases.magnitudes[0];
  const double m2 = phases.magnitudes[1];
  const double m3 = phases.magnitudes[2];
  const double p1 = phases.phases[0];
  const double p2 = phases.phases[1];
  const double p3 = phases.phases[2];
  return m1 * m1 + m2 * m2 + m3 * m3 +
         2.0 * m1 * m2 * std::cos(k * (r - r0) + p2 - p1) +
         2.0 * m1 * m3 * std::cos(k * (r2 - r0) + p3 - p1) +
         2.0 * m2 * m3 * std::cos(k * (r2 - r) + p3 - p2);
}

std::optional<double> closed_form_range(double delta_phi, int wrap_index, double angle_rad,
                                        const CarrierConfig& carrier, const UlaGeometry& geom) {
  if (geom.n_antennas != 2) {
    throw ConfigError("closed_form_range: expects exactly 2 antennas");
  }
  if (wrap_index < 0) {
    throw ConfigError("closed_form_range: wrap index must be non-negative");
  }
  const double lambda = carrier.wavelength();
  const double d = geom.spacing_m;
  const double psi =
      (lambda / kTwoPi) * ((2.0 * static_cast<double>(wrap_index) + 1.0) * std::numbers::pi + delta_phi);
  const double kappa = 0.5 * d * d - psi * psi;
  const double sin_theta = std::sin(angle_rad);
  const double denominator = 4.0 * kappa - 2.0 * d * d + 4.0 * d * d * sin_theta * sin_theta;
  if (denominator == 0.0) {
    return std::nullopt;
  }
  const double r_sq = (0.25 * d * d * d * d - kappa * kappa) / denominator;
  if (!(r_sq > 0.0) || !std::isfinite(r_sq)) {
    return std::nullopt;
  }
  return std::sqrt(r_sq);
}

int wrap_index_lower_bound(const CarrierConfig& carrier, const UlaGeometry& geom) {
  const double ratio = geom.spacing_m / carrier.wavelength();
  const int bound = static_cast<int>(std::ceil(ratio - 1.0 - 1e-9));
  return bound > 0 ? bound : 0;
}

std::optional<WrapSelection> select_wrap_index(const NoisePhases& phases, double angle_rad,
                                               const CarrierConfig& carrier,
                                               const UlaGeometry& geom, int search_width) {
  require_antennas(phases, geom, 2, "select_wrap_index");
  if (search_width < 1) {
    throw ConfigError("select_wrap_index: search width must be at least 1");
  }
  const double delta_phi = wrap_phase(phases.phases[1] - phases.phases[0]);
  const int first = wrap_index_lower_bound(carrier, geom);
  const double m1 = phases.magnitudes[0];
  const double m2 = phases.magnitudes[1];
  // Denominator values live on the scale of the squared magnitudes; ties
  // below this tolerance resolve to the lowest wrap index.
  const double tie_tolerance = 1e-9 * (m1 * m1 + m2 * m2 + 2.0 * m1 * m2);

  std::optional<WrapSelection> best;
  double best_value = 0.0;
  for (int m = first; m < first + search_width; ++m) {
    const std::optional<double> range = closed_form_range(delta_phi, m, angle_rad, carrier, geom);
    if (!range) {
      continue;
    }
    const double value = two_antenna_denominator(phases, *range, angle_rad, carrier, geom);
    if (!best || value < best_value - tie_tolerance) {
      best = WrapSelection{m, *range};
      best_value = value;
    }
  }
  return best;
}

GammaFit fit_gamma_moments(const std::vector<double>& samples) {
  if (samples.size() < 2) {
    throw ConfigError("fit_gamma_moments: at least two samples required");
  }
  double mean = 0.0;
  for (double s : samples) {
    mean += s;
  }
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double s : samples) {
    var += (s - mean) * (s - mean);
  }
  var /= static_cast<double>(samples.size() - 1);
  if (!(mean > 0.0) || !(var > 0.0)) {
    throw NumericError("fit_gamma_moments: samples must have positive mean and variance");
  }
  return GammaFit{mean * mean / var, var / mean};
}

PowerLawFit fit_variance_power_law(const std::vector<double>& r_values,
                                   const std::vector<double>& variances) {
  if (r_values.size() != variances.size() || r_values.size() < 2) {
    throw ConfigError("fit_variance_power_law: need at least two matching points");
  }
  const auto n = static_cast<double>(r_values.size());
  double mean_lr = 0.0;
  double mean_lv = 0.0;
  double mean_fixed = 0.0;
  std::vector<double> lr(r_values.size());
  std::vector<double> lv(r_values.size());
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    if (!(r_values[i] > 0.0) || !(variances[i] > 0.0)) {
      throw ConfigError("fit_variance_power_law: points must be positive");
    }
    lr[i] = std::log(r_values[i]);
    lv[i] = std::log(variances[i]);
    mean_lr += lr[i];
    mean_lv += lv[i];
    mean_fixed += lv[i] - 4.0 * lr[i];
  }
  mean_lr /= n;
  mean_lv /= n;
  mean_fixed /= n;
  double cov = 0.0;
  double var_lr = 0.0;
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    cov += (lr[i] - mean_lr) * (lv[i] - mean_lv);
    var_lr += (lr[i] - mean_lr) * (lr[i] - mean_lr);
  }
  if (!(var_lr > 0.0)) {
    throw ConfigError("fit_variance_power_law: ranges must not all coincide");
  }
  return PowerLawFit{std::exp(mean_fixed), cov / var_lr};
}

}  // namespace nearfocus
