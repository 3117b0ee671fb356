// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace nearfocus {

// Signal/noise split of a Hermitian covariance. eigenvalues are sorted
// descending; signal_basis holds the leading n_signal eigenvectors and
// noise_basis the rest.
struct SubspacePair {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd signal_basis;
  Eigen::MatrixXcd noise_basis;
};

// Polar search grid. Values are the exact cell coordinates; spectra are
// indexed (range index, angle index).
struct MusicGrid {
  std::vector<double> r_values;    // metres
  std::vector<double> theta_values;  // radians
};

// One selected spectrum cell.
struct GridPeak {
  int r_index = 0;
  int theta_index = 0;
  double range_m = 0.0;
  double angle_rad = 0.0;
  double value = 0.0;
};

// R = Y Y^H / tau, re-symmetrized so the eigensolver sees an exactly
// Hermitian matrix.
Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd& received);

SubspacePair hermitian_eigendecomposition(const Eigen::MatrixXcd& cov, int n_signal);

// Inclusive arithmetic grid; the last value never exceeds the upper bound by
// more than roundoff.
MusicGrid make_grid(double r_min, double r_max, double r_step, double theta_min,
                    double theta_max, double theta_step);

// Pseudospectrum 1 / ||Un^H b||^2 over the grid. Uses the complement
// identity ||Un^H b||^2 = N - ||Us^H b||^2 (valid because b has unit-modulus
// entries, so ||b||^2 = N), which costs O(N K) per cell instead of
// O(N (N - K)). Denominators are clamped below at 1e-15 * N. Cells are
// computed independently into a preallocated matrix, so the result is
// bit-identical for any thread count.
Eigen::MatrixXd music_spectrum(const SubspacePair& subspaces, const MusicGrid& grid,
                               const CarrierConfig& carrier, const UlaGeometry& geom,
                               int threads);

// Direct evaluation of 1 / ||Un^H b||^2 from the noise basis, single
// threaded. Kept as the slow reference for the fast path.
Eigen::MatrixXd music_spectrum_naive(const SubspacePair& subspaces, const MusicGrid& grid,
                                     const CarrierConfig& carrier, const UlaGeometry& geom);

// Selects `count` cells: first strict 8-neighbour local maxima in descending
// value order, each kept only if it is at least min_separation_cells away
// from every kept peak in range index or in angle index (Chebyshev rule: a
// candidate is rejected only when both index gaps are below the separation).
// If local maxima run out, the largest remaining cells fill the list under
// the same separation rule, then without it. Ties in value break towards the
// lower range index, then the lower angle index.
std::vector<GridPeak> find_peaks(const Eigen::MatrixXd& spectrum, const MusicGrid& grid,
                                 int count, int min_separation_cells);

// Minimum-cost bijection between peaks and ground-truth positions, cost
// |r_hat - r| / r + |theta_hat - theta| per pair, found by exhaustive
// permutation search (user counts above 9 are rejected). Returns the peak
// index assigned to each truth.
std::vector<int> associate_estimates(const std::vector<GridPeak>& peaks,
                                     const std::vector<PolarLocation>& truths);

// Rows r_m,theta_deg,spectrum_value; config_comment, when non-empty, is
// emitted first as a '#' comment line.
void write_spectrum_csv(const std::string& path, const Eigen::MatrixXd& spectrum,
                        const MusicGrid& grid, const std::string& config_comment);

}  // namespace nearfocus
