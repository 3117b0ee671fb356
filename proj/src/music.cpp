// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#include "music.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "errors.hpp"
#include "parallel.hpp"
#include "textio.hpp"

namespace nearfocus {

Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd& received) {
  if (received.cols() < 1) {
    throw ConfigError("sample_covariance: observation must have at least one column");
  }
  const double tau = static_cast<double>(received.cols());
  Eigen::MatrixXcd cov = received * received.adjoint() / tau;
  return 0.5 * (cov + cov.adjoint().eval());
}

SubspacePair hermitian_eigendecomposition(const Eigen::MatrixXcd& cov, int n_signal) {
  const Eigen::Index n = cov.rows();
  if (cov.cols() != n) {
    throw ConfigError("hermitian_eigendecomposition: matrix must be square");
  }
  if (n_signal < 1 || n_signal >= n) {
    throw ConfigError("hermitian_eigendecomposition: signal dimension out of range");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw NumericError("hermitian_eigendecomposition: eigensolver failed to converge");
  }
  SubspacePair out;
  out.eigenvalues = solver.eigenvalues().reverse();
  const Eigen::MatrixXcd vectors = solver.eigenvectors().rowwise().reverse();
  out.signal_basis = vectors.leftCols(n_signal);
  out.noise_basis = vectors.rightCols(n - n_signal);
  return out;
}

namespace {

std::vector<double> arithmetic_grid(double lo, double hi, double step, const char* what) {
  if (step <= 0.0) {
    throw ConfigError(std::string("make_grid: ") + what + " step must be positive");
  }
  if (hi < lo) {
    throw ConfigError(std::string("make_grid: ") + what + " bounds are reversed");
  }
  const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> values(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    values[static_cast<std::size_t>(i)] = lo + static_cast<double>(i) * step;
  }
  return values;
}

}  // namespace

MusicGrid make_grid(double r_min, double r_max, double r_step, double theta_min,
                    double theta_max, double theta_step) {
  if (r_min <= 0.0) {
    throw ConfigError("make_grid: range lower bound must be positive");
  }
  MusicGrid grid;
  grid.r_values = arithmetic_grid(r_min, r_max, r_step, "range");
  grid.theta_values = arithmetic_grid(theta_min, theta_max, theta_step, "angle");
  return grid;
}

Eigen::MatrixXd music_spectrum(const SubspacePair& subspaces, const MusicGrid& grid,
                               const CarrierConfig& carrier, const UlaGeometry& geom,
                               int threads) {
  const int n = geom.n_antennas;
  const auto n_signal = static_cast<int>(subspaces.signal_basis.cols());
  if (subspaces.signal_basis.rows() != n) {
    throw ConfigError("music_spectrum: basis size does not match the array");
  }
  const auto n_r = static_cast<Eigen::Index>(grid.r_values.size());
  const auto n_theta = static_cast<Eigen::Index>(grid.theta_values.size());
  Eigen::MatrixXd spectrum(n_r, n_theta);

  // Flat row-major copies of the signal basis keep the per-cell projection
  // loop contiguous: us_re[k * n + a] = Re(Us(a, k)).
  std::vector<double> us_re(static_cast<std::size_t>(n_signal) * n);
  std::vector<double> us_im(static_cast<std::size_t>(n_signal) * n);
  for (int k = 0; k < n_signal; ++k) {
    for (int a = 0; a < n; ++a) {
      const std::complex<double> v = subspaces.signal_basis(a, k);
      us_re[static_cast<std::size_t>(k) * n + a] = v.real();
      us_im[static_cast<std::size_t>(k) * n + a] = v.imag();
    }
  }
  std::vector<double> off(static_cast<std::size_t>(n));
  std::vector<double> off_sq(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    off[static_cast<std::size_t>(a)] = geom.element_offset(a) * geom.spacing_m;
    off_sq[static_cast<std::size_t>(a)] = off[static_cast<std::size_t>(a)] * off[static_cast<std::size_t>(a)];
  }
  const double wavenumber = 2.0 * std::numbers::pi / carrier.wavelength();
  const double floor_value = 1e-15 * static_cast<double>(n);

  parallel_for(n_theta, threads, [&](std::int64_t t_begin, std::int64_t t_end) {
    std::vector<double> cross(static_cast<std::size_t>(n));  // 2 * offset * sin(theta)
    std::vector<double> b_re(static_cast<std::size_t>(n));
    std::vector<double> b_im(static_cast<std::size_t>(n));
    for (std::int64_t it = t_begin; it < t_end; ++it) {
      const double sin_theta = std::sin(grid.theta_values[static_cast<std::size_t>(it)]);
      for (int a = 0; a < n; ++a) {
        cross[static_cast<std::size_t>(a)] = 2.0 * off[static_cast<std::size_t>(a)] * sin_theta;
      }
      for (Eigen::Index ir = 0; ir < n_r; ++ir) {
        const double r = grid.r_values[static_cast<std::size_t>(ir)];
        for (int a = 0; a < n; ++a) {
          const double numer = off_sq[static_cast<std::size_t>(a)] - r * cross[static_cast<std::size_t>(a)];
          const double rn = std::sqrt(r * r + numer);
          const double phase = -wavenumber * (numer / (rn + r));
          b_re[static_cast<std::size_t>(a)] = std::cos(phase);
          b_im[static_cast<std::size_t>(a)] = std::sin(phase);
        }
        double projection = 0.0;
        for (int k = 0; k < n_signal; ++k) {
          const double* ur = us_re.data() + static_cast<std::size_t>(k) * n;
          const double* ui = us_im.data() + static_cast<std::size_t>(k) * n;
          double acc_re = 0.0;
          double acc_im = 0.0;
          for (int a = 0; a < n; ++a) {
            acc_re += ur[a] * b_re[static_cast<std::size_t>(a)] + ui[a] * b_im[static_cast<std::size_t>(a)];
            acc_im += ur[a] * b_im[static_cast<std::size_t>(a)] - ui[a] * b_re[static_cast<std::size_t>(a)];
          }
          projection += acc_re * acc_re + acc_im * acc_im;
        }
        const double denom = std::max(static_cast<double>(n) - projection, floor_value);
        spectrum(ir, it) = 1.0 / denom;
      }
    }
  });
  return spectrum;
}

Eigen::MatrixXd music_spectrum_naive(const SubspacePair& subspaces, const MusicGrid& grid,
                                     const CarrierConfig& carrier, const UlaGeometry& geom) {
  const int n = geom.n_antennas;
  if (subspaces.noise_basis.rows() != n) {
    throw ConfigError("music_spectrum_naive: basis size does not match the array");
  }
  const auto n_r = static_cast<Eigen::Index>(grid.r_values.size());
  const auto n_theta = static_cast<Eigen::Index>(grid.theta_values.size());
  const double floor_value = 1e-15 * static_cast<double>(n);
  Eigen::MatrixXd spectrum(n_r, n_theta);
  for (Eigen::Index it = 0; it < n_theta; ++it) {
    for (Eigen::Index ir = 0; ir < n_r; ++ir) {
      const PolarLocation cell{grid.r_values[static_cast<std::size_t>(ir)],
                               grid.theta_values[static_cast<std::size_t>(it)]};
      const SteeringVector b = steering_vector(carrier, cell, geom);
      const double denom = std::max((subspaces.noise_basis.adjoint() * b).squaredNorm(), floor_value);
      spectrum(ir, it) = 1.0 / denom;
    }
  }
  return spectrum;
}

namespace {

struct Cell {
  double value;
  int ir;
  int it;
};

bool better(const Cell& a, const Cell& b) {
  if (a.value != b.value) {
    return a.value > b.value;
  }
  if (a.ir != b.ir) {
    return a.ir < b.ir;
  }
  return a.it < b.it;
}

bool separated(const Cell& cell, const std::vector<Cell>& kept, int min_separation) {
  for (const auto& k : kept) {
    if (std::abs(cell.ir - k.ir) < min_separation && std::abs(cell.it - k.it) < min_separation) {
      return false;
    }
  }
  return true;
}

bool already_kept(const Cell& cell, const std::vector<Cell>& kept) {
  for (const auto& k : kept) {
    if (k.ir == cell.ir && k.it == cell.it) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<GridPeak> find_peaks(const Eigen::MatrixXd& spectrum, const MusicGrid& grid,
                                 int count, int min_separation_cells) {
  const auto n_r = static_cast<int>(spectrum.rows());
  const auto n_theta = static_cast<int>(spectrum.cols());
  if (count < 1 || static_cast<std::int64_t>(count) > static_cast<std::int64_t>(n_r) * n_theta) {
    throw ConfigError("find_peaks: requested peak count does not fit the grid");
  }
  if (min_separation_cells < 1) {
    throw ConfigError("find_peaks: separation must be at least one cell");
  }

  std::vector<Cell> maxima;
  for (int ir = 0; ir < n_r; ++ir) {
    for (int it = 0; it < n_theta; ++it) {
      const double v = spectrum(ir, it);
      bool is_max = true;
      for (int dr = -1; dr <= 1 && is_max; ++dr) {
        for (int dt = -1; dt <= 1 && is_max; ++dt) {
          if (dr == 0 && dt == 0) {
            continue;
          }
          const int jr = ir + dr;
          const int jt = it + dt;
          if (jr < 0 || jr >= n_r || jt < 0 || jt >= n_theta) {
            continue;
          }
          if (spectrum(jr, jt) >= v) {
            is_max = false;
          }
        }
      }
      if (is_max) {
        maxima.push_back({v, ir, it});
      }
    }
  }
  std::sort(maxima.begin(), maxima.end(), better);

  std::vector<Cell> kept;
  kept.reserve(static_cast<std::size_t>(count));
  for (const auto& c : maxima) {
    if (static_cast<int>(kept.size()) == count) {
      break;
    }
    if (separated(c, kept, min_separation_cells)) {
      kept.push_back(c);
    }
  }

  if (static_cast<int>(kept.size()) < count) {
    // Not enough isolated maxima (flat or heavily merged spectra): top up
    // from the best remaining cells, preferring ones that keep the
    // separation rule, then dropping it as a last resort.
    std::vector<Cell> all;
    all.reserve(static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_theta));
    for (int ir = 0; ir < n_r; ++ir) {
      for (int it = 0; it < n_theta; ++it) {
        all.push_back({spectrum(ir, it), ir, it});
      }
    }
    std::sort(all.begin(), all.end(), better);
    for (const auto& c : all) {
      if (static_cast<int>(kept.size()) == count) {
        break;
      }
      if (!already_kept(c, kept) && separated(c, kept, min_separation_cells)) {
        kept.push_back(c);
      }
    }
    for (const auto& c : all) {
      if (static_cast<int>(kept.size()) == count) {
        break;
      }
      if (!already_kept(c, kept)) {
        kept.push_back(c);
      }
    }
  }

  std::vector<GridPeak> peaks;
  peaks.reserve(kept.size());
  for (const auto& c : kept) {
    peaks.push_back({c.ir, c.it, grid.r_values[static_cast<std::size_t>(c.ir)],
                     grid.theta_values[static_cast<std::size_t>(c.it)], c.value});
  }
  return peaks;
}

std::vector<int> associate_estimates(const std::vector<GridPeak>& peaks,
                                     const std::vector<PolarLocation>& truths) {
  if (peaks.size() != truths.size()) {
    throw ConfigError("associate_estimates: peak and truth counts differ");
  }
  const auto k = static_cast<int>(truths.size());
  if (k < 1 || k > 9) {
    throw ConfigError("associate_estimates: user count must be in [1, 9]");
  }
  std::vector<int> perm(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    perm[static_cast<std::size_t>(i)] = i;
  }
  std::vector<int> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int i = 0; i < k; ++i) {
      const auto& peak = peaks[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      const auto& truth = truths[static_cast<std::size_t>(i)];
      cost += std::abs(peak.range_m - truth.range_m) / truth.range_m +
              std::abs(peak.angle_rad - truth.angle_rad);
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void write_spectrum_csv(const std::string& path, const Eigen::MatrixXd& spectrum,
                        const MusicGrid& grid, const std::string& config_comment) {
  if (spectrum.rows() != static_cast<Eigen::Index>(grid.r_values.size()) ||
      spectrum.cols() != static_cast<Eigen::Index>(grid.theta_values.size())) {
    throw ConfigError("write_spectrum_csv: spectrum shape does not match the grid");
  }
  std::ofstream out = open_output_file(path);
  if (!config_comment.empty()) {
    out << "# " << config_comment << "\n";
  }
  out << "r_m,theta_deg,spectrum_value\n";
  for (Eigen::Index ir = 0; ir < spectrum.rows(); ++ir) {
    for (Eigen::Index it = 0; it < spectrum.cols(); ++it) {
      const double theta_deg =
          grid.theta_values[static_cast<std::size_t>(it)] * 180.0 / std::numbers::pi;
      out << format_g17(grid.r_values[static_cast<std::size_t>(ir)]) << ','
          << format_g17(theta_deg) << ',' << format_g17(spectrum(ir, it)) << "\n";
    }
  }
  if (!out) {
    throw ConfigError("write_spectrum_csv: write failed for " + path);
  }
}

}  // namespace nearfocus
