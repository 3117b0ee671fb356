// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation
//
// Reference implementations used only by the tests. Each oracle takes a
// different algorithmic route than the library (cyclic Jacobi instead of
// tridiagonalization, elimination instead of factorization-based solves) so
// agreement is evidence of correctness rather than shared bugs.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rng.hpp"

namespace oracle {

struct JacobiEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors; // columns, same order
};

// Cyclic complex Jacobi diagonalization for a Hermitian matrix. Converges to
// machine precision for the small matrices the tests use; throws if the
// off-diagonal mass fails to shrink, so a broken oracle can never silently
// agree with the code under test.
inline JacobiEigen jacobi_hermitian(Eigen::MatrixXcd a) {
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cols() != n) {
    throw std::invalid_argument("jacobi_hermitian: square input required");
  }
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        off += std::norm(a(p, q));
      }
    }
    if (std::sqrt(off) <= 1e-14 * scale) {
      JacobiEigen out;
      out.values = a.diagonal().real();
      out.vectors = v;
      std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](Eigen::Index i, Eigen::Index j) { return out.values(i) < out.values(j); });
      Eigen::VectorXd sorted_values(n);
      Eigen::MatrixXcd sorted_vectors(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        sorted_values(i) = out.values(order[static_cast<std::size_t>(i)]);
        sorted_vectors.col(i) = out.vectors.col(order[static_cast<std::size_t>(i)]);
      }
      out.values = sorted_values;
      out.vectors = sorted_vectors;
      return out;
    }
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const std::complex<double> apq = a(p, q);
        const double m = std::abs(apq);
        if (m <= 1e-300) {
          continue;
        }
        // Unitary 2x2 rotation zeroing a(p, q): angle from the standard
        // stable tangent formula, phase carried by the off-diagonal entry.
        const std::complex<double> phase = apq / m;
        // Annihilation condition for this sign convention: t^2 - 2 tau t - 1 = 0,
        // taking the smaller-magnitude root for stability.
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * m);
        const double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(n, n);
        g(p, p) = c;
        g(p, q) = -s * phase;
        g(q, p) = s * std::conj(phase);
        g(q, q) = c;
        a = (g.adjoint() * a * g).eval();
        v = (v * g).eval();
      }
    }
  }
  throw std::runtime_error("jacobi_hermitian: no convergence");
}

// Complex linear solve A X = B by Gaussian elimination with partial pivoting.
inline Eigen::MatrixXcd solve_gaussian(Eigen::MatrixXcd a, Eigen::MatrixXcd b) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n) {
    throw std::invalid_argument("solve_gaussian: dimension mismatch");
  }
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index row = col + 1; row < n; ++row) {
      if (std::abs(a(row, col)) > std::abs(a(pivot, col))) {
        pivot = row;
      }
    }
    if (std::abs(a(pivot, col)) < 1e-300) {
      throw std::runtime_error("solve_gaussian: singular matrix");
    }
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      b.row(pivot).swap(b.row(col));
    }
    for (Eigen::Index row = col + 1; row < n; ++row) {
      const std::complex<double> factor = a(row, col) / a(col, col);
      a.row(row).tail(n - col) -= factor * a.row(col).tail(n - col);
      b.row(row) -= factor * b.row(col);
    }
  }
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, b.cols());
  for (Eigen::Index row = n - 1; row >= 0; --row) {
    Eigen::RowVectorXcd acc = b.row(row);
    for (Eigen::Index col = row + 1; col < n; ++col) {
      acc -= a(row, col) * x.row(col);
    }
    x.row(row) = acc / a(row, row);
  }
  return x;
}

// Marsaglia-Tsang gamma sampler (shape > 0, scale > 0), driven by the
// library's uniform/normal source so runs are reproducible.
inline double gamma_sample(double shape, double scale, nearfocus::Rng& rng) {
  if (shape < 1.0) {
    const double u = std::max(rng.uniform(), 1e-300);
    return gamma_sample(shape + 1.0, scale, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double z0 = 0.0;
    double z1 = 0.0;
    rng.gaussian_pair(z0, z1);
    const double x = z0;
    const double base = 1.0 + c * x;
    if (base <= 0.0) {
      continue;
    }
    const double v = base * base * base;
    const double u = std::max(rng.uniform(), 1e-300);
    if (u < 1.0 - 0.0331 * x * x * x * x ||
        std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v * scale;
    }
  }
}

// Two-sided Kolmogorov-Smirnov statistic of samples against a CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

}  // namespace oracle
