// SPDX-License-Identifier: Apache-2.0
//
// nearfocus - near-field multi-user MIMO localization and beam-focusing simulation

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace nearfocus {

// Seed mixer used to derive independent substream seeds from a master seed.
// Substreams are indexed by a caller-chosen 64-bit id, so a trial's draws
// depend only on (master seed, id), never on execution order or thread count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream_id) {
  SplitMix64 mix(master ^ (0x9E3779B97F4A7C15ULL * (stream_id + 0x632BE59BD9B4E019ULL)));
  mix.next();
  return mix.next();
}

// Composes a stream id from small tags (figure number, parameter index, trial
// index, draw purpose). Chained mixing keeps distinct tag tuples distinct.
inline std::uint64_t stream_id(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                               std::uint64_t d = 0) {
  SplitMix64 mix(a);
  std::uint64_t s = mix.next();
  s ^= SplitMix64(b ^ 0xD1B54A32D192ED03ULL).next();
  s = s * 0x9E3779B97F4A7C15ULL + SplitMix64(c ^ 0x8CB92BA72F3D8DD7ULL).next();
  s ^= SplitMix64(d ^ 0xEB44ACCAB455D165ULL).next();
  return s;
}

// Deterministic random source. All mappings from generator words to variates
// are implemented here (never via std:: distributions, whose output is
// implementation-defined), so a given seed reproduces bit-identical draws on
// any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  // Standard normal pair via Box-Muller. Consumes exactly two generator words.
  void gaussian_pair(double& z0, double& z1) {
    const double u1 = 1.0 - uniform();  // (0, 1]: keeps log() finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    z0 = radius * std::cos(angle);
    z1 = radius * std::sin(angle);
  }

  // Circularly-symmetric complex normal with the given total variance:
  // real and imaginary parts are independent N(0, variance/2).
  std::complex<double> complex_gaussian(double variance) {
    double z0 = 0.0;
    double z1 = 0.0;
    gaussian_pair(z0, z1);
    const double scale = std::sqrt(0.5 * variance);
    return {scale * z0, scale * z1};
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nearfocus
