#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "mzi/discrimination.hpp"
#include "mzi/interferometer.hpp"

// Deterministic samplers shared by the validation suites, the bound checker,
// and the tests. std::uniform_real_distribution is implementation-defined, so
// doubles are produced from raw engine words directly; a fixed seed yields the
// same stream everywhere.
namespace mzi {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {  // Box-Muller
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

inline BlochVector sample_bloch_ball(Rng& rng) {
  for (;;) {
    BlochVector b{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    if (b.norm_squared() <= 1.0) return b;
  }
}

inline BlochVector sample_bloch_sphere(Rng& rng) {
  for (;;) {
    BlochVector b{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const double n = std::sqrt(b.norm_squared());
    if (n < 1e-6) continue;
    return BlochVector{b.s_x / n, b.s_y / n, b.s_z / n};
  }
}

inline double sample_beta(Rng& rng) { return rng.uniform(0.0, std::numbers::pi); }

inline double sample_overlap(Rng& rng, double max = 0.99) { return rng.uniform(0.0, max); }

inline Priors sample_priors(Rng& rng) {
  const double omega_a = rng.uniform();
  return Priors{omega_a, 1.0 - omega_a};
}

// Canonical dim-2 detector carrying an extra global phase on the mark
// unitary, so scan oracles see a nontrivial gamma offset.
inline DetectorModel sample_detector(Rng& rng, double overlap_c) {
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double s = std::sqrt(std::max(0.0, 1.0 - overlap_c * overlap_c));
  const cx phase = std::polar(1.0, theta);
  CMatrix u(2, 2);
  u(0, 0) = phase * overlap_c;
  u(0, 1) = phase * -s;
  u(1, 0) = phase * s;
  u(1, 1) = phase * overlap_c;
  return DetectorModel::make(CVector{cx{1.0, 0.0}, cx{0.0, 0.0}}, std::move(u));
}

// Random apparatus point with the post-selection normalizer bounded away from
// zero; non-degenerate by construction.
inline ApparatusConfig sample_config(Rng& rng, double min_denominator = 1e-3) {
  for (;;) {
    const BlochVector bloch = sample_bloch_ball(rng);
    const double beta = sample_beta(rng);
    if (1.0 + bloch.s_x * std::cos(beta) < min_denominator) continue;
    const double overlap_c = sample_overlap(rng);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return ApparatusConfig{bloch, BeamSplitter(beta), phase, sample_detector(rng, overlap_c)};
  }
}

// Hypothesis pair |r> = e_0 and |s> with |<r|s>| = overlap_c; the relative
// phase of <r|s> is random, exercising the phase absorption in OverlapPair.
inline OverlapPair sample_overlap_pair(Rng& rng, std::size_t dim, double overlap_c) {
  CVector r(dim, cx{0.0, 0.0});
  r[0] = cx{1.0, 0.0};

  CVector tail(dim, cx{0.0, 0.0});
  double tail_norm = 0.0;
  while (tail_norm < 1e-6) {
    for (std::size_t k = 1; k < dim; ++k) tail[k] = cx{rng.gaussian(), rng.gaussian()};
    tail_norm = norm(tail);
  }
  const double s = std::sqrt(std::max(0.0, 1.0 - overlap_c * overlap_c));
  CVector sv(dim);
  sv[0] = std::polar(overlap_c, rng.uniform(0.0, 2.0 * std::numbers::pi));
  for (std::size_t k = 1; k < dim; ++k) sv[k] = tail[k] * (s / tail_norm);
  return OverlapPair::from_states(std::move(r), std::move(sv));
}

}  // namespace mzi
