#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mzi/discrimination.hpp"
#include "mzi/interferometer.hpp"

// Visibility and which-path information combined: single-point reports,
// figure-style parameter sweeps, and the complementarity bound check.
namespace mzi {

struct DualityReport {
  double s_x = 0.0;
  double s_y = 0.0;
  double s_z = 0.0;
  double beta = 0.0;
  double overlap_c = 0.0;
  double visibility = 0.0;
  double i_path = 0.0;       // bits
  double duality_sum = 0.0;  // visibility + i_path
  Regime regime;
  Priors priors;
  double failure_prob = 0.0;
};

// Closed-form pipeline for one apparatus point. Enforces V + I <= 1 + 1e-9,
// V <= C and I <= 1 - C (with their slacks); throws DegenerateConfig naming
// the offending parameters when the post-selection normalizer vanishes.
DualityReport report(const ApparatusConfig& cfg);

enum class SweepParam { s_x, beta, overlap_c };

const char* sweep_param_name(SweepParam p);

struct SweepAxis {
  SweepParam param = SweepParam::s_x;
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 2;
};

struct SweepSpec {
  SweepAxis outer;
  SweepAxis inner;
  double fixed_s_x = 0.0;
  double fixed_s_y = 0.0;
  double fixed_s_z = 0.0;      // used only when pure = false
  double fixed_beta = 0.0;
  double fixed_overlap = 0.0;
  bool pure = true;            // s_z = sqrt(1 - s_x^2 - s_y^2)

  // Throws std::invalid_argument on out-of-domain axes or duplicate params.
  void validate() const;
};

struct SweepRow {
  double s_x = 0.0;
  double s_y = 0.0;
  double s_z = 0.0;
  double beta = 0.0;
  double overlap_c = 0.0;
  int regime = 0;  // 1..3, or 0 for degenerate rows
  double omega_a = 0.0;
  double omega_b = 0.0;
  double visibility = 0.0;
  double i_path = 0.0;
  double duality_sum = 0.0;
  double failure_prob = 0.0;
  bool ok = false;  // false marks a degenerate grid point
};

// Row-major grid over (outer, inner); degenerate points become marked rows
// instead of aborting. Grid evaluation may run on several threads (capped by
// DUALITY_LAB_THREADS) but the output ordering is always by index.
std::vector<SweepRow> sweep(const SweepSpec& spec);

// Named grids behind the standard surface plots:
//   fig2: V over s_x x beta at C = 1/3   fig4: same grid, read the I column
//   fig5: I over C x beta at s_x = 1/2   fig6: I over C x s_x at beta = pi/3
SweepSpec figure_preset(const std::string& name);
std::vector<std::string> figure_preset_names();

struct BoundSummary {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t count_regime1 = 0;
  std::uint64_t count_regime2 = 0;
  std::uint64_t count_regime3 = 0;
  std::uint64_t degenerate = 0;
  std::uint64_t violations = 0;  // duality_sum > 1 + 1e-9
  double max_duality_sum = 0.0;
  double min_duality_sum = 0.0;
  double max_violation = 0.0;    // max(0, max_duality_sum - 1)
  double worst_s_x = 0.0;
  double worst_s_y = 0.0;
  double worst_s_z = 0.0;
  double worst_beta = 0.0;
  double worst_overlap = 0.0;
};

// Draws configs from uniform Bloch ball x uniform beta on [0,pi] x uniform
// C on [0, 0.99] and tallies the complementarity bound. Deterministic for a
// fixed seed; violations are reported in the summary, never thrown.
BoundSummary verify_bound(std::uint64_t samples, std::uint64_t seed);

}  // namespace mzi
