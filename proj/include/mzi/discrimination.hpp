#pragma once

#include "mzi/interferometer.hpp"
#include "mzi/qmatrix.hpp"

// Optimal error-free (unambiguous) discrimination of the two detector
// hypotheses |r> and |s> = U|r>, and the which-path information it yields.
namespace mzi {

// The two linearly independent detector hypotheses, with the phase of <r|s>
// absorbed into |s> so the stored overlap is real and nonnegative.
struct OverlapPair {
  CVector r_state;
  CVector s_state;
  double overlap_c = 0.0;      // C = |<r|s>|
  double s_complement = 0.0;   // S = sqrt(1 - C^2)
  CVector r_perp;              // (|s> - C|r>)/S, orthogonal to |r>
  CVector s_perp;              // (|r> - C|s>)/S, orthogonal to |s>

  std::size_t dim() const { return r_state.size(); }

  // Throws IndistinguishableStates when |<r|s>| >= 1 - 1e-12 and
  // std::invalid_argument for unnormalized inputs.
  static OverlapPair from_states(CVector r, CVector s);
};

OverlapPair overlap_pair(const DetectorModel& d);

enum class RegimeTag {
  project_out_s = 1,  // ratio <= C: failure direction along |s>
  general_povm = 2,   // C <= ratio <= 1/C
  project_out_r = 3,  // ratio >= 1/C: failure direction along |r>
};

struct Regime {
  RegimeTag tag = RegimeTag::general_povm;
  double ratio = 1.0;  // sqrt(omega_a / omega_b), +infinity allowed
};

// Boundary ties classify as the general POVM; the operators coincide with the
// adjacent projective case there.
Regime classify_regime(const Priors& p, double overlap_c);

struct Povm {
  CMatrix pi_a;
  CMatrix pi_b;
  CMatrix pi_0;
  Regime regime;
};

// Optimal error-free POVM for the active regime. For dim > 2 the projector
// onto the complement of span{|r>,|s>} is folded into pi_0.
Povm build_povm(const OverlapPair& pair, const Priors& p);

struct FailureReport {
  double failure_prob = 0.0;
  double fidelity_bound = 0.0;  // 2 sqrt(omega_a omega_b) C
};

FailureReport failure_probability(const Povm& povm, const OverlapPair& pair,
                                  const Priors& p);

enum class Path { a = 0, b = 1 };
enum class Outcome { a = 0, b = 1, inconclusive = 2 };

// Joint probability table q(path, outcome) over {a,b} x {a,b,0}.
struct JointDistribution {
  double q[2][3] = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};

  double& at(Path mu, Outcome k) { return q[static_cast<int>(mu)][static_cast<int>(k)]; }
  double at(Path mu, Outcome k) const {
    return q[static_cast<int>(mu)][static_cast<int>(k)];
  }
  double path_marginal(Path mu) const;
  double outcome_marginal(Outcome k) const;
  double total() const;
};

// q(mu,k) = tr_D <mu| Pi_k rho |mu> evaluated on the post-selected joint
// state; entries in [-1e-14, 0) are clamped to zero.
JointDistribution joint_distribution_numeric(const CMatrix& postselected,
                                             const Povm& povm);

// Closed-form table for an explicitly chosen regime. Exposed so regime
// boundaries can be probed from both sides.
JointDistribution closed_joint_for_regime(RegimeTag tag, const Priors& p,
                                          double overlap_c);

// Closed-form table with the regime classified internally. A vanishing
// post-selection normalizer (|S_x| = 1 with the matching beta) concentrates
// the distribution on the deterministic path instead of failing.
JointDistribution joint_distribution_closed(const BlochVector& b, const BeamSplitter& bs2,
                                            double overlap_c);

// Mutual information, in bits, between path and conclusive outcome; the path
// marginal runs over all three outcomes. 0 log 0 := 0.
double which_path_information(const JointDistribution& q);

// Piecewise closed form of the which-path information in bits; returns 0 when
// the hypotheses are indistinguishable (C >= 1 - 1e-12).
double i_path_closed(const BlochVector& b, const BeamSplitter& bs2, double overlap_c);

}  // namespace mzi
