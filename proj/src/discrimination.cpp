#include "mzi/discrimination.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mzi {

namespace {

constexpr double kLog2e = 1.4426950408889634074;  // 1/ln(2)

double log2_safe(double x) { return std::log(x) * kLog2e; }

double clamp_probability(double v) {
  if (v < 0.0) {
    if (v < -tol::clamp_negative)
      throw InvariantViolation("probability below clamp tolerance");
    return 0.0;
  }
  return v;
}

// Quadratic form <v| M |v>, real part.
double expectation(const CMatrix& m, const CVector& v) {
  return inner(v, matvec(m, v)).real();
}

}  // namespace

OverlapPair OverlapPair::from_states(CVector r, CVector s) {
  if (r.size() != s.size() || r.size() < 2)
    throw std::invalid_argument("OverlapPair: states need equal dimension >= 2");
  if (std::abs(norm(r) - 1.0) > tol::algebra || std::abs(norm(s) - 1.0) > tol::algebra)
    throw std::invalid_argument("OverlapPair: states must be normalized");

  const cx raw = inner(r, s);
  const double c = std::abs(raw);
  if (c >= 1.0 - tol::distinguish)
    throw IndistinguishableStates("detector hypotheses are indistinguishable");
  if (c > 0.0) {
    const cx phase = std::conj(raw) / c;  // rotate so <r|s> = C >= 0
    for (cx& e : s) e *= phase;
  }

  OverlapPair pair;
  pair.overlap_c = c;
  pair.s_complement = std::sqrt(1.0 - c * c);
  pair.r_perp.resize(r.size());
  pair.s_perp.resize(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    pair.r_perp[k] = (s[k] - c * r[k]) / pair.s_complement;
    pair.s_perp[k] = (r[k] - c * s[k]) / pair.s_complement;
  }
  pair.r_state = std::move(r);
  pair.s_state = std::move(s);
  return pair;
}

OverlapPair overlap_pair(const DetectorModel& d) {
  return OverlapPair::from_states(d.initial_state(),
                                  matvec(d.mark_unitary(), d.initial_state()));
}

Regime classify_regime(const Priors& p, double overlap_c) {
  if (!(overlap_c >= 0.0 && overlap_c < 1.0))
    throw std::invalid_argument("classify_regime: overlap must lie in [0, 1)");
  Regime regime;
  regime.ratio = p.ratio();
  const double upper =
      overlap_c > 0.0 ? 1.0 / overlap_c : std::numeric_limits<double>::infinity();
  if (regime.ratio < overlap_c)
    regime.tag = RegimeTag::project_out_s;
  else if (regime.ratio > upper)
    regime.tag = RegimeTag::project_out_r;
  else
    regime.tag = RegimeTag::general_povm;
  return regime;
}

Povm build_povm(const OverlapPair& pair, const Priors& p) {
  const std::size_t d = pair.dim();
  const double c = pair.overlap_c;
  const double s2 = pair.s_complement * pair.s_complement;
  const Regime regime = classify_regime(p, c);

  // span{|r>,|s>} = span{|r>,|r_perp>}; valid detector states never populate
  // the complement, which always fails.
  const CMatrix complement =
      CMatrix::identity(d) - outer(pair.r_state) - outer(pair.r_perp);

  Povm povm;
  povm.regime = regime;
  switch (regime.tag) {
    case RegimeTag::project_out_s:
      povm.pi_a = CMatrix::zeros(d, d);
      povm.pi_b = outer(pair.s_perp);
      povm.pi_0 = outer(pair.s_state) + complement;
      break;
    case RegimeTag::project_out_r:
      povm.pi_a = outer(pair.r_perp);
      povm.pi_b = CMatrix::zeros(d, d);
      povm.pi_0 = outer(pair.r_state) + complement;
      break;
    case RegimeTag::general_povm: {
      // Conclusive weights 1 - C sqrt(omega_b/omega_a) and its mirror; a zero
      // overlap makes both weights 1 regardless of the priors.
      const double down = c > 0.0 ? c / regime.ratio : 0.0;
      const double up = c > 0.0 ? c * regime.ratio : 0.0;
      const double w_a = std::max(0.0, (1.0 - down) / s2);
      const double w_b = std::max(0.0, (1.0 - up) / s2);
      povm.pi_a = w_a * outer(pair.r_perp);
      povm.pi_b = w_b * outer(pair.s_perp);
      povm.pi_0 = CMatrix::identity(d) - povm.pi_a - povm.pi_b;
      break;
    }
  }
  return povm;
}

FailureReport failure_probability(const Povm& povm, const OverlapPair& pair,
                                  const Priors& p) {
  FailureReport report;
  report.failure_prob = p.omega_b * expectation(povm.pi_0, pair.r_state) +
                        p.omega_a * expectation(povm.pi_0, pair.s_state);
  report.fidelity_bound = 2.0 * std::sqrt(p.omega_a * p.omega_b) * pair.overlap_c;
  return report;
}

double JointDistribution::path_marginal(Path mu) const {
  const int m = static_cast<int>(mu);
  return q[m][0] + q[m][1] + q[m][2];
}

double JointDistribution::outcome_marginal(Outcome k) const {
  const int o = static_cast<int>(k);
  return q[0][o] + q[1][o];
}

double JointDistribution::total() const {
  return path_marginal(Path::a) + path_marginal(Path::b);
}

JointDistribution joint_distribution_numeric(const CMatrix& postselected,
                                             const Povm& povm) {
  const std::size_t d = povm.pi_0.rows();
  if (!postselected.is_square() || postselected.rows() != 2 * d)
    throw std::invalid_argument(
        "joint_distribution_numeric: state does not match detector dimension");

  // Detector block <mu| rho |mu>; particle index 0 is path b, 1 is path a.
  const auto block = [&](std::size_t mu) {
    CMatrix out(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out(i, j) = postselected(mu * d + i, mu * d + j);
    return out;
  };
  const CMatrix block_b = block(0);
  const CMatrix block_a = block(1);

  const CMatrix* ops[3] = {&povm.pi_a, &povm.pi_b, &povm.pi_0};
  JointDistribution out;
  for (int k = 0; k < 3; ++k) {
    out.q[static_cast<int>(Path::a)][k] = clamp_probability((*ops[k] * block_a).trace().real());
    out.q[static_cast<int>(Path::b)][k] = clamp_probability((*ops[k] * block_b).trace().real());
  }
  return out;
}

JointDistribution closed_joint_for_regime(RegimeTag tag, const Priors& p,
                                          double overlap_c) {
  const double c = overlap_c;
  const double c2 = c * c;
  JointDistribution out;
  switch (tag) {
    case RegimeTag::project_out_s:
      out.at(Path::b, Outcome::b) = (1.0 - c2) * p.omega_b;
      out.at(Path::b, Outcome::inconclusive) = c2 * p.omega_b;
      out.at(Path::a, Outcome::inconclusive) = p.omega_a;
      break;
    case RegimeTag::project_out_r:
      out.at(Path::a, Outcome::a) = (1.0 - c2) * p.omega_a;
      out.at(Path::a, Outcome::inconclusive) = c2 * p.omega_a;
      out.at(Path::b, Outcome::inconclusive) = p.omega_b;
      break;
    case RegimeTag::general_povm: {
      const double shared = c * std::sqrt(p.omega_a * p.omega_b);
      out.at(Path::a, Outcome::a) = clamp_probability(p.omega_a - shared);
      out.at(Path::b, Outcome::b) = clamp_probability(p.omega_b - shared);
      out.at(Path::a, Outcome::inconclusive) = shared;
      out.at(Path::b, Outcome::inconclusive) = shared;
      break;
    }
  }
  return out;
}

namespace {

// Priors for the closed forms; at a vanishing normalizer the path is already
// deterministic, so the distribution concentrates on the surviving sign.
Priors closed_form_priors(const BlochVector& b, const BeamSplitter& bs2) {
  const double denom =
      1.0 + b.s_x * (bs2.transmittance() - bs2.reflectance());
  if (denom <= tol::degenerate)
    return b.s_x > 0.0 ? Priors{1.0, 0.0} : Priors{0.0, 1.0};
  return priors(b, bs2);
}

}  // namespace

JointDistribution joint_distribution_closed(const BlochVector& b, const BeamSplitter& bs2,
                                            double overlap_c) {
  const Priors p = closed_form_priors(b, bs2);
  const Regime regime = classify_regime(p, overlap_c);
  return closed_joint_for_regime(regime.tag, p, overlap_c);
}

double which_path_information(const JointDistribution& q) {
  const Path paths[2] = {Path::a, Path::b};
  const Outcome conclusive[2] = {Outcome::a, Outcome::b};
  double info = 0.0;
  for (Path mu : paths) {
    const double qmu = q.path_marginal(mu);
    for (Outcome k : conclusive) {
      const double joint = q.at(mu, k);
      if (joint <= 0.0) continue;
      const double qk = q.outcome_marginal(k);
      info += joint * log2_safe(joint / (qmu * qk));
    }
  }
  return std::max(0.0, info);
}

double i_path_closed(const BlochVector& b, const BeamSplitter& bs2, double overlap_c) {
  if (overlap_c >= 1.0 - tol::distinguish) return 0.0;
  const Priors p = closed_form_priors(b, bs2);
  const Regime regime = classify_regime(p, overlap_c);
  const double c2 = overlap_c * overlap_c;

  // Each conclusive entry contributes q log2(1/omega); the outcome marginal
  // collapses onto the entry itself because cross terms vanish error-free.
  // Rounding can push a prior marginally above 1, so the log is clamped.
  const auto term = [](double conclusive_mass, double omega) {
    if (conclusive_mass <= 0.0 || omega <= 0.0) return 0.0;
    return conclusive_mass * std::max(0.0, log2_safe(1.0 / omega));
  };

  switch (regime.tag) {
    case RegimeTag::project_out_s:
      return term((1.0 - c2) * p.omega_b, p.omega_b);
    case RegimeTag::project_out_r:
      return term((1.0 - c2) * p.omega_a, p.omega_a);
    case RegimeTag::general_povm: {
      const double shared = overlap_c * std::sqrt(p.omega_a * p.omega_b);
      return term(p.omega_a - shared, p.omega_a) + term(p.omega_b - shared, p.omega_b);
    }
  }
  return 0.0;
}

}  // namespace mzi
