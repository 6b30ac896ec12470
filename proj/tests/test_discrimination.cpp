#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mzi/discrimination.hpp"
#include "mzi/sampling.hpp"

using namespace mzi;

namespace {

constexpr double kPi = std::numbers::pi;

// Printed general form of the inconclusive operator in the {|r>, |r_perp>}
// frame: (1 - w_b S^2)|r><r| + w_b S C (|r><r_perp| + |r_perp><r|)
//        + (1 - w_b C^2 - w_a)|r_perp><r_perp|.
CMatrix printed_inconclusive(const OverlapPair& pair, double w_a, double w_b) {
  const double c = pair.overlap_c;
  const double s = pair.s_complement;
  CMatrix out = (1.0 - w_b * s * s) * outer(pair.r_state);
  out += (w_b * s * c) * outer(pair.r_state, pair.r_perp);
  out += (w_b * s * c) * outer(pair.r_perp, pair.r_state);
  out += (1.0 - w_b * c * c - w_a) * outer(pair.r_perp);
  return out;
}

ApparatusConfig sampled_config(Rng& rng) { return sample_config(rng); }

}  // namespace

TEST_CASE("overlap_pair") {
  SUBCASE("orthogonal hypotheses from a flip mark") {
    const DetectorModel d =
        DetectorModel::make(CVector{cx{1.0, 0.0}, cx{0.0, 0.0}}, pauli_x());
    const OverlapPair pair = overlap_pair(d);
    CHECK(pair.overlap_c == 0.0);
    CHECK(pair.s_complement == 1.0);
    CHECK(std::abs(pair.s_state[0]) < 1e-15);
    CHECK(std::abs(pair.s_state[1] - cx{1.0, 0.0}) < 1e-15);
  }

  SUBCASE("canonical embedding") {
    const OverlapPair pair = overlap_pair(DetectorModel::from_overlap(1.0 / 3.0));
    CHECK(pair.overlap_c == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(pair.s_state[0].real() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(pair.s_state[1].real() == doctest::Approx(std::sqrt(8.0) / 3.0).epsilon(1e-15));
  }

  SUBCASE("global mark phase is absorbed") {
    const DetectorModel plain = DetectorModel::from_overlap(1.0 / 3.0);
    CMatrix phased = plain.mark_unitary();
    phased *= std::polar(1.0, 1.234);
    const DetectorModel rotated = DetectorModel::make(plain.initial_state(), std::move(phased));

    const OverlapPair a = overlap_pair(plain);
    const OverlapPair b = overlap_pair(rotated);
    CHECK(a.overlap_c == doctest::Approx(b.overlap_c).epsilon(1e-15));
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(std::abs(a.s_state[k] - b.s_state[k]) < 1e-14);
      CHECK(std::abs(a.r_perp[k] - b.r_perp[k]) < 1e-14);
    }
  }

  SUBCASE("derived vectors are orthonormal companions") {
    Rng rng(31);
    for (int rep = 0; rep < 200; ++rep) {
      const std::size_t dim = 2 + rep % 2;
      const OverlapPair pair = sample_overlap_pair(rng, dim, sample_overlap(rng));
      CHECK(std::abs(inner(pair.r_state, pair.s_state).real() - pair.overlap_c) < 1e-12);
      CHECK(std::abs(inner(pair.r_state, pair.s_state).imag()) < 1e-12);
      CHECK(std::abs(norm(pair.r_perp) - 1.0) < 1e-12);
      CHECK(std::abs(norm(pair.s_perp) - 1.0) < 1e-12);
      CHECK(std::abs(inner(pair.r_state, pair.r_perp)) < 1e-12);
      CHECK(std::abs(inner(pair.s_state, pair.s_perp)) < 1e-12);
      CHECK(pair.s_complement * pair.s_complement + pair.overlap_c * pair.overlap_c ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("indistinguishable hypotheses are rejected") {
    const DetectorModel d =
        DetectorModel::make(CVector{cx{1.0, 0.0}, cx{0.0, 0.0}}, CMatrix::identity(2));
    CHECK_THROWS_AS(overlap_pair(d), IndistinguishableStates);
  }
}

TEST_CASE("classify_regime") {
  CHECK(classify_regime(Priors{0.5, 0.5}, 1.0 / 3.0).tag == RegimeTag::general_povm);
  CHECK(classify_regime(Priors{1.0, 0.0}, 1.0 / 3.0).tag == RegimeTag::project_out_r);
  CHECK(classify_regime(Priors{0.05, 0.95}, 1.0 / 3.0).tag == RegimeTag::project_out_s);
  CHECK(classify_regime(Priors{0.05, 0.95}, 1.0 / 3.0).ratio ==
        doctest::Approx(std::sqrt(0.05 / 0.95)));

  // Exact tie: ratio = sqrt(0.2/0.8) = 0.5 = C classifies as the general case.
  CHECK(classify_regime(Priors{0.2, 0.8}, 0.5).tag == RegimeTag::general_povm);
  // C = 0 is always the general case, even with one-sided priors.
  CHECK(classify_regime(Priors{1.0, 0.0}, 0.0).tag == RegimeTag::general_povm);
  CHECK(classify_regime(Priors{0.0, 1.0}, 0.0).tag == RegimeTag::general_povm);

  CHECK_THROWS_AS(classify_regime(Priors{0.5, 0.5}, 1.0), std::invalid_argument);
}

TEST_CASE("build_povm structure") {
  SUBCASE("orthogonal hypotheses give projective perfect discrimination") {
    Rng rng(32);
    const OverlapPair pair = sample_overlap_pair(rng, 2, 0.0);
    const Povm povm = build_povm(pair, Priors{0.5, 0.5});
    CHECK(povm.regime.tag == RegimeTag::general_povm);
    CHECK(max_abs_diff(povm.pi_a, outer(pair.s_state)) < 1e-13);
    CHECK(max_abs_diff(povm.pi_b, outer(pair.r_state)) < 1e-13);
    CHECK(povm.pi_0.max_abs() < 1e-13);
  }

  SUBCASE("balanced weights at C = 1/3") {
    const OverlapPair pair = overlap_pair(DetectorModel::from_overlap(1.0 / 3.0));
    const Povm povm = build_povm(pair, Priors{0.5, 0.5});
    CHECK(max_abs_diff(povm.pi_a, 0.75 * outer(pair.r_perp)) < 1e-14);
    CHECK(max_abs_diff(povm.pi_b, 0.75 * outer(pair.s_perp)) < 1e-14);
  }

  SUBCASE("general weights vanish at the lower boundary") {
    const double c = 0.5;
    const Priors boundary{c * c / (1.0 + c * c), 1.0 / (1.0 + c * c)};
    const OverlapPair pair = overlap_pair(DetectorModel::from_overlap(c));
    const Povm povm = build_povm(pair, boundary);
    CHECK(povm.pi_a.max_abs() < 1e-14);
    CHECK(max_abs_diff(povm.pi_b, outer(pair.s_perp)) < 1e-13);
    // Matches the projective case-1 operators.
    CHECK(max_abs_diff(povm.pi_0, outer(pair.s_state)) < 1e-13);
  }

  SUBCASE("printed inconclusive operator equals I - pi_a - pi_b") {
    Rng rng(33);
    for (int rep = 0; rep < 300; ++rep) {
      const std::size_t dim = 2;  // the printed display is written in span{r, r_perp}
      const double c = 0.02 + 0.96 * rng.uniform();
      const OverlapPair pair = sample_overlap_pair(rng, dim, c);
      const Priors p = sample_priors(rng);
      const Povm povm = build_povm(pair, p);
      if (povm.regime.tag != RegimeTag::general_povm) continue;
      const double s2 = pair.s_complement * pair.s_complement;
      const double w_a = (1.0 - c / povm.regime.ratio) / s2;
      const double w_b = (1.0 - c * povm.regime.ratio) / s2;
      CHECK(max_abs_diff(povm.pi_0, printed_inconclusive(pair, w_a, w_b)) < 1e-12);
    }
  }
}

TEST_CASE("povm invariants over random pairs and priors") {
  Rng rng(34);
  std::size_t regimes_seen[3] = {0, 0, 0};
  for (int rep = 0; rep < 2000; ++rep) {
    const std::size_t dim = (rep % 3 == 0) ? 3 : 2;
    const OverlapPair pair = sample_overlap_pair(rng, dim, sample_overlap(rng));
    Priors p = sample_priors(rng);
    if (rep % 101 == 0) p = Priors{1.0, 0.0};
    const Povm povm = build_povm(pair, p);
    ++regimes_seen[static_cast<int>(povm.regime.tag) - 1];

    const CMatrix sum = povm.pi_a + povm.pi_b + povm.pi_0;
    CHECK(max_abs_diff(sum, CMatrix::identity(dim)) < 1e-12);
    CHECK(is_psd(povm.pi_a, 1e-12));
    CHECK(is_psd(povm.pi_b, 1e-12));
    CHECK(is_psd(povm.pi_0, 1e-12));

    // Error-free conditions.
    CHECK(std::abs((povm.pi_a * outer(pair.r_state)).trace()) < 1e-12);
    CHECK(std::abs((povm.pi_b * outer(pair.s_state)).trace()) < 1e-12);
  }
  CHECK(regimes_seen[0] > 0);
  CHECK(regimes_seen[1] > 0);
  CHECK(regimes_seen[2] > 0);
}

TEST_CASE("failure probability") {
  SUBCASE("balanced general case saturates the fidelity bound") {
    const OverlapPair pair = overlap_pair(DetectorModel::from_overlap(1.0 / 3.0));
    const Priors p{0.5, 0.5};
    const FailureReport rep = failure_probability(build_povm(pair, p), pair, p);
    CHECK(rep.failure_prob == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(rep.fidelity_bound == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }

  SUBCASE("orthogonal hypotheses never fail") {
    Rng rng(35);
    const OverlapPair pair = sample_overlap_pair(rng, 2, 0.0);
    const Priors p{0.4, 0.6};
    const FailureReport rep = failure_probability(build_povm(pair, p), pair, p);
    CHECK(std::abs(rep.failure_prob) < 1e-14);
  }

  SUBCASE("one-sided priors project out |r>") {
    const OverlapPair pair = overlap_pair(DetectorModel::from_overlap(1.0 / 3.0));
    const Priors p{1.0, 0.0};
    const Povm povm = build_povm(pair, p);
    CHECK(povm.regime.tag == RegimeTag::project_out_r);
    const FailureReport rep = failure_probability(povm, pair, p);
    CHECK(rep.failure_prob == doctest::Approx(1.0 / 9.0).epsilon(1e-13));
  }

  SUBCASE("closed failure values and bound across regimes") {
    Rng rng(36);
    for (int rep = 0; rep < 1000; ++rep) {
      const std::size_t dim = (rep % 4 == 0) ? 3 : 2;
      const double c = sample_overlap(rng);
      const OverlapPair pair = sample_overlap_pair(rng, dim, c);
      const Priors p = sample_priors(rng);
      const Povm povm = build_povm(pair, p);
      const FailureReport fr = failure_probability(povm, pair, p);
      CHECK(fr.failure_prob >= fr.fidelity_bound - 1e-12);
      double closed = 0.0;
      switch (povm.regime.tag) {
        case RegimeTag::project_out_s: closed = p.omega_a + c * c * p.omega_b; break;
        case RegimeTag::general_povm: closed = 2.0 * c * std::sqrt(p.omega_a * p.omega_b); break;
        case RegimeTag::project_out_r: closed = p.omega_b + c * c * p.omega_a; break;
      }
      CHECK(std::abs(fr.failure_prob - closed) < 1e-12);
      if (povm.regime.tag == RegimeTag::general_povm) {
        const double target = std::sqrt(p.omega_a * p.omega_b) * c;
        const double from_in =
            p.omega_b * inner(pair.r_state, matvec(povm.pi_0, pair.r_state)).real();
        const double from_out =
            p.omega_a * inner(pair.s_state, matvec(povm.pi_0, pair.s_state)).real();
        CHECK(std::abs(from_in - target) < 1e-12);
        CHECK(std::abs(from_out - target) < 1e-12);
      }
    }
  }
}

TEST_CASE("joint distribution numeric fixed points") {
  SUBCASE("perfect discrimination at the balanced symmetric point") {
    const DetectorModel flip =
        DetectorModel::make(CVector{cx{1.0, 0.0}, cx{0.0, 0.0}}, pauli_x());
    const ApparatusConfig cfg{BlochVector{0.0, 0.0, 1.0}, BeamSplitter(0.5 * kPi), 0.4, flip};
    const Povm povm = build_povm(overlap_pair(flip), priors(cfg.bloch, cfg.bs2));
    const JointDistribution q = joint_distribution_numeric(postselected_state(cfg), povm);
    CHECK(q.at(Path::a, Outcome::a) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(q.at(Path::b, Outcome::b) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(q.at(Path::a, Outcome::b) < 1e-13);
    CHECK(q.at(Path::b, Outcome::a) < 1e-13);
    CHECK(q.at(Path::a, Outcome::inconclusive) < 1e-13);
    CHECK(q.at(Path::b, Outcome::inconclusive) < 1e-13);
  }

  SUBCASE("balanced point at C = 1/3") {
    const DetectorModel d = DetectorModel::from_overlap(1.0 / 3.0);
    const ApparatusConfig cfg{BlochVector{0.0, 0.0, 1.0}, BeamSplitter(0.5 * kPi), 1.3, d};
    const Povm povm = build_povm(overlap_pair(d), priors(cfg.bloch, cfg.bs2));
    const JointDistribution q = joint_distribution_numeric(postselected_state(cfg), povm);
    CHECK(q.at(Path::a, Outcome::a) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(q.at(Path::b, Outcome::b) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(q.at(Path::a, Outcome::inconclusive) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(q.at(Path::b, Outcome::inconclusive) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  }

  SUBCASE("full transmission concentrates on path a") {
    const double c = 0.3;
    const DetectorModel d = DetectorModel::from_overlap(c);
    const ApparatusConfig cfg{BlochVector{0.2, -0.1, 0.4}, BeamSplitter(0.0), 0.0, d};
    const Povm povm = build_povm(overlap_pair(d), priors(cfg.bloch, cfg.bs2));
    const JointDistribution q = joint_distribution_numeric(postselected_state(cfg), povm);
    CHECK(q.at(Path::a, Outcome::a) == doctest::Approx(1.0 - c * c).epsilon(1e-13));
    CHECK(q.at(Path::a, Outcome::inconclusive) == doctest::Approx(c * c).epsilon(1e-13));
    CHECK(q.path_marginal(Path::b) < 1e-13);
  }

  SUBCASE("dimension mismatch throws") {
    const DetectorModel d = DetectorModel::from_overlap(0.3);
    const Povm povm = build_povm(overlap_pair(d), Priors{0.5, 0.5});
    CHECK_THROWS_AS(joint_distribution_numeric(CMatrix::identity(6), povm),
                    std::invalid_argument);
  }
}

TEST_CASE("joint distribution closed fixed points") {
  SUBCASE("projective case 1 via S_x = -0.9 at a symmetric splitter") {
    const double c = 1.0 / 3.0;
    const BlochVector b{-0.9, 0.0, std::sqrt(1.0 - 0.81)};
    const BeamSplitter bs2(0.5 * kPi);
    const Priors p = priors(b, bs2);
    CHECK(p.omega_a == doctest::Approx(0.05).epsilon(1e-13));
    CHECK(p.omega_b == doctest::Approx(0.95).epsilon(1e-13));
    const JointDistribution q = joint_distribution_closed(b, bs2, c);
    CHECK(q.at(Path::a, Outcome::b) == 0.0);
    CHECK(q.at(Path::a, Outcome::a) == 0.0);
    CHECK(q.at(Path::b, Outcome::b) ==
          doctest::Approx((1.0 - c * c) * 0.95).epsilon(1e-13));
    CHECK(q.at(Path::a, Outcome::inconclusive) == doctest::Approx(0.05).epsilon(1e-13));
  }

  SUBCASE("deterministic path a when S_x = 1") {
    const JointDistribution q =
        joint_distribution_closed(BlochVector{1.0, 0.0, 0.0}, BeamSplitter(kPi / 3.0), 0.4);
    CHECK(q.path_marginal(Path::b) < 1e-14);
    CHECK(q.path_marginal(Path::a) == doctest::Approx(1.0).epsilon(1e-13));
  }

  SUBCASE("degenerate normalizer concentrates per the surviving sign") {
    const JointDistribution q =
        joint_distribution_closed(BlochVector{1.0, 0.0, 0.0}, BeamSplitter(kPi), 0.4);
    CHECK(q.path_marginal(Path::a) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(q.at(Path::a, Outcome::a) == doctest::Approx(1.0 - 0.16).epsilon(1e-13));
  }
}

TEST_CASE("joint distribution invariants") {
  Rng rng(37);
  for (int rep = 0; rep < 500; ++rep) {
    const ApparatusConfig cfg = sampled_config(rng);
    const Priors p = priors(cfg.bloch, cfg.bs2);
    const Povm povm = build_povm(overlap_pair(cfg.detector), p);
    const JointDistribution q = joint_distribution_numeric(postselected_state(cfg), povm);

    CHECK(q.total() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.at(Path::a, Outcome::b) < 1e-12);
    CHECK(q.at(Path::b, Outcome::a) < 1e-12);
    CHECK(std::abs(q.path_marginal(Path::a) - p.omega_a) < 1e-12);
    CHECK(std::abs(q.path_marginal(Path::b) - p.omega_b) < 1e-12);
    for (int mu = 0; mu < 2; ++mu)
      for (int k = 0; k < 3; ++k) CHECK(q.q[mu][k] >= 0.0);
  }
}

TEST_CASE("closed joint equals the numeric oracle") {
  Rng rng(38);
  double worst = 0.0;
  for (int rep = 0; rep < 2000; ++rep) {
    const ApparatusConfig cfg = sampled_config(rng);
    const JointDistribution numeric = joint_distribution_numeric(
        postselected_state(cfg),
        build_povm(overlap_pair(cfg.detector), priors(cfg.bloch, cfg.bs2)));
    const JointDistribution closed =
        joint_distribution_closed(cfg.bloch, cfg.bs2, cfg.detector.overlap());
    for (int mu = 0; mu < 2; ++mu)
      for (int k = 0; k < 3; ++k)
        worst = std::max(worst, std::abs(numeric.q[mu][k] - closed.q[mu][k]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("which_path_information") {
  SUBCASE("perfect balanced correlation carries one bit") {
    JointDistribution q;
    q.at(Path::a, Outcome::a) = 0.5;
    q.at(Path::b, Outcome::b) = 0.5;
    CHECK(which_path_information(q) == doctest::Approx(1.0).epsilon(1e-15));
  }

  SUBCASE("all-inconclusive carries nothing") {
    JointDistribution q;
    q.at(Path::a, Outcome::inconclusive) = 0.3;
    q.at(Path::b, Outcome::inconclusive) = 0.7;
    CHECK(which_path_information(q) == 0.0);
  }

  SUBCASE("balanced C = 1/3 point carries 2/3 bit") {
    JointDistribution q;
    q.at(Path::a, Outcome::a) = 1.0 / 3.0;
    q.at(Path::b, Outcome::b) = 1.0 / 3.0;
    q.at(Path::a, Outcome::inconclusive) = 1.0 / 6.0;
    q.at(Path::b, Outcome::inconclusive) = 1.0 / 6.0;
    CHECK(which_path_information(q) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }
}

TEST_CASE("i_path_closed") {
  SUBCASE("ridge value is 1 - C") {
    const double s_x = 0.6;
    const BlochVector b{s_x, 0.0, 0.8};
    CHECK(i_path_closed(b, BeamSplitter(std::acos(-s_x)), 1.0 / 3.0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }

  SUBCASE("full transmission carries nothing") {
    CHECK(i_path_closed(BlochVector{0.3, 0.2, 0.4}, BeamSplitter(0.0), 0.4) == 0.0);
  }

  SUBCASE("indistinguishable hypotheses carry nothing") {
    CHECK(i_path_closed(BlochVector{0.0, 0.0, 1.0}, BeamSplitter(1.0), 1.0) == 0.0);
    CHECK(i_path_closed(BlochVector{0.0, 0.0, 1.0}, BeamSplitter(1.0), 1.0 - 1e-13) == 0.0);
  }

  SUBCASE("agrees with the mutual information of the closed table") {
    Rng rng(39);
    for (int rep = 0; rep < 500; ++rep) {
      const BlochVector b = sample_bloch_ball(rng);
      const BeamSplitter bs2(sample_beta(rng));
      if (1.0 + b.s_x * std::cos(bs2.beta()) <= 1e-3) continue;
      const double c = sample_overlap(rng);
      const double direct = i_path_closed(b, bs2, c);
      const double via_table = which_path_information(joint_distribution_closed(b, bs2, c));
      CHECK(std::abs(direct - via_table) < 1e-12);
      CHECK(direct <= 1.0 - c + 1e-12);
    }
  }

  SUBCASE("peak over beta sits at 2pi/3 for S_x = 1/2") {
    const BlochVector b{0.5, 0.0, std::sqrt(0.75)};
    for (double c : {0.25, 0.5, 0.75}) {
      double best_beta = 0.0;
      double best = -1.0;
      for (int k = 0; k <= 1800; ++k) {
        const double beta = kPi * k / 1800.0;
        const double v = i_path_closed(b, BeamSplitter(beta), c);
        if (v > best) {
          best = v;
          best_beta = beta;
        }
      }
      CHECK(std::abs(best_beta - 2.0 * kPi / 3.0) <= kPi / 1800.0 + 1e-12);
      CHECK(best == doctest::Approx(1.0 - c).epsilon(1e-9));
    }
  }

  SUBCASE("non-increasing in the overlap") {
    Rng rng(40);
    for (int rep = 0; rep < 50; ++rep) {
      const BlochVector b = sample_bloch_ball(rng);
      const BeamSplitter bs2(sample_beta(rng));
      if (1.0 + b.s_x * std::cos(bs2.beta()) <= 1e-3) continue;
      const Priors p = priors(b, bs2);
      if (p.omega_a <= 0.0 || p.omega_b <= 0.0) continue;
      double previous = i_path_closed(b, bs2, 0.0);
      for (int k = 1; k < 100; ++k) {
        const double current = i_path_closed(b, bs2, 0.0099 * k);
        CHECK(current <= previous + 1e-12);
        previous = current;
      }
    }
  }

  SUBCASE("depends on the Bloch vector only through S_x") {
    Rng rng(41);
    for (int rep = 0; rep < 200; ++rep) {
      const double s_x = rng.uniform(-0.95, 0.95);
      const BeamSplitter bs2(sample_beta(rng));
      if (1.0 + s_x * std::cos(bs2.beta()) <= 1e-3) continue;
      const double c = sample_overlap(rng);
      const double cap = std::sqrt(1.0 - s_x * s_x);
      const double reference =
          i_path_closed(BlochVector{s_x, 0.0, cap}, bs2, c);
      for (int k = 0; k < 3; ++k) {
        const double radius = cap * std::sqrt(rng.uniform());
        const double angle = rng.uniform(0.0, 2.0 * kPi);
        const BlochVector moved{s_x, radius * std::sin(angle), radius * std::cos(angle)};
        CHECK(std::abs(i_path_closed(moved, bs2, c) - reference) <= 1e-14);
      }
    }
  }
}

TEST_CASE("dim-3 detector end to end") {
  // Rotation in the (0,1) detector plane plus a phase on the third level.
  const double c = 0.45;
  const double s = std::sqrt(1.0 - c * c);
  CMatrix u(3, 3);
  u(0, 0) = cx{c, 0.0};
  u(0, 1) = cx{-s, 0.0};
  u(1, 0) = cx{s, 0.0};
  u(1, 1) = cx{c, 0.0};
  u(2, 2) = std::polar(1.0, 0.9);
  const DetectorModel d =
      DetectorModel::make(CVector{cx{1.0, 0.0}, cx{0.0, 0.0}, cx{0.0, 0.0}}, std::move(u));
  CHECK(d.overlap() == doctest::Approx(c).epsilon(1e-15));

  const ApparatusConfig cfg{BlochVector{0.25, -0.3, 0.4}, BeamSplitter(1.9), 0.7, d};

  CHECK(std::abs(visibility_scan(cfg, 720) - visibility_closed(cfg)) < 1e-6);

  const Priors p = priors(cfg.bloch, cfg.bs2);
  const Povm povm = build_povm(overlap_pair(d), p);
  CHECK(max_abs_diff(povm.pi_a + povm.pi_b + povm.pi_0, CMatrix::identity(3)) < 1e-12);
  const JointDistribution numeric = joint_distribution_numeric(postselected_state(cfg), povm);
  const JointDistribution closed = joint_distribution_closed(cfg.bloch, cfg.bs2, c);
  for (int mu = 0; mu < 2; ++mu)
    for (int k = 0; k < 3; ++k) CHECK(std::abs(numeric.q[mu][k] - closed.q[mu][k]) < 1e-12);
  CHECK(std::abs(which_path_information(numeric) - i_path_closed(cfg.bloch, cfg.bs2, c)) <
        1e-10);
}

TEST_CASE("regime boundaries are continuous") {
  for (int k = 1; k <= 19; ++k) {
    const double c = 0.05 * k;
    const Priors low{c * c / (1.0 + c * c), 1.0 / (1.0 + c * c)};
    const Priors high{1.0 / (1.0 + c * c), c * c / (1.0 + c * c)};

    const JointDistribution q1 = closed_joint_for_regime(RegimeTag::project_out_s, low, c);
    const JointDistribution q2 = closed_joint_for_regime(RegimeTag::general_povm, low, c);
    const JointDistribution q3 = closed_joint_for_regime(RegimeTag::general_povm, high, c);
    const JointDistribution q4 = closed_joint_for_regime(RegimeTag::project_out_r, high, c);
    for (int mu = 0; mu < 2; ++mu)
      for (int o = 0; o < 3; ++o) {
        CHECK(std::abs(q1.q[mu][o] - q2.q[mu][o]) < 1e-12);
        CHECK(std::abs(q3.q[mu][o] - q4.q[mu][o]) < 1e-12);
      }
  }
}
