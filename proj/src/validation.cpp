#include "mzi/validation.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "mzi/duality.hpp"
#include "mzi/sampling.hpp"

namespace mzi {

namespace {

constexpr double kPi = std::numbers::pi;

CMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = cx{rng.gaussian(), rng.gaussian()};
  return m;
}

CMatrix random_hermitian(Rng& rng, std::size_t n) {
  const CMatrix a = random_matrix(rng, n, n);
  CMatrix h = a + a.adjoint();
  h *= cx{0.5, 0.0};
  return h;
}

std::string count_detail(const char* label, std::size_t n) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%zu", label, n);
  return buf;
}

SuiteResult suite_kron_algebra() {
  Rng rng(101);
  double worst = 0.0;
  const std::size_t reps = 300;
  for (std::size_t n = 0; n < reps; ++n) {
    const std::size_t da = 2 + n % 2;
    const std::size_t db = 2 + (n / 2) % 2;
    const CMatrix a = random_matrix(rng, da, da);
    const CMatrix b = random_matrix(rng, db, db);
    const CMatrix c = random_matrix(rng, da, da);
    const CMatrix d = random_matrix(rng, db, db);
    worst = std::max(worst, max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)));
    worst = std::max(worst, std::abs(kron(a, b).trace() - a.trace() * b.trace()));
    const CMatrix joint = kron(a, b);
    const cx via_first = partial_trace(joint, da, db, 0).trace();
    const cx via_second = partial_trace(joint, da, db, 1).trace();
    worst = std::max(worst, std::abs(via_first - joint.trace()));
    worst = std::max(worst, std::abs(via_second - joint.trace()));
  }
  return {"kron_algebra", worst, 1e-13, worst <= 1e-13, count_detail("reps", reps)};
}

SuiteResult suite_eig_hermitian() {
  Rng rng(102);
  double worst = 0.0;
  const std::size_t reps = 300;
  for (std::size_t n = 0; n < reps; ++n) {
    const std::size_t dim = 2 + n % 5;
    const CMatrix h = random_hermitian(rng, dim);
    const std::vector<double> ev = eig_hermitian(h);
    double sum = 0.0;
    for (double v : ev) sum += v;
    worst = std::max(worst, std::abs(sum - h.trace().real()));

    const CMatrix a = random_matrix(rng, dim, dim);
    const CMatrix gram = a.adjoint() * a;
    const std::vector<double> gev = eig_hermitian(gram);
    worst = std::max(worst, std::max(0.0, -gev.front()));
  }
  return {"eig_hermitian", worst, 1e-11, worst <= 1e-11, count_detail("reps", reps)};
}

SuiteResult suite_evolved_state() {
  Rng rng(103);
  double worst = 0.0;
  const std::size_t reps = 1000;
  for (std::size_t n = 0; n < reps; ++n) {
    const ApparatusConfig cfg = sample_config(rng);
    const CMatrix rho = evolve_full(cfg);
    const HermitianCheckReport rep = hermitian_report(rho);
    worst = std::max(worst, std::abs(rep.trace - cx{1.0, 0.0}));
    worst = std::max(worst, rep.max_asymmetry);
    worst = std::max(worst, std::max(0.0, -rep.min_eigenvalue));
  }
  return {"evolved_state", worst, 1e-12, worst <= 1e-12, count_detail("configs", reps)};
}

SuiteResult suite_fringe_sinusoidal() {
  Rng rng(104);
  double worst = 0.0;
  const std::size_t reps = 200;
  for (std::size_t n = 0; n < reps; ++n) {
    ApparatusConfig cfg = sample_config(rng);
    const auto probe = [&](double phi) {
      cfg.phase = phi;
      return output_probability(cfg);
    };
    // Reconstruct mean and quadratures from phi = 0, pi/2, pi and predict the
    // rest of the fringe.
    const double p0 = probe(0.0);
    const double p1 = probe(0.5 * kPi);
    const double p2 = probe(kPi);
    const double mean = 0.5 * (p0 + p2);
    const double cos_part = p0 - mean;
    const double sin_part = mean - p1;
    for (int k = 0; k < 17; ++k) {
      const double phi = 2.0 * kPi * (k + 0.31) / 17.0;
      const double predicted = mean + cos_part * std::cos(phi) - sin_part * std::sin(phi);
      worst = std::max(worst, std::abs(predicted - probe(phi)));
    }
  }
  return {"fringe_sinusoidal", worst, 1e-10, worst <= 1e-10, count_detail("configs", reps)};
}

SuiteResult suite_visibility_oracle() {
  Rng rng(105);
  double worst = 0.0;
  const std::size_t reps = 1000;
  for (std::size_t n = 0; n < reps; ++n) {
    const ApparatusConfig cfg = sample_config(rng);
    worst = std::max(worst, std::abs(visibility_scan(cfg, 720) - visibility_closed(cfg)));
  }
  return {"visibility_oracle", worst, 1e-6, worst <= 1e-6, count_detail("configs", reps)};
}

struct PovmSample {
  OverlapPair pair;
  Priors priors;
  Povm povm;
};

PovmSample sample_povm_case(Rng& rng, std::size_t index) {
  const std::size_t dim = (index % 3 == 0) ? 3 : 2;
  const double c = sample_overlap(rng);
  const OverlapPair pair = sample_overlap_pair(rng, dim, c);
  Priors priors = sample_priors(rng);
  if (index % 97 == 0) priors = Priors{1.0, 0.0};
  if (index % 89 == 0) priors = Priors{0.0, 1.0};
  Povm povm = build_povm(pair, priors);
  return {pair, priors, std::move(povm)};
}

SuiteResult suite_povm_validity() {
  Rng rng(106);
  double worst = 0.0;
  const std::size_t reps = 10000;
  std::size_t seen[3] = {0, 0, 0};
  for (std::size_t n = 0; n < reps; ++n) {
    const PovmSample sample = sample_povm_case(rng, n);
    ++seen[static_cast<int>(sample.povm.regime.tag) - 1];
    const std::size_t d = sample.pair.dim();
    const CMatrix sum = sample.povm.pi_a + sample.povm.pi_b + sample.povm.pi_0;
    worst = std::max(worst, max_abs_diff(sum, CMatrix::identity(d)));
    for (const CMatrix* op : {&sample.povm.pi_a, &sample.povm.pi_b, &sample.povm.pi_0}) {
      const std::vector<double> ev = eig_hermitian(*op);
      worst = std::max(worst, std::max(0.0, -ev.front()));
    }
    const CMatrix rho_in = outer(sample.pair.r_state);
    const CMatrix rho_out = outer(sample.pair.s_state);
    worst = std::max(worst, std::abs((sample.povm.pi_a * rho_in).trace()));
    worst = std::max(worst, std::abs((sample.povm.pi_b * rho_out).trace()));
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "n=%zu, regimes %zu/%zu/%zu", reps, seen[0], seen[1],
                seen[2]);
  return {"povm_validity", worst, 1e-12, worst <= 1e-12, detail};
}

SuiteResult suite_failure_bound() {
  Rng rng(107);
  double worst = 0.0;
  const std::size_t reps = 10000;
  for (std::size_t n = 0; n < reps; ++n) {
    const PovmSample sample = sample_povm_case(rng, n);
    const FailureReport report = failure_probability(sample.povm, sample.pair, sample.priors);
    worst = std::max(worst, sample.povm.regime.tag == RegimeTag::general_povm
                                ? std::abs(report.failure_prob - report.fidelity_bound)
                                : std::max(0.0, report.fidelity_bound - report.failure_prob));
    const double c = sample.pair.overlap_c;
    const double wa = sample.priors.omega_a;
    const double wb = sample.priors.omega_b;
    double closed = 0.0;
    switch (sample.povm.regime.tag) {
      case RegimeTag::project_out_s: closed = wa + c * c * wb; break;
      case RegimeTag::general_povm: closed = 2.0 * c * std::sqrt(wa * wb); break;
      case RegimeTag::project_out_r: closed = wb + c * c * wa; break;
    }
    worst = std::max(worst, std::abs(report.failure_prob - closed));
    if (sample.povm.regime.tag == RegimeTag::general_povm) {
      // Saturation balance: both failure contributions equal sqrt(wa wb) C.
      const double target = std::sqrt(wa * wb) * c;
      const double from_in =
          wb * inner(sample.pair.r_state, matvec(sample.povm.pi_0, sample.pair.r_state)).real();
      const double from_out =
          wa * inner(sample.pair.s_state, matvec(sample.povm.pi_0, sample.pair.s_state)).real();
      worst = std::max(worst, std::abs(from_in - target));
      worst = std::max(worst, std::abs(from_out - target));
    }
  }
  return {"failure_bound", worst, 1e-12, worst <= 1e-12, count_detail("n", reps)};
}

SuiteResult suite_joint_oracle() {
  Rng rng(108);
  double worst = 0.0;
  const std::size_t reps = 10000;
  for (std::size_t n = 0; n < reps; ++n) {
    const ApparatusConfig cfg = sample_config(rng);
    const double c = cfg.detector.overlap();
    const Priors p = priors(cfg.bloch, cfg.bs2);
    const Povm povm = build_povm(overlap_pair(cfg.detector), p);
    const JointDistribution numeric =
        joint_distribution_numeric(postselected_state(cfg), povm);
    const JointDistribution closed = joint_distribution_closed(cfg.bloch, cfg.bs2, c);
    for (int mu = 0; mu < 2; ++mu)
      for (int k = 0; k < 3; ++k)
        worst = std::max(worst, std::abs(numeric.q[mu][k] - closed.q[mu][k]));
  }
  return {"joint_oracle", worst, 1e-12, worst <= 1e-12, count_detail("configs", reps)};
}

SuiteResult suite_information_oracle() {
  Rng rng(109);
  double worst = 0.0;
  const std::size_t reps = 2000;
  for (std::size_t n = 0; n < reps; ++n) {
    const ApparatusConfig cfg = sample_config(rng);
    const double c = cfg.detector.overlap();
    const Povm povm = build_povm(overlap_pair(cfg.detector), priors(cfg.bloch, cfg.bs2));
    const double numeric =
        which_path_information(joint_distribution_numeric(postselected_state(cfg), povm));
    worst = std::max(worst, std::abs(numeric - i_path_closed(cfg.bloch, cfg.bs2, c)));
  }
  return {"information_oracle", worst, 1e-10, worst <= 1e-10, count_detail("configs", reps)};
}

SuiteResult suite_regime_boundary() {
  double worst = 0.0;
  std::size_t points = 0;
  for (int k = 1; k <= 19; ++k) {
    const double c = 0.05 * k;
    if (c >= 1.0) break;
    // ratio = C: omega_a / omega_b = C^2.
    const Priors low{c * c / (1.0 + c * c), 1.0 / (1.0 + c * c)};
    // ratio = 1/C: omega_a / omega_b = 1/C^2.
    const Priors high{1.0 / (1.0 + c * c), c * c / (1.0 + c * c)};
    const auto compare = [&](RegimeTag lhs, RegimeTag rhs, const Priors& p) {
      const JointDistribution a = closed_joint_for_regime(lhs, p, c);
      const JointDistribution b = closed_joint_for_regime(rhs, p, c);
      for (int mu = 0; mu < 2; ++mu)
        for (int o = 0; o < 3; ++o) worst = std::max(worst, std::abs(a.q[mu][o] - b.q[mu][o]));
      worst = std::max(worst,
                       std::abs(which_path_information(a) - which_path_information(b)));
    };
    compare(RegimeTag::project_out_s, RegimeTag::general_povm, low);
    compare(RegimeTag::general_povm, RegimeTag::project_out_r, high);
    ++points;
  }
  return {"regime_boundary", worst, 1e-12, worst <= 1e-12, count_detail("overlaps", points)};
}

SuiteResult suite_postselect_marginal() {
  Rng rng(110);
  double worst = 0.0;
  const std::size_t reps = 500;
  for (std::size_t n = 0; n < reps; ++n) {
    const ApparatusConfig cfg = sample_config(rng);
    const Priors p = priors(cfg.bloch, cfg.bs2);
    const CMatrix joint = postselected_state(cfg);
    const CMatrix detector_state = partial_trace(joint, 2, cfg.detector.dim(), 1);
    const CMatrix rho_in = cfg.detector.initial_density();
    const CMatrix u = cfg.detector.mark_unitary();
    const CMatrix expected =
        p.omega_b * rho_in + p.omega_a * (u * rho_in * u.adjoint());
    worst = std::max(worst, max_abs_diff(detector_state, expected));
  }
  return {"postselect_marginal", worst, 1e-13, worst <= 1e-13, count_detail("configs", reps)};
}

SuiteResult suite_priors_normalization() {
  Rng rng(111);
  double worst = 0.0;
  const std::size_t reps = 10000;
  for (std::size_t n = 0; n < reps; ++n) {
    const BlochVector b = sample_bloch_ball(rng);
    const BeamSplitter bs2(sample_beta(rng));
    if (1.0 + b.s_x * std::cos(bs2.beta()) <= 1e-3) continue;
    const Priors p = priors(b, bs2);
    worst = std::max(worst, std::abs(p.omega_a + p.omega_b - 1.0));
    worst = std::max(worst, std::max(0.0, -p.omega_a));
    worst = std::max(worst, std::max(0.0, -p.omega_b));
  }
  return {"priors_normalization", worst, 1e-14, worst <= 1e-14, count_detail("n", reps)};
}

SuiteResult suite_wpi_sx_only() {
  Rng rng(112);
  double worst = 0.0;
  const std::size_t reps = 1000;
  for (std::size_t n = 0; n < reps; ++n) {
    const double s_x = rng.uniform(-0.99, 0.99);
    const BeamSplitter bs2(sample_beta(rng));
    if (1.0 + s_x * std::cos(bs2.beta()) <= 1e-3) continue;
    const double c = sample_overlap(rng);
    const double radius_cap = std::sqrt(1.0 - s_x * s_x);
    const auto random_transverse = [&] {
      const double radius = radius_cap * std::sqrt(rng.uniform());
      const double angle = rng.uniform(0.0, 2.0 * kPi);
      return BlochVector{s_x, radius * std::sin(angle), radius * std::cos(angle)};
    };
    const double reference = i_path_closed(random_transverse(), bs2, c);
    for (int k = 0; k < 4; ++k)
      worst = std::max(worst, std::abs(i_path_closed(random_transverse(), bs2, c) - reference));
  }
  return {"wpi_sx_only", worst, 1e-14, worst <= 1e-14, count_detail("configs", reps)};
}

SuiteResult suite_ridge_equality() {
  double worst = 0.0;
  const std::size_t reps = 50;
  for (std::size_t n = 0; n < reps; ++n) {
    const double s_x = -0.9 + 1.8 * static_cast<double>(n) / (reps - 1);
    const double c = 0.1 * (1 + n % 9);
    const double beta = std::acos(-s_x);
    const BlochVector bloch{s_x, 0.0, std::sqrt(1.0 - s_x * s_x)};
    const BeamSplitter bs2(beta);
    const double sum = visibility_closed(bloch, bs2, c) + i_path_closed(bloch, bs2, c);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return {"ridge_equality", worst, 1e-9, worst <= 1e-9, count_detail("configs", reps)};
}

SuiteResult suite_complementarity_bound() {
  const BoundSummary summary = verify_bound(20000, 20240601);
  const double worst = std::max(summary.max_violation, 0.0);
  char detail[128];
  std::snprintf(detail, sizeof detail, "samples=%llu, regimes %llu/%llu/%llu, max_sum=%.3f",
                static_cast<unsigned long long>(summary.samples),
                static_cast<unsigned long long>(summary.count_regime1),
                static_cast<unsigned long long>(summary.count_regime2),
                static_cast<unsigned long long>(summary.count_regime3),
                summary.max_duality_sum);
  return {"complementarity_bound", worst, 1e-9, worst <= 1e-9 && summary.violations == 0,
          detail};
}

}  // namespace

std::vector<SuiteResult> run_validation_suites() {
  std::vector<SuiteResult> results;
  results.push_back(suite_kron_algebra());
  results.push_back(suite_eig_hermitian());
  results.push_back(suite_evolved_state());
  results.push_back(suite_fringe_sinusoidal());
  results.push_back(suite_visibility_oracle());
  results.push_back(suite_povm_validity());
  results.push_back(suite_failure_bound());
  results.push_back(suite_joint_oracle());
  results.push_back(suite_information_oracle());
  results.push_back(suite_regime_boundary());
  results.push_back(suite_postselect_marginal());
  results.push_back(suite_priors_normalization());
  results.push_back(suite_wpi_sx_only());
  results.push_back(suite_ridge_equality());
  results.push_back(suite_complementarity_bound());
  return results;
}

}  // namespace mzi
