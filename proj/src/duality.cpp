#include "mzi/duality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "mzi/sampling.hpp"

namespace mzi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double closed_failure(const Regime& regime, const Priors& p, double c) {
  switch (regime.tag) {
    case RegimeTag::project_out_s:
      return p.omega_a + c * c * p.omega_b;
    case RegimeTag::project_out_r:
      return p.omega_b + c * c * p.omega_a;
    case RegimeTag::general_povm:
      return 2.0 * c * std::sqrt(p.omega_a * p.omega_b);
  }
  return 0.0;
}

[[noreturn]] void throw_degenerate(const BlochVector& b, double beta) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s (s_x=%.17g, beta=%.17g)", kDegenerateMessage,
                b.s_x, beta);
  throw DegenerateConfig(buf);
}

}  // namespace

DualityReport report(const ApparatusConfig& cfg) {
  cfg.bloch.validate();
  const double c = cfg.detector.overlap();
  if (c >= 1.0)
    throw std::invalid_argument("report: detector overlap must be below 1");

  const double beta = cfg.bs2.beta();
  if (1.0 + cfg.bloch.s_x * std::cos(beta) <= tol::degenerate)
    throw_degenerate(cfg.bloch, beta);

  DualityReport rep;
  rep.s_x = cfg.bloch.s_x;
  rep.s_y = cfg.bloch.s_y;
  rep.s_z = cfg.bloch.s_z;
  rep.beta = beta;
  rep.overlap_c = c;
  rep.visibility = visibility_closed(cfg);
  rep.i_path = i_path_closed(cfg.bloch, cfg.bs2, c);
  rep.duality_sum = rep.visibility + rep.i_path;
  rep.priors = priors(cfg.bloch, cfg.bs2);
  rep.regime = classify_regime(rep.priors, c);
  rep.failure_prob = closed_failure(rep.regime, rep.priors, c);

  if (rep.duality_sum > 1.0 + tol::duality_slack)
    throw InvariantViolation("duality sum exceeds 1");
  if (rep.visibility > c + tol::algebra)
    throw InvariantViolation("visibility exceeds the overlap ceiling");
  if (rep.i_path > 1.0 - c + tol::duality_slack)
    throw InvariantViolation("which-path information exceeds 1 - C");
  return rep;
}

const char* sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::s_x: return "s_x";
    case SweepParam::beta: return "beta";
    case SweepParam::overlap_c: return "overlap_c";
  }
  return "?";
}

namespace {

void validate_axis_domain(const SweepAxis& axis) {
  const double lo = std::min(axis.start, axis.stop);
  const double hi = std::max(axis.start, axis.stop);
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("sweep axis: non-finite bound");
  if (axis.points < 2) throw std::invalid_argument("sweep axis: needs at least 2 points");
  switch (axis.param) {
    case SweepParam::s_x:
      if (lo < -1.0 || hi > 1.0) throw std::invalid_argument("sweep axis: s_x outside [-1, 1]");
      break;
    case SweepParam::beta:
      if (lo < 0.0 || hi > kPi) throw std::invalid_argument("sweep axis: beta outside [0, pi]");
      break;
    case SweepParam::overlap_c:
      if (lo < 0.0 || hi >= 1.0)
        throw std::invalid_argument("sweep axis: overlap outside [0, 1)");
      break;
  }
}

double linspace(const SweepAxis& axis, std::size_t k) {
  return axis.start + (axis.stop - axis.start) * static_cast<double>(k) /
                          static_cast<double>(axis.points - 1);
}

std::size_t thread_budget(std::size_t rows) {
  std::size_t threads = std::min<std::size_t>(4, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DUALITY_LAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) threads = std::min<std::size_t>(threads, static_cast<std::size_t>(cap));
    else threads = 1;
  }
  threads = std::max<std::size_t>(1, threads);
  if (rows < 2048) return 1;
  return std::min(threads, rows / 512);
}

}  // namespace

void SweepSpec::validate() const {
  validate_axis_domain(outer);
  validate_axis_domain(inner);
  if (outer.param == inner.param)
    throw std::invalid_argument("sweep: the two axes must vary different parameters");

  const auto fixed_of = [&](SweepParam p, double v, const char* flag) {
    if (outer.param == p || inner.param == p) return;
    SweepAxis probe{p, v, v, 2};
    try {
      validate_axis_domain(probe);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument(std::string("sweep: fixed ") + flag + " out of domain");
    }
  };
  fixed_of(SweepParam::s_x, fixed_s_x, "s_x");
  fixed_of(SweepParam::beta, fixed_beta, "beta");
  fixed_of(SweepParam::overlap_c, fixed_overlap, "overlap");

  // Bound the Bloch norm over the whole grid.
  double max_sx = std::abs(fixed_s_x);
  for (const SweepAxis* axis : {&outer, &inner})
    if (axis->param == SweepParam::s_x)
      max_sx = std::max(std::abs(axis->start), std::abs(axis->stop));
  const double planar = max_sx * max_sx + fixed_s_y * fixed_s_y;
  if (pure) {
    if (planar > 1.0 + tol::algebra)
      throw std::invalid_argument("sweep: s_x^2 + s_y^2 exceeds 1 on a pure grid");
  } else if (planar + fixed_s_z * fixed_s_z > 1.0 + tol::algebra) {
    throw std::invalid_argument("sweep: fixed Bloch vector leaves the unit ball");
  }
}

namespace {

SweepRow evaluate_row(const SweepSpec& spec, double outer_value, double inner_value) {
  double s_x = spec.fixed_s_x;
  double beta = spec.fixed_beta;
  double overlap = spec.fixed_overlap;
  const auto apply = [&](const SweepAxis& axis, double v) {
    switch (axis.param) {
      case SweepParam::s_x: s_x = v; break;
      case SweepParam::beta: beta = v; break;
      case SweepParam::overlap_c: overlap = v; break;
    }
  };
  apply(spec.outer, outer_value);
  apply(spec.inner, inner_value);

  const double s_y = spec.fixed_s_y;
  const double s_z = spec.pure
                         ? std::sqrt(std::max(0.0, 1.0 - s_x * s_x - s_y * s_y))
                         : spec.fixed_s_z;

  SweepRow row;
  row.s_x = s_x;
  row.s_y = s_y;
  row.s_z = s_z;
  row.beta = beta;
  row.overlap_c = overlap;
  try {
    const ApparatusConfig cfg{BlochVector{s_x, s_y, s_z}, BeamSplitter(beta), 0.0,
                              DetectorModel::from_overlap(overlap)};
    const DualityReport rep = report(cfg);
    row.regime = static_cast<int>(rep.regime.tag);
    row.omega_a = rep.priors.omega_a;
    row.omega_b = rep.priors.omega_b;
    row.visibility = rep.visibility;
    row.i_path = rep.i_path;
    row.duality_sum = rep.duality_sum;
    row.failure_prob = rep.failure_prob;
    row.ok = true;
  } catch (const DegenerateConfig&) {
    row.regime = 0;
    row.omega_a = row.omega_b = kNan;
    row.visibility = row.i_path = row.duality_sum = row.failure_prob = kNan;
    row.ok = false;
  }
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n_rows = spec.outer.points * spec.inner.points;
  std::vector<SweepRow> rows(n_rows);

  const auto fill_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const std::size_t i = idx / spec.inner.points;
      const std::size_t j = idx % spec.inner.points;
      rows[idx] = evaluate_row(spec, linspace(spec.outer, i), linspace(spec.inner, j));
    }
  };

  const std::size_t threads = thread_budget(n_rows);
  if (threads <= 1) {
    fill_range(0, n_rows);
    return rows;
  }

  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const std::size_t chunk = (n_rows + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n_rows, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        fill_range(begin, end);
      } catch (...) {
        const std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

SweepSpec figure_preset(const std::string& name) {
  SweepSpec spec;
  spec.pure = true;
  spec.fixed_s_y = 0.0;
  if (name == "fig2" || name == "fig4") {
    spec.outer = SweepAxis{SweepParam::s_x, -1.0, 1.0, 201};
    spec.inner = SweepAxis{SweepParam::beta, 0.0, kPi, 181};
    spec.fixed_overlap = 1.0 / 3.0;
    return spec;
  }
  if (name == "fig5") {
    spec.outer = SweepAxis{SweepParam::overlap_c, 0.05, 0.95, 19};
    spec.inner = SweepAxis{SweepParam::beta, 0.0, kPi, 181};
    spec.fixed_s_x = 0.5;
    return spec;
  }
  if (name == "fig6") {
    spec.outer = SweepAxis{SweepParam::overlap_c, 0.05, 0.95, 19};
    spec.inner = SweepAxis{SweepParam::s_x, -1.0, 1.0, 201};
    spec.fixed_beta = kPi / 3.0;
    return spec;
  }
  throw std::invalid_argument("unknown figure preset '" + name +
                              "' (expected one of fig2, fig4, fig5, fig6)");
}

std::vector<std::string> figure_preset_names() { return {"fig2", "fig4", "fig5", "fig6"}; }

BoundSummary verify_bound(std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("verify_bound: samples must be >= 1");
  BoundSummary summary;
  summary.samples = samples;
  summary.seed = seed;
  summary.max_duality_sum = -std::numeric_limits<double>::infinity();
  summary.min_duality_sum = std::numeric_limits<double>::infinity();

  Rng rng(seed);
  for (std::uint64_t n = 0; n < samples; ++n) {
    const BlochVector bloch = sample_bloch_ball(rng);
    const BeamSplitter bs2(sample_beta(rng));
    const double c = sample_overlap(rng, 0.99);
    if (1.0 + bloch.s_x * std::cos(bs2.beta()) <= tol::degenerate) {
      ++summary.degenerate;
      continue;
    }
    const double v = visibility_closed(bloch, bs2, c);
    const double info = i_path_closed(bloch, bs2, c);
    const double sum = v + info;
    const Regime regime = classify_regime(priors(bloch, bs2), c);
    switch (regime.tag) {
      case RegimeTag::project_out_s: ++summary.count_regime1; break;
      case RegimeTag::general_povm: ++summary.count_regime2; break;
      case RegimeTag::project_out_r: ++summary.count_regime3; break;
    }
    if (sum > summary.max_duality_sum) {
      summary.max_duality_sum = sum;
      summary.worst_s_x = bloch.s_x;
      summary.worst_s_y = bloch.s_y;
      summary.worst_s_z = bloch.s_z;
      summary.worst_beta = bs2.beta();
      summary.worst_overlap = c;
    }
    summary.min_duality_sum = std::min(summary.min_duality_sum, sum);
    if (sum > 1.0 + tol::duality_slack) ++summary.violations;
  }
  if (summary.degenerate == samples) {
    summary.max_duality_sum = 0.0;
    summary.min_duality_sum = 0.0;
  }
  summary.max_violation = std::max(0.0, summary.max_duality_sum - 1.0);
  return summary;
}

}  // namespace mzi
