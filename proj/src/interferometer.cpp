#include "mzi/interferometer.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mzi {

namespace {
constexpr double kPi = std::numbers::pi;

CMatrix projector_b() {
  CMatrix p(2, 2);
  p(0, 0) = cx{1.0, 0.0};
  return p;
}

CMatrix projector_a() {
  CMatrix p(2, 2);
  p(1, 1) = cx{1.0, 0.0};
  return p;
}
}  // namespace

void BlochVector::validate() const {
  if (!std::isfinite(s_x) || !std::isfinite(s_y) || !std::isfinite(s_z))
    throw std::invalid_argument("BlochVector: non-finite component");
  if (norm_squared() > 1.0 + tol::algebra)
    throw std::invalid_argument("BlochVector: norm exceeds 1");
}

BeamSplitter::BeamSplitter(double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("BeamSplitter: non-finite angle");
  // r and t are even and 2*pi-periodic in beta, so [0, pi] carries every
  // distinct splitter.
  const double reduced = std::remainder(angle, 2.0 * kPi);
  beta_ = std::abs(reduced);
}

double BeamSplitter::reflectance() const {
  const double s = std::sin(0.5 * beta_);
  return s * s;
}

double BeamSplitter::transmittance() const {
  const double c = std::cos(0.5 * beta_);
  return c * c;
}

DetectorModel DetectorModel::make(CVector initial_state, CMatrix mark_unitary) {
  if (initial_state.size() < 2)
    throw std::invalid_argument("DetectorModel: dimension must be at least 2");
  if (mark_unitary.rows() != initial_state.size() ||
      mark_unitary.cols() != initial_state.size())
    throw std::invalid_argument("DetectorModel: unitary size does not match state");
  if (!mark_unitary.all_finite())
    throw std::invalid_argument("DetectorModel: non-finite unitary entry");
  for (const cx& e : initial_state)
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
      throw std::invalid_argument("DetectorModel: non-finite state entry");
  if (std::abs(norm(initial_state) - 1.0) > tol::algebra)
    throw std::invalid_argument("DetectorModel: initial state is not normalized");
  const CMatrix gram = mark_unitary.adjoint() * mark_unitary;
  if (max_abs_diff(gram, CMatrix::identity(mark_unitary.rows())) > tol::algebra)
    throw std::invalid_argument("DetectorModel: mark operator is not unitary");
  return DetectorModel(std::move(initial_state), std::move(mark_unitary));
}

DetectorModel DetectorModel::from_overlap(double c) {
  if (!(c >= 0.0 && c <= 1.0))
    throw std::invalid_argument("DetectorModel: overlap must lie in [0, 1]");
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  CMatrix u(2, 2);
  u(0, 0) = cx{c, 0.0};
  u(0, 1) = cx{-s, 0.0};
  u(1, 0) = cx{s, 0.0};
  u(1, 1) = cx{c, 0.0};
  return DetectorModel(CVector{cx{1.0, 0.0}, cx{0.0, 0.0}}, std::move(u));
}

cx DetectorModel::marked_trace() const {
  return inner(initial_state_, matvec(mark_unitary_, initial_state_));
}

double Priors::ratio() const {
  if (omega_b <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(omega_a / omega_b);
}

CMatrix input_density(const BlochVector& b) {
  b.validate();
  CMatrix rho = CMatrix::identity(2);
  rho += cx{b.s_x, 0.0} * pauli_x();
  rho += cx{b.s_y, 0.0} * pauli_y();
  rho += cx{b.s_z, 0.0} * pauli_z();
  rho *= cx{0.5, 0.0};
  return rho;
}

CMatrix bs_unitary(double beta) {
  if (!(beta >= 0.0 && beta <= kPi))
    throw std::invalid_argument("bs_unitary: angle must lie in [0, pi]");
  const double ct = std::cos(0.5 * beta);  // sqrt(t)
  const double st = std::sin(0.5 * beta);  // sqrt(r)
  CMatrix u(2, 2);
  u(0, 0) = cx{ct, 0.0};
  u(0, 1) = cx{-st, 0.0};
  u(1, 0) = cx{st, 0.0};
  u(1, 1) = cx{ct, 0.0};
  return u;
}

CMatrix phase_unitary(double phi) {
  CMatrix u(2, 2);
  u(0, 0) = std::polar(1.0, -0.5 * phi);
  u(1, 1) = std::polar(1.0, 0.5 * phi);
  return u;
}

CMatrix mark_operator(const DetectorModel& d) {
  const CMatrix eye = CMatrix::identity(d.dim());
  return kron(projector_b(), eye) + kron(projector_a(), d.mark_unitary());
}

namespace {

// Joint state just before BS2: BS1, phase shifters, then the path-a marking.
CMatrix pre_bs2_state(const BlochVector& b, double phi, const CMatrix& mark_unitary,
                      const CMatrix& detector_density) {
  const std::size_t d = detector_density.rows();
  const CMatrix eye = CMatrix::identity(d);
  const CMatrix mark = kron(projector_b(), eye) + kron(projector_a(), mark_unitary);
  const CMatrix w = mark * kron(phase_unitary(phi) * bs_unitary(0.5 * kPi), eye);
  const CMatrix joint0 = kron(input_density(b), detector_density);
  return w * joint0 * w.adjoint();
}

}  // namespace

CMatrix evolve_full(const BlochVector& b, const BeamSplitter& bs2, double phi,
                    const CMatrix& mark_unitary, const CMatrix& detector_density) {
  const std::size_t d = detector_density.rows();
  const CMatrix eye = CMatrix::identity(d);
  const CMatrix pre = pre_bs2_state(b, phi, mark_unitary, detector_density);
  const CMatrix out_bs = kron(bs_unitary(bs2.beta()), eye);
  return out_bs * pre * out_bs.adjoint();
}

CMatrix evolve_full(const ApparatusConfig& cfg) {
  return evolve_full(cfg.bloch, cfg.bs2, cfg.phase, cfg.detector.mark_unitary(),
                     cfg.detector.initial_density());
}

double output_probability(const ApparatusConfig& cfg) {
  const CMatrix rho = evolve_full(cfg);
  const std::size_t d = cfg.detector.dim();
  double p = 0.0;
  for (std::size_t k = 0; k < d; ++k) p += rho(d + k, d + k).real();
  return p;
}

FringeProfile fringe_profile(const BlochVector& b, const BeamSplitter& bs2,
                             cx detector_trace) {
  b.validate();
  FringeProfile f;
  const double beta = bs2.beta();
  f.mean_level = 0.5 * (1.0 + b.s_x * std::cos(beta));
  f.amplitude =
      0.5 * std::hypot(b.s_y, b.s_z) * std::sin(beta) * std::abs(detector_trace);
  f.alpha_offset = std::atan2(b.s_y, b.s_z);
  f.gamma_offset =
      detector_trace == cx{0.0, 0.0} ? 0.0 : std::arg(detector_trace);
  return f;
}

FringeProfile fringe_profile(const ApparatusConfig& cfg) {
  return fringe_profile(cfg.bloch, cfg.bs2, cfg.detector.marked_trace());
}

double visibility_closed(const BlochVector& b, const BeamSplitter& bs2,
                         double detector_trace_abs) {
  b.validate();
  const double beta = bs2.beta();
  const double denom = 1.0 + b.s_x * std::cos(beta);
  if (denom <= tol::degenerate) throw DegenerateConfig(kDegenerateMessage);
  return std::sin(beta) * std::hypot(b.s_y, b.s_z) * detector_trace_abs / denom;
}

double visibility_closed(const ApparatusConfig& cfg) {
  return visibility_closed(cfg.bloch, cfg.bs2, cfg.detector.overlap());
}

namespace {

// Vertex value of the parabola through (-h, y1), (0, y2), (h, y3); falls back
// to y2 when the three points are collinear.
double parabolic_peak(double y1, double y2, double y3, bool maximum) {
  const double curvature = y1 - 2.0 * y2 + y3;
  if (curvature == 0.0) return y2;
  if (maximum && curvature >= 0.0) return y2;
  if (!maximum && curvature <= 0.0) return y2;
  const double slope = 0.5 * (y3 - y1);
  return y2 - slope * slope / (2.0 * curvature);
}

}  // namespace

double visibility_scan(const ApparatusConfig& cfg, std::size_t grid) {
  if (grid < 16) throw std::invalid_argument("visibility_scan: grid must be >= 16");
  std::vector<double> p(grid);
  std::size_t imax = 0;
  std::size_t imin = 0;
  for (std::size_t j = 0; j < grid; ++j) {
    ApparatusConfig point = cfg;
    point.phase = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(grid);
    p[j] = output_probability(point);
    if (p[j] > p[imax]) imax = j;
    if (p[j] < p[imin]) imin = j;
  }
  const auto prev = [&](std::size_t i) { return p[(i + grid - 1) % grid]; };
  const auto next = [&](std::size_t i) { return p[(i + 1) % grid]; };
  const double pmax = parabolic_peak(prev(imax), p[imax], next(imax), /*maximum=*/true);
  const double pmin = parabolic_peak(prev(imin), p[imin], next(imin), /*maximum=*/false);
  const double denom = pmax + pmin;
  if (denom <= tol::degenerate) throw DegenerateConfig(kDegenerateMessage);
  return (pmax - pmin) / denom;
}

Priors priors(const BlochVector& b, const BeamSplitter& bs2) {
  b.validate();
  const double r = bs2.reflectance();
  const double t = bs2.transmittance();
  const double denom = 1.0 + b.s_x * (t - r);
  if (denom <= tol::degenerate) throw DegenerateConfig(kDegenerateMessage);
  return Priors{t * (1.0 + b.s_x) / denom, r * (1.0 - b.s_x) / denom};
}

CMatrix postselected_state(const ApparatusConfig& cfg) {
  const double r = cfg.bs2.reflectance();
  const double t = cfg.bs2.transmittance();
  const double denom = 1.0 + cfg.bloch.s_x * (t - r);
  if (denom <= tol::degenerate) throw DegenerateConfig(kDegenerateMessage);

  const std::size_t d = cfg.detector.dim();
  const CMatrix pre = pre_bs2_state(cfg.bloch, cfg.phase, cfg.detector.mark_unitary(),
                                    cfg.detector.initial_density());
  // Amplitude filter: path a transmits into output a, path b reflects into
  // output d; everything else is discarded by the post-selection.
  CMatrix filter(2, 2);
  filter(0, 0) = cx{std::sqrt(r), 0.0};
  filter(1, 1) = cx{std::sqrt(t), 0.0};
  const CMatrix k = kron(filter, CMatrix::identity(d));
  CMatrix conditioned = k * pre * k.adjoint();
  const double weight = conditioned.trace().real();
  if (weight <= 0.5 * tol::degenerate) throw DegenerateConfig(kDegenerateMessage);
  conditioned *= cx{1.0 / weight, 0.0};
  return conditioned;
}

}  // namespace mzi
