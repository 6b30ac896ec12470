#pragma once

#include <complex>

#include "mzi/errors.hpp"
#include "mzi/qmatrix.hpp"

// Two-path Mach-Zehnder interferometer with a symmetric input beam splitter,
// phase shifters of opposite sign on the two arms, an asymmetric output beam
// splitter, and a marking detector coupled to path a.
//
// BASIS CONVENTION (fixes every matrix in this project):
//   particle index 0 = |b>, index 1 = |a>, so sigma_z = |b><b| - |a><a|.
// Joint operators are kron(particle, detector); the detector block for path b
// therefore sits in the upper-left corner.
namespace mzi {

struct BlochVector {
  double s_x = 0.0;
  double s_y = 0.0;
  double s_z = 0.0;

  double norm_squared() const { return s_x * s_x + s_y * s_y + s_z * s_z; }
  // Throws std::invalid_argument when outside the closed unit ball.
  void validate() const;
};

// Output beam splitter with mixing angle in [0, pi]; angles outside are
// reduced using the period and parity of r = sin^2(beta/2), t = cos^2(beta/2).
class BeamSplitter {
 public:
  explicit BeamSplitter(double angle);

  double beta() const { return beta_; }
  double reflectance() const;    // r
  double transmittance() const;  // t

 private:
  double beta_;
};

// Pure detector state |r> plus the marking unitary applied on path a.
class DetectorModel {
 public:
  // Validates unit norm of |r> and unitarity of u (both to 1e-12).
  static DetectorModel make(CVector initial_state, CMatrix mark_unitary);
  // Canonical dim-2 embedding realizing a given overlap: |r> = (1,0) and a
  // real rotation sending |r> to (c, sqrt(1-c^2)).
  static DetectorModel from_overlap(double c);

  std::size_t dim() const { return initial_state_.size(); }
  const CVector& initial_state() const { return initial_state_; }
  const CMatrix& mark_unitary() const { return mark_unitary_; }
  CMatrix initial_density() const { return outer(initial_state_); }

  cx marked_trace() const;                            // <r|U|r> = tr(U rho)
  double overlap() const { return std::abs(marked_trace()); }  // C in [0,1]

 private:
  DetectorModel(CVector r, CMatrix u)
      : initial_state_(std::move(r)), mark_unitary_(std::move(u)) {}

  CVector initial_state_;
  CMatrix mark_unitary_;
};

// One experiment point: input state, output beam splitter, phase, detector.
struct ApparatusConfig {
  BlochVector bloch;
  BeamSplitter bs2;
  double phase = 0.0;  // phi, with phi_a = -phi_b = phi
  DetectorModel detector;
};

// p(phi) = mean_level + amplitude * cos(alpha_offset + gamma_offset + phi).
struct FringeProfile {
  double mean_level = 0.0;
  double amplitude = 0.0;
  double alpha_offset = 0.0;  // atan2(S_y, S_z)
  double gamma_offset = 0.0;  // arg tr(U rho_D)
};

struct Priors {
  double omega_a = 0.0;  // particle found in output a
  double omega_b = 0.0;  // particle found in output d (relabeled b)

  // sqrt(omega_a / omega_b); +infinity when omega_b = 0.
  double ratio() const;
};

// --- elementary operators ---------------------------------------------------

CMatrix input_density(const BlochVector& b);        // 2x2
CMatrix bs_unitary(double beta);                    // requires beta in [0, pi]
CMatrix phase_unitary(double phi);                  // diag(e^{-i phi/2}, e^{i phi/2})
CMatrix mark_operator(const DetectorModel& d);      // |b><b| x I + |a><a| x U

// --- evolution ---------------------------------------------------------------

// Full joint state after BS1, phase shifters, marking, and BS2. The detector
// state may be mixed; the config overload uses the model's pure |r><r|.
CMatrix evolve_full(const BlochVector& b, const BeamSplitter& bs2, double phi,
                    const CMatrix& mark_unitary, const CMatrix& detector_density);
CMatrix evolve_full(const ApparatusConfig& cfg);

// Probability of finding the particle at output port a.
double output_probability(const ApparatusConfig& cfg);

// --- fringes and visibility ---------------------------------------------------

FringeProfile fringe_profile(const BlochVector& b, const BeamSplitter& bs2,
                             cx detector_trace);
FringeProfile fringe_profile(const ApparatusConfig& cfg);

// Closed-form visibility sin(beta) sqrt(S_y^2+S_z^2) C / (1 + S_x cos(beta)).
// Throws DegenerateConfig when the denominator vanishes.
double visibility_closed(const BlochVector& b, const BeamSplitter& bs2,
                         double detector_trace_abs);
double visibility_closed(const ApparatusConfig& cfg);

// Scan oracle: (max p - min p)/(max p + min p) over a phase grid of at least
// 16 points, each extremum refined by one parabolic fit through its cyclic
// neighbors. Every probability goes through evolve_full.
double visibility_scan(const ApparatusConfig& cfg, std::size_t grid);

// --- post-selection ------------------------------------------------------------

// Prior probabilities for the two monitored outputs.
Priors priors(const BlochVector& b, const BeamSplitter& bs2);

// Joint particle/detector state conditioned on the particle appearing in a
// monitored output: amplitude filter sqrt(t)|a><a| + sqrt(r)|b><b| applied to
// the pre-BS2 state, renormalized.
CMatrix postselected_state(const ApparatusConfig& cfg);

inline constexpr const char* kDegenerateMessage = "no particle reaches monitored outputs";

}  // namespace mzi
