#pragma once

// Central tolerance record. Every threshold used by the library lives here,
// so a numeric gate is declared exactly once.
namespace mzi::tol {

inline constexpr double algebra        = 1e-12;  // algebraic identities
inline constexpr double hermitian_gate = 1e-10;  // Hermiticity preconditions
inline constexpr double jacobi_offdiag = 1e-13;  // eigensolver convergence target
inline constexpr double psd            = 1e-12;  // positive-semidefinite slack
inline constexpr double degenerate     = 1e-12;  // 1 + S_x (t - r) cutoff
inline constexpr double distinguish    = 1e-12;  // overlap < 1 - distinguish required
inline constexpr double clamp_negative = 1e-14;  // probability rounding clamp
inline constexpr double scan_match     = 1e-6;   // closed-form visibility vs phase scan
inline constexpr double duality_slack  = 1e-9;   // V + I_path <= 1 + duality_slack

inline constexpr int jacobi_max_sweeps = 100;

}  // namespace mzi::tol
