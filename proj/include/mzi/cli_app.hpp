#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mzi/duality.hpp"
#include "mzi/validation.hpp"

namespace mzi::cli {

inline constexpr const char* kToolName = "duality-lab";
inline constexpr const char* kToolVersion = "0.1.0";

// Exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;       // flag parsing / domain errors
inline constexpr int kExitDegenerate = 3;  // no particle reaches monitored outputs
inline constexpr int kExitViolation = 4;   // invariant violation

// Full command entry point; never calls exit(). `out` carries results,
// `err` carries single-line `error:`-prefixed diagnostics.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int exit_code_for_verify(const BoundSummary& summary);

// All numbers are emitted with 17 significant digits and a '.' separator so
// repeated runs are byte-identical.
std::string format_number(double v);

std::string report_to_json(const DualityReport& report);
std::string summary_to_json(const BoundSummary& summary);
std::string rows_to_csv(const std::vector<SweepRow>& rows);
std::string rows_to_json(const std::vector<SweepRow>& rows);
std::string suites_to_text(const std::vector<SuiteResult>& suites);

// Reads {dim, r_state: [[re,im],...], u_matrix: [[[re,im],...],...]}.
DetectorModel load_detector_file(const std::string& path);

}  // namespace mzi::cli
