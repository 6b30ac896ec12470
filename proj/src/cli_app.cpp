#include "mzi/cli_app.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mzi/sampling.hpp"

namespace mzi::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_or(double v, const char* fallback) {
  if (!std::isfinite(v)) return fallback;
  return format_number(v);
}

void append_kv(std::string& s, const char* key, const std::string& value, bool quote,
               bool last = false) {
  s += "  \"";
  s += key;
  s += "\": ";
  if (quote) s += '"';
  s += value;
  if (quote) s += '"';
  if (!last) s += ',';
  s += '\n';
}

int regime_index(const Regime& regime) { return static_cast<int>(regime.tag); }

void write_payload(const std::string& payload, const std::string& output_path,
                   std::ostream& out) {
  if (output_path.empty()) {
    out << payload;
    return;
  }
  std::ofstream file(output_path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + output_path + "'");
  file << payload;
  if (!file.good()) throw UsageError("failed writing output file '" + output_path + "'");
}

// --- flag domains -----------------------------------------------------------

void check_component(double v, const char* flag) {
  if (!(v >= -1.0 && v <= 1.0))
    throw UsageError(std::string(flag) + " out of domain: must lie in [-1, 1]");
}

BlochVector checked_bloch(double sx, double sy, double sz) {
  check_component(sx, "--sx");
  check_component(sy, "--sy");
  check_component(sz, "--sz");
  const BlochVector b{sx, sy, sz};
  if (b.norm_squared() > 1.0 + tol::algebra)
    throw UsageError("--sx/--sy/--sz out of domain: Bloch norm exceeds 1");
  return b;
}

double checked_beta(double beta) {
  if (!(beta >= 0.0 && beta <= kPi))
    throw UsageError("--beta out of domain: must lie in [0, pi]");
  return beta;
}

double checked_overlap(double c) {
  if (!(c >= 0.0 && c < 1.0))
    throw UsageError("--overlap out of domain: must lie in [0, 1)");
  return c;
}

// --- sweep flag plumbing ------------------------------------------------------

SweepAxis parse_grid(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw UsageError("--grid expects name=start:stop:points, got '" + text + "'");
  const std::string name = text.substr(0, eq);
  SweepAxis axis;
  if (name == "sx") axis.param = SweepParam::s_x;
  else if (name == "beta") axis.param = SweepParam::beta;
  else if (name == "overlap") axis.param = SweepParam::overlap_c;
  else throw UsageError("--grid axis must be one of sx, beta, overlap; got '" + name + "'");

  const std::string rest = text.substr(eq + 1);
  double start = 0.0;
  double stop = 0.0;
  unsigned long long points = 0;
  char trailing = '\0';
  if (std::sscanf(rest.c_str(), "%lf:%lf:%llu%c", &start, &stop, &points, &trailing) != 3)
    throw UsageError("--grid expects name=start:stop:points, got '" + text + "'");
  if (points < 2) throw UsageError("--grid needs at least 2 points, got '" + text + "'");
  axis.start = start;
  axis.stop = stop;
  axis.points = static_cast<std::size_t>(points);
  return axis;
}

struct SweepFlags {
  std::vector<std::string> grids;
  std::optional<double> sx;
  std::optional<double> sy;
  std::optional<double> sz;
  std::optional<double> beta;
  std::optional<double> overlap;
};

SweepSpec build_sweep_spec(const SweepFlags& flags) {
  if (flags.grids.size() != 2) throw UsageError("sweep requires exactly two --grid axes");
  SweepSpec spec;
  spec.outer = parse_grid(flags.grids[0]);
  spec.inner = parse_grid(flags.grids[1]);
  if (spec.outer.param == spec.inner.param)
    throw UsageError("the two --grid axes must vary different parameters");

  const auto on_axis = [&](SweepParam p) {
    return spec.outer.param == p || spec.inner.param == p;
  };
  const auto resolve = [&](SweepParam p, const std::optional<double>& flag, const char* name,
                           double& slot) {
    if (on_axis(p)) {
      if (flag)
        throw UsageError(std::string("--") + name + " conflicts with the " + name + " axis");
      return;
    }
    if (!flag)
      throw UsageError(std::string("parameter ") + name +
                       " is neither swept nor fixed; pass --" + name);
    slot = *flag;
  };
  resolve(SweepParam::s_x, flags.sx, "sx", spec.fixed_s_x);
  resolve(SweepParam::beta, flags.beta, "beta", spec.fixed_beta);
  resolve(SweepParam::overlap_c, flags.overlap, "overlap", spec.fixed_overlap);

  spec.fixed_s_y = flags.sy.value_or(0.0);
  if (flags.sz) {
    spec.pure = false;
    spec.fixed_s_z = *flags.sz;
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

// --- subcommand bodies ----------------------------------------------------------

int run_report(const BlochVector& bloch, double beta, const DetectorModel& detector,
               const std::string& output_path, std::ostream& out) {
  const ApparatusConfig cfg{bloch, BeamSplitter(beta), 0.0, detector};
  DualityReport rep;
  try {
    rep = report(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  write_payload(report_to_json(rep), output_path, out);
  return kExitOk;
}

int run_sweep_like(const SweepSpec& spec, const std::string& format,
                   const std::string& output_path, std::ostream& out) {
  const std::vector<SweepRow> rows = sweep(spec);
  const std::string payload = (format == "json") ? rows_to_json(rows) : rows_to_csv(rows);
  write_payload(payload, output_path, out);
  return kExitOk;
}

int run_verify(std::uint64_t samples, std::uint64_t seed, const std::string& output_path,
               std::ostream& out) {
  const BoundSummary summary = verify_bound(samples, seed);
  write_payload(summary_to_json(summary), output_path, out);
  return exit_code_for_verify(summary);
}

int run_validate(const std::string& output_path, std::ostream& out) {
  const std::vector<SuiteResult> suites = run_validation_suites();
  write_payload(suites_to_text(suites), output_path, out);
  for (const SuiteResult& suite : suites)
    if (!suite.pass) return kExitViolation;
  return kExitOk;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int exit_code_for_verify(const BoundSummary& summary) {
  return summary.violations > 0 ? kExitViolation : kExitOk;
}

std::string report_to_json(const DualityReport& r) {
  std::string s = "{\n";
  append_kv(s, "tool", kToolName, true);
  append_kv(s, "version", kToolVersion, true);
  append_kv(s, "s_x", format_number(r.s_x), false);
  append_kv(s, "s_y", format_number(r.s_y), false);
  append_kv(s, "s_z", format_number(r.s_z), false);
  append_kv(s, "beta", format_number(r.beta), false);
  append_kv(s, "overlap_c", format_number(r.overlap_c), false);
  append_kv(s, "regime", std::to_string(regime_index(r.regime)), false);
  append_kv(s, "omega_a", format_number(r.priors.omega_a), false);
  append_kv(s, "omega_b", format_number(r.priors.omega_b), false);
  append_kv(s, "visibility", format_number(r.visibility), false);
  append_kv(s, "i_path", format_number(r.i_path), false);
  append_kv(s, "duality_sum", format_number(r.duality_sum), false);
  append_kv(s, "failure_prob", format_number(r.failure_prob), false, true);
  s += "}\n";
  return s;
}

std::string summary_to_json(const BoundSummary& b) {
  std::string s = "{\n";
  append_kv(s, "tool", kToolName, true);
  append_kv(s, "version", kToolVersion, true);
  append_kv(s, "samples", std::to_string(b.samples), false);
  append_kv(s, "seed", std::to_string(b.seed), false);
  append_kv(s, "sampling",
            "uniform Bloch ball x uniform beta on [0,pi] x uniform overlap on [0,0.99]", true);
  append_kv(s, "max_duality_sum", format_number(b.max_duality_sum), false);
  append_kv(s, "min_duality_sum", format_number(b.min_duality_sum), false);
  append_kv(s, "max_violation", format_number(b.max_violation), false);
  append_kv(s, "violations", std::to_string(b.violations), false);
  append_kv(s, "degenerate", std::to_string(b.degenerate), false);
  s += "  \"regime_counts\": {\"case1\": " + std::to_string(b.count_regime1) +
       ", \"case2\": " + std::to_string(b.count_regime2) +
       ", \"case3\": " + std::to_string(b.count_regime3) + "},\n";
  s += "  \"worst_config\": {\"s_x\": " + format_number(b.worst_s_x) +
       ", \"s_y\": " + format_number(b.worst_s_y) +
       ", \"s_z\": " + format_number(b.worst_s_z) +
       ", \"beta\": " + format_number(b.worst_beta) +
       ", \"overlap_c\": " + format_number(b.worst_overlap) + "}\n";
  s += "}\n";
  return s;
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::string s =
      "s_x,s_y,s_z,beta,overlap_c,regime,omega_a,omega_b,visibility,i_path,duality_sum,"
      "failure_prob,status\n";
  for (const SweepRow& row : rows) {
    s += format_number(row.s_x);
    s += ',';
    s += format_number(row.s_y);
    s += ',';
    s += format_number(row.s_z);
    s += ',';
    s += format_number(row.beta);
    s += ',';
    s += format_number(row.overlap_c);
    s += ',';
    s += row.ok ? std::to_string(row.regime) : std::string("-");
    s += ',';
    s += format_or(row.omega_a, "nan");
    s += ',';
    s += format_or(row.omega_b, "nan");
    s += ',';
    s += format_or(row.visibility, "nan");
    s += ',';
    s += format_or(row.i_path, "nan");
    s += ',';
    s += format_or(row.duality_sum, "nan");
    s += ',';
    s += format_or(row.failure_prob, "nan");
    s += ',';
    s += row.ok ? "ok" : "degenerate";
    s += '\n';
  }
  return s;
}

std::string rows_to_json(const std::vector<SweepRow>& rows) {
  const auto value_or_null = [](double v) {
    return std::isfinite(v) ? format_number(v) : std::string("null");
  };
  std::string s = "{\n  \"rows\": [\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& row = rows[i];
    s += "    {\"s_x\": " + format_number(row.s_x) + ", \"s_y\": " + format_number(row.s_y) +
         ", \"s_z\": " + format_number(row.s_z) + ", \"beta\": " + format_number(row.beta) +
         ", \"overlap_c\": " + format_number(row.overlap_c) +
         ", \"regime\": " + (row.ok ? std::to_string(row.regime) : std::string("null")) +
         ", \"omega_a\": " + value_or_null(row.omega_a) +
         ", \"omega_b\": " + value_or_null(row.omega_b) +
         ", \"visibility\": " + value_or_null(row.visibility) +
         ", \"i_path\": " + value_or_null(row.i_path) +
         ", \"duality_sum\": " + value_or_null(row.duality_sum) +
         ", \"failure_prob\": " + value_or_null(row.failure_prob) + ", \"status\": \"" +
         (row.ok ? "ok" : "degenerate") + "\"}";
    if (i + 1 < rows.size()) s += ',';
    s += '\n';
  }
  s += "  ]\n}\n";
  return s;
}

std::string suites_to_text(const std::vector<SuiteResult>& suites) {
  std::string s;
  std::size_t passed = 0;
  for (const SuiteResult& suite : suites) {
    char line[192];
    std::snprintf(line, sizeof line, "[%s] %-22s max residual %.3e (tol %.0e)  %s\n",
                  suite.pass ? "PASS" : "FAIL", suite.name.c_str(), suite.max_residual,
                  suite.tolerance, suite.detail.c_str());
    s += line;
    if (suite.pass) ++passed;
  }
  char tail[64];
  std::snprintf(tail, sizeof tail, "validate: %zu/%zu suites passed\n", passed, suites.size());
  s += tail;
  return s;
}

DetectorModel load_detector_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw UsageError("cannot read detector file '" + path + "'");
  nlohmann::json doc;
  try {
    file >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("detector file '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    const std::size_t dim = doc.at("dim").get<std::size_t>();
    const auto& r_json = doc.at("r_state");
    const auto& u_json = doc.at("u_matrix");
    if (r_json.size() != dim || u_json.size() != dim)
      throw UsageError("detector file: r_state/u_matrix sizes do not match dim");
    CVector r(dim);
    for (std::size_t k = 0; k < dim; ++k)
      r[k] = cx{r_json.at(k).at(0).get<double>(), r_json.at(k).at(1).get<double>()};
    CMatrix u(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (u_json.at(i).size() != dim)
        throw UsageError("detector file: u_matrix row has wrong length");
      for (std::size_t j = 0; j < dim; ++j)
        u(i, j) = cx{u_json.at(i).at(j).at(0).get<double>(),
                     u_json.at(i).at(j).at(1).get<double>()};
    }
    return DetectorModel::make(std::move(r), std::move(u));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("detector file '" + path + "' has unexpected structure: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("detector file: ") + e.what());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fringe visibility and error-free which-path information for a "
               "two-path interferometer with an asymmetric output beam splitter"};
  app.name("duality_lab");
  app.require_subcommand(1);

  // report
  double sx = 0.0, sy = 0.0, sz = 0.0, beta = 0.0, overlap = 0.0;
  std::string detector_file;
  std::string output_path;
  std::string format;

  CLI::App* rep = app.add_subcommand("report", "Duality report for a single configuration");
  rep->add_option("--sx", sx, "Bloch S_x")->required();
  rep->add_option("--sy", sy, "Bloch S_y")->required();
  rep->add_option("--sz", sz, "Bloch S_z")->required();
  rep->add_option("--beta", beta, "BS2 mixing angle in radians, [0, pi]")->required();
  CLI::Option* overlap_opt =
      rep->add_option("--overlap", overlap, "detector overlap C in [0, 1)");
  CLI::Option* file_opt = rep->add_option("--detector-file", detector_file,
                                          "JSON detector description {dim, r_state, u_matrix}");
  overlap_opt->excludes(file_opt);
  rep->add_option("--output", output_path, "write to file instead of stdout");
  rep->add_option("--format", format, "output format")->check(CLI::IsMember({"json"}));

  // sweep
  SweepFlags sweep_flags;
  std::string sweep_format = "csv";
  std::string sweep_output;
  std::optional<double> opt_sx, opt_sy, opt_sz, opt_beta, opt_overlap;
  CLI::App* swp = app.add_subcommand("sweep", "Duality table over a 2-D parameter grid");
  swp->add_option("--grid", sweep_flags.grids,
                  "axis as name=start:stop:points (name: sx, beta, overlap); exactly two");
  swp->add_option("--sx", opt_sx, "fixed S_x");
  swp->add_option("--sy", opt_sy, "fixed S_y (default 0)");
  swp->add_option("--sz", opt_sz, "fixed S_z (disables the purity rule)");
  swp->add_option("--beta", opt_beta, "fixed beta");
  swp->add_option("--overlap", opt_overlap, "fixed overlap C");
  swp->add_option("--output", sweep_output, "write to file instead of stdout");
  swp->add_option("--format", sweep_format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  // figure
  std::string figure_name;
  std::string figure_format = "csv";
  std::string figure_output;
  CLI::App* fig = app.add_subcommand("figure", "Preset sweep grids (fig2, fig4, fig5, fig6)");
  fig->add_option("name", figure_name, "preset name")->required();
  fig->add_option("--output", figure_output, "write to file instead of stdout");
  fig->add_option("--format", figure_format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  // verify
  std::uint64_t samples = 100000;
  std::uint64_t seed = 20240601;
  std::string verify_output;
  std::string verify_format;
  CLI::App* ver = app.add_subcommand("verify", "Randomized complementarity bound check");
  ver->add_option("--samples", samples, "number of random configurations (>= 1)");
  ver->add_option("--seed", seed, "RNG seed");
  ver->add_option("--output", verify_output, "write to file instead of stdout");
  ver->add_option("--format", verify_format, "output format")->check(CLI::IsMember({"json"}));

  // validate
  std::string validate_output;
  CLI::App* val = app.add_subcommand("validate", "Run the cross-module invariant suites");
  val->add_option("--output", validate_output, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*rep) {
      const BlochVector bloch = checked_bloch(sx, sy, sz);
      checked_beta(beta);
      DetectorModel detector = DetectorModel::from_overlap(0.0);
      if (!detector_file.empty()) {
        detector = load_detector_file(detector_file);
        if (detector.overlap() >= 1.0)
          throw UsageError("detector file: overlap must lie in [0, 1)");
      } else if (overlap_opt->count() > 0) {
        detector = DetectorModel::from_overlap(checked_overlap(overlap));
      } else {
        throw UsageError("report requires either --overlap or --detector-file");
      }
      return run_report(bloch, beta, detector, output_path, out);
    }
    if (*swp) {
      sweep_flags.sx = opt_sx;
      sweep_flags.sy = opt_sy;
      sweep_flags.sz = opt_sz;
      sweep_flags.beta = opt_beta;
      sweep_flags.overlap = opt_overlap;
      return run_sweep_like(build_sweep_spec(sweep_flags), sweep_format, sweep_output, out);
    }
    if (*fig) {
      SweepSpec spec;
      try {
        spec = figure_preset(figure_name);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      return run_sweep_like(spec, figure_format, figure_output, out);
    }
    if (*ver) {
      if (samples < 1) throw UsageError("--samples must be >= 1");
      return run_verify(samples, seed, verify_output, out);
    }
    if (*val) return run_validate(validate_output, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DegenerateConfig& e) {
    err << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const InvariantViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitViolation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << "error: no subcommand selected\n";
  return kExitUsage;
}

}  // namespace mzi::cli
