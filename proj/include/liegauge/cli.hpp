#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "liegauge/bracket_field.hpp"
#include "liegauge/frame.hpp"
#include "liegauge/lie_algebra.hpp"

namespace liegauge {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitSpec = 2,
  kExitAlgebraic = 3,
  kExitConditioning = 4,
};

struct RunConfig {
  std::string subcommand;
  std::string algebra;    // named algebra, or empty when spec_path is set
  std::string spec_path;  // JSON algebra document
  FrameKind frame = FrameKind::exp_chart;
  double frame_scale = 0.5;
  double step = 0.02;
  std::optional<double> radius;  // frame-dependent default when absent
  int samples = 200;
  std::uint64_t seed = 7;
  int levels = 3;
  std::string out;
  int threads = 1;
  int cocycles = 100;
  bool require_dual_basis = false;
  bool require_homotopy = false;
};

/// Throws std::invalid_argument on inconsistent parameters.
void validate(const RunConfig& config);

LieAlgebra resolve_algebra(const RunConfig& config);

nlohmann::json run_algebra_verify(const RunConfig& config);
nlohmann::json run_cohomology(const RunConfig& config);

struct FieldRun {
  DiagnosticsReport report;
  nlohmann::json summary;
};
FieldRun run_field_check(const RunConfig& config);
nlohmann::json run_convergence(const RunConfig& config);

/// One row per reported point, 17 significant digits, mandatory header.
void write_diagnostics_csv(std::ostream& out, const DiagnosticsReport& report, int dim);

/// log2(coarse / fine); "exact" when both vanish.
nlohmann::json observed_order(double coarse, double fine);

/// Full command-line front end; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liegauge
