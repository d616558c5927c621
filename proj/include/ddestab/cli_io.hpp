#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ddestab/criteria.hpp"
#include "ddestab/integrator.hpp"
#include "ddestab/system_model.hpp"

namespace ddestab::cli {

/// Process exit statuses. Verdicts map to 0..2, failures to >= 10.
enum ExitCode : int {
  kExitStable = 0,
  kExitUnstable = 1,
  kExitInconclusive = 2,
  kExitParseError = 10,
  kExitConfigError = 11,
  kExitIoError = 12,
};

[[nodiscard]] int exit_code_for(Verdict v) noexcept;

/// Grids with more steps than this are refused.
inline constexpr double kMaxStepCount = 5e8;

enum class OutputFormat { Human, Json };

struct AnalyzeConfig {
  std::string system_path;
  double horizon = 0.0;
  double step = 0.0;
  CriteriaConfig criteria;
  bool oracle_enabled = false;
  double oracle_margin = 0.0;
  bool compensated = false;
  OutputFormat format = OutputFormat::Human;
};

struct TraceConfig {
  std::string system_path;
  double horizon = 0.0;
  double step = 0.0;
  std::optional<std::int64_t> stride;  // default max(1, N / 10000)
  std::string output_path;
};

struct SweepConfig {
  std::string system_path;
  double horizon = 0.0;
  double step = 0.0;
  double scale_min = 1.0;
  double scale_max = 1.0;
  int scale_steps = 1;
  CriteriaConfig criteria;
};

/// Checks T, h and the step-count cap; throws std::invalid_argument.
[[nodiscard]] GridSpec checked_grid(double horizon, double step);

[[nodiscard]] std::int64_t default_stride(const GridSpec& grid) noexcept;

/// Report document; field names follow StabilityReport.
[[nodiscard]] std::string report_to_json(const Analysis& analysis);
[[nodiscard]] StabilityReport report_from_json(const std::string& text);
[[nodiscard]] std::string report_to_human(const Analysis& analysis);

/**
 * CSV trace of ||X_n||_F: header `t,frobenius_norm`, rows for
 * n = 0, stride, 2*stride, ... and always n = N, 9 significant digits.
 * Returns the run summary; divergence truncates the file.
 */
RunSummary write_trace(const DelaySystem& sys, const GridSpec& grid, std::int64_t stride,
                       std::ostream& out);

struct SweepRow {
  double scale = 0.0;
  std::optional<Verdict> verdict;
  std::optional<double> residual_rel;
  std::optional<double> tail_growth_norm2;
  std::string error;
};

/// Uniform scale grid, ascending; a single step yields scale_min.
[[nodiscard]] std::vector<double> sweep_scales(double scale_min, double scale_max, int steps);

/// Rows in ascending scale order; rows are computed concurrently.
[[nodiscard]] std::vector<SweepRow> run_sweep(const DelaySystem& sys, const GridSpec& grid,
                                              const std::vector<double>& scales,
                                              const CriteriaConfig& criteria);

void write_sweep_table(const std::vector<SweepRow>& rows, std::ostream& out);

int cmd_analyze(const AnalyzeConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_trace(const TraceConfig& cfg, std::ostream& err);
int cmd_sweep(const SweepConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace ddestab::cli
