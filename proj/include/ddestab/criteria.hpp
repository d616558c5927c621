#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ddestab/integrator.hpp"
#include "ddestab/linalg.hpp"
#include "ddestab/quadrature.hpp"
#include "ddestab/system_model.hpp"

namespace ddestab {

enum class Verdict { Stable, Unstable, Inconclusive };

[[nodiscard]] std::string_view to_string(Verdict v) noexcept;
[[nodiscard]] std::optional<Verdict> verdict_from_string(std::string_view s) noexcept;

struct CriteriaConfig {
  double residual_tol = 0.05;          // relative, ||S_X + M^-1||_F / ||M^-1||_F
  double tail_rel_tol = 0.1;           // last-half share of the norm integrals
  double divergence_norm_cap = 1e12;

  /// Throws std::invalid_argument unless every field is positive and finite.
  void validate() const;
};

struct Theorem1Result {
  bool invertible = false;
  std::optional<double> residual_abs;
  std::optional<double> residual_rel;
  std::optional<Matrix> neg_inverse;  // -(A0 + sum Aj)^-1
};

/**
 * Compares the accumulated integral of X with -(A0 + sum Aj)^-1.
 * A singular coefficient sum is data (invertible = false), not an error.
 * Residuals are left empty unless the accumulator covers the whole grid with
 * finite iterates.
 */
[[nodiscard]] Theorem1Result theorem1_verdict(const DelaySystem& sys,
                                              const IntegralAccumulators& acc);

struct MissingCheckpoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TailResult {
  double growth_norm = 0.0;
  double growth_norm2 = 0.0;
  bool finite = false;  // both growths within tail_rel_tol
};

/// (s(T) - s(T/2)) / max(s(T), 1e-300) for both norm sums.
[[nodiscard]] TailResult tail_convergence(const IntegralAccumulators& acc,
                                          const CriteriaConfig& cfg);

struct StabilityReport {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> theorem1_residual_abs;
  std::optional<double> theorem1_residual_rel;
  bool coefficient_sum_invertible = false;
  std::optional<double> tail_growth_norm;
  std::optional<double> tail_growth_norm2;
  double final_state_norm = 0.0;
  double max_state_norm = 0.0;
  bool diverged = false;
  std::optional<std::int64_t> divergence_step;
  GridSpec grid;
  std::vector<std::string> annotations;
  std::optional<int> oracle_rhp_roots;
};

inline constexpr std::string_view kSingularNote = "singular coefficient sum";

[[nodiscard]] StabilityReport combine_verdict(const Theorem1Result& t1,
                                              const std::optional<TailResult>& tails,
                                              const RunSummary& summary,
                                              const CriteriaConfig& cfg, const GridSpec& grid);

/// Everything one integration run produces.
struct Analysis {
  StabilityReport report;
  RunSummary summary;
  Matrix integral_x;
  double s_norm = 0.0;
  double s_norm2 = 0.0;
  std::optional<Matrix> neg_inverse;
  std::vector<Checkpoint> checkpoints;
};

/// integrator -> quadrature -> criteria in one call.
[[nodiscard]] Analysis analyze_system(const DelaySystem& sys, const GridSpec& grid,
                                      const CriteriaConfig& cfg,
                                      const QuadratureOptions& quad = {});

}  // namespace ddestab
