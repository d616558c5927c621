#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ddestab/linalg.hpp"
#include "ddestab/system_model.hpp"

namespace ddestab {

/// Uniform grid t_n = n*h, n = 0..N.
struct GridSpec {
  double horizon = 0.0;
  double step = 0.0;
  std::int64_t step_count = 0;

  [[nodiscard]] double time_at(std::int64_t n) const noexcept {
    return static_cast<double>(n) * step;
  }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// N = round(T/h). Throws std::invalid_argument for h <= 0, h > T or non-finite input.
[[nodiscard]] GridSpec make_grid(double horizon, double step);

/// tau/h = l - delta with l = ceil(tau/h) >= 1 and 0 <= delta < 1.
struct DelayIndex {
  std::int64_t lag = 1;
  double delta = 0.0;

  friend bool operator==(const DelayIndex&, const DelayIndex&) = default;
};

/// tau/h within this distance of an integer is snapped to it (delta = 0).
inline constexpr double kIntegerSnapTol = 1e-9;

[[nodiscard]] DelayIndex make_delay_index(double tau, double step);
[[nodiscard]] std::vector<DelayIndex> make_delay_indices(const DelaySystem& sys,
                                                         const GridSpec& grid);

struct HistoryEvicted : std::logic_error {
  using std::logic_error::logic_error;
};

struct Overflow : std::runtime_error {
  Overflow(std::int64_t step, const std::string& what)
      : std::runtime_error(what), step(step) {}
  std::int64_t step;  // index of the first non-finite iterate
};

/**
 * Sliding window over X_{n-capacity+1} .. X_n.
 *
 * Negative logical indices read as the zero matrix and index 0 always reads
 * as the identity, matching X(t) = 0 for t < 0 and X(0) = I.
 */
class HistoryRing {
 public:
  HistoryRing(std::size_t dimension, std::size_t capacity);

  /// Capacity sufficient for every delay: max_j l_j + 2.
  static std::size_t required_capacity(std::span<const DelayIndex> indices) noexcept;

  /// Appends X_{latest+1}. The first push is X_0.
  void push(const Matrix& x);

  [[nodiscard]] const Matrix& at(std::int64_t k) const;

  [[nodiscard]] std::int64_t latest() const noexcept { return latest_; }
  [[nodiscard]] std::size_t capacity() const noexcept { return slots_.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return zero_.rows(); }

 private:
  std::vector<Matrix> slots_;
  std::int64_t latest_ = -1;
  Matrix zero_;
  Matrix identity_;
};

/**
 * Interpolated delayed sample X_{n-l+delta}.
 *
 * The sign of n - l + delta is decided with integer comparisons only, so the
 * "exactly zero" branch is reachable only when delta == 0.
 */
[[nodiscard]] Matrix delayed_sample(const HistoryRing& ring, std::int64_t n, const DelayIndex& idx);

/// Same as delayed_sample but writes into `out` (already n x n).
void delayed_sample_into(const HistoryRing& ring, std::int64_t n, const DelayIndex& idx,
                         Matrix& out);

/// X_{n+1} = X_n + h (A0 X_n + sum_j Aj X_{n-l_j+delta_j}). Throws Overflow.
[[nodiscard]] Matrix euler_step(const DelaySystem& sys, const HistoryRing& ring, std::int64_t n,
                                std::span<const DelayIndex> indices, double h);

/// h * (||A0||_F + sum ||Aj||_F) above this triggers a step-size warning.
inline constexpr double kStepWarningThreshold = 0.5;

[[nodiscard]] bool step_size_suspicious(const DelaySystem& sys, double h) noexcept;

struct RunSummary {
  std::int64_t step_count = 0;       // N requested
  std::int64_t steps_completed = 0;  // last n delivered to the sink
  double final_norm = 0.0;           // ||X_last||_F over finite iterates
  double max_norm = 0.0;             // max over n = 0..steps_completed
  bool diverged = false;
  std::optional<std::int64_t> divergence_step;
  bool step_size_warning = false;
};

using StepSink = std::function<void(std::int64_t n, const Matrix& x)>;

/**
 * Iterates the scheme from X_0 = I for n = 0..N-1 and hands X_1..X_N to
 * `sink` in order. Non-finite iterates (or norms) stop the run and are reported as
 * divergence, never thrown.
 */
RunSummary run_fundamental(const DelaySystem& sys, const GridSpec& grid, const StepSink& sink);

}  // namespace ddestab
