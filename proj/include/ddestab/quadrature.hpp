#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ddestab/integrator.hpp"
#include "ddestab/linalg.hpp"

namespace ddestab {

struct Checkpoint {
  double fraction = 0.0;  // of the horizon
  std::int64_t step = 0;
  double time = 0.0;
  double s_norm = 0.0;
  double s_norm2 = 0.0;
};

struct QuadratureOptions {
  /// Neumaier-compensated sums instead of plain left-to-right addition.
  bool compensated = false;
  /// Horizon fractions at which (s_norm, s_norm2) are snapshotted.
  std::vector<double> checkpoint_fractions{0.25, 0.5, 0.75, 1.0};
};

/**
 * Right-endpoint Riemann sums over n = 1..N:
 *   integral_x = sum X_n h,  s_norm = sum ||X_n||_F h,  s_norm2 = sum ||X_n||_F^2 h.
 * X_0 = I is deliberately excluded.
 */
class IntegralAccumulators {
 public:
  IntegralAccumulators(std::size_t dimension, const GridSpec& grid, QuadratureOptions opts = {});

  /// n must be exactly steps_consumed() + 1.
  void accumulate(std::int64_t n, const Matrix& x, double h);

  [[nodiscard]] Matrix integral_x() const;
  [[nodiscard]] double s_norm() const noexcept { return norm_.value(); }
  [[nodiscard]] double s_norm2() const noexcept { return norm2_.value(); }
  [[nodiscard]] std::int64_t steps_consumed() const noexcept { return steps_; }
  [[nodiscard]] bool tainted() const noexcept { return tainted_; }
  [[nodiscard]] const std::vector<Checkpoint>& checkpoints() const noexcept { return log_; }
  [[nodiscard]] std::optional<Checkpoint> checkpoint_at(double fraction) const;
  [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }

  /// Adapter for run_fundamental.
  [[nodiscard]] StepSink sink();

 private:
  class Sum {
   public:
    explicit Sum(bool compensated = false) : compensated_(compensated) {}
    void add(double v) noexcept;
    [[nodiscard]] double value() const noexcept { return sum_ + correction_; }

   private:
    bool compensated_;
    double sum_ = 0.0;
    double correction_ = 0.0;
  };

  GridSpec grid_;
  std::size_t dim_;
  std::vector<Sum> entries_;
  Sum norm_;
  Sum norm2_;
  std::int64_t steps_ = 0;
  bool tainted_ = false;
  std::vector<std::pair<double, std::int64_t>> pending_;  // (fraction, step), ascending step
  std::size_t next_pending_ = 0;
  std::vector<Checkpoint> log_;
};

/// Step index at which a horizon fraction is snapshotted: round(fraction * N).
[[nodiscard]] std::int64_t checkpoint_step(const GridSpec& grid, double fraction);

}  // namespace ddestab
