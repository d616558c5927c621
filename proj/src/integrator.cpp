#include "ddestab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ddestab {

GridSpec make_grid(double horizon, double step) {
  if (!std::isfinite(horizon) || !std::isfinite(step) || horizon <= 0.0 || step <= 0.0) {
    throw std::invalid_argument("horizon and step must be positive and finite");
  }
  if (step > horizon) {
    throw std::invalid_argument("step must not exceed the horizon");
  }
  const double ratio = horizon / step;
  if (ratio > 9.0e15) {
    throw std::invalid_argument("grid too fine: T/h does not fit an exact integer");
  }
  const auto count = static_cast<std::int64_t>(std::llround(ratio));
  return GridSpec{horizon, step, std::max<std::int64_t>(count, 1)};
}

DelayIndex make_delay_index(double tau, double step) {
  const double ratio = tau / step;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) < kIntegerSnapTol && nearest >= 1.0) {
    return DelayIndex{static_cast<std::int64_t>(nearest), 0.0};
  }
  const double lag = std::max(1.0, std::ceil(ratio));
  return DelayIndex{static_cast<std::int64_t>(lag), lag - ratio};
}

std::vector<DelayIndex> make_delay_indices(const DelaySystem& sys, const GridSpec& grid) {
  std::vector<DelayIndex> out;
  out.reserve(sys.delay_count());
  for (const auto& term : sys.delayed_terms()) {
    out.push_back(make_delay_index(term.tau, grid.step));
  }
  return out;
}

HistoryRing::HistoryRing(std::size_t dimension, std::size_t capacity)
    : slots_(capacity, Matrix(dimension, dimension)),
      zero_(dimension, dimension),
      identity_(Matrix::identity(dimension)) {
  if (capacity < 2) {
    throw std::invalid_argument("history capacity must be at least 2");
  }
}

std::size_t HistoryRing::required_capacity(std::span<const DelayIndex> indices) noexcept {
  std::int64_t max_lag = 0;
  for (const auto& idx : indices) {
    max_lag = std::max(max_lag, idx.lag);
  }
  return static_cast<std::size_t>(max_lag) + 2;
}

void HistoryRing::push(const Matrix& x) {
  ++latest_;
  slots_[static_cast<std::size_t>(latest_) % slots_.size()] = x;
}

const Matrix& HistoryRing::at(std::int64_t k) const {
  if (k < 0) {
    return zero_;
  }
  if (k == 0) {
    return identity_;
  }
  const auto cap = static_cast<std::int64_t>(slots_.size());
  if (k > latest_ || latest_ - k >= cap) {
    throw HistoryEvicted("history index " + std::to_string(k) + " unavailable (latest " +
                         std::to_string(latest_) + ", capacity " + std::to_string(cap) + ")");
  }
  return slots_[static_cast<std::size_t>(k % cap)];
}

void delayed_sample_into(const HistoryRing& ring, std::int64_t n, const DelayIndex& idx,
                         Matrix& out) {
  // delta == 0: sign(n - l).  delta > 0: n - l + delta < 0 iff n <= l - 1, never zero.
  const bool exact = idx.delta == 0.0;
  const bool negative = exact ? n < idx.lag : n <= idx.lag - 1;
  const bool zero = exact && n == idx.lag;
  if (negative) {
    out.set_zero();
    return;
  }
  if (zero) {
    out = ring.at(0);
    return;
  }
  const Matrix& older = ring.at(n - idx.lag);
  const Matrix& newer = ring.at(n - idx.lag + 1);
  const double w_old = 1.0 - idx.delta;
  const double w_new = idx.delta;
  auto dst = out.data();
  auto a = older.data();
  auto b = newer.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = w_old * a[i] + w_new * b[i];
  }
}

Matrix delayed_sample(const HistoryRing& ring, std::int64_t n, const DelayIndex& idx) {
  Matrix out(ring.dimension(), ring.dimension());
  delayed_sample_into(ring, n, idx, out);
  return out;
}

namespace {

struct StepScratch {
  explicit StepScratch(std::size_t dim) : deriv(dim, dim), sample(dim, dim), next(dim, dim) {}
  Matrix deriv;
  Matrix sample;
  Matrix next;
};

// Writes X_{n+1} into scratch.next. Returns false on a non-finite entry.
bool advance(const DelaySystem& sys, const HistoryRing& ring, std::int64_t n,
             std::span<const DelayIndex> indices, double h, StepScratch& scratch) {
  const Matrix& current = ring.at(n);
  mat_mul_into(sys.a0(), current, scratch.deriv);
  const auto& terms = sys.delayed_terms();
  for (std::size_t j = 0; j < terms.size(); ++j) {
    delayed_sample_into(ring, n, indices[j], scratch.sample);
    mat_mul_add_into(terms[j].coeff, scratch.sample, 1.0, scratch.deriv);
  }
  auto next = scratch.next.data();
  auto cur = current.data();
  auto d = scratch.deriv.data();
  bool finite = true;
  for (std::size_t i = 0; i < next.size(); ++i) {
    next[i] = cur[i] + h * d[i];
    finite = finite && std::isfinite(next[i]);
  }
  return finite;
}

}  // namespace

Matrix euler_step(const DelaySystem& sys, const HistoryRing& ring, std::int64_t n,
                  std::span<const DelayIndex> indices, double h) {
  if (indices.size() != sys.delay_count()) {
    throw std::invalid_argument("euler_step: one DelayIndex per delayed term required");
  }
  StepScratch scratch(sys.dimension());
  if (!advance(sys, ring, n, indices, h, scratch)) {
    throw Overflow(n + 1, "non-finite iterate at step " + std::to_string(n + 1));
  }
  return scratch.next;
}

bool step_size_suspicious(const DelaySystem& sys, double h) noexcept {
  return h * coefficient_norm_bound(sys) > kStepWarningThreshold;
}

RunSummary run_fundamental(const DelaySystem& sys, const GridSpec& grid, const StepSink& sink) {
  const auto indices = make_delay_indices(sys, grid);
  const std::size_t dim = sys.dimension();
  HistoryRing ring(dim, HistoryRing::required_capacity(indices));
  ring.push(Matrix::identity(dim));

  RunSummary summary;
  summary.step_count = grid.step_count;
  summary.step_size_warning = step_size_suspicious(sys, grid.step);
  summary.final_norm = std::sqrt(static_cast<double>(dim));
  summary.max_norm = summary.final_norm;

  StepScratch scratch(dim);
  for (std::int64_t n = 0; n < grid.step_count; ++n) {
    if (!advance(sys, ring, n, indices, grid.step, scratch)) {
      summary.diverged = true;
      summary.divergence_step = n + 1;
      break;
    }
    const double norm = frobenius_norm(scratch.next);
    if (!std::isfinite(norm)) {
      summary.diverged = true;
      summary.divergence_step = n + 1;
      break;
    }
    ring.push(scratch.next);
    const Matrix& x = ring.at(n + 1);
    summary.steps_completed = n + 1;
    summary.final_norm = norm;
    summary.max_norm = std::max(summary.max_norm, norm);
    if (sink) {
      sink(n + 1, x);
    }
  }
  return summary;
}

}  // namespace ddestab
