#include "ddestab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ddestab {

std::int64_t checkpoint_step(const GridSpec& grid, double fraction) {
  return std::llround(fraction * static_cast<double>(grid.step_count));
}

void IntegralAccumulators::Sum::add(double v) noexcept {
  if (!compensated_) {
    sum_ += v;
    return;
  }
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    correction_ += (sum_ - t) + v;
  } else {
    correction_ += (v - t) + sum_;
  }
  sum_ = t;
}

IntegralAccumulators::IntegralAccumulators(std::size_t dimension, const GridSpec& grid,
                                           QuadratureOptions opts)
    : grid_(grid),
      dim_(dimension),
      entries_(dimension * dimension, Sum(opts.compensated)),
      norm_(opts.compensated),
      norm2_(opts.compensated) {
  for (double f : opts.checkpoint_fractions) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw std::invalid_argument("checkpoint fractions must lie in (0, 1]");
    }
    const std::int64_t step = std::max<std::int64_t>(1, checkpoint_step(grid, f));
    pending_.emplace_back(f, step);
  }
  std::sort(pending_.begin(), pending_.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
}

void IntegralAccumulators::accumulate(std::int64_t n, const Matrix& x, double h) {
  if (n != steps_ + 1) {
    throw std::invalid_argument("accumulate: expected step " + std::to_string(steps_ + 1) +
                                ", got " + std::to_string(n));
  }
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw ShapeMismatch("accumulate: iterate has shape " + describe_shape(x.rows(), x.cols()));
  }
  const auto values = x.data();
  double sq = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    entries_[i].add(values[i] * h);
    sq += values[i] * values[i];
  }
  const double norm = std::sqrt(sq);
  norm_.add(norm * h);
  norm2_.add(sq * h);
  if (!std::isfinite(norm)) {
    tainted_ = true;
  }
  steps_ = n;

  while (next_pending_ < pending_.size() && pending_[next_pending_].second == n) {
    log_.push_back(Checkpoint{pending_[next_pending_].first, n, grid_.time_at(n), s_norm(),
                              s_norm2()});
    ++next_pending_;
  }
}

Matrix IntegralAccumulators::integral_x() const {
  std::vector<double> values(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    values[i] = entries_[i].value();
  }
  Matrix out(dim_, dim_);
  std::copy(values.begin(), values.end(), out.data().begin());
  return out;
}

std::optional<Checkpoint> IntegralAccumulators::checkpoint_at(double fraction) const {
  for (const auto& c : log_) {
    if (c.fraction == fraction) {
      return c;
    }
  }
  return std::nullopt;
}

StepSink IntegralAccumulators::sink() {
  return [this](std::int64_t n, const Matrix& x) { accumulate(n, x, grid_.step); };
}

}  // namespace ddestab
