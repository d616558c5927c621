#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ddestab/linalg.hpp"

namespace ddestab {

/// Largest state dimension accepted by DelaySystem.
inline constexpr std::size_t kMaxDimension = 64;

struct DelayedTerm {
  double tau = 0.0;  // seconds, > 0
  Matrix coeff;

  friend bool operator==(const DelayedTerm&, const DelayedTerm&) = default;
};

/**
 * Linear retarded system  x'(t) = A0 x(t) + sum_j Aj x(t - tau_j).
 *
 * The order of delayed_terms() is the index j. Delays may repeat and need not
 * be sorted; an empty list is a plain ODE.
 */
class DelaySystem {
 public:
  /// Throws std::invalid_argument on any violated invariant.
  explicit DelaySystem(Matrix a0, std::vector<DelayedTerm> delayed = {});

  [[nodiscard]] std::size_t dimension() const noexcept { return a0_.rows(); }
  [[nodiscard]] const Matrix& a0() const noexcept { return a0_; }
  [[nodiscard]] const std::vector<DelayedTerm>& delayed_terms() const noexcept { return delayed_; }
  [[nodiscard]] std::size_t delay_count() const noexcept { return delayed_.size(); }

  /// Same matrices, every delay multiplied by `factor` (> 0).
  [[nodiscard]] DelaySystem with_scaled_delays(double factor) const;

  friend bool operator==(const DelaySystem&, const DelaySystem&) = default;

 private:
  Matrix a0_;
  std::vector<DelayedTerm> delayed_;
};

/// A0 + sum_j Aj.
[[nodiscard]] Matrix coefficient_sum(const DelaySystem& sys);

/// ||A0||_F + sum_j ||Aj||_F.
[[nodiscard]] double coefficient_norm_bound(const DelaySystem& sys);

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * Reads the JSON system description
 *   { "A0": [[...]], "delays": [ { "tau": 2.0, "A": [[...]] }, ... ] }
 * Errors name the offending field, e.g. `delays[1].A`.
 */
[[nodiscard]] DelaySystem parse_system(std::string_view text);

[[nodiscard]] std::string serialize_system(const DelaySystem& sys);

/// Reads and parses a file; I/O failures throw std::ios_base::failure.
[[nodiscard]] DelaySystem load_system(const std::string& path);

}  // namespace ddestab
