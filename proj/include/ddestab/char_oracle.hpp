#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include "ddestab/system_model.hpp"

namespace ddestab {

/// P(s) = det(sI - A0 - sum_j Aj exp(-tau_j s)).
[[nodiscard]] std::complex<double> char_value(const DelaySystem& sys, std::complex<double> s);

/**
 * Boundary of the half-disk {|s| <= radius, Re s >= -margin}.
 *
 * For margin = 0 the radius must be at least 1 + ||A0||_F + sum ||Aj||_F;
 * a positive margin enlarges the bound by exp(tau_j * margin) per term.
 */
struct ContourSpec {
  double radius = 0.0;
  int samples_per_unit = 200;
  double margin = 0.0;
};

inline constexpr int kMinSamplesPerUnit = 50;

/// Smallest admissible radius for the given margin.
[[nodiscard]] double enclosure_radius(const DelaySystem& sys, double margin = 0.0);

[[nodiscard]] ContourSpec make_contour(const DelaySystem& sys, double margin = 0.0,
                                       int samples_per_unit = 200);

struct ContourTooCoarse : std::runtime_error {
  enum class Reason { PhaseJump, NearZero };
  ContourTooCoarse(Reason reason, const std::string& what)
      : std::runtime_error(what), reason(reason) {}
  Reason reason;
};

/**
 * Number of zeros of P with Re s > -margin, by the argument principle.
 *
 * Throws ContourTooCoarse when a phase increment between neighbouring samples
 * exceeds pi/2 or |P| dips below 1e-12 times its median on the contour.
 */
[[nodiscard]] int rhp_zero_count(const DelaySystem& sys, const ContourSpec& contour);

/// rhp_zero_count with samples_per_unit doubled after each PhaseJump, up to `max_doublings`.
[[nodiscard]] int rhp_zero_count_refined(const DelaySystem& sys, double margin = 0.0,
                                         int max_doublings = 4);

}  // namespace ddestab
