#include "ddestab/char_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace ddestab {

using cplx = std::complex<double>;

cplx char_value(const DelaySystem& sys, cplx s) {
  const std::size_t n = sys.dimension();
  ComplexMatrix m(n, n);
  const Matrix& a0 = sys.a0();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = -a0(i, j);
    }
    m(i, i) += s;
  }
  for (const auto& term : sys.delayed_terms()) {
    const cplx w = std::exp(-term.tau * s);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= w * term.coeff(i, j);
      }
    }
  }
  return complex_det(m);
}

double enclosure_radius(const DelaySystem& sys, double margin) {
  double bound = 1.0 + frobenius_norm(sys.a0());
  for (const auto& term : sys.delayed_terms()) {
    bound += frobenius_norm(term.coeff) * std::exp(term.tau * margin);
  }
  return bound + margin;
}

ContourSpec make_contour(const DelaySystem& sys, double margin, int samples_per_unit) {
  return ContourSpec{enclosure_radius(sys, margin), samples_per_unit, margin};
}

namespace {

std::vector<cplx> contour_points(const ContourSpec& c) {
  const double x0 = -c.margin;
  const double half_height = std::sqrt(c.radius * c.radius - x0 * x0);
  const double theta0 = std::atan2(half_height, x0);
  const auto spu = static_cast<double>(c.samples_per_unit);

  const auto seg_n = static_cast<std::size_t>(std::ceil(2.0 * half_height * spu));
  const auto arc_n = static_cast<std::size_t>(std::ceil(2.0 * theta0 * c.radius * spu));

  std::vector<cplx> pts;
  pts.reserve(seg_n + arc_n + 1);
  // Downward along Re s = x0 keeps the enclosed region on the left.
  for (std::size_t k = 0; k < seg_n; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(seg_n);
    pts.emplace_back(x0, half_height - 2.0 * half_height * frac);
  }
  for (std::size_t k = 0; k < arc_n; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(arc_n);
    pts.push_back(std::polar(c.radius, -theta0 + 2.0 * theta0 * frac));
  }
  pts.push_back(pts.front());
  return pts;
}

}  // namespace

int rhp_zero_count(const DelaySystem& sys, const ContourSpec& contour) {
  if (contour.samples_per_unit < kMinSamplesPerUnit) {
    throw std::invalid_argument("samples_per_unit must be at least " +
                                std::to_string(kMinSamplesPerUnit));
  }
  if (!(contour.margin >= 0.0) || !std::isfinite(contour.margin)) {
    throw std::invalid_argument("contour margin must be a finite nonnegative number");
  }
  if (!(contour.radius >= enclosure_radius(sys, contour.margin))) {
    throw std::invalid_argument("contour radius does not enclose every candidate root");
  }

  const auto pts = contour_points(contour);
  std::vector<cplx> values(pts.size());
  std::transform(pts.begin(), pts.end(), values.begin(),
                 [&](cplx s) { return char_value(sys, s); });

  std::vector<double> mags(values.size());
  std::transform(values.begin(), values.end(), mags.begin(), [](cplx v) { return std::abs(v); });
  auto sorted = mags;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  for (std::size_t k = 0; k < mags.size(); ++k) {
    if (!(mags[k] >= 1e-12 * median) || !std::isfinite(mags[k])) {
      throw ContourTooCoarse(ContourTooCoarse::Reason::NearZero,
                             "|P(s)| nearly vanishes on the contour near s = (" +
                                 std::to_string(pts[k].real()) + ", " +
                                 std::to_string(pts[k].imag()) + ")");
    }
  }

  constexpr double kMaxIncrement = std::numbers::pi / 2.0;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    const double d = std::arg(values[k + 1] / values[k]);
    if (std::abs(d) > kMaxIncrement) {
      throw ContourTooCoarse(ContourTooCoarse::Reason::PhaseJump,
                             "phase increment " + std::to_string(d) + " exceeds pi/2");
    }
    total += d;
  }
  const double winding = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(winding);
  if (std::abs(winding - rounded) > 1e-3) {
    throw ContourTooCoarse(ContourTooCoarse::Reason::PhaseJump,
                           "winding number " + std::to_string(winding) + " is not an integer");
  }
  return static_cast<int>(rounded);
}

int rhp_zero_count_refined(const DelaySystem& sys, double margin, int max_doublings) {
  ContourSpec spec = make_contour(sys, margin);
  for (int attempt = 0;; ++attempt) {
    try {
      return rhp_zero_count(sys, spec);
    } catch (const ContourTooCoarse& e) {
      if (e.reason != ContourTooCoarse::Reason::PhaseJump || attempt >= max_doublings) {
        throw;
      }
      spec.samples_per_unit *= 2;
    }
  }
}

}  // namespace ddestab
