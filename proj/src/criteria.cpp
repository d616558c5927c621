#include "ddestab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ddestab {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Stable:
      return "Stable";
    case Verdict::Unstable:
      return "Unstable";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

std::optional<Verdict> verdict_from_string(std::string_view s) noexcept {
  for (Verdict v : {Verdict::Stable, Verdict::Unstable, Verdict::Inconclusive}) {
    if (to_string(v) == s) {
      return v;
    }
  }
  return std::nullopt;
}

void CriteriaConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(residual_tol)) {
    throw std::invalid_argument("residual tolerance must be positive");
  }
  if (!positive(tail_rel_tol)) {
    throw std::invalid_argument("tail tolerance must be positive");
  }
  if (!positive(divergence_norm_cap)) {
    throw std::invalid_argument("divergence norm cap must be positive");
  }
}

Theorem1Result theorem1_verdict(const DelaySystem& sys, const IntegralAccumulators& acc) {
  Theorem1Result out;
  Matrix inverse;
  try {
    inverse = lu_invert(coefficient_sum(sys));
  } catch (const SingularError&) {
    return out;
  }
  out.invertible = true;
  inverse *= -1.0;
  const bool complete = acc.steps_consumed() == acc.grid().step_count;
  if (complete && !acc.tainted()) {
    const Matrix integral = acc.integral_x();
    if (integral.all_finite()) {
      const double abs = frobenius_norm(mat_sub(integral, inverse));
      out.residual_abs = abs;
      out.residual_rel = abs / frobenius_norm(inverse);
    }
  }
  out.neg_inverse = std::move(inverse);
  return out;
}

TailResult tail_convergence(const IntegralAccumulators& acc, const CriteriaConfig& cfg) {
  const auto half = acc.checkpoint_at(0.5);
  const auto full = acc.checkpoint_at(1.0);
  if (!half || !full) {
    throw MissingCheckpoint("tail test needs the T/2 and T checkpoints");
  }
  constexpr double kFloor = 1e-300;
  TailResult out;
  out.growth_norm = (full->s_norm - half->s_norm) / std::max(full->s_norm, kFloor);
  out.growth_norm2 = (full->s_norm2 - half->s_norm2) / std::max(full->s_norm2, kFloor);
  out.finite = out.growth_norm <= cfg.tail_rel_tol && out.growth_norm2 <= cfg.tail_rel_tol;
  return out;
}

StabilityReport combine_verdict(const Theorem1Result& t1, const std::optional<TailResult>& tails,
                                const RunSummary& summary, const CriteriaConfig& cfg,
                                const GridSpec& grid) {
  StabilityReport r;
  r.theorem1_residual_abs = t1.residual_abs;
  r.theorem1_residual_rel = t1.residual_rel;
  r.coefficient_sum_invertible = t1.invertible;
  if (tails) {
    r.tail_growth_norm = tails->growth_norm;
    r.tail_growth_norm2 = tails->growth_norm2;
  }
  r.final_state_norm = summary.final_norm;
  r.max_state_norm = summary.max_norm;
  r.diverged = summary.diverged;
  r.divergence_step = summary.divergence_step;
  r.grid = grid;

  if (summary.step_size_warning) {
    r.annotations.emplace_back(
        "step size large relative to coefficient norms; explicit Euler may misbehave");
  }

  bool unstable = false;
  if (summary.diverged) {
    unstable = true;
    std::ostringstream os;
    os << "fundamental matrix overflowed at step " << summary.divergence_step.value_or(0);
    r.annotations.push_back(os.str());
  }
  if (!(summary.max_norm <= cfg.divergence_norm_cap)) {
    unstable = true;
    std::ostringstream os;
    os << "||X||_F reached " << summary.max_norm << " (cap " << cfg.divergence_norm_cap << ")";
    r.annotations.push_back(os.str());
  }
  if (!t1.invertible) {
    unstable = true;
    r.annotations.emplace_back(kSingularNote);
  }
  if (unstable) {
    r.verdict = Verdict::Unstable;
    return r;
  }

  const bool residual_ok = t1.residual_rel && *t1.residual_rel <= cfg.residual_tol;
  const bool tails_ok = tails && tails->finite;
  if (residual_ok && tails_ok) {
    r.verdict = Verdict::Stable;
    return r;
  }
  r.verdict = Verdict::Inconclusive;
  if (!residual_ok) {
    r.annotations.emplace_back("integral of X has not reached -(A0+sum Aj)^-1 within tolerance");
  }
  if (!tails_ok) {
    r.annotations.emplace_back("norm integrals still growing over the last half-horizon");
  }
  r.annotations.emplace_back("try a longer horizon or a smaller step");
  return r;
}

Analysis analyze_system(const DelaySystem& sys, const GridSpec& grid, const CriteriaConfig& cfg,
                        const QuadratureOptions& quad) {
  cfg.validate();
  IntegralAccumulators acc(sys.dimension(), grid, quad);
  const RunSummary summary = run_fundamental(sys, grid, acc.sink());

  Theorem1Result t1 = theorem1_verdict(sys, acc);
  std::optional<TailResult> tails;
  if (!summary.diverged && !acc.tainted()) {
    tails = tail_convergence(acc, cfg);
  }

  Analysis out;
  out.report = combine_verdict(t1, tails, summary, cfg, grid);
  out.summary = summary;
  out.integral_x = acc.integral_x();
  out.s_norm = acc.s_norm();
  out.s_norm2 = acc.s_norm2();
  out.neg_inverse = std::move(t1.neg_inverse);
  out.checkpoints = acc.checkpoints();
  return out;
}

}  // namespace ddestab
