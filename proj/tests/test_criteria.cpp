#include <cmath>

#include "doctest.h"
#include "ddestab/criteria.hpp"
#include "support/corpus.hpp"

using namespace ddestab;

TEST_CASE("residual between the printed example 1 matrices") {
  // Frobenius distance of the two printed 4-decimal matrices, worked by hand:
  // squared diffs sum to 4.651e-5, ||printed inverse||_F^2 = 0.41466.
  const Matrix diff = mat_sub(testing::example1_printed_integral(), testing::example1_printed_neg_inverse());
  const double abs = frobenius_norm(diff);
  CHECK(abs == doctest::Approx(6.82e-3).epsilon(2e-3));
  CHECK(abs / frobenius_norm(testing::example1_printed_neg_inverse()) == doctest::Approx(1.059e-2).epsilon(2e-3));
}

TEST_CASE("theorem1_verdict") {
  {
    const DelaySystem sys = testing::scalar_ode(-1.0);
    const GridSpec grid = make_grid(2.0, 0.5);
    IntegralAccumulators acc(1, grid);
    (void)run_fundamental(sys, grid, acc.sink());
    const auto t1 = theorem1_verdict(sys, acc);
    CHECK(t1.invertible);
    CHECK(*t1.residual_abs == doctest::Approx(0.53125).epsilon(1e-15));
    CHECK(*t1.residual_rel == doctest::Approx(0.53125).epsilon(1e-15));
    CHECK(*t1.neg_inverse == Matrix{{1.0}});
  }
  {
    const DelaySystem sys(Matrix{{-1.0, 0.0}, {0.0, -1.0}}, {{1.0, Matrix::identity(2)}});
    IntegralAccumulators acc(2, make_grid(1.0, 0.1));
    const auto t1 = theorem1_verdict(sys, acc);
    CHECK_FALSE(t1.invertible);
    CHECK_FALSE(t1.residual_abs.has_value());
  }
}

TEST_CASE("tail_convergence") {
  const CriteriaConfig cfg;
  {
    const GridSpec grid = make_grid(10.0, 0.01);
    IntegralAccumulators acc(3, grid);
    (void)run_fundamental(DelaySystem(Matrix(3, 3)), grid, acc.sink());
    const auto tails = tail_convergence(acc, cfg);
    CHECK(tails.growth_norm == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tails.growth_norm2 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(tails.finite);
  }
  {
    const GridSpec grid = make_grid(50.0, 1e-3);
    IntegralAccumulators acc(1, grid);
    (void)run_fundamental(testing::scalar_ode(-1.0), grid, acc.sink());
    const auto tails = tail_convergence(acc, cfg);
    CHECK(tails.growth_norm <= std::exp(-25.0) + grid.step);
    CHECK(tails.finite);
  }
  {
    IntegralAccumulators acc(1, make_grid(1.0, 0.1), QuadratureOptions{false, {0.25}});
    CHECK_THROWS_AS((void)tail_convergence(acc, cfg), MissingCheckpoint);
  }
  {
    // all-zero integrand: guarded division
    const GridSpec grid = make_grid(4.0, 1.0);
    IntegralAccumulators acc(1, grid);
    for (int n = 1; n <= 4; ++n) acc.accumulate(n, Matrix(1, 1), 1.0);
    const auto tails = tail_convergence(acc, cfg);
    CHECK(tails.growth_norm == 0.0);
    CHECK(tails.finite);
  }
}

TEST_CASE("CriteriaConfig validation") {
  CHECK_NOTHROW(CriteriaConfig{}.validate());
  CHECK_THROWS_AS((CriteriaConfig{0.0, 0.1, 1e12}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CriteriaConfig{0.05, -1.0, 1e12}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CriteriaConfig{0.05, 0.1, NAN}.validate()), std::invalid_argument);
}

TEST_CASE("combine_verdict rules") {
  const CriteriaConfig cfg;
  const GridSpec grid = make_grid(10.0, 0.1);
  Theorem1Result good{true, 0.01, 0.01, Matrix{{1.0}}};
  TailResult tails{1e-6, 1e-7, true};
  RunSummary calm;
  calm.max_norm = 1.0;

  CHECK(combine_verdict(good, tails, calm, cfg, grid).verdict == Verdict::Stable);

  RunSummary diverged = calm;
  diverged.diverged = true;
  diverged.divergence_step = 17;
  CHECK(combine_verdict(good, tails, diverged, cfg, grid).verdict == Verdict::Unstable);

  RunSummary huge = calm;
  huge.max_norm = 1e13;
  CHECK(combine_verdict(good, tails, huge, cfg, grid).verdict == Verdict::Unstable);

  const Theorem1Result singular{};
  const auto r = combine_verdict(singular, tails, calm, cfg, grid);
  CHECK(r.verdict == Verdict::Unstable);
  CHECK(std::find(r.annotations.begin(), r.annotations.end(), std::string(kSingularNote)) != r.annotations.end());

  Theorem1Result loose = good;
  loose.residual_rel = 0.2;
  const auto inc = combine_verdict(loose, tails, calm, cfg, grid);
  CHECK(inc.verdict == Verdict::Inconclusive);
  CHECK_FALSE(inc.annotations.empty());

  TailResult growing{0.5, 0.5, false};
  CHECK(combine_verdict(good, growing, calm, cfg, grid).verdict == Verdict::Inconclusive);
  CHECK(combine_verdict(good, std::nullopt, calm, cfg, grid).verdict == Verdict::Inconclusive);
}

TEST_CASE("analyze: short horizon on x' = -x is not Stable") {
  const Analysis a = analyze_system(testing::scalar_ode(-1.0), make_grid(2.0, 0.5), CriteriaConfig{});
  CHECK(a.report.verdict == Verdict::Inconclusive);
  CHECK(*a.report.theorem1_residual_abs == doctest::Approx(0.53125));
}

TEST_CASE("analyze: scalar x' = -x(t-2) is Unstable") {
  const Analysis a = analyze_system(testing::scalar(0.0, -1.0, 2.0), make_grid(1000.0, 1e-2), CriteriaConfig{});
  CHECK(a.report.verdict == Verdict::Unstable);
  CHECK(a.report.max_state_norm > 1e12);
}

TEST_CASE("analyze: overflow becomes an Unstable report") {
  const Analysis a = analyze_system(testing::scalar_ode(5.0), make_grid(1000.0, 0.01), CriteriaConfig{});
  CHECK(a.report.diverged);
  CHECK(a.report.verdict == Verdict::Unstable);
  CHECK_FALSE(a.report.tail_growth_norm.has_value());
  CHECK_FALSE(a.report.theorem1_residual_abs.has_value());
}

TEST_CASE("analyze: singular coefficient sums are never Stable") {
  for (const auto& sys : {DelaySystem(Matrix(2, 2)), testing::scalar(-1.0, 1.0, 0.5),
                          DelaySystem(Matrix{{-1.0, 2.0}, {0.0, -1.0}}, {{1.5, Matrix{{1.0, -2.0}, {0.0, 0.0}}}})}) {
    const Analysis a = analyze_system(sys, make_grid(40.0, 0.01), CriteriaConfig{});
    CHECK(a.report.verdict == Verdict::Unstable);
    CHECK_FALSE(a.report.coefficient_sum_invertible);
  }
}

TEST_CASE("analyze: verdict determinism") {
  const auto sys = testing::example2();
  const GridSpec grid = make_grid(30.0, 1e-2);
  const Analysis a = analyze_system(sys, grid, CriteriaConfig{});
  const Analysis b = analyze_system(sys, grid, CriteriaConfig{});
  CHECK(a.report.verdict == b.report.verdict);
  CHECK(a.report.theorem1_residual_abs == b.report.theorem1_residual_abs);
  CHECK(a.report.tail_growth_norm == b.report.tail_growth_norm);
  CHECK(a.integral_x == b.integral_x);
  CHECK(a.s_norm == b.s_norm);
}

TEST_CASE("example 1: halving h keeps the verdict and does not blow up the residual") {
  const auto sys = testing::example1();
  const Analysis coarse = analyze_system(sys, make_grid(200.0, 1e-4), CriteriaConfig{});
  const Analysis fine = analyze_system(sys, make_grid(200.0, 5e-5), CriteriaConfig{});
  CHECK(coarse.report.verdict == Verdict::Stable);
  CHECK(fine.report.verdict == Verdict::Stable);
  CHECK(*fine.report.theorem1_residual_abs <= 2.0 * *coarse.report.theorem1_residual_abs);
}

TEST_CASE("compensated summation agrees with plain summation to rounding level") {
  const auto sys = testing::example2();
  const GridSpec grid = make_grid(100.0, 1e-3);
  const Analysis plain = analyze_system(sys, grid, CriteriaConfig{});
  const Analysis comp = analyze_system(sys, grid, CriteriaConfig{}, QuadratureOptions{true, {0.25, 0.5, 0.75, 1.0}});
  CHECK(std::abs(plain.s_norm - comp.s_norm) <= 1e-10 * comp.s_norm);
  CHECK(frobenius_norm(mat_sub(plain.integral_x, comp.integral_x)) <= 1e-10 * frobenius_norm(comp.integral_x));
  CHECK(plain.report.verdict == comp.report.verdict);
}
