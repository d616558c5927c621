#include <algorithm>
#include <random>
#include <string>

#include "doctest.h"
#include "ddestab/system_model.hpp"
#include "support/corpus.hpp"

using namespace ddestab;

namespace {

const char* kExample1Doc = R"({
  "A0": [[-4.2583, -0.7236, -11.8071], [-5.6881, -2.7135, -6.8457], [1.2493, -1.0037, -6.3093]],
  "delays": [
    {"tau": 2, "A": [[-5.0472, -3.6800, -8.0911], [-0.3772, -2.1179, -2.2113], [-1.1831, -2.5827, 0.2628]]},
    {"tau": 3, "A": [[2.5443, -0.5727, -6.9565], [-0.4443, 2.5444, -5.3728], [0.8497, -1.5663, -0.5512]]}
  ]
})";

std::string parse_message(const std::string& doc) {
  try {
    (void)parse_system(doc);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("coefficient_sum") {
  const Matrix a0{{-1.0, 2.0}, {0.5, -3.0}};
  CHECK(coefficient_sum(DelaySystem(a0)) == a0);

  const Matrix sum = coefficient_sum(testing::example1());
  CHECK(sum(0, 0) == doctest::Approx(-6.7612).epsilon(1e-12));

  const DelaySystem cancel(a0, {{1.0, scaled(a0, -1.0)}});
  CHECK(coefficient_sum(cancel) == Matrix(2, 2));
}

TEST_CASE("DelaySystem invariants") {
  CHECK_THROWS_AS(DelaySystem(Matrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(DelaySystem(Matrix(2, 2), {{0.0, Matrix(2, 2)}}), std::invalid_argument);
  CHECK_THROWS_AS(DelaySystem(Matrix(2, 2), {{-1.0, Matrix(2, 2)}}), std::invalid_argument);
  CHECK_THROWS_AS(DelaySystem(Matrix(2, 2), {{1.0, Matrix(3, 3)}}), std::invalid_argument);
  CHECK_THROWS_AS(DelaySystem(Matrix(65, 65)), std::invalid_argument);
  CHECK_NOTHROW(DelaySystem(Matrix(64, 64)));
  // repeated, unsorted delays are fine
  CHECK_NOTHROW(DelaySystem(Matrix(1, 1), {{2.0, Matrix(1, 1)}, {1.0, Matrix(1, 1)}, {1.0, Matrix(1, 1)}}));
}

TEST_CASE("parse example 1") {
  const DelaySystem sys = parse_system(kExample1Doc);
  CHECK(sys.dimension() == 3);
  CHECK(sys.delay_count() == 2);
  CHECK(sys == testing::example1());
  CHECK(sys.delayed_terms()[0].tau == 2.0);
  CHECK(sys.delayed_terms()[1].tau == 3.0);
}

TEST_CASE("parse errors carry field context") {
  const std::string mismatch =
      parse_message(R"({"A0": [[1,0,0],[0,1,0],[0,0,1]], "delays": [{"tau": 1, "A": [[1,2,3],[4,5,6]]}]})");
  CHECK(mismatch.find("delays[0].A") != std::string::npos);
  CHECK(mismatch.find("dimension mismatch") != std::string::npos);

  const std::string zero_tau = parse_message(R"({"A0": [[1]], "delays": [{"tau": 0, "A": [[1]]}]})");
  CHECK(zero_tau.find("delays[0].tau") != std::string::npos);
  CHECK(zero_tau.find("nonpositive delay") != std::string::npos);

  CHECK(parse_message(R"({"A0": [[1, 2]]})").find("non-square") != std::string::npos);
  CHECK(parse_message(R"({"A0": [[1, 2], [3]]})").find("A0[1]") != std::string::npos);
  CHECK(parse_message(R"({"A0": [[1, "x"]]})").find("A0[0][1]") != std::string::npos);
  CHECK(parse_message(R"({"delays": []})").find("A0") != std::string::npos);
  CHECK(parse_message("{\"A0\": [[1]],\n \"delays\": [ }").find("line 2") != std::string::npos);
  CHECK(parse_message(R"([1, 2])").find("object") != std::string::npos);
  CHECK(parse_message(R"({"A0": [[1]], "delays": {"tau": 1}})").find("delays") != std::string::npos);
  CHECK(parse_message(R"({"A0": [[1]], "delays": [{"A": [[1]]}]})").find("tau") != std::string::npos);
  // JSON has no literal for non-finite numbers; an overflowing literal is rejected too.
  CHECK_FALSE(parse_message(R"({"A0": [[1e999]]})").empty());
}

TEST_CASE("serialize examples") {
  CHECK(parse_system(serialize_system(testing::example2())) == testing::example2());

  const std::string ode = serialize_system(DelaySystem(Matrix{{-1.0, 0.0}, {0.0, -2.0}}));
  CHECK(ode.find("\"delays\": []") != std::string::npos);

  const std::string minimal = serialize_system(testing::scalar_ode(-1.0));
  CHECK(parse_system(minimal) == testing::scalar_ode(-1.0));
  CHECK(minimal.find("-1.0") != std::string::npos);
}

TEST_CASE("property: parse(serialize(s)) == s for decimal-representable systems") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> digits(-99999, 99999);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_int_distribution<int> count(0, 3);
  auto decimal = [&] { return digits(rng) / 1000.0; };
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = static_cast<std::size_t>(dim(rng));
    Matrix a0(n, n);
    for (auto& v : a0.data()) {
      v = decimal();
    }
    std::vector<DelayedTerm> terms;
    const int m = count(rng);
    for (int j = 0; j < m; ++j) {
      Matrix a(n, n);
      for (auto& v : a.data()) {
        v = decimal();
      }
      terms.push_back({std::abs(decimal()) + 0.001, std::move(a)});
    }
    const DelaySystem sys(std::move(a0), std::move(terms));
    CHECK(parse_system(serialize_system(sys)) == sys);
  }
}

TEST_CASE("property: coefficient_sum is invariant under delay permutation") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 4;
    auto rand_m = [&] {
      Matrix m(n, n);
      for (auto& v : m.data()) {
        v = std::round(u(rng) * 8.0) / 8.0;  // dyadic: sums are exact in any order
      }
      return m;
    };
    std::vector<DelayedTerm> terms;
    for (int j = 0; j < 4; ++j) {
      terms.push_back({1.0 + j, rand_m()});
    }
    const Matrix a0 = rand_m();
    const Matrix reference = coefficient_sum(DelaySystem(a0, terms));
    std::shuffle(terms.begin(), terms.end(), rng);
    CHECK(coefficient_sum(DelaySystem(a0, terms)) == reference);
  }
}

TEST_CASE("with_scaled_delays keeps matrices") {
  const DelaySystem s = testing::example1().with_scaled_delays(0.5);
  CHECK(s.delayed_terms()[0].tau == 1.0);
  CHECK(s.delayed_terms()[1].tau == 1.5);
  CHECK(s.a0() == testing::example1().a0());
  CHECK_THROWS_AS((void)s.with_scaled_delays(0.0), std::invalid_argument);
}
