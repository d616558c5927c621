#include "corpus.hpp"

#include <utility>

namespace ddestab::testing {

DelaySystem example1() {
  Matrix a0{{-4.2583, -0.7236, -11.8071}, {-5.6881, -2.7135, -6.8457}, {1.2493, -1.0037, -6.3093}};
  Matrix a1{{-5.0472, -3.6800, -8.0911}, {-0.3772, -2.1179, -2.2113}, {-1.1831, -2.5827, 0.2628}};
  Matrix a2{{2.5443, -0.5727, -6.9565}, {-0.4443, 2.5444, -5.3728}, {0.8497, -1.5663, -0.5512}};
  return DelaySystem(std::move(a0), {{2.0, std::move(a1)}, {3.0, std::move(a2)}});
}

DelaySystem example2() {
  Matrix a0{{0.1535, 0.0588, 0.0417, 0.1501},
            {0, 0, 0.2000, -0.2000},
            {-0.0802, -0.8381, -0.6125, 0.2248},
            {0.0267, 0.6794, 0.4708, -0.4749}};
  Matrix a1{{-0.3538, 0.5344, 0.3015, -0.4100},
            {0, -0.2000, -0.2000, 0.2000},
            {0.1307, -0.2515, -0.0522, -0.0350},
            {0.0231, -0.4828, -0.5493, 0.0450}};
  Matrix a2{{0.1000, -0.1000, 0, 0.2000},
            {0, -0.2000, 0.1000, 0},
            {0, 0.1000, 0, 0.300},
            {0, -0.3000, 0.1000, 0}};
  return DelaySystem(std::move(a0), {{2.0, std::move(a1)}, {3.0, std::move(a2)}});
}

DelaySystem scalar(double a0, double a1, double tau) {
  return DelaySystem(Matrix{{a0}}, {{tau, Matrix{{a1}}}});
}

DelaySystem scalar_ode(double a) { return DelaySystem(Matrix{{a}}); }

DelaySystem diagonal_ode(std::vector<double> diag) {
  return DelaySystem(Matrix::diagonal(std::span<const double>(diag)));
}

Matrix example1_printed_integral() {
  return Matrix{{-0.2138, 0.3819, 0.0332}, {-0.2034, 0.2524, 0.2748}, {0.1296, -0.1438, -0.0613}};
}

Matrix example1_printed_neg_inverse() {
  return Matrix{{-0.2141, 0.3813, 0.0375}, {-0.2029, 0.2500, 0.2791}, {0.1287, -0.1423, -0.0612}};
}

Matrix example2_printed_integral() {
  return Matrix{{18.9462, -2.6632, 9.6488, 8.3471},
                {0.5533, 1.6666, 0.5544, 0.5543},
                {2.2143, -3.3299, 2.2170, 2.2177},
                {2.1727, -0.8762, 1.0954, 3.2698}};
}

Matrix example2_printed_neg_inverse() {
  return Matrix{{19.0055, -2.6824, 9.6805, 8.3812},
                {0.5556, 1.6669, 0.5556, 0.5556},
                {2.2225, -3.3326, 2.2225, 2.2225},
                {2.1791, -0.8783, 1.0989, 3.2745}};
}

std::vector<CorpusEntry> stability_corpus() {
  std::vector<CorpusEntry> c;
  c.push_back({"example 1", example1(), 200.0, 1e-4});
  c.push_back({"example 2", example2(), 100.0, 1e-3});
  c.push_back({"x' = -x(t-0.5)", scalar(0.0, -1.0, 0.5), 100.0, 1e-3});
  c.push_back({"x' = -x(t-1.0)", scalar(0.0, -1.0, 1.0), 100.0, 1e-3});
  c.push_back({"x' = -x(t-1.4)", scalar(0.0, -1.0, 1.4), 400.0, 1e-2});
  c.push_back({"x' = -x(t-1.6)", scalar(0.0, -1.0, 1.6), 4000.0, 1e-2});
  c.push_back({"x' = -x(t-2.0)", scalar(0.0, -1.0, 2.0), 1000.0, 1e-2});
  c.push_back({"diag(-1,-2)", diagonal_ode({-1.0, -2.0}), 50.0, 1e-3});
  c.push_back({"diag(1,-2)", diagonal_ode({1.0, -2.0}), 50.0, 1e-3});
  c.push_back({"diag(-1,2,-3)", diagonal_ode({-1.0, 2.0, -3.0}), 50.0, 1e-3});
  c.push_back({"diag(-0.5,-3,-1)", diagonal_ode({-0.5, -3.0, -1.0}), 80.0, 1e-3});
  c.push_back({"x' = 0 (2x2)", DelaySystem(Matrix(2, 2)), 10.0, 1e-2});
  c.push_back({"singular sum", DelaySystem(Matrix{{-1.0, 0.0}, {0.0, -2.0}},
                                           {{1.0, Matrix{{1.0, 0.0}, {0.0, 0.5}}}}),
               50.0, 1e-2});
  c.push_back({"x' = -x + 2x(t-1)", scalar(-1.0, 2.0, 1.0), 100.0, 1e-3});
  c.push_back({"coupled 2x2, tau=0.7",
               DelaySystem(Matrix{{-3.0, 1.0}, {0.0, -2.0}},
                           {{0.7, Matrix{{0.5, 0.0}, {0.2, 0.5}}}}),
               60.0, 1e-3});
  return c;
}

}  // namespace ddestab::testing
