#include "resolv/error.hpp"
#include "resolv/typicality.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace resolv;
using doctest::Approx;

TEST_CASE("params validation") {
  CHECK_THROWS_AS(TypicalityParams(-0.1, 3), DomainError);
  CHECK_THROWS_AS(TypicalityParams(0.1, 0), DomainError);
}

TEST_CASE("letter typicality") {
  const Pmf half = Pmf::uniform(2);
  const std::vector<Symbol> exact{0, 1, 1, 0};
  CHECK(is_letter_typical(exact, half, {0.0, 4}));

  const Pmf skewed({0.25, 0.75});
  const std::vector<Symbol> type_exact{1, 0, 1, 1};
  CHECK(is_letter_typical(type_exact, skewed, {0.0, 4}));

  const Pmf zero({0.0, 1.0});
  const std::vector<Symbol> hits_zero{1, 0, 1};
  CHECK_FALSE(is_letter_typical(hits_zero, zero, {100.0, 3}));

  const std::vector<Symbol> x{0, 0, 0, 1};
  CHECK_FALSE(is_letter_typical(x, half, {0.4, 4}));
  CHECK(is_letter_typical(x, half, {0.5, 4}));

  CHECK_THROWS_AS(is_letter_typical(x, half, {0.4, 3}), DimensionError);
  const std::vector<Symbol> bad{0, 2, 0, 1};
  CHECK_THROWS_AS(is_letter_typical(bad, half, {0.4, 4}), DimensionError);
}

TEST_CASE("joint typicality") {
  // n = 2, uniform J, eps = 1: a pair letter used twice has frequency 1 and deviation
  // 3/4 > eps J = 1/4; the other 12 of the 16 pairs are typical.
  const JointPmf uniform(Matrix::Constant(2, 2, 0.25));
  int typical = 0;
  for (int a = 0; a < 16; ++a) {
    const std::vector<Symbol> u{a & 1, (a >> 1) & 1};
    const std::vector<Symbol> v{(a >> 2) & 1, (a >> 3) & 1};
    const bool repeated = u[0] == u[1] && v[0] == v[1];
    CHECK(jointly_typical(u, v, uniform, {1.0, 2}) == !repeated);
    typical += jointly_typical(u, v, uniform, {1.0, 2}) ? 1 : 0;
  }
  CHECK(typical == 12);
  for (int a = 0; a < 16; ++a) {
    const std::vector<Symbol> u{a & 1, (a >> 1) & 1};
    const std::vector<Symbol> v{(a >> 2) & 1, (a >> 3) & 1};
    CHECK(jointly_typical(u, v, uniform, {3.0, 2}));
  }

  const JointPmf diag(Matrix{{0.5, 0.0}, {0.0, 0.5}});
  const std::vector<Symbol> u{0, 1};
  const std::vector<Symbol> same{0, 1};
  const std::vector<Symbol> crossed{1, 1};
  CHECK(jointly_typical(u, same, diag, {0.0, 2}));
  CHECK_FALSE(jointly_typical(u, crossed, diag, {10.0, 2}));

  const std::vector<Symbol> shorter{0};
  CHECK_THROWS_AS(jointly_typical(u, shorter, diag, {0.1, 2}), DimensionError);
}

TEST_CASE("typical mass") {
  // eps >= (1 - P(a)) / P(a) for every letter admits every sequence
  CHECK(typical_mass(Pmf({0.3, 0.7}), {2.5, 6}) == Approx(1.0));
  CHECK(typical_mass(Pmf({0.3, 0.7}), {1.0, 6}) < 1.0);
  CHECK(typical_mass(Pmf({1.0 / 3.0, 2.0 / 3.0}), {0.0, 4}) == 0.0);
  CHECK(typical_mass(Pmf::uniform(2), {0.5, 4}) == Approx(14.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("typical mass is monotone in epsilon and respects the atypical bound") {
  const Pmf p({0.2, 0.5, 0.3});
  for (int n = 1; n <= 10; ++n) {
    double last = -1.0;
    for (double eps = 0.0; eps <= 2.0; eps += 0.05) {
      const TypicalityParams params(eps, n);
      const double mass = typical_mass(p, params);
      CHECK(mass >= last - 1e-15);
      CHECK(1.0 - mass <= atypical_mass_bound(p, params) + 1e-12);
      last = mass;
    }
  }
}

TEST_CASE("mu constants") {
  const auto uniform = mu_constants(JointPmf(Matrix::Constant(2, 2, 0.25)));
  CHECK(uniform.mu_v == 0.5);
  CHECK(uniform.mu_uv == 0.25);

  const auto with_zero = mu_constants(JointPmf(Matrix{{0.0, 0.4}, {0.1, 0.5}}));
  CHECK(with_zero.mu_uv == Approx(0.1));
  CHECK(with_zero.mu_v == Approx(0.1));

  const auto bsc = mu_constants(JointPmf(Matrix{{0.45, 0.05}, {0.05, 0.45}}));
  CHECK(bsc.mu_v == Approx(0.5));
  CHECK(bsc.mu_uv == Approx(0.05));
}
