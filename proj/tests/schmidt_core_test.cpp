#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tripartite/schmidt_core.hpp"

using namespace tripartite;
using std::numbers::pi;

namespace {

std::vector<Excitation> excitations_up_to(int max_total) {
  std::vector<Excitation> out;
  for (int total = 0; total <= max_total; ++total)
    for (int a = 0; a <= total; ++a)
      for (int b = 0; a + b <= total; ++b) out.emplace_back(a, b, total - a - b);
  return out;
}

Angles random_angles(std::mt19937_64& rng, double half_width = pi) {
  std::uniform_real_distribution<double> d(-half_width, half_width);
  const double t = d(rng), v = d(rng), p = d(rng);
  return {t, v, p};
}

}  // namespace

TEST(SchmidtMatrix, TriangularStorage) {
  SchmidtMatrix a(Excitation{1, 1, 1});
  EXPECT_EQ(a.size(), 10u);
  a.at(3, 0) = 2.0;
  a.at(0, 3) = 3.0;
  a.at(1, 2) = 5.0;
  EXPECT_DOUBLE_EQ(a.at(3, 0), 2.0);
  EXPECT_DOUBLE_EQ(a.at(0, 3), 3.0);
  EXPECT_DOUBLE_EQ(a.at(1, 2), 5.0);
  EXPECT_DOUBLE_EQ(a.value_or_zero(2, 2), 0.0);
  EXPECT_THROW(a.at(2, 2), std::out_of_range);
  EXPECT_DOUBLE_EQ(a.norm_squared(), 38.0);
  const auto e = a.entries();
  ASSERT_EQ(e.size(), 10u);
  EXPECT_EQ(e.front().k, 0);
  EXPECT_EQ(e.front().m, 3);
  EXPECT_EQ(e.back().k, 3);
  EXPECT_EQ(e.back().m, 0);
}

TEST(SelectionRule, Examples) {
  EXPECT_TRUE(selection_rule({0, 0, 1}, 0, 0, 1));
  EXPECT_FALSE(selection_rule({0, 0, 1}, 1, 1, 0));
  EXPECT_TRUE(selection_rule({2, 1, 0}, 0, 3, 0));
}

TEST(CoefficientsSum, Examples) {
  EXPECT_EQ(coefficients_sum({0, 0, 0}, mixing_matrix({0.3, 0.2, 0.1})).size(), 1u);
  EXPECT_DOUBLE_EQ(coefficients_sum({0, 0, 0}, mixing_matrix({0.3, 0.2, 0.1})).at(0, 0), 1.0);

  const MixingMatrix m = mixing_matrix({0.4, -0.7, 1.1});
  const SchmidtMatrix a = coefficients_sum({0, 0, 1}, m);
  EXPECT_NEAR(a.at(1, 0), m(2, 0), 1e-15);
  EXPECT_NEAR(a.at(0, 1), m(2, 1), 1e-15);
  EXPECT_NEAR(a.at(0, 0), m(2, 2), 1e-15);

  const SchmidtMatrix b = coefficients_sum({1, 0, 0}, mixing_matrix({0, 0, 0}));
  EXPECT_DOUBLE_EQ(b.at(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(b.at(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(b.at(0, 0), 0.0);
}

TEST(CoefficientsSum, MatchesCreationOperatorExpansion) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    const Angles ang = random_angles(rng);
    const MixingMatrix m = mixing_matrix(ang);
    const auto om = oracle::mixing(ang.theta, ang.vphi, ang.phi);
    for (const auto& n : excitations_up_to(6)) {
      const SchmidtMatrix a = coefficients_sum(n, m);
      const auto ref = oracle::creation_operator_coefficients(n.values(), om);
      for (const auto& e : a.entries()) {
        const auto it = ref.find({e.k, e.l, e.m});
        const double expect = it == ref.end() ? 0.0 : it->second;
        ASSERT_NEAR(e.value, expect, 1e-11);
      }
    }
  }
}

TEST(CoefficientsSum, DegreeLimit) {
  EXPECT_NO_THROW(coefficients_sum({5, 5, 5}, mixing_matrix({0.1, 0.2, 0.3})));
  EXPECT_THROW(Excitation(20, 20, 20), degree_limit_error);
}

TEST(CoefficientsSum, CompletenessProperty) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 50; ++i) {
    const MixingMatrix m = mixing_matrix(random_angles(rng));
    for (const auto& n : excitations_up_to(5))
      ASSERT_NEAR(coefficients_sum(n, m).norm_squared(), 1.0, 1e-10);
  }
}

TEST(CoefficientsSum, HighDegreeStaysNormalized) {
  const MixingMatrix m = mixing_matrix({0.7, -0.4, 1.3});
  EXPECT_NEAR(coefficients_sum({10, 10, 10}, m).norm_squared(), 1.0, 1e-9);
  EXPECT_NEAR(coefficients_sum({0, 0, 40}, m).norm_squared(), 1.0, 1e-9);
}

TEST(CoefficientsSum, ProductStateLimit) {
  const MixingMatrix id = mixing_matrix({0, 0, 0});
  for (const auto& n : excitations_up_to(6))
    for (const auto& e : coefficients_sum(n, id).entries())
      ASSERT_NEAR(e.value, (e.k == n.n1() && e.l == n.n2()) ? 1.0 : 0.0, 1e-14);
}

TEST(CoefficientsK16, Examples) {
  for (auto [n, a] : {std::pair{Excitation{0, 0, 2}, Angles{pi / 6, pi / 5, pi / 7}},
                      std::pair{Excitation{1, 1, 1}, Angles{0.4, 0.3, 0.2}}}) {
    const MixingMatrix m = mixing_matrix(a);
    K16Diagnostics d;
    const SchmidtMatrix k16 = coefficients_k16(n, m, &d);
    const SchmidtMatrix sum = coefficients_sum(n, m);
    for (const auto& e : sum.entries()) EXPECT_NEAR(k16.at(e.k, e.l), e.value, 1e-10);
    EXPECT_GT(d.closed_form, 0u);
    EXPECT_EQ(d.closed_form + d.fallback, sum.size());
  }

  K16Diagnostics d;
  const SchmidtMatrix id = coefficients_k16({0, 0, 1}, mixing_matrix({0, 0, 0}), &d);
  EXPECT_EQ(d.closed_form, 0u);
  EXPECT_EQ(d.fallback, 3u);
  EXPECT_DOUBLE_EQ(id.at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(id.at(1, 0), 0.0);
}

TEST(CoefficientsK16, RouteEquivalenceOnRandomAngles) {
  std::mt19937_64 rng(41);
  std::size_t closed = 0;
  for (int i = 0; i < 30; ++i) {
    const MixingMatrix m = mixing_matrix(random_angles(rng, pi / 4));
    for (const auto& n : excitations_up_to(4)) {
      K16Diagnostics d;
      const SchmidtMatrix k16 = coefficients_k16(n, m, &d);
      closed += d.closed_form;
      const SchmidtMatrix sum = coefficients_sum(n, m);
      for (const auto& e : sum.entries()) ASSERT_NEAR(k16.at(e.k, e.l), e.value, 1e-10);
    }
  }
  EXPECT_GT(closed, 1000u);
}

TEST(CoefficientsK16, ApplicabilityRequiresNonzeroRatioDenominators) {
  const Excitation n{1, 1, 2};
  EXPECT_TRUE(k16_applicable(n, mixing_matrix({0.4, 0.3, 0.2}), 1, 1));
  EXPECT_FALSE(k16_applicable(n, mixing_matrix({0.4, 0.3, 0.2}), 2, 1));  // k + l > n3
  EXPECT_FALSE(k16_applicable(n, mixing_matrix({0.0, 0.3, 0.2}), 0, 0));  // c1 = 0
}

TEST(Wavefunction, Examples) {
  const double peak = std::pow(pi, -0.75);
  EXPECT_NEAR(wavefunction_eval({0, 0, 0}, mixing_matrix({0.3, 1.0, -2.0}), {}), peak, 1e-15);
  EXPECT_NEAR(peak, 1.0 / std::sqrt(std::sqrt(pi * pi * pi)), 1e-15);
  EXPECT_NEAR(peak, 0.4237772081, 1e-10);

  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> x(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const GridPoint3 p{x(rng), x(rng), x(rng)};
    const double r2 = p.x1 * p.x1 + p.x2 * p.x2 + p.x3 * p.x3;
    EXPECT_NEAR(wavefunction_eval({0, 0, 0}, mixing_matrix(random_angles(rng)), p),
                peak * std::exp(-0.5 * r2), 1e-14);
  }

  // pi^{-3/4} * 2/sqrt(2) * e^{-1/2}
  const double expect = peak * std::sqrt(2.0) * std::exp(-0.5);
  EXPECT_NEAR(wavefunction_eval({1, 0, 0}, mixing_matrix({0, 0, 0}), {1, 0, 0}), expect, 1e-15);
  EXPECT_NEAR(expect, 0.36350078439803635, 1e-15);
}

TEST(Wavefunction, OscillatorFunctionMatchesExplicitForm) {
  for (int k = 0; k <= 10; ++k)
    for (double x : {-3.0, -1.2, 0.0, 0.4, 2.5})
      EXPECT_NEAR(oscillator_function(k, x), oracle::phi_n(k, x), 1e-12);
}

TEST(Wavefunction, ExpansionReproducesWavefunction) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> x(-2.5, 2.5);
  for (int i = 0; i < 20; ++i) {
    const MixingMatrix m = mixing_matrix(random_angles(rng));
    const GridPoint3 p{x(rng), x(rng), x(rng)};
    for (const auto& n : excitations_up_to(3))
      ASSERT_NEAR(expansion_eval(coefficients_sum(n, m), p), wavefunction_eval(n, m, p), 1e-8);
  }
}
