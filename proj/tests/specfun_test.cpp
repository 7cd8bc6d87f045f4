#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tripartite/specfun.hpp"

using namespace tripartite;

TEST(Hermite, LowOrderValues) {
  EXPECT_DOUBLE_EQ(hermite_phys(0, 3.7), 1.0);
  EXPECT_DOUBLE_EQ(hermite_phys(1, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(hermite_phys(3, 1.0), -4.0);
}

TEST(Hermite, MatchesExplicitExpansion) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> x(-3.0, 3.0);
  for (int n = 0; n <= 8; ++n)
    for (int i = 0; i < 20; ++i) {
      const double v = x(rng);
      const double ref = oracle::hermite_explicit(n, v);
      EXPECT_NEAR(hermite_phys(n, v), ref, 1e-12 * oracle::hermite_magnitude(n, v))
          << "n=" << n << " x=" << v;
    }
}

TEST(Hermite, DegreeAboveBoundIsRejected) {
  EXPECT_THROW(hermite_phys(max_degree + 1, 0.1), degree_limit_error);
  EXPECT_NO_THROW(hermite_phys(max_degree, 0.1));
  try {
    hermite_phys(99, 0.0);
  } catch (const degree_limit_error& e) {
    EXPECT_EQ(e.requested(), 99);
    EXPECT_EQ(e.bound(), max_degree);
  }
}

TEST(Legendre, KnownValues) {
  EXPECT_DOUBLE_EQ(legendre(2, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(legendre(2, 2.0), 5.5);
  EXPECT_DOUBLE_EQ(legendre(3, 2.0), 17.0);
}

TEST(Legendre, UnitAtOneAndExplicitForm) {
  for (int n = 0; n <= 20; ++n) EXPECT_NEAR(legendre(n, 1.0), 1.0, 1e-14);
  for (int n = 0; n <= 10; ++n)
    for (double z : {-0.9, -0.3, 0.2, 0.8, 1.5, 3.0}) {
      const double ref = oracle::legendre_explicit(n, z);
      EXPECT_NEAR(legendre(n, z), ref, 1e-12 * std::max(1.0, std::fabs(ref)));
    }
  EXPECT_THROW(legendre(41, 0.0), degree_limit_error);
}

TEST(Pochhammer, Values) {
  EXPECT_DOUBLE_EQ(pochhammer(5.0, 0), 1.0);
  EXPECT_DOUBLE_EQ(pochhammer(-2.0, 3), 0.0);
  EXPECT_DOUBLE_EQ(pochhammer(0.5, 2), 0.75);
  EXPECT_DOUBLE_EQ(pochhammer(-3.0, 2), 6.0);
  EXPECT_THROW(pochhammer(1.0, -1), std::invalid_argument);
}

TEST(GeneralizedBinomial, IntegerAndNegative) {
  EXPECT_DOUBLE_EQ(generalized_binomial(5, 2), 10.0);
  EXPECT_DOUBLE_EQ(generalized_binomial(2, 3), 0.0);
  EXPECT_DOUBLE_EQ(generalized_binomial(-1, 3), -1.0);
  EXPECT_DOUBLE_EQ(generalized_binomial(-2, 2), 3.0);
  EXPECT_DOUBLE_EQ(generalized_binomial(0.5, 2), -0.125);
  EXPECT_DOUBLE_EQ(generalized_binomial(7, -1), 0.0);
}

TEST(Factorial, ExactProducts) {
  EXPECT_DOUBLE_EQ(factorial(0), 1.0);
  EXPECT_DOUBLE_EQ(factorial(10), 3628800.0);
  EXPECT_DOUBLE_EQ(factorial_product(std::array<int, 3>{3, 4, 5}), 6.0 * 24.0 * 120.0);
  // 40!^4 overflows no intermediate
  EXPECT_TRUE(std::isfinite(factorial_product(std::array<int, 4>{40, 40, 40, 40})));
}

TEST(Jacobi, KnownValues) {
  EXPECT_DOUBLE_EQ(jacobi(0, 1.0, 0.0, 0.3), 1.0);
  EXPECT_NEAR(jacobi(1, 0.0, 0.0, 0.6), 0.6, 1e-15);
  EXPECT_NEAR(jacobi(1, 0.0, -1.0, 0.2), 0.6, 1e-15);
}

TEST(Jacobi, LegendreSpecialCase) {
  for (int n = 0; n <= 12; ++n)
    for (double z : {-0.7, 0.1, 0.95, 2.0})
      EXPECT_NEAR(jacobi(n, 0.0, 0.0, z), legendre(n, z),
                  1e-12 * std::max(1.0, std::fabs(legendre(n, z))));
}

TEST(Jacobi, MatchesGammaFormAwayFromPoles) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> par(0.1, 3.0), arg(-1.0, 1.0);
  for (int n = 0; n <= 8; ++n)
    for (int i = 0; i < 10; ++i) {
      const double a = par(rng), b = par(rng), z = arg(rng);
      double magnitude = 0.0;
      const double ref = oracle::jacobi_gamma(n, a, b, z, &magnitude);
      EXPECT_NEAR(jacobi(n, a, b, z), ref, 1e-12 * std::max(1.0, magnitude));
    }
}

TEST(Jacobi, ParameterShiftIdentity) {
  for (int n = 0; n <= 5; ++n)
    for (int m = 0; m <= 5; ++m)
      for (int rho = -3; rho <= 3; ++rho) {
        if (n + rho + 1 <= 0 || m + rho + 1 <= 0) continue;
        for (double z : {-0.5, 0.3, 0.9}) {
          const double lhs = jacobi(n, rho, m - n, z);
          const double rhs = oracle::fact(m) / oracle::fact(n) * std::tgamma(n + rho + 1.0) /
                             std::tgamma(m + rho + 1.0) * std::pow(0.5 * (z + 1.0), n - m) *
                             jacobi(m, rho, n - m, z);
          EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::fabs(lhs)))
              << n << ' ' << m << ' ' << rho << ' ' << z;
        }
      }
}

TEST(Jacobi, ReflectionIdentity) {
  for (int n = 0; n <= 5; ++n)
    for (int rho = -3; rho <= 3; ++rho)
      for (int sigma = -3; sigma <= 3; ++sigma)
        for (double z : {-0.5, 0.3, 0.9}) {
          const double lhs = jacobi(n, rho, sigma, z);
          const double rhs = std::pow(0.5 * (1.0 - z), n) *
                             jacobi(n, -rho - sigma - 2 * n - 1, sigma, (z + 3.0) / (z - 1.0));
          EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::fabs(lhs)));
        }
}

TEST(ExtonK16, TrivialCases) {
  EXPECT_DOUBLE_EQ(exton_k16({{0, 0, 0, 0}, 1.0, 0.3, -2.0, 5.0, 7.0}), 1.0);
  EXPECT_DOUBLE_EQ(exton_k16({{-1, 0, 0, 0}, 2.0, 0.3, -2.0, 5.0, 7.0}), 1.0);
  EXPECT_NEAR(exton_k16({{-1, -1, 0, 0}, 1.0, 0.7, 0.5, -1.1, 2.2}), 1.5, 1e-15);
}

TEST(ExtonK16, MatchesNaiveQuadrupleLoop) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> a(0, 4);
  std::uniform_real_distribution<double> b(0.5, 6.0), v(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    K16Arguments args{{-a(rng), -a(rng), -a(rng), -a(rng)}, b(rng), v(rng), v(rng), v(rng), v(rng)};
    const double ref =
        oracle::k16_naive(args.alpha, args.beta, args.x, args.y, args.z, args.t);
    EXPECT_NEAR(exton_k16(args), ref, 1e-11 * std::max(1.0, std::fabs(ref)));
  }
}

TEST(ExtonK16, PoleInSurvivingTermIsReported) {
  // beta = -1: (beta)_2 = 0 and terms of total index 2 survive
  try {
    exton_k16({{-2, -2, 0, -2}, -1.0, 1.0, 1.0, 1.0, 1.0});
    FAIL() << "expected pole_error";
  } catch (const pole_error& e) {
    EXPECT_DOUBLE_EQ(e.beta(), -1.0);
    EXPECT_EQ(e.index(), 2);
  }
  // same beta, but only the total-index-0 term survives
  EXPECT_NO_THROW(exton_k16({{-1, 0, 0, 0}, -1.0, 1.0, 1.0, 1.0, 1.0}));
  EXPECT_THROW(exton_k16({{1, 0, 0, 0}, 1.0, 0, 0, 0, 0}), std::invalid_argument);
}
