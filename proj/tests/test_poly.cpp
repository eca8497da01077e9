#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "nnpoly/combinatorics.hpp"
#include "nnpoly/error.hpp"
#include "nnpoly/polynomial.hpp"
#include "test_util.hpp"

using namespace nnpoly;
using nnpoly::testing::random_polynomial;
using nnpoly::testing::random_vector;
using nnpoly::testing::rel_diff;

namespace {

// Brute force: every tuple in {0..q}^p with sum <= q.
int brute_force_count(int p, int q) {
  int count = 0;
  std::vector<int> e(static_cast<std::size_t>(p), 0);
  while (true) {
    int sum = 0;
    for (int v : e) sum += v;
    if (sum <= q) ++count;
    int i = 0;
    while (i < p && ++e[static_cast<std::size_t>(i)] > q) e[static_cast<std::size_t>(i++)] = 0;
    if (i == p) break;
  }
  return count;
}

double naive_evaluate(const Polynomial& poly, const std::vector<double>& x) {
  double sum = 0.0;
  for (const auto& [m, c] : poly.terms()) {
    double term = c;
    for (int i = 0; i < m.size(); ++i) {
      for (int k = 0; k < m[i]; ++k) term *= x[static_cast<std::size_t>(i)];
    }
    sum += term;
  }
  return sum;
}

}  // namespace

TEST(Combinatorics, SmallValues) {
  EXPECT_EQ(factorial(0), 1u);
  EXPECT_EQ(factorial(10), 3628800u);
  EXPECT_EQ(binomial(6, 2), 15u);
  EXPECT_EQ(binomial(20, 10), 184756u);
  const std::vector<int> parts{2, 1, 1};
  EXPECT_EQ(multinomial(parts), 12u);
  EXPECT_THROW(factorial(-1), ValidationError);
}

TEST(Monomials, Univariate) {
  const auto ms = monomials_up_to(1, 2);
  ASSERT_EQ(ms.size(), 3u);
  EXPECT_EQ(ms[0], MultiIndex({0}));
  EXPECT_EQ(ms[1], MultiIndex({1}));
  EXPECT_EQ(ms[2], MultiIndex({2}));
}

TEST(Monomials, TwoVariablesDegreeTwoOrder) {
  const auto ms = monomials_up_to(2, 2);
  const std::vector<MultiIndex> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(ms, expected);
}

TEST(Monomials, CountMatchesBruteForce) {
  EXPECT_EQ(monomials_up_to(3, 3).size(), 20u);
  for (int p = 1; p <= 5; ++p) {
    for (int q = 0; q <= 8; ++q) {
      const auto ms = monomials_up_to(p, q);
      EXPECT_EQ(static_cast<int>(ms.size()), brute_force_count(p, q)) << "p=" << p << " q=" << q;
      EXPECT_EQ(ms.size(), binomial(p + q, q));
      std::set<std::vector<int>> seen;
      for (std::size_t k = 0; k < ms.size(); ++k) {
        seen.insert({ms[k].exponents().begin(), ms[k].exponents().end()});
        if (k > 0) EXPECT_TRUE(GradedLexLess{}(ms[k - 1], ms[k]));
      }
      EXPECT_EQ(seen.size(), ms.size());
    }
  }
}

TEST(Polynomial, ConstantEvaluates) {
  Polynomial poly(2, 0);
  poly.set(MultiIndex::zero(2), 2.5);
  const std::vector<double> x{3.0, -7.0};
  EXPECT_DOUBLE_EQ(poly.evaluate(x), 2.5);
}

TEST(Polynomial, SmallExample) {
  Polynomial poly(2, 2);
  poly.set({1, 0}, 3.0);
  poly.set({0, 2}, -1.0);
  const std::vector<double> x{2.0, 1.0};
  EXPECT_DOUBLE_EQ(poly.evaluate(x), 5.0);
}

TEST(Polynomial, MatchesNaiveEvaluator) {
  std::mt19937_64 rng(11);
  const auto poly = random_polynomial(rng, 3, 3);
  for (int k = 0; k < 100; ++k) {
    const auto x = random_vector(rng, 3, -3.0, 3.0);
    const double expected = naive_evaluate(poly, x);
    EXPECT_LE(std::abs(poly.evaluate(x) - expected), 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST(Polynomial, RejectsBadInput) {
  Polynomial poly(2, 2);
  const std::vector<double> x{1.0};
  EXPECT_THROW(poly.evaluate(x), DimensionError);
  EXPECT_THROW(poly.set({1, 0, 0}, 1.0), DimensionError);
  EXPECT_THROW(poly.set({2, 1}, 1.0), ValidationError);
}

TEST(Polynomial, DenseCoeffsFollowGradedLex) {
  Polynomial poly(2, 2);
  poly.set({0, 1}, 4.0);
  poly.set({2, 0}, -2.0);
  const std::vector<double> expected{0.0, 0.0, 4.0, -2.0, 0.0, 0.0};
  EXPECT_EQ(poly.dense_coeffs(), expected);
}

TEST(AffineSubstitute, IdentityLeavesCoefficients) {
  std::mt19937_64 rng(3);
  const auto poly = random_polynomial(rng, 2, 3);
  const std::vector<double> a{0.0, 0.0}, b{1.0, 1.0};
  const auto out = affine_substitute(poly, a, b);
  EXPECT_EQ(out.dense_coeffs(), poly.dense_coeffs());
}

TEST(AffineSubstitute, LinearUnivariate) {
  Polynomial poly(1, 1);
  poly.set({1}, 1.0);
  const std::vector<double> a{2.5}, b{-4.0};
  const auto out = affine_substitute(poly, a, b);
  EXPECT_DOUBLE_EQ(out.coeff({0}), 2.5);
  EXPECT_DOUBLE_EQ(out.coeff({1}), -4.0);
}

TEST(AffineSubstitute, PointwiseAgreement) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 1 + trial % 3;
    const int q = 1 + trial % 5;
    const auto poly = random_polynomial(rng, p, q);
    const auto a = random_vector(rng, p, -2.0, 2.0);
    const auto b = random_vector(rng, p, -2.0, 2.0);
    const auto sub = affine_substitute(poly, a, b);
    for (int k = 0; k < 100; ++k) {
      const auto xp = random_vector(rng, p);
      std::vector<double> x(static_cast<std::size_t>(p));
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = a[i] + b[i] * xp[i];
      const double expected = poly.evaluate(x);
      EXPECT_LE(std::abs(sub.evaluate(xp) - expected), 1e-10 * (1.0 + std::abs(expected)));
    }
  }
}

TEST(AffineSubstitute, CollapsedVariable) {
  Polynomial poly(2, 2);
  poly.set({1, 1}, 2.0);
  const std::vector<double> a{3.0, 1.0}, b{0.0, 1.0};
  const auto out = affine_substitute(poly, a, b);
  EXPECT_DOUBLE_EQ(out.coeff({0, 1}), 6.0);
  EXPECT_DOUBLE_EQ(out.coeff({0, 0}), 6.0);
  EXPECT_DOUBLE_EQ(out.coeff({1, 0}), 0.0);
}

TEST(AffineSubstitute, RoundTrip) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto poly = random_polynomial(rng, 3, 4);
    auto a = random_vector(rng, 3, -1.0, 1.0);
    auto b = random_vector(rng, 3, 0.5, 2.0);
    std::vector<double> ai(3), bi(3);
    for (int i = 0; i < 3; ++i) {
      ai[static_cast<std::size_t>(i)] = -a[static_cast<std::size_t>(i)] / b[static_cast<std::size_t>(i)];
      bi[static_cast<std::size_t>(i)] = 1.0 / b[static_cast<std::size_t>(i)];
    }
    const auto back = affine_substitute(affine_substitute(poly, a, b), ai, bi);
    const auto c0 = poly.dense_coeffs();
    const auto c1 = back.dense_coeffs();
    for (std::size_t k = 0; k < c0.size(); ++k) EXPECT_LE(rel_diff(c1[k], c0[k]), 1e-9);
  }
}

TEST(OutputAffine, Basics) {
  Polynomial poly(1, 1);
  poly.set({0}, 1.0);
  const auto same = output_affine(poly, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(same.coeff({0}), 1.0);
  const auto moved = output_affine(poly, 2.0, 3.0);
  EXPECT_DOUBLE_EQ(moved.coeff({0}), 5.0);

  std::mt19937_64 rng(1);
  const auto r = random_polynomial(rng, 2, 3);
  const auto t = output_affine(r, -1.7, 0.4);
  for (int k = 0; k < 20; ++k) {
    const auto x = random_vector(rng, 2);
    const double expected = -1.7 * r.evaluate(x) + 0.4;
    EXPECT_LE(std::abs(t.evaluate(x) - expected), 1e-12 * (1.0 + std::abs(expected)));
  }
}

TEST(OlsFit, RecoversNoiselessPolynomial) {
  std::mt19937_64 rng(21);
  const auto truth = random_polynomial(rng, 2, 2);
  Eigen::MatrixXd x(50, 2);
  Eigen::VectorXd y(50);
  for (int k = 0; k < 50; ++k) {
    const auto row = random_vector(rng, 2, -3.0, 3.0);
    x(k, 0) = row[0];
    x(k, 1) = row[1];
    y(k) = truth.evaluate(row);
  }
  const auto fit = ols_fit(x, y, 2);
  const auto a = fit.poly.dense_coeffs();
  const auto b = truth.dense_coeffs();
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-8);
  EXPECT_GE(fit.report.residual_sum_squares, 0.0);
  EXPECT_LT(fit.report.residual_sum_squares, 1e-16);
  EXPECT_GE(fit.report.condition_number, 1.0);
  EXPECT_EQ(fit.report.unit_std_errors.size(), a.size());
}

TEST(OlsFit, ConstantResponse) {
  std::mt19937_64 rng(2);
  Eigen::MatrixXd x(30, 3);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = std::uniform_real_distribution<double>(-1, 1)(rng);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(30, 4.25);
  const auto fit = ols_fit(x, y, 2);
  EXPECT_NEAR(fit.poly.coeff(MultiIndex::zero(3)), 4.25, 1e-10);
  for (const auto& [m, c] : fit.poly.terms()) {
    if (m.degree() > 0) EXPECT_NEAR(c, 0.0, 1e-10);
  }
}

TEST(OlsFit, Errors) {
  Eigen::MatrixXd x(4, 2);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 4;
  EXPECT_THROW(ols_fit(x, y, 2), ValidationError);  // 4 < 6 unknowns

  Eigen::MatrixXd dup(10, 2);
  for (int k = 0; k < 10; ++k) dup.row(k) << k, 2.0 * k;  // collinear columns
  Eigen::VectorXd yd = Eigen::VectorXd::LinSpaced(10, 0, 1);
  EXPECT_THROW(ols_fit(dup, yd, 1), RankDeficientError);

  Eigen::VectorXd short_y(3);
  EXPECT_THROW(ols_fit(x, short_y, 1), DimensionError);
}

TEST(CoefficientDistance, Basics) {
  Polynomial a(1, 1), b(1, 2);
  a.set({1}, 1.0);
  b.set({1}, 1.5);
  const auto d = coefficient_distance(a, b);
  EXPECT_DOUBLE_EQ(d.max_abs, 0.5);
  EXPECT_DOUBLE_EQ(d.l2, 0.5);
  const auto same = coefficient_distance(a, a);
  EXPECT_EQ(same.max_abs, 0.0);

  // Explicit zeros compare as absent.
  Polynomial c(1, 2);
  c.set({1}, 1.0);
  c.set({2}, 0.0);
  EXPECT_EQ(coefficient_distance(a, c).max_abs, 0.0);

  const auto rev = coefficient_distance(b, a);
  EXPECT_EQ(rev.max_abs, d.max_abs);

  EXPECT_THROW(coefficient_distance(a, Polynomial(2, 1)), DimensionError);
}
