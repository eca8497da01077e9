#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "nnpoly/combinatorics.hpp"
#include "nnpoly/error.hpp"
#include "nnpoly/simlab.hpp"
#include "nnpoly/transcode.hpp"
#include "test_util.hpp"

using namespace nnpoly;
using nnpoly::testing::random_network;
using nnpoly::testing::random_vector;

TEST(NnToPoly, FirstOrderTanhIsAffine) {
  NetworkWeights net;
  net.activation = Activation::tanh;
  net.w.resize(3, 1);
  net.w << 0.3, -1.5, 2.25;
  net.v.resize(2);
  net.v << 0.0, 1.0;
  const auto res = nn_to_poly(net, 1);
  EXPECT_DOUBLE_EQ(res.poly.coeff({0, 0}), 0.3);
  EXPECT_DOUBLE_EQ(res.poly.coeff({1, 0}), -1.5);
  EXPECT_DOUBLE_EQ(res.poly.coeff({0, 1}), 2.25);
  EXPECT_EQ(res.poly.degree(), 1);
  EXPECT_EQ(res.order, 1);
}

TEST(NnToPoly, ZeroWeightsGiveConstant) {
  NetworkWeights net;
  net.activation = Activation::softplus;
  net.w = Eigen::MatrixXd::Zero(3, 3);
  net.v.resize(4);
  net.v << 0.5, 1.0, -2.0, 4.0;
  const auto res = nn_to_poly(net, 5);
  EXPECT_NEAR(res.poly.coeff({0, 0}), 0.5 + 3.0 * std::numbers::ln2, 1e-15);
  for (const auto& [m, c] : res.poly.terms()) {
    if (m.degree() > 0) EXPECT_EQ(c, 0.0);
  }
}

TEST(NnToPoly, AllMonomialsPopulated) {
  std::mt19937_64 rng(1);
  const auto net = random_network(rng, 4, 3, Activation::sigmoid);
  const auto res = nn_to_poly(net, 4);
  EXPECT_EQ(res.poly.terms().size(), binomial(8, 4));
  EXPECT_EQ(res.poly.variables(), 4);
}

TEST(NnToPoly, MatchesTaylorOutputRoute) {
  std::mt19937_64 rng(2024);
  const auto net = random_network(rng, 3, 4, Activation::softplus);
  const auto res = nn_to_poly(net, 3);
  for (int k = 0; k < 200; ++k) {
    const auto x = random_vector(rng, 3);
    const double z = taylor_truncated_output(net, 3, x);
    EXPECT_LE(std::abs(res.poly.evaluate(x) - z), 1e-9 * (1.0 + std::abs(z)));
  }
}

// Brute-force oracle: expand (w0 + w.x)^n by repeated multiplication of
// dense coefficient maps, no multinomials involved.
TEST(NnToPoly, MatchesBruteForceExpansion) {
  std::mt19937_64 rng(7);
  const int p = 2, q = 4;
  const auto net = random_network(rng, p, 3, Activation::tanh);
  const auto series = taylor_coeffs(Activation::tanh, q);
  Polynomial expected(p, q);
  expected.add(MultiIndex::zero(p), net.v(0));
  for (int j = 0; j < 3; ++j) {
    // power holds (w0 + w1 x1 + w2 x2)^n as a map of exponent pairs.
    std::map<std::pair<int, int>, double> power{{{0, 0}, 1.0}};
    for (int n = 0; n <= q; ++n) {
      for (const auto& [e, c] : power) expected.add({e.first, e.second}, net.v(j + 1) * series.coeffs[static_cast<std::size_t>(n)] * c);
      std::map<std::pair<int, int>, double> next;
      for (const auto& [e, c] : power) {
        next[e] += c * net.w(0, j);
        next[{e.first + 1, e.second}] += c * net.w(1, j);
        next[{e.first, e.second + 1}] += c * net.w(2, j);
      }
      power = next;
    }
  }
  const auto got = nn_to_poly(net, q).poly;
  for (const auto& m : monomials_up_to(p, q)) EXPECT_NEAR(got.coeff(m), expected.coeff(m), 1e-12);
}

TEST(NnToPoly, LinearInV) {
  std::mt19937_64 rng(3);
  auto net = random_network(rng, 3, 5, Activation::sigmoid);
  net.v(0) = 0.0;
  const auto a = nn_to_poly(net, 5).poly;
  net.v *= 2.0;
  const auto b = nn_to_poly(net, 5).poly;
  for (const auto& [m, c] : a.terms()) EXPECT_LE(std::abs(b.coeff(m) - 2.0 * c), 1e-12 * std::abs(2.0 * c) + 1e-300);
}

TEST(NnToPoly, CoefficientsStabiliseWithOrder) {
  std::mt19937_64 rng(12);
  for (auto act : {Activation::softplus, Activation::tanh, Activation::sigmoid}) {
    const auto net = random_network(rng, 2, 3, act, 0.3);
    const auto p9 = nn_to_poly(net, 9).poly;
    const auto p10 = nn_to_poly(net, 10).poly;
    for (const auto& m : monomials_up_to(2, 3)) {
      EXPECT_LE(std::abs(p9.coeff(m) - p10.coeff(m)), 1e-3 * (1.0 + std::abs(p10.coeff(m))));
    }
  }
}

TEST(NnToPoly, UnitContributionsSumToCoefficient) {
  std::mt19937_64 rng(14);
  const auto net = random_network(rng, 2, 4, Activation::tanh);
  const auto res = nn_to_poly(net, 3, true);
  const auto ms = monomials_up_to(2, 3);
  ASSERT_EQ(res.unit_contributions.size(), ms.size());
  for (std::size_t c = 0; c < ms.size(); ++c) {
    double sum = c == 0 ? net.v(0) : 0.0;
    for (double part : res.unit_contributions[c]) sum += part;
    EXPECT_NEAR(sum, res.poly.coeff(ms[c]), 1e-12);
  }
  EXPECT_TRUE(nn_to_poly(net, 3).unit_contributions.empty());
}

TEST(NnToPoly, Limits) {
  std::mt19937_64 rng(1);
  const auto net = random_network(rng, 2, 2, Activation::tanh);
  EXPECT_THROW(nn_to_poly(net, 0), ValidationError);
  EXPECT_THROW(nn_to_poly(net, 11), ValidationError);
  const auto wide = random_network(rng, 11, 2, Activation::tanh);
  EXPECT_THROW(nn_to_poly(wide, 2), ValidationError);
  const auto tall = random_network(rng, 2, 129, Activation::tanh);
  EXPECT_THROW(nn_to_poly(tall, 2), ValidationError);
}

TEST(NnToPoly, LargestCaseIsFast) {
  std::mt19937_64 rng(5);
  const auto net = random_network(rng, 10, 4, Activation::softplus, 0.2);
  const auto start = std::chrono::steady_clock::now();
  const auto res = nn_to_poly(net, 10);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(res.poly.terms().size(), binomial(20, 10));
  EXPECT_LT(secs, 5.0);
}

TEST(TaylorOutput, ZeroWeights) {
  NetworkWeights net;
  net.activation = Activation::sigmoid;
  net.w = Eigen::MatrixXd::Zero(3, 2);
  net.v.resize(3);
  net.v << 1.0, 2.0, 3.0;
  const std::vector<double> x{5.0, -4.0};
  for (int q = 1; q <= 10; ++q) EXPECT_DOUBLE_EQ(taylor_truncated_output(net, q, x), 1.0 + 0.5 * 5.0);
}

TEST(TaylorOutput, ApproachesForwardForSmallPotentials) {
  std::mt19937_64 rng(9);
  for (auto act : {Activation::softplus, Activation::tanh, Activation::sigmoid}) {
    const auto net = random_network(rng, 3, 4, act, 0.1);
    for (int k = 0; k < 20; ++k) {
      const auto x = random_vector(rng, 3);
      EXPECT_NEAR(taylor_truncated_output(net, 9, x), forward(net, x), 1e-8);
    }
  }
  const auto net = random_network(rng, 3, 2, Activation::tanh);
  EXPECT_THROW(taylor_truncated_output(net, 3, std::vector<double>{1.0}), DimensionError);
}

TEST(Coverage, ZeroAndSaturatedUnits) {
  NetworkWeights net;
  net.activation = Activation::softplus;
  net.w = Eigen::MatrixXd::Zero(3, 2);
  net.v = Eigen::VectorXd::Ones(3);
  std::mt19937_64 rng(2);
  Eigen::MatrixXd x(20, 2);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = std::normal_distribution<double>()(rng);
  auto report = coverage(net, x, 3, 0.1);
  EXPECT_EQ(report.overall, 1.0);
  net.w(0, 1) = 100.0;
  report = coverage(net, x, 3, 0.1);
  EXPECT_EQ(report.unit_fraction[0], 1.0);
  EXPECT_EQ(report.unit_fraction[1], 0.0);
  EXPECT_EQ(report.overall, 0.5);
  EXPECT_EQ(report.order, 3);
}

TEST(RescaleToOriginal, IdentitySpecUnchanged) {
  std::mt19937_64 rng(4);
  const auto net = random_network(rng, 2, 3, Activation::tanh);
  const auto res = nn_to_poly(net, 3);
  const auto back = rescale_to_original(res, ScalingSpec::identity(2));
  for (const auto& [m, c] : res.poly.terms()) EXPECT_NEAR(back.coeff(m), c, 1e-15);
}

TEST(RescaleToOriginal, PointwiseRoundTrip) {
  DataGenConfig dg;
  dg.seed = 77;
  const auto gen = generate_data(dg);
  std::mt19937_64 rng(77);
  for (auto mode : {ScalingMode::unit, ScalingMode::symmetric}) {
    const auto spec = fit_scaling(gen.data.x, gen.data.y, mode);
    const auto net = random_network(rng, 3, 4, Activation::softplus);
    const auto res = nn_to_poly(net, 3);
    const auto original = rescale_to_original(res, spec);
    const Eigen::MatrixXd xs = spec.apply_features(gen.data.x);
    for (int k = 0; k < gen.data.samples(); ++k) {
      const std::vector<double> xo{gen.data.x(k, 0), gen.data.x(k, 1), gen.data.x(k, 2)};
      const std::vector<double> xsk{xs(k, 0), xs(k, 1), xs(k, 2)};
      const double expected = spec.invert_response(res.poly.evaluate(xsk));
      EXPECT_LE(std::abs(original.evaluate(xo) - expected), 1e-9 * (1.0 + std::abs(expected)));
    }
  }
}

TEST(RescaleToOriginal, DegenerateSpec) {
  ScalingSpec spec = ScalingSpec::identity(2);
  spec.mode = ScalingMode::unit;
  spec.feature_max[1] = spec.feature_min[1];
  Polynomial poly(2, 1);
  EXPECT_THROW(rescale_to_original(poly, spec), ValidationError);
  EXPECT_THROW(rescale_to_original(poly, ScalingSpec::identity(3)), DimensionError);
}
