#include "nnpoly/transcode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nnpoly/combinatorics.hpp"
#include "nnpoly/error.hpp"

namespace nnpoly {

namespace {

void check_limits(const NetworkWeights& net, int order) {
  net.validate();
  if (order < 1 || order > kMaxDegree) {
    throw ValidationError("transcode: order " + std::to_string(order) + " outside [1, " +
                          std::to_string(kMaxDegree) + "]");
  }
  if (net.inputs() > kMaxVariables) {
    throw ValidationError("transcode: " + std::to_string(net.inputs()) + " inputs exceed the limit of " +
                          std::to_string(kMaxVariables));
  }
  if (net.hidden() > kMaxHidden) {
    throw ValidationError("transcode: " + std::to_string(net.hidden()) +
                          " hidden units exceed the limit of " + std::to_string(kMaxHidden));
  }
}

double sorted_sum(std::vector<double>& addends) {
  std::sort(addends.begin(), addends.end(),
            [](double a, double b) { return std::abs(a) < std::abs(b); });
  double s = 0.0;
  for (double a : addends) s += a;
  return s;
}

}  // namespace

TranscodeResult nn_to_poly(const NetworkWeights& net, int order, bool keep_unit_contributions) {
  check_limits(net, order);
  const int p = net.inputs();
  const int h1 = net.hidden();
  const auto series = taylor_coeffs(net.activation, order);
  const auto basis = monomials_up_to(p, order);

  // pow[(j * (p + 1) + i) * (order + 1) + k] = w(i, j)^k
  const int stride = order + 1;
  std::vector<double> pow(static_cast<std::size_t>(h1 * (p + 1) * stride));
  for (int j = 0; j < h1; ++j) {
    for (int i = 0; i <= p; ++i) {
      double acc = 1.0;
      for (int k = 0; k <= order; ++k) {
        pow[static_cast<std::size_t>((j * (p + 1) + i) * stride + k)] = acc;
        acc *= net.w(i, j);
      }
    }
  }
  auto power = [&](int j, int i, int k) {
    return pow[static_cast<std::size_t>((j * (p + 1) + i) * stride + k)];
  };

  TranscodeResult result{Polynomial(p, order), order, net.activation, {}};
  if (keep_unit_contributions) result.unit_contributions.reserve(basis.size());

  std::vector<double> series_weight;  // c_n * n! / ((n-t)! m_1! ... m_p!) for n = t..q
  std::vector<int> parts(static_cast<std::size_t>(p + 1));
  std::vector<double> inner;
  std::vector<double> units;
  for (const auto& m : basis) {
    const int t = m.degree();
    series_weight.clear();
    for (int n = t; n <= order; ++n) {
      parts[0] = n - t;
      for (int i = 0; i < p; ++i) parts[static_cast<std::size_t>(i + 1)] = m[i];
      series_weight.push_back(series.coeffs[static_cast<std::size_t>(n)] *
                              static_cast<double>(multinomial(parts)));
    }

    units.clear();
    for (int j = 0; j < h1; ++j) {
      double monomial_factor = 1.0;
      for (int i = 1; i <= p; ++i) monomial_factor *= power(j, i, m[i - 1]);
      inner.clear();
      for (int n = t; n <= order; ++n) {
        inner.push_back(series_weight[static_cast<std::size_t>(n - t)] * power(j, 0, n - t));
      }
      units.push_back(net.v(j + 1) * monomial_factor * sorted_sum(inner));
    }
    if (keep_unit_contributions) result.unit_contributions.push_back(units);
    if (t == 0) units.push_back(net.v(0));
    result.poly.set(m, sorted_sum(units));
  }
  return result;
}

double taylor_truncated_output(const NetworkWeights& net, int order, std::span<const double> x) {
  check_limits(net, order);
  if (static_cast<int>(x.size()) != net.inputs()) {
    throw DimensionError("taylor_truncated_output: input has " + std::to_string(x.size()) +
                         " features, network expects " + std::to_string(net.inputs()));
  }
  const auto series = taylor_coeffs(net.activation, order);
  double z = net.v(0);
  for (int j = 0; j < net.hidden(); ++j) {
    double u = net.w(0, j);
    for (std::size_t i = 0; i < x.size(); ++i) u += net.w(static_cast<Eigen::Index>(i + 1), j) * x[i];
    z += net.v(j + 1) * taylor_eval(series, u);
  }
  return z;
}

CoverageReport coverage(const NetworkWeights& net, const Eigen::MatrixXd& x, int order, double epsilon) {
  const Eigen::MatrixXd u = potentials(net, x);
  CoverageReport report{{}, 1.0, epsilon, order, valid_range(net.activation, order, epsilon)};
  if (u.rows() == 0) {
    report.unit_fraction.assign(static_cast<std::size_t>(net.hidden()), 1.0);
    return report;
  }
  long inside_total = 0;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    long inside = 0;
    for (Eigen::Index k = 0; k < u.rows(); ++k) inside += report.range.contains(u(k, j)) ? 1 : 0;
    report.unit_fraction.push_back(static_cast<double>(inside) / static_cast<double>(u.rows()));
    inside_total += inside;
  }
  report.overall = static_cast<double>(inside_total) / static_cast<double>(u.size());
  return report;
}

Polynomial rescale_to_original(const Polynomial& scaled_poly, const ScalingSpec& spec) {
  spec.validate();
  if (spec.features() != scaled_poly.variables()) {
    throw DimensionError("rescale_to_original: scaling has " + std::to_string(spec.features()) +
                         " features, polynomial has " + std::to_string(scaled_poly.variables()));
  }
  std::vector<double> shift, scale;
  for (int i = 0; i < spec.features(); ++i) {
    shift.push_back(spec.feature_shift(i));
    scale.push_back(spec.feature_scale(i));
  }
  const Polynomial in_original_x = affine_substitute(scaled_poly, shift, scale);
  const double rs = spec.response_scale();
  return output_affine(in_original_x, 1.0 / rs, -spec.response_shift() / rs);
}

Polynomial rescale_to_original(const TranscodeResult& result, const ScalingSpec& spec) {
  return rescale_to_original(result.poly, spec);
}

}  // namespace nnpoly
