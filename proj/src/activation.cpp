#include "nnpoly/activation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nnpoly/error.hpp"

namespace nnpoly {

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::softplus: return "softplus";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
    case Activation::linear: return "linear";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view name) {
  if (name == "softplus") return Activation::softplus;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "linear") return Activation::linear;
  throw ValidationError("unknown activation '" + std::string(name) +
                        "' (expected softplus, tanh, sigmoid or linear)");
}

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double activate(Activation act, double x) {
  switch (act) {
    case Activation::softplus: return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
    case Activation::tanh: return std::tanh(x);
    case Activation::sigmoid: return sigmoid(x);
    case Activation::linear: return x;
  }
  return x;
}

double activate_derivative(Activation act, double x) {
  switch (act) {
    case Activation::softplus: return sigmoid(x);
    case Activation::tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::sigmoid: {
      const double s = sigmoid(x);
      return s * (1.0 - s);
    }
    case Activation::linear: return 1.0;
  }
  return 1.0;
}

ActivationValue activate_with_derivative(Activation act, double x) {
  switch (act) {
    case Activation::softplus: {
      const double e = std::exp(-std::abs(x));
      const double s = x >= 0.0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
      return {std::max(x, 0.0) + std::log1p(e), s};
    }
    case Activation::tanh: {
      const double t = std::tanh(x);
      return {t, 1.0 - t * t};
    }
    case Activation::sigmoid: {
      const double s = sigmoid(x);
      return {s, s * (1.0 - s)};
    }
    case Activation::linear: return {x, 1.0};
  }
  return {x, 1.0};
}

namespace {

// Coefficients of f solving f' = alpha + beta f + gamma f^2 with f(0) = f0,
// via (n+1) f_{n+1} = [n == 0] alpha + beta f_n + gamma sum_k f_k f_{n-k}.
std::vector<Rational> riccati_series(const Rational& f0, const Rational& alpha,
                                     const Rational& beta, const Rational& gamma, int order) {
  std::vector<Rational> f(static_cast<std::size_t>(order + 1));
  f[0] = f0;
  for (int n = 0; n < order; ++n) {
    Rational conv = 0;
    for (int k = 0; k <= n; ++k) conv += f[static_cast<std::size_t>(k)] * f[static_cast<std::size_t>(n - k)];
    Rational rhs = beta * f[static_cast<std::size_t>(n)] + gamma * conv;
    if (n == 0) rhs += alpha;
    f[static_cast<std::size_t>(n + 1)] = rhs / (n + 1);
  }
  return f;
}

}  // namespace

RationalSeries rational_taylor_coeffs(Activation act, int order) {
  if (order < 0 || order > kMaxTaylorOrder) {
    throw ValidationError("Taylor order " + std::to_string(order) + " outside [0, " +
                          std::to_string(kMaxTaylorOrder) + "]");
  }
  RationalSeries out{act, false, {}};
  switch (act) {
    case Activation::sigmoid:
      // s' = s - s^2, s(0) = 1/2
      out.coeffs = riccati_series(Rational(1, 2), 0, 1, -1, order);
      break;
    case Activation::tanh:
      // t' = 1 - t^2, t(0) = 0
      out.coeffs = riccati_series(0, 1, 0, -1, order);
      break;
    case Activation::softplus: {
      // softplus' = sigmoid, softplus(0) = ln 2
      const auto s = riccati_series(Rational(1, 2), 0, 1, -1, std::max(order - 1, 0));
      out.log2_constant = true;
      out.coeffs.assign(static_cast<std::size_t>(order + 1), Rational(0));
      for (int n = 1; n <= order; ++n) {
        out.coeffs[static_cast<std::size_t>(n)] = s[static_cast<std::size_t>(n - 1)] / n;
      }
      break;
    }
    case Activation::linear:
      out.coeffs.assign(static_cast<std::size_t>(order + 1), Rational(0));
      if (order >= 1) out.coeffs[1] = 1;
      break;
  }
  return out;
}

TaylorSeries taylor_coeffs(Activation act, int order) {
  const auto exact = rational_taylor_coeffs(act, order);
  TaylorSeries out{act, order, {}};
  out.coeffs.reserve(exact.coeffs.size());
  for (const auto& c : exact.coeffs) out.coeffs.push_back(static_cast<double>(c));
  if (exact.log2_constant) out.coeffs[0] = std::numbers::ln2;
  return out;
}

double taylor_eval(const TaylorSeries& series, double x) {
  double acc = 0.0;
  for (auto it = series.coeffs.rbegin(); it != series.coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

namespace {

// Nearest point in direction `sign` where the approximation error exceeds
// epsilon. Grid points are k * step with exact magnitudes on both sides.
double find_crossing(Activation act, const TaylorSeries& series, double epsilon, double sign,
                     bool& saturated) {
  auto error = [&](double x) { return std::abs(activate(act, x) - taylor_eval(series, x)); };
  const auto steps = static_cast<long>(std::llround(kRangeWindow / kRangeScanStep));
  for (long k = 1; k <= steps; ++k) {
    const double x = sign * static_cast<double>(k) * kRangeScanStep;
    if (error(x) > epsilon) {
      double inside = sign * static_cast<double>(k - 1) * kRangeScanStep;
      double outside = x;
      while (std::abs(outside - inside) > 1e-7) {
        const double mid = 0.5 * (inside + outside);
        if (error(mid) > epsilon) {
          outside = mid;
        } else {
          inside = mid;
        }
      }
      saturated = false;
      return inside;
    }
  }
  saturated = true;
  return sign * kRangeWindow;
}

}  // namespace

ValidRange valid_range(Activation act, int order, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("valid_range: epsilon must be positive");
  const auto series = taylor_coeffs(act, order);
  ValidRange r{epsilon, 0.0, 0.0};
  r.lo = find_crossing(act, series, epsilon, -1.0, r.lo_saturated);
  r.hi = find_crossing(act, series, epsilon, 1.0, r.hi_saturated);
  return r;
}

}  // namespace nnpoly
