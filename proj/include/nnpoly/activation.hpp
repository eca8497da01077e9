#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace nnpoly {

// Hidden-layer activation. Linear (g(x) = x) exists for test scaffolding.
enum class Activation { softplus, tanh, sigmoid, linear };

std::string_view to_string(Activation act);
// Throws ValidationError for unknown names.
Activation activation_from_string(std::string_view name);

// Numerically stable g(x) for |x| up to several hundred.
double activate(Activation act, double x);
// g'(x).
double activate_derivative(Activation act, double x);

struct ActivationValue {
  double value;
  double derivative;
};

// g(x) and g'(x) sharing one exponential.
ActivationValue activate_with_derivative(Activation act, double x);

using Rational = boost::multiprecision::cpp_rational;

// Exact Maclaurin coefficients c_n = g^(n)(0) / n!. Softplus has the
// irrational constant ln 2; it is reported through `log2_constant` and
// coeffs[0] is then 0.
struct RationalSeries {
  Activation kind;
  bool log2_constant = false;
  std::vector<Rational> coeffs;
};

// Maximum supported series order.
inline constexpr int kMaxTaylorOrder = 10;

RationalSeries rational_taylor_coeffs(Activation act, int order);

struct TaylorSeries {
  Activation kind;
  int order;
  std::vector<double> coeffs;  // c_0 .. c_order
};

TaylorSeries taylor_coeffs(Activation act, int order);

// Horner evaluation of the truncated series.
double taylor_eval(const TaylorSeries& series, double x);

// Interval around 0 on which |g(x) - T_q(x)| <= epsilon.
struct ValidRange {
  double epsilon;
  double lo;
  double hi;
  bool lo_saturated = false;  // no crossing found down to -kRangeWindow
  bool hi_saturated = false;  // no crossing found up to +kRangeWindow

  bool contains(double x) const { return x >= lo && x <= hi; }
};

inline constexpr double kRangeWindow = 50.0;
inline constexpr double kRangeScanStep = 1e-3;
inline constexpr double kDefaultEpsilon = 0.1;

// Scans outward from 0 in steps of 1e-3 and bisects the first crossing of
// epsilon to 1e-6.
ValidRange valid_range(Activation act, int order, double epsilon = kDefaultEpsilon);

}  // namespace nnpoly
