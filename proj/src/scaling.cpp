#include "nnpoly/scaling.hpp"

#include <string>

#include "nnpoly/error.hpp"

namespace nnpoly {

std::string_view to_string(ScalingMode mode) {
  switch (mode) {
    case ScalingMode::none: return "none";
    case ScalingMode::unit: return "unit";
    case ScalingMode::symmetric: return "symmetric";
  }
  return "none";
}

ScalingMode scaling_mode_from_string(std::string_view name) {
  if (name == "none") return ScalingMode::none;
  if (name == "unit" || name == "[0,1]") return ScalingMode::unit;
  if (name == "symmetric" || name == "[-1,1]") return ScalingMode::symmetric;
  throw ValidationError("unknown scaling mode '" + std::string(name) +
                        "' (expected none, unit or symmetric)");
}

double ScalingSpec::target_lo() const { return mode == ScalingMode::symmetric ? -1.0 : 0.0; }
double ScalingSpec::target_hi() const { return 1.0; }

double ScalingSpec::feature_scale(int i) const {
  if (mode == ScalingMode::none) return 1.0;
  const auto k = static_cast<std::size_t>(i);
  return (target_hi() - target_lo()) / (feature_max[k] - feature_min[k]);
}

double ScalingSpec::feature_shift(int i) const {
  if (mode == ScalingMode::none) return 0.0;
  return target_lo() - feature_min[static_cast<std::size_t>(i)] * feature_scale(i);
}

double ScalingSpec::response_scale() const {
  if (mode == ScalingMode::none) return 1.0;
  return (target_hi() - target_lo()) / (response_max - response_min);
}

double ScalingSpec::response_shift() const {
  if (mode == ScalingMode::none) return 0.0;
  return target_lo() - response_min * response_scale();
}

Eigen::MatrixXd ScalingSpec::apply_features(const Eigen::MatrixXd& x) const {
  if (x.cols() != features()) throw DimensionError("scaling: feature count mismatch");
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (int i = 0; i < features(); ++i) {
    const double lo = target_lo();
    const double span = target_hi() - lo;
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
      out(k, i) = mode == ScalingMode::none
                      ? x(k, i)
                      : lo + span * (x(k, i) - feature_min[static_cast<std::size_t>(i)]) /
                                 (feature_max[static_cast<std::size_t>(i)] - feature_min[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

Eigen::VectorXd ScalingSpec::apply_response(const Eigen::VectorXd& y) const {
  if (mode == ScalingMode::none) return y;
  const double lo = target_lo();
  const double span = target_hi() - lo;
  Eigen::VectorXd out(y.size());
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    out(k) = lo + span * (y(k) - response_min) / (response_max - response_min);
  }
  return out;
}

Eigen::MatrixXd ScalingSpec::invert_features(const Eigen::MatrixXd& xs) const {
  if (xs.cols() != features()) throw DimensionError("scaling: feature count mismatch");
  if (mode == ScalingMode::none) return xs;
  const double lo = target_lo();
  const double span = target_hi() - lo;
  Eigen::MatrixXd out(xs.rows(), xs.cols());
  for (int i = 0; i < features(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    for (Eigen::Index r = 0; r < xs.rows(); ++r) {
      out(r, i) = feature_min[k] + (xs(r, i) - lo) / span * (feature_max[k] - feature_min[k]);
    }
  }
  return out;
}

double ScalingSpec::invert_response(double ys) const {
  if (mode == ScalingMode::none) return ys;
  const double lo = target_lo();
  const double span = target_hi() - lo;
  return response_min + (ys - lo) / span * (response_max - response_min);
}

Eigen::VectorXd ScalingSpec::invert_response(const Eigen::VectorXd& ys) const {
  Eigen::VectorXd out(ys.size());
  for (Eigen::Index k = 0; k < ys.size(); ++k) out(k) = invert_response(ys(k));
  return out;
}

void ScalingSpec::validate() const {
  if (feature_min.size() != feature_max.size()) {
    throw DimensionError("scaling: feature_min and feature_max lengths differ");
  }
  if (feature_min.empty()) throw DimensionError("scaling: no features");
  if (mode == ScalingMode::none) return;
  for (std::size_t i = 0; i < feature_min.size(); ++i) {
    if (!(feature_max[i] > feature_min[i])) {
      throw ValidationError("scaling: feature " + std::to_string(i + 1) + " has zero span");
    }
  }
  if (!(response_max > response_min)) throw ValidationError("scaling: response has zero span");
}

ScalingSpec ScalingSpec::identity(int p) {
  ScalingSpec s;
  s.mode = ScalingMode::none;
  s.feature_min.assign(static_cast<std::size_t>(p), 0.0);
  s.feature_max.assign(static_cast<std::size_t>(p), 1.0);
  return s;
}

ScalingSpec fit_scaling(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, ScalingMode mode) {
  if (x.rows() < 1 || x.cols() < 1) throw DimensionError("fit_scaling: empty data");
  if (y.size() != x.rows()) throw DimensionError("fit_scaling: X and y row counts differ");
  ScalingSpec s;
  s.mode = mode;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    s.feature_min.push_back(x.col(i).minCoeff());
    s.feature_max.push_back(x.col(i).maxCoeff());
  }
  s.response_min = y.minCoeff();
  s.response_max = y.maxCoeff();
  if (mode != ScalingMode::none) {
    for (std::size_t i = 0; i < s.feature_min.size(); ++i) {
      if (!(s.feature_max[i] > s.feature_min[i])) {
        throw ValidationError("fit_scaling: column " + std::to_string(i + 1) + " is constant");
      }
    }
    if (!(s.response_max > s.response_min)) throw ValidationError("fit_scaling: response is constant");
  }
  return s;
}

}  // namespace nnpoly
