#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace nnpoly {

enum class ScalingMode { none, unit, symmetric };

std::string_view to_string(ScalingMode mode);
// Accepts "none", "unit" / "[0,1]", "symmetric" / "[-1,1]".
ScalingMode scaling_mode_from_string(std::string_view name);

// Min-max maps fitted on the training split. Every feature and the
// response go to [0, 1] (unit) or [-1, 1] (symmetric); mode none keeps
// the original units.
struct ScalingSpec {
  ScalingMode mode = ScalingMode::none;
  std::vector<double> feature_min;
  std::vector<double> feature_max;
  double response_min = 0.0;
  double response_max = 1.0;

  int features() const { return static_cast<int>(feature_min.size()); }

  // Target interval of the mode.
  double target_lo() const;
  double target_hi() const;

  // Scaled value = shift + scale * original, per feature.
  double feature_scale(int i) const;
  double feature_shift(int i) const;
  double response_scale() const;
  double response_shift() const;

  Eigen::MatrixXd apply_features(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd apply_response(const Eigen::VectorXd& y) const;
  Eigen::MatrixXd invert_features(const Eigen::MatrixXd& xs) const;
  Eigen::VectorXd invert_response(const Eigen::VectorXd& ys) const;
  double invert_response(double ys) const;

  // Throws on size mismatch or a degenerate (max <= min) dimension.
  void validate() const;

  // Identity spec for p features.
  static ScalingSpec identity(int p);
};

// Fits per-column min/max on the training data. Constant columns are
// rejected unless mode is none.
ScalingSpec fit_scaling(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, ScalingMode mode);

}  // namespace nnpoly
