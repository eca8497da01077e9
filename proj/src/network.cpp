#include "nnpoly/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "nnpoly/error.hpp"

namespace nnpoly {

void NetworkWeights::validate() const {
  if (w.rows() < 2) throw DimensionError("weights: w needs at least two rows (bias + one input)");
  if (w.cols() < 1) throw DimensionError("weights: at least one hidden unit required");
  if (v.size() != w.cols() + 1) {
    throw DimensionError("weights: v has " + std::to_string(v.size()) + " entries, expected h1 + 1 = " +
                         std::to_string(w.cols() + 1));
  }
  if (!w.allFinite() || !v.allFinite()) throw ValidationError("weights: non-finite entry");
}

namespace {

void check_input(const NetworkWeights& net, Eigen::Index cols, const char* op) {
  if (cols != net.inputs()) {
    throw DimensionError(std::string(op) + ": input has " + std::to_string(cols) +
                         " features, network expects " + std::to_string(net.inputs()));
  }
}

double potential(const NetworkWeights& net, int j, auto&& xi) {
  double u = net.w(0, j);
  for (int i = 1; i <= net.inputs(); ++i) u += net.w(i, j) * xi(i - 1);
  return u;
}

}  // namespace

double forward(const NetworkWeights& net, std::span<const double> x) {
  check_input(net, static_cast<Eigen::Index>(x.size()), "forward");
  auto xi = [&](int i) { return x[static_cast<std::size_t>(i)]; };
  double z = net.v(0);
  for (int j = 0; j < net.hidden(); ++j) z += net.v(j + 1) * activate(net.activation, potential(net, j, xi));
  return z;
}

Eigen::MatrixXd potentials(const NetworkWeights& net, const Eigen::MatrixXd& x) {
  check_input(net, x.cols(), "potentials");
  Eigen::MatrixXd u(x.rows(), net.hidden());
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    auto xi = [&](int i) { return x(k, i); };
    for (int j = 0; j < net.hidden(); ++j) u(k, j) = potential(net, j, xi);
  }
  return u;
}

Eigen::VectorXd predict(const NetworkWeights& net, const Eigen::MatrixXd& x) {
  check_input(net, x.cols(), "predict");
  Eigen::VectorXd z(x.rows());
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    auto xi = [&](int i) { return x(k, i); };
    double acc = net.v(0);
    for (int j = 0; j < net.hidden(); ++j) acc += net.v(j + 1) * activate(net.activation, potential(net, j, xi));
    z(k) = acc;
  }
  return z;
}

double loss_and_gradient(const NetworkWeights& net, const Eigen::MatrixXd& x,
                         const Eigen::VectorXd& y, Gradient& grad) {
  check_input(net, x.cols(), "loss_and_gradient");
  if (y.size() != x.rows()) throw DimensionError("loss_and_gradient: X and y row counts differ");
  const int p = net.inputs();
  const int h1 = net.hidden();
  grad.w.setZero(p + 1, h1);
  grad.v.setZero(h1 + 1);
  std::vector<ActivationValue> act(static_cast<std::size_t>(h1));
  double loss = 0.0;
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    auto xi = [&](int i) { return x(k, i); };
    double z = net.v(0);
    for (int j = 0; j < h1; ++j) {
      act[static_cast<std::size_t>(j)] = activate_with_derivative(net.activation, potential(net, j, xi));
      z += net.v(j + 1) * act[static_cast<std::size_t>(j)].value;
    }
    const double r = z - y(k);
    loss += 0.5 * r * r;
    grad.v(0) += r;
    for (int j = 0; j < h1; ++j) {
      const auto& a = act[static_cast<std::size_t>(j)];
      grad.v(j + 1) += r * a.value;
      const double delta = r * net.v(j + 1) * a.derivative;
      grad.w(0, j) += delta;
      for (int i = 1; i <= p; ++i) grad.w(i, j) += delta * x(k, i - 1);
    }
  }
  return loss;
}

void TrainConfig::validate() const {
  if (max_epochs < 1) throw ValidationError("train: max_epochs must be >= 1");
  if (!(gradient_tolerance >= 0.0)) throw ValidationError("train: gradient tolerance must be >= 0");
  if (!(decrease > 0.0 && decrease < 1.0 && increase > 1.0)) {
    throw ValidationError("train: RPROP factors must satisfy 0 < decrease < 1 < increase");
  }
  if (!(min_step > 0.0 && min_step <= initial_step && initial_step <= max_step)) {
    throw ValidationError("train: RPROP steps must satisfy 0 < min <= initial <= max");
  }
}

NetworkWeights initialize_weights(int p, int h1, Activation act, double scale, std::uint64_t seed) {
  if (scale <= 0.0) scale = 1.0 / std::sqrt(static_cast<double>(p + 1));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  NetworkWeights net;
  net.activation = act;
  net.w.resize(p + 1, h1);
  net.v.resize(h1 + 1);
  for (int i = 0; i <= p; ++i) {
    for (int j = 0; j < h1; ++j) net.w(i, j) = dist(rng);
  }
  for (int j = 0; j <= h1; ++j) net.v(j) = dist(rng);
  return net;
}

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

TrainResult train_rprop(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int h1,
                        Activation act, const TrainConfig& cfg) {
  cfg.validate();
  if (x.rows() < 1) throw ValidationError("train: need at least one sample");
  if (y.size() != x.rows()) throw DimensionError("train: X and y row counts differ");
  if (h1 < 1 || h1 > kMaxHidden) {
    throw ValidationError("train: hidden units must be in [1, " + std::to_string(kMaxHidden) + "]");
  }
  const int p = static_cast<int>(x.cols());
  if (p < 1) throw DimensionError("train: need at least one feature");

  TrainResult result;
  result.weights = initialize_weights(p, h1, act, cfg.init_scale, cfg.seed);
  NetworkWeights& net = result.weights;

  // Flat views: w (column-major) followed by v.
  const Eigen::Index nw = net.w.size();
  const Eigen::Index n_params = nw + net.v.size();
  auto param = [&](Eigen::Index k) -> double& { return k < nw ? net.w.data()[k] : net.v.data()[k - nw]; };

  Eigen::VectorXd step = Eigen::VectorXd::Constant(n_params, cfg.initial_step);
  Eigen::VectorXd prev_grad = Eigen::VectorXd::Zero(n_params);
  Eigen::VectorXd prev_delta = Eigen::VectorXd::Zero(n_params);
  Eigen::VectorXd g(n_params);
  Gradient grad;
  double prev_loss = std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(x.rows());

  result.loss_trace.reserve(static_cast<std::size_t>(cfg.max_epochs));
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const double loss = loss_and_gradient(net, x, y, grad);
    if (!std::isfinite(loss)) {
      throw TrainingError("training diverged: non-finite loss at epoch " + std::to_string(epoch), epoch);
    }
    result.loss_trace.push_back(2.0 * loss / n);
    result.epochs = epoch;
    g.head(nw) = Eigen::Map<const Eigen::VectorXd>(grad.w.data(), nw);
    g.tail(net.v.size()) = grad.v;
    if (g.cwiseAbs().maxCoeff() < cfg.gradient_tolerance) {
      result.converged = true;
      break;
    }

    const bool error_increased = loss > prev_loss;
    for (Eigen::Index k = 0; k < n_params; ++k) {
      const double s = prev_grad(k) * g(k);
      if (s > 0.0) {
        step(k) = std::min(step(k) * cfg.increase, cfg.max_step);
        prev_delta(k) = -sign(g(k)) * step(k);
        param(k) += prev_delta(k);
        prev_grad(k) = g(k);
      } else if (s < 0.0) {
        step(k) = std::max(step(k) * cfg.decrease, cfg.min_step);
        if (error_increased) param(k) -= prev_delta(k);
        prev_delta(k) = 0.0;
        prev_grad(k) = 0.0;
      } else {
        prev_delta(k) = -sign(g(k)) * step(k);
        param(k) += prev_delta(k);
        prev_grad(k) = g(k);
      }
    }
    prev_loss = loss;
  }
  return result;
}

}  // namespace nnpoly
