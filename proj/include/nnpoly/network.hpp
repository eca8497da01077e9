#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nnpoly/activation.hpp"

namespace nnpoly {

inline constexpr int kMaxHidden = 128;

// Single hidden layer, single linear output.
//
//   u_j = w(0, j) + sum_i w(i, j) x_i      (row 0 pairs with the constant input 1)
//   z   = v(0) + sum_j v(j) g(u_j)
struct NetworkWeights {
  Eigen::MatrixXd w;  // (p + 1) x h1
  Eigen::VectorXd v;  // h1 + 1
  Activation activation = Activation::softplus;

  int inputs() const { return static_cast<int>(w.rows()) - 1; }
  int hidden() const { return static_cast<int>(w.cols()); }

  // Throws unless dimensions agree and every entry is finite.
  void validate() const;
};

double forward(const NetworkWeights& net, std::span<const double> x);

// Row k holds the synaptic potentials u_j(x_k) of sample k.
Eigen::MatrixXd potentials(const NetworkWeights& net, const Eigen::MatrixXd& x);

// Network output for every row of x.
Eigen::VectorXd predict(const NetworkWeights& net, const Eigen::MatrixXd& x);

// Gradient of E = 1/2 sum_k (z_k - y_k)^2 in the same layout as the weights.
struct Gradient {
  Eigen::MatrixXd w;
  Eigen::VectorXd v;
};

// Returns E and fills grad.
double loss_and_gradient(const NetworkWeights& net, const Eigen::MatrixXd& x,
                         const Eigen::VectorXd& y, Gradient& grad);

// iRPROP+ settings. Defaults are the classic published constants.
struct TrainConfig {
  int max_epochs = 10000;
  double gradient_tolerance = 1e-5;  // stop when max |dE/dw| falls below
  double initial_step = 0.1;
  double increase = 1.2;
  double decrease = 0.5;
  double min_step = 1e-6;
  double max_step = 50.0;
  // Uniform init half-width; <= 0 selects 1 / sqrt(p + 1).
  double init_scale = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainResult {
  NetworkWeights weights;
  std::vector<double> loss_trace;  // training MSE after each epoch
  int epochs = 0;
  bool converged = false;  // gradient tolerance reached before max_epochs
};

// Uniform [-s, s] initialization drawn from a seeded stream.
NetworkWeights initialize_weights(int p, int h1, Activation act, double scale, std::uint64_t seed);

// Full-batch resilient backpropagation with weight backtracking (iRPROP+).
// Deterministic for a given seed.
TrainResult train_rprop(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int h1,
                        Activation act, const TrainConfig& cfg);

}  // namespace nnpoly
