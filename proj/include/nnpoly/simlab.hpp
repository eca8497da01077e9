#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nnpoly/activation.hpp"
#include "nnpoly/network.hpp"
#include "nnpoly/polynomial.hpp"
#include "nnpoly/scaling.hpp"

namespace nnpoly {

// splitmix64 finalizer; derives independent stream seeds from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

struct Dataset {
  Eigen::MatrixXd x;  // n x p
  Eigen::VectorXd y;

  int samples() const { return static_cast<int>(x.rows()); }
  int features() const { return static_cast<int>(x.cols()); }
};

// Synthetic polynomial regression data: feature i ~ Normal(mu_i, variance)
// with mu_i ~ Uniform(mean_lo, mean_hi) drawn once per dataset, every
// coefficient of a full degree-`degree` polynomial ~ Uniform(coeff_lo,
// coeff_hi), plus Normal(0, noise_sd) response noise.
struct DataGenConfig {
  int n = 200;
  int p = 3;
  int degree = 2;
  double mean_lo = -10.0;
  double mean_hi = 10.0;
  double variance = 1.0;
  double coeff_lo = -5.0;
  double coeff_hi = 5.0;
  double noise_sd = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GeneratedData {
  Dataset data;
  Polynomial generator;
};

GeneratedData generate_data(const DataGenConfig& cfg);

struct Split {
  Dataset train;
  Dataset test;
  std::vector<int> train_rows;
  std::vector<int> test_rows;
};

// Uniform random permutation; the first round(n * fraction) rows train.
Split split(const Dataset& data, double train_fraction, std::uint64_t seed);

// Applies a fitted scaling to both features and response.
Dataset apply_scaling(const ScalingSpec& spec, const Dataset& data);

struct ExperimentConfig {
  DataGenConfig data;
  double train_fraction = 0.75;
  std::uint64_t split_seed = 0;
  Activation activation = Activation::softplus;
  ScalingMode scaling = ScalingMode::symmetric;
  int hidden = 4;
  int order = 3;
  TrainConfig train;
  double epsilon = kDefaultEpsilon;
};

struct ExperimentRecord {
  Activation activation = Activation::softplus;
  ScalingMode scaling = ScalingMode::symmetric;
  int hidden = 0;
  int order = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";

  // Test-split metrics in the scaled space the network was trained in.
  double mse_nn_pr = 0.0;
  double mse_nn_y = 0.0;
  double var_nn = 0.0;
  double coverage = 0.0;

  double train_mse = 0.0;
  int epochs = 0;
  bool converged = false;
  double mean_abs_w = 0.0;
  double max_abs_w = 0.0;
  double mean_abs_v = 0.0;
  double max_abs_potential = 0.0;

  double wall_seconds = 0.0;

  bool ok() const { return status == "ok"; }
};

// Mean squared difference between two prediction vectors.
double mean_squared_difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// generate -> split -> scale -> train -> transcode -> measure, for cfg.order.
ExperimentRecord run_experiment(const ExperimentConfig& cfg);

// As run_experiment but transcodes one trained network at every order.
std::vector<ExperimentRecord> run_experiment_orders(const ExperimentConfig& cfg,
                                                    std::span<const int> orders);

struct GridConfig {
  ExperimentConfig base;
  std::vector<Activation> activations{Activation::softplus, Activation::tanh, Activation::sigmoid};
  std::vector<ScalingMode> scalings{ScalingMode::unit, ScalingMode::symmetric};
  std::vector<int> hidden{4, 10};
  std::vector<int> orders{3, 5, 7};
  int reps = 50;
  std::uint64_t base_seed = 0;
  // Keep one dataset for every repetition and vary only the initialization.
  bool fixed_data = false;
  int threads = 1;

  void validate() const;
};

// Seeds of repetition `rep` (rep seed = base XOR rep).
struct RepSeeds {
  std::uint64_t rep;
  std::uint64_t data;
  std::uint64_t split;
  std::uint64_t init;
};
RepSeeds rep_seeds(const GridConfig& grid, int rep);

struct CellSummary {
  Activation activation;
  ScalingMode scaling;
  int hidden;
  int order;
  int runs = 0;
  int failures = 0;
  double mse_q10 = 0.0;
  double mse_q50 = 0.0;
  double mse_q90 = 0.0;
  double nn_y_q50 = 0.0;
  double coverage_q50 = 0.0;
};

struct BatchResult {
  std::vector<ExperimentRecord> records;  // grid cell order, then repetition
  std::vector<CellSummary> summary;
};

// Linear-interpolation quantile of the sorted sample (R type 7).
double quantile(std::vector<double> values, double prob);

BatchResult run_batch(const GridConfig& grid);

// records.csv (one row per run), summary.csv (per cell quantiles) and
// timings.csv (wall time, kept apart so the first two are reproducible).
void write_batch(const BatchResult& batch, const std::filesystem::path& dir);
std::string records_csv(const std::vector<ExperimentRecord>& records);
std::string summary_csv(const std::vector<CellSummary>& summary);

struct Box {
  double x1_lo, x1_hi, x2_lo, x2_hi;
};

Box bounding_box(const Eigen::MatrixXd& x);
// Box scaled by `factor` about its center.
Box enlarge(const Box& box, double factor);

inline constexpr double kExtendedBoxFactor = 3.0;

struct SurfaceGrid {
  int resolution;
  std::vector<std::array<double, 3>> points;  // (x1, x2, z); x2 outer, x1 inner
};

SurfaceGrid surface_grid(const Polynomial& poly, const Box& box, int resolution);
std::string surface_csv(const SurfaceGrid& grid);
// Largest |a - b| over matching grid points.
double max_grid_difference(const SurfaceGrid& a, const SurfaceGrid& b);

// Fixed data, several independently initialized networks, an OLS baseline
// and the generating polynomial, all compared in original units.
struct CoefficientStudyConfig {
  ExperimentConfig base;  // data, split, activation, scaling, hidden, order, train
  int networks = 4;
  int resolution = 41;
  double extend = kExtendedBoxFactor;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CoefficientStudy {
  GeneratedData generated;
  Split parts;
  ScalingSpec scaling;
  OlsFit ols;
  std::vector<NetworkWeights> networks;
  std::vector<Polynomial> nn_polys;  // original units
  Box data_box;
  Box extended_box;
};

CoefficientStudy run_coefficient_study(const CoefficientStudyConfig& cfg);

// Writes polynomials, a coefficient table and data/extended surface grids.
void write_coefficient_study(const CoefficientStudy& study, const CoefficientStudyConfig& cfg,
                             const std::filesystem::path& dir);

}  // namespace nnpoly
