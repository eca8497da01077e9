#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "nnpoly/error.hpp"
#include "nnpoly/file_formats.hpp"
#include "nnpoly/simlab.hpp"
#include "nnpoly/transcode.hpp"

using namespace nnpoly;

namespace {

GridConfig small_grid() {
  GridConfig grid;
  grid.base.data.n = 60;
  grid.base.train.max_epochs = 200;
  grid.activations = {Activation::softplus, Activation::tanh};
  grid.scalings = {ScalingMode::symmetric};
  grid.hidden = {2};
  grid.orders = {2, 3};
  grid.reps = 3;
  grid.base_seed = 2024;
  return grid;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("nnpoly_simlab_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(MixSeed, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 10; ++s) {
    for (std::uint64_t k = 0; k < 5; ++k) seen.insert(mix_seed(s, k));
  }
  EXPECT_EQ(seen.size(), 50u);
  EXPECT_EQ(mix_seed(7, 1), mix_seed(7, 1));
}

TEST(GenerateData, DefaultDesign) {
  DataGenConfig cfg;
  EXPECT_EQ(cfg.n, 200);
  EXPECT_EQ(cfg.p, 3);
  EXPECT_EQ(cfg.degree, 2);
  EXPECT_EQ(cfg.noise_sd, 0.1);
  cfg.seed = 5;
  const auto g = generate_data(cfg);
  EXPECT_EQ(g.data.samples(), 200);
  EXPECT_EQ(g.data.features(), 3);
  EXPECT_EQ(g.generator.terms().size(), 10u);
  for (const auto& [m, c] : g.generator.terms()) {
    EXPECT_GE(c, -5.0);
    EXPECT_LE(c, 5.0);
  }
  // Each feature is N(mu, 1) with mu in [-10, 10].
  for (int i = 0; i < 3; ++i) {
    const double mean = g.data.x.col(i).mean();
    EXPECT_LT(std::abs(mean), 10.5);
    const double var = (g.data.x.col(i).array() - mean).square().mean();
    EXPECT_NEAR(var, 1.0, 0.3);
  }
  // Residuals are the noise.
  double ss = 0.0;
  for (int k = 0; k < 200; ++k) {
    const std::vector<double> row{g.data.x(k, 0), g.data.x(k, 1), g.data.x(k, 2)};
    ss += std::pow(g.data.y(k) - g.generator.evaluate(row), 2);
  }
  EXPECT_NEAR(std::sqrt(ss / 200), 0.1, 0.03);
}

TEST(GenerateData, NoiselessIsRecoveredByOls) {
  DataGenConfig cfg;
  cfg.noise_sd = 0.0;
  cfg.seed = 8;
  const auto g = generate_data(cfg);
  const auto fit = ols_fit(g.data.x, g.data.y, cfg.degree);
  for (const auto& m : monomials_up_to(3, 2)) EXPECT_NEAR(fit.poly.coeff(m), g.generator.coeff(m), 1e-8);
}

TEST(GenerateData, SeedDeterminismAndValidation) {
  DataGenConfig cfg;
  cfg.seed = 42;
  const auto a = generate_data(cfg);
  const auto b = generate_data(cfg);
  EXPECT_EQ(a.data.x, b.data.x);
  EXPECT_EQ(a.data.y, b.data.y);
  cfg.n = 1;
  EXPECT_THROW(generate_data(cfg), ValidationError);
  cfg = DataGenConfig{};
  cfg.variance = 0.0;
  EXPECT_THROW(generate_data(cfg), ValidationError);
  cfg = DataGenConfig{};
  cfg.noise_sd = -1.0;
  EXPECT_THROW(generate_data(cfg), ValidationError);
}

TEST(Split, SizesDisjointDeterministic) {
  DataGenConfig cfg;
  cfg.seed = 1;
  const auto g = generate_data(cfg);
  const auto s = split(g.data, 0.75, 99);
  EXPECT_EQ(s.train.samples(), 150);
  EXPECT_EQ(s.test.samples(), 50);
  std::set<int> all(s.train_rows.begin(), s.train_rows.end());
  for (int r : s.test_rows) EXPECT_TRUE(all.insert(r).second);
  EXPECT_EQ(all.size(), 200u);
  for (int k = 0; k < 150; ++k) EXPECT_EQ(s.train.y(k), g.data.y(s.train_rows[static_cast<std::size_t>(k)]));
  const auto again = split(g.data, 0.75, 99);
  EXPECT_EQ(again.train_rows, s.train_rows);
  EXPECT_THROW(split(g.data, 1.0, 1), ValidationError);
  EXPECT_THROW(split(g.data, 0.0, 1), ValidationError);
}

TEST(Scaling, TargetsAndRoundTrip) {
  DataGenConfig cfg;
  cfg.seed = 3;
  const auto g = generate_data(cfg);
  for (auto mode : {ScalingMode::unit, ScalingMode::symmetric}) {
    const auto spec = fit_scaling(g.data.x, g.data.y, mode);
    const auto scaled = apply_scaling(spec, g.data);
    const double lo = mode == ScalingMode::unit ? 0.0 : -1.0;
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(scaled.x.col(i).minCoeff(), lo, 1e-12);
      EXPECT_NEAR(scaled.x.col(i).maxCoeff(), 1.0, 1e-12);
    }
    EXPECT_NEAR(scaled.y.minCoeff(), lo, 1e-12);
    EXPECT_NEAR(scaled.y.maxCoeff(), 1.0, 1e-12);
    const Eigen::MatrixXd xb = spec.invert_features(scaled.x);
    const Eigen::VectorXd yb = spec.invert_response(scaled.y);
    EXPECT_LE((xb - g.data.x).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + g.data.x.cwiseAbs().maxCoeff()));
    EXPECT_LE((yb - g.data.y).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + g.data.y.cwiseAbs().maxCoeff()));
  }
  const auto none = fit_scaling(g.data.x, g.data.y, ScalingMode::none);
  EXPECT_EQ(apply_scaling(none, g.data).x, g.data.x);
}

TEST(Scaling, RejectsConstantColumn) {
  Eigen::MatrixXd x(4, 2);
  x << 1, 5, 2, 5, 3, 5, 4, 5;
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 4;
  EXPECT_THROW(fit_scaling(x, y, ScalingMode::unit), ValidationError);
  EXPECT_NO_THROW(fit_scaling(x, y, ScalingMode::none));
  EXPECT_EQ(scaling_mode_from_string("[-1,1]"), ScalingMode::symmetric);
  EXPECT_EQ(scaling_mode_from_string("[0,1]"), ScalingMode::unit);
  EXPECT_THROW(scaling_mode_from_string("zscore"), ValidationError);
}

// Scaling depends only on the training rows.
TEST(Scaling, NoTestLeakage) {
  DataGenConfig cfg;
  cfg.seed = 4;
  auto g = generate_data(cfg);
  const auto s1 = split(g.data, 0.75, 5);
  const auto spec1 = fit_scaling(s1.train.x, s1.train.y, ScalingMode::symmetric);
  for (int r : s1.test_rows) {
    g.data.x.row(r) *= 1000.0;
    g.data.y(r) = -1e6;
  }
  const auto s2 = split(g.data, 0.75, 5);
  const auto spec2 = fit_scaling(s2.train.x, s2.train.y, ScalingMode::symmetric);
  EXPECT_EQ(spec1.feature_min, spec2.feature_min);
  EXPECT_EQ(spec1.feature_max, spec2.feature_max);
  EXPECT_EQ(spec1.response_min, spec2.response_min);
  EXPECT_EQ(spec1.response_max, spec2.response_max);
}

TEST(Quantile, Type7) {
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2, 5}, 0.1), 1.4);
  EXPECT_DOUBLE_EQ(quantile({7}, 0.9), 7.0);
  EXPECT_TRUE(std::isnan(quantile({}, 0.5)));
}

TEST(RunExperiment, RecordComplete) {
  ExperimentConfig cfg;
  cfg.data.seed = 10;
  cfg.split_seed = 11;
  cfg.train.seed = 12;
  cfg.train.max_epochs = 500;
  const auto r = run_experiment(cfg);
  ASSERT_TRUE(r.ok()) << r.status;
  EXPECT_GE(r.mse_nn_pr, 0.0);
  EXPECT_GE(r.mse_nn_y, 0.0);
  EXPECT_GT(r.var_nn, 0.0);
  EXPECT_GE(r.coverage, 0.0);
  EXPECT_LE(r.coverage, 1.0);
  EXPECT_EQ(r.epochs, 500);
  EXPECT_EQ(r.order, 3);
  EXPECT_GT(r.max_abs_w, 0.0);
}

// The MSE(NN, PR) metric recomputed from scratch.
TEST(RunExperiment, MetricMatchesIndependentComputation) {
  ExperimentConfig cfg;
  cfg.data.seed = 20;
  cfg.split_seed = 21;
  cfg.train.seed = 22;
  cfg.train.max_epochs = 300;
  const auto r = run_experiment(cfg);

  const auto g = generate_data(cfg.data);
  const auto parts = split(g.data, cfg.train_fraction, cfg.split_seed);
  const auto spec = fit_scaling(parts.train.x, parts.train.y, cfg.scaling);
  const auto train = apply_scaling(spec, parts.train);
  const auto test = apply_scaling(spec, parts.test);
  const auto net = train_rprop(train.x, train.y, cfg.hidden, cfg.activation, cfg.train).weights;
  double sum = 0.0;
  for (int k = 0; k < test.samples(); ++k) {
    const std::vector<double> row{test.x(k, 0), test.x(k, 1), test.x(k, 2)};
    const double d = forward(net, row) - taylor_truncated_output(net, cfg.order, row);
    sum += d * d;
  }
  const double expected = sum / test.samples();
  EXPECT_NEAR(r.mse_nn_pr, expected, 1e-12 * (1.0 + expected));
}

TEST(RunExperiment, FailureIsRecorded) {
  ExperimentConfig cfg;
  cfg.data.seed = 1;
  cfg.hidden = 0;
  const auto r = run_experiment(cfg);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.status.rfind("failed: ", 0), 0u);
  EXPECT_TRUE(std::isnan(r.mse_nn_pr));
}

TEST(RunBatch, OrderingAndSummary) {
  const auto grid = small_grid();
  const auto batch = run_batch(grid);
  ASSERT_EQ(batch.records.size(), 2u * 1 * 1 * 2 * 3);
  ASSERT_EQ(batch.summary.size(), 4u);
  std::size_t k = 0;
  for (auto a : grid.activations) {
    for (int q : grid.orders) {
      for (int rep = 0; rep < grid.reps; ++rep, ++k) {
        EXPECT_EQ(batch.records[k].activation, a);
        EXPECT_EQ(batch.records[k].order, q);
        EXPECT_EQ(batch.records[k].rep, rep);
        EXPECT_EQ(batch.records[k].seed, grid.base_seed ^ static_cast<std::uint64_t>(rep));
      }
    }
  }
  std::vector<double> mse;
  for (int rep = 0; rep < 3; ++rep) mse.push_back(batch.records[static_cast<std::size_t>(rep)].mse_nn_pr);
  EXPECT_DOUBLE_EQ(batch.summary[0].mse_q50, quantile(mse, 0.5));
  EXPECT_EQ(batch.summary[0].runs, 3);
}

TEST(RunBatch, SingleRepEqualsRunExperiment) {
  auto grid = small_grid();
  grid.reps = 1;
  grid.activations = {Activation::sigmoid};
  grid.orders = {3};
  const auto batch = run_batch(grid);
  const auto seeds = rep_seeds(grid, 0);
  ExperimentConfig cfg = grid.base;
  cfg.activation = Activation::sigmoid;
  cfg.scaling = ScalingMode::symmetric;
  cfg.hidden = 2;
  cfg.order = 3;
  cfg.data.seed = seeds.data;
  cfg.split_seed = seeds.split;
  cfg.train.seed = seeds.init;
  const auto r = run_experiment(cfg);
  EXPECT_EQ(batch.records[0].mse_nn_pr, r.mse_nn_pr);
  EXPECT_EQ(batch.records[0].coverage, r.coverage);
}

TEST(RunBatch, DeterministicAcrossRunsAndThreads) {
  auto grid = small_grid();
  const auto a = run_batch(grid);
  const auto b = run_batch(grid);
  grid.threads = 3;
  const auto c = run_batch(grid);
  EXPECT_EQ(records_csv(a.records), records_csv(b.records));
  EXPECT_EQ(records_csv(a.records), records_csv(c.records));
  EXPECT_EQ(summary_csv(a.summary), summary_csv(c.summary));
}

TEST(RunBatch, FixedDataSharesDataset) {
  auto grid = small_grid();
  grid.fixed_data = true;
  const auto s0 = rep_seeds(grid, 0);
  const auto s1 = rep_seeds(grid, 1);
  EXPECT_EQ(s0.data, s1.data);
  EXPECT_EQ(s0.split, s1.split);
  EXPECT_NE(s0.init, s1.init);
  grid.fixed_data = false;
  EXPECT_NE(rep_seeds(grid, 0).data, rep_seeds(grid, 1).data);
}

TEST(RunBatch, WritesTables) {
  auto grid = small_grid();
  grid.reps = 1;
  const auto dir = temp_dir("batch");
  write_batch(run_batch(grid), dir);
  const auto records = read_text_file(dir / "records.csv");
  EXPECT_EQ(records.rfind("activation,scaling,hidden,order,rep,seed,status,mse_nn_pr", 0), 0u);
  EXPECT_EQ(std::count(records.begin(), records.end(), '\n'), 5);
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "timings.csv"));
  EXPECT_EQ(records.find("wall"), std::string::npos);
}

TEST(RunBatch, Validation) {
  auto grid = small_grid();
  grid.reps = 0;
  EXPECT_THROW(run_batch(grid), ValidationError);
  grid = small_grid();
  grid.orders = {11};
  EXPECT_THROW(run_batch(grid), ValidationError);
}

TEST(Surface, ConstantPolyAndBoxes) {
  Polynomial poly(2, 0);
  poly.set({0, 0}, 3.0);
  const Box box{0.0, 1.0, -2.0, 2.0};
  const auto grid = surface_grid(poly, box, 5);
  ASSERT_EQ(grid.points.size(), 25u);
  for (const auto& pt : grid.points) EXPECT_EQ(pt[2], 3.0);
  EXPECT_EQ(grid.points[1][0], 0.25);  // x1 varies fastest
  EXPECT_EQ(grid.points[1][1], -2.0);
  const auto big = enlarge(box, 3.0);
  EXPECT_DOUBLE_EQ(big.x1_lo, -1.0);
  EXPECT_DOUBLE_EQ(big.x1_hi, 2.0);
  EXPECT_DOUBLE_EQ(big.x2_lo, -6.0);
  EXPECT_EQ(surface_csv(grid).rfind("x1,x2,z\n", 0), 0u);
  EXPECT_THROW(surface_grid(Polynomial(3, 1), box, 5), DimensionError);
  EXPECT_EQ(max_grid_difference(grid, grid), 0.0);
}

TEST(CoefficientStudy, SmallRun) {
  CoefficientStudyConfig cfg;
  cfg.base.data.p = 2;
  cfg.base.order = 2;
  cfg.base.train.max_epochs = 300;
  cfg.networks = 2;
  cfg.resolution = 5;
  cfg.seed = 3;
  const auto study = run_coefficient_study(cfg);
  ASSERT_EQ(study.nn_polys.size(), 2u);
  EXPECT_EQ(study.ols.poly.degree(), 2);
  EXPECT_LT(study.extended_box.x1_lo, study.data_box.x1_lo);
  const auto dir = temp_dir("study");
  write_coefficient_study(study, cfg, dir);
  for (const char* name : {"original.json", "ols.json", "nn_1.json", "nn_2.json", "nn_1_weights.json",
                           "coefficients.csv", "surface_ols_extended.csv", "surface_original_data.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  }
  const auto poly = load_polynomial(dir / "nn_2.json");
  EXPECT_EQ(coefficient_distance(poly, study.nn_polys[1]).max_abs, 0.0);
  cfg.base.data.p = 3;
  EXPECT_THROW(run_coefficient_study(cfg), ValidationError);
}
