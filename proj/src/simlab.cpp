#include "nnpoly/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include "nnpoly/error.hpp"
#include "nnpoly/file_formats.hpp"
#include "nnpoly/transcode.hpp"

namespace nnpoly {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void DataGenConfig::validate() const {
  if (n < 2) throw ValidationError("data: n must be >= 2");
  if (p < 1 || p > 10) throw ValidationError("data: p must be in [1, 10]");
  if (degree < 0 || degree > 10) throw ValidationError("data: degree must be in [0, 10]");
  if (!(variance > 0.0)) throw ValidationError("data: variance must be positive");
  if (!(noise_sd >= 0.0)) throw ValidationError("data: noise_sd must be >= 0");
  if (!(mean_lo <= mean_hi)) throw ValidationError("data: mean_range must satisfy lo <= hi");
  if (!(coeff_lo <= coeff_hi)) throw ValidationError("data: coeff_range must satisfy lo <= hi");
}

GeneratedData generate_data(const DataGenConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> mean_dist(cfg.mean_lo, cfg.mean_hi);
  std::vector<double> means(static_cast<std::size_t>(cfg.p));
  for (auto& m : means) m = mean_dist(rng);

  Polynomial generator(cfg.p, cfg.degree);
  std::uniform_real_distribution<double> coeff_dist(cfg.coeff_lo, cfg.coeff_hi);
  for (const auto& m : monomials_up_to(cfg.p, cfg.degree)) {
    generator.set(m, coeff_dist(rng));
  }

  Dataset d;
  d.x.resize(cfg.n, cfg.p);
  d.y.resize(cfg.n);
  const double sd = std::sqrt(cfg.variance);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  for (int k = 0; k < cfg.n; ++k) {
    for (int i = 0; i < cfg.p; ++i) d.x(k, i) = means[static_cast<std::size_t>(i)] + sd * unit_normal(rng);
  }
  std::vector<double> row(static_cast<std::size_t>(cfg.p));
  for (int k = 0; k < cfg.n; ++k) {
    for (int i = 0; i < cfg.p; ++i) row[static_cast<std::size_t>(i)] = d.x(k, i);
    d.y(k) = generator.evaluate(row) + cfg.noise_sd * unit_normal(rng);
  }
  return {std::move(d), std::move(generator)};
}

namespace {

Dataset take_rows(const Dataset& data, const std::vector<int>& rows) {
  Dataset out;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), data.x.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.x.row(static_cast<Eigen::Index>(r)) = data.x.row(rows[r]);
    out.y(static_cast<Eigen::Index>(r)) = data.y(rows[r]);
  }
  return out;
}

}  // namespace

Split split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("split: train fraction must be in (0, 1)");
  }
  const int n = data.samples();
  const auto n_train = static_cast<int>(std::llround(n * train_fraction));
  if (n_train < 1 || n_train >= n) {
    throw ValidationError("split: " + std::to_string(n) + " samples leave an empty split at fraction " +
                          std::to_string(train_fraction));
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  Split s;
  s.train_rows.assign(perm.begin(), perm.begin() + n_train);
  s.test_rows.assign(perm.begin() + n_train, perm.end());
  s.train = take_rows(data, s.train_rows);
  s.test = take_rows(data, s.test_rows);
  return s;
}

Dataset apply_scaling(const ScalingSpec& spec, const Dataset& data) {
  return {spec.apply_features(data.x), spec.apply_response(data.y)};
}

double mean_squared_difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw DimensionError("mean_squared_difference: length mismatch");
  if (a.size() == 0) return 0.0;
  double s = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) s += (a(k) - b(k)) * (a(k) - b(k));
  return s / static_cast<double>(a.size());
}

namespace {

double population_variance(const Eigen::VectorXd& v) {
  if (v.size() == 0) return 0.0;
  const double mean = v.mean();
  double s = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) s += (v(k) - mean) * (v(k) - mean);
  return s / static_cast<double>(v.size());
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return s;
}

}  // namespace

std::vector<ExperimentRecord> run_experiment_orders(const ExperimentConfig& cfg, std::span<const int> orders) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  std::vector<ExperimentRecord> records;
  for (int q : orders) {
    ExperimentRecord r;
    r.activation = cfg.activation;
    r.scaling = cfg.scaling;
    r.hidden = cfg.hidden;
    r.order = q;
    r.seed = cfg.train.seed;
    records.push_back(r);
  }
  try {
    const auto generated = generate_data(cfg.data);
    const auto parts = split(generated.data, cfg.train_fraction, cfg.split_seed);
    const auto spec = fit_scaling(parts.train.x, parts.train.y, cfg.scaling);
    const Dataset train = apply_scaling(spec, parts.train);
    const Dataset test = apply_scaling(spec, parts.test);

    const auto trained = train_rprop(train.x, train.y, cfg.hidden, cfg.activation, cfg.train);
    const NetworkWeights& net = trained.weights;
    const Eigen::VectorXd nn_test = predict(net, test.x);
    const Eigen::MatrixXd u = potentials(net, test.x);

    for (auto& r : records) {
      r.mse_nn_y = mean_squared_difference(nn_test, test.y);
      r.var_nn = population_variance(nn_test);
      r.train_mse = mean_squared_difference(predict(net, train.x), train.y);
      r.epochs = trained.epochs;
      r.converged = trained.converged;
      r.mean_abs_w = net.w.cwiseAbs().mean();
      r.max_abs_w = net.w.cwiseAbs().maxCoeff();
      r.mean_abs_v = net.v.cwiseAbs().mean();
      r.max_abs_potential = u.size() ? u.cwiseAbs().maxCoeff() : 0.0;

      const auto result = nn_to_poly(net, r.order);
      Eigen::VectorXd pr(test.x.rows());
      std::vector<double> row(static_cast<std::size_t>(test.features()));
      for (Eigen::Index k = 0; k < test.x.rows(); ++k) {
        for (int i = 0; i < test.features(); ++i) row[static_cast<std::size_t>(i)] = test.x(k, i);
        pr(k) = result.poly.evaluate(row);
      }
      r.mse_nn_pr = mean_squared_difference(nn_test, pr);
      r.coverage = coverage(net, test.x, r.order, cfg.epsilon).overall;
      r.wall_seconds = elapsed();
    }
  } catch (const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (auto& r : records) {
      r.status = "failed: " + one_line(e.what());
      r.mse_nn_pr = r.mse_nn_y = r.var_nn = r.coverage = r.train_mse = nan;
      r.wall_seconds = elapsed();
    }
  }
  return records;
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
  const int orders[] = {cfg.order};
  return run_experiment_orders(cfg, orders).front();
}

void GridConfig::validate() const {
  base.data.validate();
  base.train.validate();
  if (activations.empty() || scalings.empty() || hidden.empty() || orders.empty()) {
    throw ValidationError("grid: every axis needs at least one value");
  }
  for (int h : hidden) {
    if (h < 1 || h > kMaxHidden) throw ValidationError("grid: hidden units must be in [1, 128]");
  }
  for (int q : orders) {
    if (q < 1 || q > kMaxTaylorOrder) throw ValidationError("grid: orders must be in [1, 10]");
  }
  if (reps < 1) throw ValidationError("grid: reps must be >= 1");
  if (threads < 1) throw ValidationError("grid: threads must be >= 1");
  if (!(base.train_fraction > 0.0 && base.train_fraction < 1.0)) {
    throw ValidationError("grid: train_fraction must be in (0, 1)");
  }
  if (!(base.epsilon > 0.0)) throw ValidationError("grid: epsilon must be positive");
}

RepSeeds rep_seeds(const GridConfig& grid, int rep) {
  const std::uint64_t rep_seed = grid.base_seed ^ static_cast<std::uint64_t>(rep);
  const std::uint64_t data_root = grid.fixed_data ? grid.base_seed : rep_seed;
  return {rep_seed, mix_seed(data_root, 1), mix_seed(data_root, 2), mix_seed(rep_seed, 3)};
}

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BatchResult run_batch(const GridConfig& grid) {
  grid.validate();
  const std::size_t na = grid.activations.size();
  const std::size_t ns = grid.scalings.size();
  const std::size_t nh = grid.hidden.size();
  const std::size_t nq = grid.orders.size();
  const auto reps = static_cast<std::size_t>(grid.reps);

  // One task trains one network and transcodes it at every order.
  const std::size_t tasks = na * ns * nh * reps;
  std::vector<ExperimentRecord> records(na * ns * nh * nq * reps);
  auto run_task = [&](std::size_t task) {
    const std::size_t rep = task % reps;
    std::size_t rest = task / reps;
    const std::size_t h = rest % nh;
    rest /= nh;
    const std::size_t s = rest % ns;
    const std::size_t a = rest / ns;

    const auto seeds = rep_seeds(grid, static_cast<int>(rep));
    ExperimentConfig cfg = grid.base;
    cfg.activation = grid.activations[a];
    cfg.scaling = grid.scalings[s];
    cfg.hidden = grid.hidden[h];
    cfg.data.seed = seeds.data;
    cfg.split_seed = seeds.split;
    cfg.train.seed = seeds.init;
    auto out = run_experiment_orders(cfg, grid.orders);
    for (std::size_t q = 0; q < nq; ++q) {
      out[q].rep = static_cast<int>(rep);
      out[q].seed = seeds.rep;
      const std::size_t cell = ((a * ns + s) * nh + h) * nq + q;
      records[cell * reps + rep] = std::move(out[q]);
    }
  };

  if (grid.threads == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (int w = 0; w < grid.threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t t = next++; t < tasks; t = next++) run_task(t);
      });
    }
  }

  BatchResult result;
  result.records = std::move(records);
  for (std::size_t cell = 0; cell < na * ns * nh * nq; ++cell) {
    const auto first = result.records.begin() + static_cast<std::ptrdiff_t>(cell * reps);
    CellSummary sum{first->activation, first->scaling, first->hidden, first->order};
    std::vector<double> mse, nn_y, cov;
    for (auto it = first; it != first + static_cast<std::ptrdiff_t>(reps); ++it) {
      ++sum.runs;
      if (!it->ok()) {
        ++sum.failures;
        continue;
      }
      mse.push_back(it->mse_nn_pr);
      nn_y.push_back(it->mse_nn_y);
      cov.push_back(it->coverage);
    }
    sum.mse_q10 = quantile(mse, 0.1);
    sum.mse_q50 = quantile(mse, 0.5);
    sum.mse_q90 = quantile(mse, 0.9);
    sum.nn_y_q50 = quantile(nn_y, 0.5);
    sum.coverage_q50 = quantile(cov, 0.5);
    result.summary.push_back(sum);
  }
  return result;
}

namespace {

std::string csv_real(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell_prefix(Activation a, ScalingMode s, int hidden, int order) {
  return std::string(to_string(a)) + "," + std::string(to_string(s)) + "," + std::to_string(hidden) + "," +
         std::to_string(order);
}

}  // namespace

std::string records_csv(const std::vector<ExperimentRecord>& records) {
  std::string s =
      "activation,scaling,hidden,order,rep,seed,status,mse_nn_pr,mse_nn_y,var_nn,coverage,"
      "train_mse,epochs,converged,mean_abs_w,max_abs_w,mean_abs_v,max_abs_potential\n";
  for (const auto& r : records) {
    s += cell_prefix(r.activation, r.scaling, r.hidden, r.order) + "," + std::to_string(r.rep) + "," +
         std::to_string(r.seed) + "," + one_line(r.status) + "," + csv_real(r.mse_nn_pr) + "," +
         csv_real(r.mse_nn_y) + "," + csv_real(r.var_nn) + "," + csv_real(r.coverage) + "," +
         csv_real(r.train_mse) + "," + std::to_string(r.epochs) + "," + (r.converged ? "1" : "0") + "," +
         csv_real(r.mean_abs_w) + "," + csv_real(r.max_abs_w) + "," + csv_real(r.mean_abs_v) + "," +
         csv_real(r.max_abs_potential) + "\n";
  }
  return s;
}

std::string summary_csv(const std::vector<CellSummary>& summary) {
  std::string s =
      "activation,scaling,hidden,order,runs,failures,mse_nn_pr_q10,mse_nn_pr_q50,mse_nn_pr_q90,"
      "mse_nn_y_q50,coverage_q50\n";
  for (const auto& c : summary) {
    s += cell_prefix(c.activation, c.scaling, c.hidden, c.order) + "," + std::to_string(c.runs) + "," +
         std::to_string(c.failures) + "," + csv_real(c.mse_q10) + "," + csv_real(c.mse_q50) + "," +
         csv_real(c.mse_q90) + "," + csv_real(c.nn_y_q50) + "," + csv_real(c.coverage_q50) + "\n";
  }
  return s;
}

void write_batch(const BatchResult& batch, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "records.csv", records_csv(batch.records));
  write_text_file(dir / "summary.csv", summary_csv(batch.summary));
  std::string timings = "activation,scaling,hidden,order,rep,wall_seconds\n";
  for (const auto& r : batch.records) {
    timings += cell_prefix(r.activation, r.scaling, r.hidden, r.order) + "," + std::to_string(r.rep) + "," +
               csv_real(r.wall_seconds) + "\n";
  }
  write_text_file(dir / "timings.csv", timings);
}

Box bounding_box(const Eigen::MatrixXd& x) {
  if (x.cols() != 2 || x.rows() == 0) throw DimensionError("bounding_box: need a non-empty n x 2 matrix");
  return {x.col(0).minCoeff(), x.col(0).maxCoeff(), x.col(1).minCoeff(), x.col(1).maxCoeff()};
}

Box enlarge(const Box& box, double factor) {
  const double c1 = 0.5 * (box.x1_lo + box.x1_hi);
  const double c2 = 0.5 * (box.x2_lo + box.x2_hi);
  const double h1 = 0.5 * (box.x1_hi - box.x1_lo) * factor;
  const double h2 = 0.5 * (box.x2_hi - box.x2_lo) * factor;
  return {c1 - h1, c1 + h1, c2 - h2, c2 + h2};
}

SurfaceGrid surface_grid(const Polynomial& poly, const Box& box, int resolution) {
  if (poly.variables() != 2) {
    throw DimensionError("surface_grid: polynomial has " + std::to_string(poly.variables()) +
                         " variables, surfaces need exactly 2");
  }
  if (resolution < 2) throw ValidationError("surface_grid: resolution must be >= 2");
  SurfaceGrid g{resolution, {}};
  g.points.reserve(static_cast<std::size_t>(resolution * resolution));
  const double d = static_cast<double>(resolution - 1);
  for (int r = 0; r < resolution; ++r) {
    const double x2 = box.x2_lo + (box.x2_hi - box.x2_lo) * r / d;
    for (int c = 0; c < resolution; ++c) {
      const double x1 = box.x1_lo + (box.x1_hi - box.x1_lo) * c / d;
      const double pt[] = {x1, x2};
      g.points.push_back({x1, x2, poly.evaluate(pt)});
    }
  }
  return g;
}

std::string surface_csv(const SurfaceGrid& grid) {
  std::string s = "x1,x2,z\n";
  for (const auto& p : grid.points) s += csv_real(p[0]) + "," + csv_real(p[1]) + "," + csv_real(p[2]) + "\n";
  return s;
}

double max_grid_difference(const SurfaceGrid& a, const SurfaceGrid& b) {
  if (a.points.size() != b.points.size()) throw DimensionError("max_grid_difference: grid sizes differ");
  double m = 0.0;
  for (std::size_t k = 0; k < a.points.size(); ++k) m = std::max(m, std::abs(a.points[k][2] - b.points[k][2]));
  return m;
}

void CoefficientStudyConfig::validate() const {
  base.data.validate();
  base.train.validate();
  if (base.data.p != 2) throw ValidationError("coefficient study: surfaces need p = 2");
  if (networks < 1) throw ValidationError("coefficient study: networks must be >= 1");
  if (resolution < 2) throw ValidationError("coefficient study: resolution must be >= 2");
  if (!(extend >= 1.0)) throw ValidationError("coefficient study: extend must be >= 1");
  if (base.order < 1 || base.order > kMaxTaylorOrder) throw ValidationError("coefficient study: order must be in [1, 10]");
  if (base.hidden < 1 || base.hidden > kMaxHidden) throw ValidationError("coefficient study: hidden must be in [1, 128]");
}

CoefficientStudy run_coefficient_study(const CoefficientStudyConfig& cfg) {
  cfg.validate();
  DataGenConfig data_cfg = cfg.base.data;
  data_cfg.seed = mix_seed(cfg.seed, 1);
  auto generated = generate_data(data_cfg);
  auto parts = split(generated.data, cfg.base.train_fraction, mix_seed(cfg.seed, 2));
  const auto spec = fit_scaling(parts.train.x, parts.train.y, cfg.base.scaling);
  const Dataset train = apply_scaling(spec, parts.train);

  auto ols = ols_fit(parts.train.x, parts.train.y, cfg.base.data.degree);

  CoefficientStudy study{std::move(generated), std::move(parts), spec, std::move(ols), {}, {}, {}, {}};
  for (int k = 0; k < cfg.networks; ++k) {
    TrainConfig tcfg = cfg.base.train;
    tcfg.seed = mix_seed(cfg.seed, 100 + static_cast<std::uint64_t>(k));
    auto trained = train_rprop(train.x, train.y, cfg.base.hidden, cfg.base.activation, tcfg);
    const auto result = nn_to_poly(trained.weights, cfg.base.order);
    study.nn_polys.push_back(rescale_to_original(result, spec));
    study.networks.push_back(std::move(trained.weights));
  }
  study.data_box = bounding_box(study.parts.train.x);
  study.extended_box = enlarge(study.data_box, cfg.extend);
  return study;
}

namespace {

std::string monomial_label(const MultiIndex& m) {
  std::string s;
  for (int i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += "x" + std::to_string(i + 1);
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

}  // namespace

void write_coefficient_study(const CoefficientStudy& study, const CoefficientStudyConfig& cfg,
                             const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_polynomial(study.generated.generator, dir / "original.json");
  save_polynomial(study.ols.poly, dir / "ols.json");
  save_scaling(study.scaling, dir / "scaling.json");
  save_dataset(study.parts.train, dir / "train.csv");
  save_dataset(study.parts.test, dir / "test.csv");

  std::vector<std::pair<std::string, const Polynomial*>> named{{"original", &study.generated.generator},
                                                               {"ols", &study.ols.poly}};
  std::vector<std::string> nn_names;
  for (std::size_t k = 0; k < study.nn_polys.size(); ++k) nn_names.push_back("nn_" + std::to_string(k + 1));
  for (std::size_t k = 0; k < study.nn_polys.size(); ++k) {
    save_polynomial(study.nn_polys[k], dir / (nn_names[k] + ".json"));
    save_weights(study.networks[k], dir / (nn_names[k] + "_weights.json"));
    named.emplace_back(nn_names[k], &study.nn_polys[k]);
  }

  const int degree = std::max({study.generated.generator.degree(), study.ols.poly.degree(), cfg.base.order});
  std::string table = "monomial";
  for (const auto& [name, poly] : named) table += "," + name;
  table += "\n";
  for (const auto& m : monomials_up_to(2, degree)) {
    table += monomial_label(m);
    for (const auto& [name, poly] : named) table += "," + csv_real(poly->coeff(m));
    table += "\n";
  }
  write_text_file(dir / "coefficients.csv", table);

  for (const auto& [name, poly] : named) {
    write_text_file(dir / ("surface_" + name + "_data.csv"),
                    surface_csv(surface_grid(*poly, study.data_box, cfg.resolution)));
    write_text_file(dir / ("surface_" + name + "_extended.csv"),
                    surface_csv(surface_grid(*poly, study.extended_box, cfg.resolution)));
  }
}

}  // namespace nnpoly
