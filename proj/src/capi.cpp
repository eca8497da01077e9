#include "nnpoly/nnpoly.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>

#include "nnpoly/activation.hpp"
#include "nnpoly/config.hpp"
#include "nnpoly/error.hpp"
#include "nnpoly/file_formats.hpp"
#include "nnpoly/network.hpp"
#include "nnpoly/polynomial.hpp"
#include "nnpoly/scaling.hpp"
#include "nnpoly/simlab.hpp"
#include "nnpoly/transcode.hpp"

struct nnp_poly {
  nnpoly::Polynomial value;
};
struct nnp_weights {
  nnpoly::NetworkWeights value;
};
struct nnp_dataset {
  nnpoly::Dataset value;
};
struct nnp_scaling {
  nnpoly::ScalingSpec value;
};

namespace {

thread_local std::string last_error;

nnp_status fail(nnp_status status, const char* what) {
  last_error = what;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
nnp_status guarded(Body&& body) {
  try {
    body();
    return NNP_OK;
  } catch (const nnpoly::DimensionError& e) {
    return fail(NNP_ERR_DIMENSION, e.what());
  } catch (const nnpoly::ValidationError& e) {
    return fail(NNP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const nnpoly::ParseError& e) {
    return fail(NNP_ERR_PARSE, e.what());
  } catch (const nnpoly::IoError& e) {
    return fail(NNP_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(NNP_ERR_IO, e.what());
  } catch (const nnpoly::RankDeficientError& e) {
    return fail(NNP_ERR_RANK_DEFICIENT, e.what());
  } catch (const nnpoly::TrainingError& e) {
    return fail(NNP_ERR_TRAINING, e.what());
  } catch (const nnpoly::OverflowError& e) {
    return fail(NNP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(NNP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NNP_ERR_INTERNAL, e.what());
  }
}

void require(const void* ptr, const char* name) {
  if (ptr == nullptr) throw nnpoly::ValidationError(std::string(name) + " must not be NULL");
}

nnpoly::Activation to_cpp(nnp_activation act) {
  switch (act) {
    case NNP_SOFTPLUS: return nnpoly::Activation::softplus;
    case NNP_TANH: return nnpoly::Activation::tanh;
    case NNP_SIGMOID: return nnpoly::Activation::sigmoid;
    case NNP_LINEAR: return nnpoly::Activation::linear;
  }
  throw nnpoly::ValidationError("unknown activation code " + std::to_string(static_cast<int>(act)));
}

nnp_activation to_c(nnpoly::Activation act) {
  switch (act) {
    case nnpoly::Activation::softplus: return NNP_SOFTPLUS;
    case nnpoly::Activation::tanh: return NNP_TANH;
    case nnpoly::Activation::sigmoid: return NNP_SIGMOID;
    case nnpoly::Activation::linear: return NNP_LINEAR;
  }
  return NNP_SOFTPLUS;
}

nnpoly::ScalingMode to_cpp(nnp_scaling_mode mode) {
  switch (mode) {
    case NNP_SCALE_NONE: return nnpoly::ScalingMode::none;
    case NNP_SCALE_UNIT: return nnpoly::ScalingMode::unit;
    case NNP_SCALE_SYMMETRIC: return nnpoly::ScalingMode::symmetric;
  }
  throw nnpoly::ValidationError("unknown scaling mode code " + std::to_string(static_cast<int>(mode)));
}

nnpoly::TrainConfig to_cpp(const nnp_train_config& c) {
  nnpoly::TrainConfig t;
  t.max_epochs = c.max_epochs;
  t.gradient_tolerance = c.gradient_tolerance;
  t.initial_step = c.initial_step;
  t.increase = c.increase;
  t.decrease = c.decrease;
  t.min_step = c.min_step;
  t.max_step = c.max_step;
  t.init_scale = c.init_scale;
  t.seed = c.seed;
  return t;
}

}  // namespace

extern "C" {

const char* nnp_version(void) { return "1.0.0"; }

const char* nnp_last_error(void) { return last_error.c_str(); }

const char* nnp_status_name(nnp_status status) {
  switch (status) {
    case NNP_OK: return "ok";
    case NNP_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case NNP_ERR_DIMENSION: return "dimension_mismatch";
    case NNP_ERR_PARSE: return "parse_error";
    case NNP_ERR_IO: return "io_error";
    case NNP_ERR_RANK_DEFICIENT: return "rank_deficient";
    case NNP_ERR_TRAINING: return "training_failed";
    case NNP_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

nnp_status nnp_activation_from_name(const char* name, nnp_activation* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = to_c(nnpoly::activation_from_string(name));
  });
}

nnp_status nnp_scaling_mode_from_name(const char* name, nnp_scaling_mode* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    switch (nnpoly::scaling_mode_from_string(name)) {
      case nnpoly::ScalingMode::none: *out = NNP_SCALE_NONE; break;
      case nnpoly::ScalingMode::unit: *out = NNP_SCALE_UNIT; break;
      case nnpoly::ScalingMode::symmetric: *out = NNP_SCALE_SYMMETRIC; break;
    }
  });
}

nnp_status nnp_taylor_coeffs(nnp_activation act, int order, double* out, size_t out_len) {
  return guarded([&] {
    require(out, "out");
    const auto series = nnpoly::taylor_coeffs(to_cpp(act), order);
    if (out_len < series.coeffs.size()) {
      throw nnpoly::DimensionError("output buffer holds " + std::to_string(out_len) + " values, need " +
                                   std::to_string(series.coeffs.size()));
    }
    std::copy(series.coeffs.begin(), series.coeffs.end(), out);
  });
}

nnp_status nnp_valid_range(nnp_activation act, int order, double epsilon, double* lo, double* hi,
                           int* saturated) {
  return guarded([&] {
    require(lo, "lo");
    require(hi, "hi");
    const auto r = nnpoly::valid_range(to_cpp(act), order, epsilon);
    *lo = r.lo;
    *hi = r.hi;
    if (saturated) *saturated = (r.lo_saturated || r.hi_saturated) ? 1 : 0;
  });
}

nnp_status nnp_poly_load(const char* path, nnp_poly** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new nnp_poly{nnpoly::load_polynomial(path)};
  });
}

nnp_status nnp_poly_save(const nnp_poly* poly, const char* path) {
  return guarded([&] {
    require(poly, "poly");
    require(path, "path");
    nnpoly::save_polynomial(poly->value, path);
  });
}

void nnp_poly_free(nnp_poly* poly) { delete poly; }

nnp_status nnp_poly_dims(const nnp_poly* poly, int* p, int* degree, size_t* terms) {
  return guarded([&] {
    require(poly, "poly");
    if (p) *p = poly->value.variables();
    if (degree) *degree = poly->value.degree();
    if (terms) *terms = poly->value.terms().size();
  });
}

nnp_status nnp_poly_evaluate(const nnp_poly* poly, const double* x, size_t len, double* out) {
  return guarded([&] {
    require(poly, "poly");
    require(x, "x");
    require(out, "out");
    *out = poly->value.evaluate(std::span<const double>(x, len));
  });
}

nnp_status nnp_poly_compare(const nnp_poly* a, const nnp_poly* b, double* max_abs, double* l2,
                            const char* table_path) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    const auto d = nnpoly::coefficient_distance(a->value, b->value);
    if (max_abs) *max_abs = d.max_abs;
    if (l2) *l2 = d.l2;
    if (table_path) {
      std::string csv = "exponents,a,b,abs_diff\n";
      for (const auto& t : d.per_term) {
        std::string label;
        for (int i = 0; i < t.index.size(); ++i) label += (i ? " " : "") + std::to_string(t.index[i]);
        csv += label + "," + nnpoly::format_real(a->value.coeff(t.index)) + "," +
               nnpoly::format_real(b->value.coeff(t.index)) + "," + nnpoly::format_real(t.abs_diff) + "\n";
      }
      nnpoly::write_text_file(table_path, csv);
    }
  });
}

nnp_status nnp_dataset_load(const char* path, nnp_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new nnp_dataset{nnpoly::load_dataset(path)};
  });
}

nnp_status nnp_dataset_save(const nnp_dataset* data, const char* path) {
  return guarded([&] {
    require(data, "data");
    require(path, "path");
    nnpoly::save_dataset(data->value, path);
  });
}

void nnp_dataset_free(nnp_dataset* data) { delete data; }

nnp_status nnp_dataset_dims(const nnp_dataset* data, int* samples, int* features) {
  return guarded([&] {
    require(data, "data");
    if (samples) *samples = data->value.samples();
    if (features) *features = data->value.features();
  });
}

void nnp_datagen_config_default(nnp_datagen_config* cfg) {
  if (!cfg) return;
  const nnpoly::DataGenConfig d;
  *cfg = {d.n, d.p, d.degree, d.mean_lo, d.mean_hi, d.variance, d.coeff_lo, d.coeff_hi, d.noise_sd, d.seed};
}

nnp_status nnp_generate_data(const nnp_datagen_config* cfg, nnp_dataset** data, nnp_poly** generator) {
  return guarded([&] {
    require(cfg, "cfg");
    require(data, "data");
    nnpoly::DataGenConfig d;
    d.n = cfg->n;
    d.p = cfg->p;
    d.degree = cfg->degree;
    d.mean_lo = cfg->mean_lo;
    d.mean_hi = cfg->mean_hi;
    d.variance = cfg->variance;
    d.coeff_lo = cfg->coeff_lo;
    d.coeff_hi = cfg->coeff_hi;
    d.noise_sd = cfg->noise_sd;
    d.seed = cfg->seed;
    auto g = nnpoly::generate_data(d);
    auto* ds = new nnp_dataset{std::move(g.data)};
    if (generator) {
      try {
        *generator = new nnp_poly{std::move(g.generator)};
      } catch (...) {
        delete ds;
        throw;
      }
    }
    *data = ds;
  });
}

nnp_status nnp_scaling_fit(const nnp_dataset* data, nnp_scaling_mode mode, nnp_scaling** out) {
  return guarded([&] {
    require(data, "data");
    require(out, "out");
    *out = new nnp_scaling{nnpoly::fit_scaling(data->value.x, data->value.y, to_cpp(mode))};
  });
}

nnp_status nnp_scaling_apply(const nnp_scaling* scaling, const nnp_dataset* data, nnp_dataset** out) {
  return guarded([&] {
    require(scaling, "scaling");
    require(data, "data");
    require(out, "out");
    *out = new nnp_dataset{nnpoly::apply_scaling(scaling->value, data->value)};
  });
}

nnp_status nnp_scaling_load(const char* path, nnp_scaling** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new nnp_scaling{nnpoly::load_scaling(path)};
  });
}

nnp_status nnp_scaling_save(const nnp_scaling* scaling, const char* path) {
  return guarded([&] {
    require(scaling, "scaling");
    require(path, "path");
    nnpoly::save_scaling(scaling->value, path);
  });
}

void nnp_scaling_free(nnp_scaling* scaling) { delete scaling; }

void nnp_train_config_default(nnp_train_config* cfg) {
  if (!cfg) return;
  const nnpoly::TrainConfig t;
  *cfg = {t.max_epochs, t.gradient_tolerance, t.initial_step, t.increase, t.decrease,
          t.min_step,   t.max_step,           t.init_scale,   t.seed};
}

nnp_status nnp_train(const nnp_dataset* data, int hidden, nnp_activation act, const nnp_train_config* cfg,
                     nnp_weights** out, nnp_train_summary* summary) {
  return guarded([&] {
    require(data, "data");
    require(cfg, "cfg");
    require(out, "out");
    auto result = nnpoly::train_rprop(data->value.x, data->value.y, hidden, to_cpp(act), to_cpp(*cfg));
    if (summary) {
      summary->epochs = result.epochs;
      summary->converged = result.converged ? 1 : 0;
      summary->final_mse = nnpoly::mean_squared_difference(nnpoly::predict(result.weights, data->value.x),
                                                           data->value.y);
    }
    *out = new nnp_weights{std::move(result.weights)};
  });
}

nnp_status nnp_weights_load(const char* path, nnp_weights** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto w = nnpoly::load_weights(path);
    w.validate();
    *out = new nnp_weights{std::move(w)};
  });
}

nnp_status nnp_weights_save(const nnp_weights* weights, const char* path) {
  return guarded([&] {
    require(weights, "weights");
    require(path, "path");
    nnpoly::save_weights(weights->value, path);
  });
}

void nnp_weights_free(nnp_weights* weights) { delete weights; }

nnp_status nnp_weights_dims(const nnp_weights* weights, int* p, int* hidden, nnp_activation* act) {
  return guarded([&] {
    require(weights, "weights");
    if (p) *p = weights->value.inputs();
    if (hidden) *hidden = weights->value.hidden();
    if (act) *act = to_c(weights->value.activation);
  });
}

nnp_status nnp_forward(const nnp_weights* weights, const double* x, size_t len, double* out) {
  return guarded([&] {
    require(weights, "weights");
    require(x, "x");
    require(out, "out");
    *out = nnpoly::forward(weights->value, std::span<const double>(x, len));
  });
}

nnp_status nnp_transcode(const nnp_weights* weights, int order, nnp_poly** out) {
  return guarded([&] {
    require(weights, "weights");
    require(out, "out");
    *out = new nnp_poly{nnpoly::nn_to_poly(weights->value, order).poly};
  });
}

nnp_status nnp_taylor_output(const nnp_weights* weights, int order, const double* x, size_t len,
                             double* out) {
  return guarded([&] {
    require(weights, "weights");
    require(x, "x");
    require(out, "out");
    *out = nnpoly::taylor_truncated_output(weights->value, order, std::span<const double>(x, len));
  });
}

nnp_status nnp_rescale_to_original(const nnp_poly* poly, const nnp_scaling* scaling, nnp_poly** out) {
  return guarded([&] {
    require(poly, "poly");
    require(scaling, "scaling");
    require(out, "out");
    *out = new nnp_poly{nnpoly::rescale_to_original(poly->value, scaling->value)};
  });
}

nnp_status nnp_coverage(const nnp_weights* weights, const nnp_dataset* data, int order, double epsilon,
                        double* overall, double* per_unit, size_t per_unit_len) {
  return guarded([&] {
    require(weights, "weights");
    require(data, "data");
    require(overall, "overall");
    const auto report = nnpoly::coverage(weights->value, data->value.x, order, epsilon);
    if (per_unit) {
      if (per_unit_len < report.unit_fraction.size()) {
        throw nnpoly::DimensionError("per_unit buffer holds " + std::to_string(per_unit_len) +
                                     " values, network has " + std::to_string(report.unit_fraction.size()) +
                                     " hidden units");
      }
      std::copy(report.unit_fraction.begin(), report.unit_fraction.end(), per_unit);
    }
    *overall = report.overall;
  });
}

nnp_status nnp_fit_ols(const nnp_dataset* data, int degree, nnp_poly** out, nnp_fit_report* report) {
  return guarded([&] {
    require(data, "data");
    require(out, "out");
    auto fit = nnpoly::ols_fit(data->value.x, data->value.y, degree);
    if (report) {
      report->residual_sum_squares = fit.report.residual_sum_squares;
      report->condition_number = fit.report.condition_number;
    }
    *out = new nnp_poly{std::move(fit.poly)};
  });
}

nnp_status nnp_simulate(const char* config_path, int reps, uint64_t seed, int threads, const char* out_dir) {
  return guarded([&] {
    require(config_path, "config_path");
    require(out_dir, "out_dir");
    auto cfg = nnpoly::load_simulation_config(config_path);
    if (reps > 0) cfg.grid.reps = reps;
    if (threads > 0) cfg.grid.threads = threads;
    cfg.grid.base_seed = seed;
    nnpoly::write_batch(nnpoly::run_batch(cfg.grid), out_dir);
  });
}

nnp_status nnp_surfaces(const char* config_path, uint64_t seed, const char* out_dir) {
  return guarded([&] {
    require(config_path, "config_path");
    require(out_dir, "out_dir");
    auto cfg = nnpoly::load_simulation_config(config_path);
    cfg.study.seed = seed;
    const auto study = nnpoly::run_coefficient_study(cfg.study);
    nnpoly::write_coefficient_study(study, cfg.study, out_dir);
  });
}

}  // extern "C"
