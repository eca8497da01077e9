/*
 * nnpoly C API.
 *
 * Converts single-hidden-layer, linear-output networks into explicit
 * multivariate polynomials and runs the accompanying simulation study.
 *
 * Objects are opaque handles created by nnp_*_load / nnp_* constructors and
 * released with the matching nnp_*_free. Every fallible call returns an
 * nnp_status; on failure a description is available from nnp_last_error()
 * (thread-local, valid until the next failing call on the same thread).
 * Output handles are only written on success.
 */
#ifndef NNPOLY_NNPOLY_H
#define NNPOLY_NNPOLY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NNPOLY_BUILDING_LIBRARY)
#    define NNP_API __declspec(dllexport)
#  else
#    define NNP_API __declspec(dllimport)
#  endif
#else
#  define NNP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nnp_status {
  NNP_OK = 0,
  NNP_ERR_INVALID_ARGUMENT = 1, /* precondition or limit violated */
  NNP_ERR_DIMENSION = 2,        /* sizes do not agree */
  NNP_ERR_PARSE = 3,            /* malformed file */
  NNP_ERR_IO = 4,               /* file could not be read or written */
  NNP_ERR_RANK_DEFICIENT = 5,   /* least-squares design without full rank */
  NNP_ERR_TRAINING = 6,         /* training diverged */
  NNP_ERR_INTERNAL = 7
} nnp_status;

typedef enum nnp_activation {
  NNP_SOFTPLUS = 0,
  NNP_TANH = 1,
  NNP_SIGMOID = 2,
  NNP_LINEAR = 3
} nnp_activation;

typedef enum nnp_scaling_mode {
  NNP_SCALE_NONE = 0,
  NNP_SCALE_UNIT = 1,      /* [0, 1] */
  NNP_SCALE_SYMMETRIC = 2  /* [-1, 1] */
} nnp_scaling_mode;

typedef struct nnp_poly nnp_poly;
typedef struct nnp_weights nnp_weights;
typedef struct nnp_dataset nnp_dataset;
typedef struct nnp_scaling nnp_scaling;

NNP_API const char* nnp_version(void);
NNP_API const char* nnp_last_error(void);
NNP_API const char* nnp_status_name(nnp_status status);

NNP_API nnp_status nnp_activation_from_name(const char* name, nnp_activation* out);
NNP_API nnp_status nnp_scaling_mode_from_name(const char* name, nnp_scaling_mode* out);

/* ---- activations ------------------------------------------------------ */

/* Writes c_0..c_order (order + 1 values) of the Maclaurin series. */
NNP_API nnp_status nnp_taylor_coeffs(nnp_activation act, int order, double* out, size_t out_len);

/* Interval around 0 where |g - T_order| <= epsilon. `saturated` (may be
 * NULL) is set when no crossing exists inside [-50, 50] on either side. */
NNP_API nnp_status nnp_valid_range(nnp_activation act, int order, double epsilon, double* lo,
                                   double* hi, int* saturated);

/* ---- polynomials ------------------------------------------------------ */

NNP_API nnp_status nnp_poly_load(const char* path, nnp_poly** out);
NNP_API nnp_status nnp_poly_save(const nnp_poly* poly, const char* path);
NNP_API void nnp_poly_free(nnp_poly* poly);
NNP_API nnp_status nnp_poly_dims(const nnp_poly* poly, int* p, int* degree, size_t* terms);
NNP_API nnp_status nnp_poly_evaluate(const nnp_poly* poly, const double* x, size_t len, double* out);

/* Max and Euclidean norm of coefficient differences; `table_path` (may be
 * NULL) receives a per-monomial CSV. */
NNP_API nnp_status nnp_poly_compare(const nnp_poly* a, const nnp_poly* b, double* max_abs, double* l2,
                                    const char* table_path);

/* ---- datasets --------------------------------------------------------- */

NNP_API nnp_status nnp_dataset_load(const char* path, nnp_dataset** out);
NNP_API nnp_status nnp_dataset_save(const nnp_dataset* data, const char* path);
NNP_API void nnp_dataset_free(nnp_dataset* data);
NNP_API nnp_status nnp_dataset_dims(const nnp_dataset* data, int* samples, int* features);

typedef struct nnp_datagen_config {
  int n;
  int p;
  int degree;
  double mean_lo, mean_hi;
  double variance;
  double coeff_lo, coeff_hi;
  double noise_sd;
  uint64_t seed;
} nnp_datagen_config;

/* n = 200, p = 3, degree 2, means ~ U(-10, 10), variance 1,
 * coefficients ~ U(-5, 5), noise sd 0.1. */
NNP_API void nnp_datagen_config_default(nnp_datagen_config* cfg);
NNP_API nnp_status nnp_generate_data(const nnp_datagen_config* cfg, nnp_dataset** data,
                                     nnp_poly** generator);

/* ---- scaling ---------------------------------------------------------- */

NNP_API nnp_status nnp_scaling_fit(const nnp_dataset* data, nnp_scaling_mode mode, nnp_scaling** out);
NNP_API nnp_status nnp_scaling_apply(const nnp_scaling* scaling, const nnp_dataset* data,
                                     nnp_dataset** out);
NNP_API nnp_status nnp_scaling_load(const char* path, nnp_scaling** out);
NNP_API nnp_status nnp_scaling_save(const nnp_scaling* scaling, const char* path);
NNP_API void nnp_scaling_free(nnp_scaling* scaling);

/* ---- networks --------------------------------------------------------- */

typedef struct nnp_train_config {
  int max_epochs;
  double gradient_tolerance;
  double initial_step;
  double increase;
  double decrease;
  double min_step;
  double max_step;
  double init_scale; /* <= 0: 1 / sqrt(p + 1) */
  uint64_t seed;
} nnp_train_config;

typedef struct nnp_train_summary {
  int epochs;
  int converged;
  double final_mse;
} nnp_train_summary;

NNP_API void nnp_train_config_default(nnp_train_config* cfg);

/* iRPROP+ training on the dataset as given (apply scaling first if wanted).
 * `summary` may be NULL. */
NNP_API nnp_status nnp_train(const nnp_dataset* data, int hidden, nnp_activation act,
                             const nnp_train_config* cfg, nnp_weights** out, nnp_train_summary* summary);

NNP_API nnp_status nnp_weights_load(const char* path, nnp_weights** out);
NNP_API nnp_status nnp_weights_save(const nnp_weights* weights, const char* path);
NNP_API void nnp_weights_free(nnp_weights* weights);
NNP_API nnp_status nnp_weights_dims(const nnp_weights* weights, int* p, int* hidden, nnp_activation* act);
NNP_API nnp_status nnp_forward(const nnp_weights* weights, const double* x, size_t len, double* out);

/* ---- transcoding ------------------------------------------------------ */

NNP_API nnp_status nnp_transcode(const nnp_weights* weights, int order, nnp_poly** out);

/* Network output with each activation replaced by its order-q series. */
NNP_API nnp_status nnp_taylor_output(const nnp_weights* weights, int order, const double* x, size_t len,
                                     double* out);

/* Re-expresses a scaled-space polynomial in original units. */
NNP_API nnp_status nnp_rescale_to_original(const nnp_poly* poly, const nnp_scaling* scaling, nnp_poly** out);

/* Fraction of synaptic potentials inside the acceptable Taylor range.
 * `per_unit` (may be NULL) receives `hidden` fractions. */
NNP_API nnp_status nnp_coverage(const nnp_weights* weights, const nnp_dataset* data, int order,
                                double epsilon, double* overall, double* per_unit, size_t per_unit_len);

/* ---- baseline --------------------------------------------------------- */

typedef struct nnp_fit_report {
  double residual_sum_squares;
  double condition_number;
} nnp_fit_report;

NNP_API nnp_status nnp_fit_ols(const nnp_dataset* data, int degree, nnp_poly** out, nnp_fit_report* report);

/* ---- simulation study ------------------------------------------------- */

/* Runs the activation x scaling x hidden x order grid from a config file
 * and writes records.csv, summary.csv and timings.csv into out_dir.
 * reps <= 0 keeps the config value. */
NNP_API nnp_status nnp_simulate(const char* config_path, int reps, uint64_t seed, int threads,
                                const char* out_dir);

/* Fixed-data coefficient study with surface grids written into out_dir. */
NNP_API nnp_status nnp_surfaces(const char* config_path, uint64_t seed, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* NNPOLY_NNPOLY_H */
