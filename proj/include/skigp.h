/* skigp: scalable Gaussian-process regression through structured kernel
 * interpolation, with SoR/FITC baselines and Kronecker/Toeplitz fast paths.
 *
 * C API over the C++ core. All objects are opaque handles owned by the
 * library; every function returns a skigp_status, writes results through out
 * parameters, and leaves outputs untouched on failure. Handles are not
 * thread-safe for concurrent mutation, but distinct handles are independent
 * and read-only use (eval, apply, predict on separate handles) can run
 * concurrently.
 *
 * Matrices cross the boundary as row-major double buffers.
 */

#ifndef SKIGP_H
#define SKIGP_H

#include <stdint.h>

#if defined(_WIN32)
#define SKIGP_API __declspec(dllexport)
#else
#define SKIGP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum skigp_status {
  SKIGP_OK = 0,
  SKIGP_ERR_ARGUMENT = 1,       /* bad argument or dimension mismatch */
  SKIGP_ERR_STRUCTURE = 2,      /* structural requirement violated (e.g. non-equispaced axis) */
  SKIGP_ERR_RANGE = 3,          /* input outside the grid span */
  SKIGP_ERR_NUMERIC = 4,        /* not positive definite after jitter, NaN, ... */
  SKIGP_ERR_IO = 5,             /* file could not be read or written */
  SKIGP_ERR_INTERNAL = 6
} skigp_status;

typedef enum skigp_interp {
  SKIGP_INTERP_LINEAR = 0,
  SKIGP_INTERP_CUBIC = 1,
  SKIGP_INTERP_IDW = 2
} skigp_interp;

typedef struct skigp_kernel skigp_kernel;
typedef struct skigp_grid skigp_grid;
typedef struct skigp_weights skigp_weights;
typedef struct skigp_model skigp_model;

SKIGP_API const char* skigp_version(void);
/* Message for the most recent failure on this thread; empty string if none. */
SKIGP_API const char* skigp_last_error(void);

/* --- kernels ------------------------------------------------------------- */

SKIGP_API skigp_status skigp_kernel_rbf(int input_dim, double lengthscale,
                                        double signal_variance, skigp_kernel** out);
/* 1D spectral mixture with q components (weights, means, variances). */
SKIGP_API skigp_status skigp_kernel_spectral_mixture(int q, const double* weights,
                                                     const double* means,
                                                     const double* variances,
                                                     skigp_kernel** out);
/* Product of 1D factors, one per input dimension; the factors are copied. */
SKIGP_API skigp_status skigp_kernel_product(const skigp_kernel* const* factors, int count,
                                            skigp_kernel** out);
SKIGP_API void skigp_kernel_free(skigp_kernel* kernel);

SKIGP_API skigp_status skigp_kernel_eval(const skigp_kernel* kernel, const double* x,
                                         const double* z, int dim, double* out);
/* out is n1*n2 row-major. */
SKIGP_API skigp_status skigp_kernel_matrix(const skigp_kernel* kernel, const double* x1, int n1,
                                           const double* x2, int n2, int dim, double* out);
SKIGP_API int skigp_kernel_num_hypers(const skigp_kernel* kernel);
/* Log-space hyperparameter vector. */
SKIGP_API skigp_status skigp_kernel_get_hypers(const skigp_kernel* kernel, double* out, int cap);
SKIGP_API skigp_status skigp_kernel_set_hypers(skigp_kernel* kernel, const double* raw, int count);

/* --- grids and interpolation weights -------------------------------------- */

SKIGP_API skigp_status skigp_grid_regular(int dim, const double* lo, const double* hi,
                                          const int* points_per_axis, skigp_grid** out);
/* One explicit strictly-increasing axis per dimension. */
SKIGP_API skigp_status skigp_grid_from_axes(int dim, const double* const* axes, const int* lens,
                                            skigp_grid** out);
SKIGP_API void skigp_grid_free(skigp_grid* grid);
SKIGP_API int64_t skigp_grid_size(const skigp_grid* grid);
SKIGP_API int skigp_grid_dim(const skigp_grid* grid);
SKIGP_API int skigp_grid_axis_len(const skigp_grid* grid, int axis);
SKIGP_API skigp_status skigp_grid_axis(const skigp_grid* grid, int axis, double* out, int cap);

/* Sorted 1D k-means centers (Lloyd's with k-means++ seeding); centers_out
 * must hold m doubles. Fewer than m centers can come back when clusters
 * collapse; the actual count is written to *count_out. */
SKIGP_API skigp_status skigp_kmeans_axis(const double* x, int n, int m, uint64_t seed,
                                         double* centers_out, int* count_out);

SKIGP_API skigp_status skigp_weights_build(const double* x, int n, int dim,
                                           const skigp_grid* grid, skigp_interp scheme,
                                           skigp_weights** out);
SKIGP_API void skigp_weights_free(skigp_weights* w);
SKIGP_API int64_t skigp_weights_rows(const skigp_weights* w);
SKIGP_API int64_t skigp_weights_cols(const skigp_weights* w);
SKIGP_API int skigp_weights_row_nnz(const skigp_weights* w);
/* out = W v (v has cols entries, out has rows entries). */
SKIGP_API skigp_status skigp_weights_apply(const skigp_weights* w, const double* v, double* out);
SKIGP_API skigp_status skigp_weights_apply_transpose(const skigp_weights* w, const double* v,
                                                     double* out);
/* Debug dump: "row col value" lines. */
SKIGP_API skigp_status skigp_weights_export(const skigp_weights* w, const char* path);

/* --- GP models ------------------------------------------------------------ */

SKIGP_API skigp_status skigp_model_exact(const skigp_kernel* kernel, double noise_variance,
                                         skigp_model** out);
/* inducing is m x dim row-major. */
SKIGP_API skigp_status skigp_model_sor(const skigp_kernel* kernel, const double* inducing, int m,
                                       int dim, double noise_variance, skigp_model** out);
SKIGP_API skigp_status skigp_model_fitc(const skigp_kernel* kernel, const double* inducing, int m,
                                        int dim, double noise_variance, skigp_model** out);
SKIGP_API skigp_status skigp_model_ski(const skigp_kernel* kernel, const skigp_grid* grid,
                                       skigp_interp scheme, double noise_variance,
                                       skigp_model** out);
SKIGP_API void skigp_model_free(skigp_model* model);

SKIGP_API skigp_status skigp_model_set_data(skigp_model* model, const double* x, const double* y,
                                            int n, int dim);
/* 1 = subtract the empirical mean, 0 = zero mean (default). */
SKIGP_API skigp_status skigp_model_set_empirical_mean(skigp_model* model, int enable);
SKIGP_API skigp_status skigp_model_set_cg(skigp_model* model, double tol, int max_iters);
SKIGP_API skigp_status skigp_model_predict_mean(skigp_model* model, const double* x, int n,
                                                int dim, double* out);
SKIGP_API skigp_status skigp_model_predict_variance(skigp_model* model, const double* x, int n,
                                                    int dim, double* out);
SKIGP_API skigp_status skigp_model_log_marginal_likelihood(skigp_model* model, double* out);
SKIGP_API skigp_status skigp_model_noise_variance(const skigp_model* model, double* out);
/* 1 when every CG solve since the last fit converged. */
SKIGP_API int skigp_model_solves_converged(const skigp_model* model);

typedef struct skigp_learn_options {
  int max_iters;    /* <= 0: default 60 */
  int max_evals;    /* <= 0: default 4000 */
  double grad_tol;  /* <= 0: default 1e-4 */
  double cg_tol;    /* <= 0: default 1e-4 */
  int verbose;
} skigp_learn_options;

/* Maximizes the log marginal likelihood over the model's log-space
 * hyperparameters (nonlinear conjugate gradients, finite-difference
 * gradients). Writes the best objective to *objective_out when non-NULL. */
SKIGP_API skigp_status skigp_model_learn(skigp_model* model, const skigp_learn_options* options,
                                         double* objective_out);

/* Versioned text manifest, reloadable with skigp_model_load. */
SKIGP_API skigp_status skigp_model_save(const skigp_model* model, const char* path);
SKIGP_API skigp_status skigp_model_load(const char* path, skigp_model** out);

/* --- prior sampling --------------------------------------------------------- */

/* count samples of the SKI prior at the n query points (row-major n x dim);
 * out is count x n row-major, one sample per row. Deterministic per seed. */
SKIGP_API skigp_status skigp_sample_prior(const skigp_kernel* kernel, const skigp_grid* grid,
                                          skigp_interp scheme, const double* x, int n, int dim,
                                          uint64_t seed, int count, double* out);

/* --- experiments ------------------------------------------------------------ */

/* Runs a named experiment ("reconstruct", "kernel-learn", "infill").
 * config_path may be NULL (defaults only); override_keys/values apply on
 * top. Outputs (metrics.csv, manifest.txt, ...) land in out_dir. */
SKIGP_API skigp_status skigp_experiment_run(const char* name, const char* config_path,
                                            const char* const* override_keys,
                                            const char* const* override_values, int n_overrides,
                                            const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* SKIGP_H */
