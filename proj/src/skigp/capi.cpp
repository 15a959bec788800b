#include "skigp.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <string>

#include "skigp/errors.hpp"
#include "skigp/exper/experiments.hpp"
#include "skigp/gp.hpp"
#include "skigp/version.hpp"

using skigp::GpModel;
using skigp::Kernel;
using skigp::ProductGrid;
using skigp::SparseWeights;

struct skigp_kernel {
  Kernel k;
};
struct skigp_grid {
  ProductGrid g;
};
struct skigp_weights {
  SparseWeights w;
};
struct skigp_model {
  GpModel m;
};

namespace {

thread_local std::string g_last_error;

skigp_status fail(skigp_status code, const char* what) {
  g_last_error = what != nullptr ? what : "";
  return code;
}

// Maps C++ exceptions onto status codes at the boundary.
template <typename Fn>
skigp_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SKIGP_OK;
  } catch (const skigp::StructureError& e) {
    return fail(SKIGP_ERR_STRUCTURE, e.what());
  } catch (const skigp::NumericError& e) {
    return fail(SKIGP_ERR_NUMERIC, e.what());
  } catch (const std::out_of_range& e) {
    return fail(SKIGP_ERR_RANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SKIGP_ERR_ARGUMENT, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(SKIGP_ERR_IO, e.what());
  } catch (const std::runtime_error& e) {
    // Runtime errors from this library are file-system related.
    return fail(SKIGP_ERR_IO, e.what());
  } catch (const std::bad_alloc& e) {
    return fail(SKIGP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SKIGP_ERR_INTERNAL, e.what());
  }
}

skigp_status require(bool ok, const char* what) {
  return ok ? SKIGP_OK : fail(SKIGP_ERR_ARGUMENT, what);
}

skigp::InterpScheme to_scheme(skigp_interp s) {
  switch (s) {
    case SKIGP_INTERP_LINEAR:
      return skigp::InterpScheme::Linear;
    case SKIGP_INTERP_CUBIC:
      return skigp::InterpScheme::Cubic;
    case SKIGP_INTERP_IDW:
      return skigp::InterpScheme::Idw;
  }
  throw std::invalid_argument("unknown interpolation scheme");
}

Eigen::MatrixXd to_matrix(const double* data, int rows, int cols) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      data, rows, cols);
}

}  // namespace

extern "C" {

const char* skigp_version(void) { return SKIGP_VERSION_STRING; }

const char* skigp_last_error(void) { return g_last_error.c_str(); }

/* --- kernels --------------------------------------------------------------- */

skigp_status skigp_kernel_rbf(int input_dim, double lengthscale, double signal_variance,
                              skigp_kernel** out) {
  if (auto s = require(out != nullptr, "out must not be NULL")) return s;
  return guarded([&] { *out = new skigp_kernel{Kernel::rbf(input_dim, lengthscale, signal_variance)}; });
}

skigp_status skigp_kernel_spectral_mixture(int q, const double* weights, const double* means,
                                           const double* variances, skigp_kernel** out) {
  if (auto s = require(out != nullptr && weights != nullptr && means != nullptr &&
                           variances != nullptr && q > 0,
                       "spectral mixture needs q > 0 and non-NULL arrays")) {
    return s;
  }
  return guarded([&] {
    *out = new skigp_kernel{Kernel::spectral_mixture(
        std::vector<double>(weights, weights + q), std::vector<double>(means, means + q),
        std::vector<double>(variances, variances + q))};
  });
}

skigp_status skigp_kernel_product(const skigp_kernel* const* factors, int count,
                                  skigp_kernel** out) {
  if (auto s = require(out != nullptr && factors != nullptr && count > 0,
                       "product needs factors and count > 0")) {
    return s;
  }
  return guarded([&] {
    std::vector<Kernel> fs;
    fs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      if (factors[i] == nullptr) throw std::invalid_argument("NULL kernel factor");
      fs.push_back(factors[i]->k);
    }
    *out = new skigp_kernel{Kernel::product(std::move(fs))};
  });
}

void skigp_kernel_free(skigp_kernel* kernel) { delete kernel; }

skigp_status skigp_kernel_eval(const skigp_kernel* kernel, const double* x, const double* z,
                               int dim, double* out) {
  if (auto s = require(kernel != nullptr && x != nullptr && z != nullptr && out != nullptr &&
                           dim > 0,
                       "eval needs non-NULL kernel/x/z/out and dim > 0")) {
    return s;
  }
  return guarded([&] {
    *out = kernel->k.eval(std::span<const double>(x, static_cast<std::size_t>(dim)),
                          std::span<const double>(z, static_cast<std::size_t>(dim)));
  });
}

skigp_status skigp_kernel_matrix(const skigp_kernel* kernel, const double* x1, int n1,
                                 const double* x2, int n2, int dim, double* out) {
  if (auto s = require(kernel != nullptr && x1 != nullptr && x2 != nullptr && out != nullptr &&
                           n1 > 0 && n2 > 0 && dim > 0,
                       "matrix needs non-NULL buffers and positive sizes")) {
    return s;
  }
  return guarded([&] {
    const Eigen::MatrixXd k = kernel->k.matrix(to_matrix(x1, n1, dim), to_matrix(x2, n2, dim));
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j) out[static_cast<std::size_t>(i) * n2 + j] = k(i, j);
    }
  });
}

int skigp_kernel_num_hypers(const skigp_kernel* kernel) {
  return kernel == nullptr ? -1 : static_cast<int>(kernel->k.num_hypers());
}

skigp_status skigp_kernel_get_hypers(const skigp_kernel* kernel, double* out, int cap) {
  if (auto s = require(kernel != nullptr && out != nullptr, "non-NULL kernel and out required")) {
    return s;
  }
  return guarded([&] {
    const std::vector<double> raw = kernel->k.hypers_raw();
    if (static_cast<int>(raw.size()) > cap) {
      throw std::invalid_argument("hyperparameter buffer too small");
    }
    std::memcpy(out, raw.data(), raw.size() * sizeof(double));
  });
}

skigp_status skigp_kernel_set_hypers(skigp_kernel* kernel, const double* raw, int count) {
  if (auto s = require(kernel != nullptr && raw != nullptr && count >= 0,
                       "non-NULL kernel and raw required")) {
    return s;
  }
  return guarded([&] {
    kernel->k.set_hypers_raw(std::span<const double>(raw, static_cast<std::size_t>(count)));
  });
}

/* --- grids ------------------------------------------------------------------ */

skigp_status skigp_grid_regular(int dim, const double* lo, const double* hi,
                                const int* points_per_axis, skigp_grid** out) {
  if (auto s = require(out != nullptr && lo != nullptr && hi != nullptr &&
                           points_per_axis != nullptr && dim > 0,
                       "grid_regular needs non-NULL arrays and dim > 0")) {
    return s;
  }
  return guarded([&] {
    *out = new skigp_grid{ProductGrid::regular(
        std::span<const double>(lo, static_cast<std::size_t>(dim)),
        std::span<const double>(hi, static_cast<std::size_t>(dim)),
        std::span<const int>(points_per_axis, static_cast<std::size_t>(dim)))};
  });
}

skigp_status skigp_grid_from_axes(int dim, const double* const* axes, const int* lens,
                                  skigp_grid** out) {
  if (auto s = require(out != nullptr && axes != nullptr && lens != nullptr && dim > 0,
                       "grid_from_axes needs non-NULL arrays and dim > 0")) {
    return s;
  }
  return guarded([&] {
    std::vector<std::vector<double>> a(static_cast<std::size_t>(dim));
    for (int p = 0; p < dim; ++p) {
      if (axes[p] == nullptr || lens[p] < 2) throw std::invalid_argument("bad axis");
      a[static_cast<std::size_t>(p)].assign(axes[p], axes[p] + lens[p]);
    }
    *out = new skigp_grid{ProductGrid::from_axes(std::move(a))};
  });
}

void skigp_grid_free(skigp_grid* grid) { delete grid; }

int64_t skigp_grid_size(const skigp_grid* grid) { return grid == nullptr ? -1 : grid->g.size(); }

int skigp_grid_dim(const skigp_grid* grid) { return grid == nullptr ? -1 : grid->g.dim(); }

int skigp_grid_axis_len(const skigp_grid* grid, int axis) {
  if (grid == nullptr || axis < 0 || axis >= grid->g.dim()) return -1;
  return static_cast<int>(grid->g.axis(axis).size());
}

skigp_status skigp_grid_axis(const skigp_grid* grid, int axis, double* out, int cap) {
  if (auto s = require(grid != nullptr && out != nullptr, "non-NULL grid and out required")) {
    return s;
  }
  return guarded([&] {
    if (axis < 0 || axis >= grid->g.dim()) throw std::invalid_argument("axis out of range");
    const std::vector<double>& a = grid->g.axis(axis);
    if (static_cast<int>(a.size()) > cap) throw std::invalid_argument("axis buffer too small");
    std::memcpy(out, a.data(), a.size() * sizeof(double));
  });
}

skigp_status skigp_kmeans_axis(const double* x, int n, int m, uint64_t seed, double* centers_out,
                               int* count_out) {
  if (auto s = require(x != nullptr && centers_out != nullptr && n > 0,
                       "kmeans needs data and an output buffer")) {
    return s;
  }
  return guarded([&] {
    const std::vector<double> centers =
        skigp::kmeans_axis(std::span<const double>(x, static_cast<std::size_t>(n)), m, seed);
    std::memcpy(centers_out, centers.data(), centers.size() * sizeof(double));
    if (count_out != nullptr) *count_out = static_cast<int>(centers.size());
  });
}

/* --- weights ----------------------------------------------------------------- */

skigp_status skigp_weights_build(const double* x, int n, int dim, const skigp_grid* grid,
                                 skigp_interp scheme, skigp_weights** out) {
  if (auto s = require(x != nullptr && grid != nullptr && out != nullptr && n > 0 && dim > 0,
                       "weights_build needs data, grid, and out")) {
    return s;
  }
  return guarded([&] {
    *out = new skigp_weights{skigp::build_weights(to_matrix(x, n, dim), grid->g, to_scheme(scheme))};
  });
}

void skigp_weights_free(skigp_weights* w) { delete w; }

int64_t skigp_weights_rows(const skigp_weights* w) { return w == nullptr ? -1 : w->w.rows(); }

int64_t skigp_weights_cols(const skigp_weights* w) { return w == nullptr ? -1 : w->w.cols(); }

int skigp_weights_row_nnz(const skigp_weights* w) { return w == nullptr ? -1 : w->w.row_nnz(); }

skigp_status skigp_weights_apply(const skigp_weights* w, const double* v, double* out) {
  if (auto s = require(w != nullptr && v != nullptr && out != nullptr, "non-NULL args required")) {
    return s;
  }
  return guarded([&] {
    w->w.apply(std::span<const double>(v, static_cast<std::size_t>(w->w.cols())),
               std::span<double>(out, static_cast<std::size_t>(w->w.rows())));
  });
}

skigp_status skigp_weights_apply_transpose(const skigp_weights* w, const double* v, double* out) {
  if (auto s = require(w != nullptr && v != nullptr && out != nullptr, "non-NULL args required")) {
    return s;
  }
  return guarded([&] {
    w->w.apply_transpose(std::span<const double>(v, static_cast<std::size_t>(w->w.rows())),
                         std::span<double>(out, static_cast<std::size_t>(w->w.cols())));
  });
}

skigp_status skigp_weights_export(const skigp_weights* w, const char* path) {
  if (auto s = require(w != nullptr && path != nullptr, "non-NULL weights and path required")) {
    return s;
  }
  return guarded([&] {
    std::ofstream os(path);
    if (!os) throw std::runtime_error(std::string("cannot open ") + path);
    w->w.export_triplets(os);
  });
}

/* --- models -------------------------------------------------------------------- */

skigp_status skigp_model_exact(const skigp_kernel* kernel, double noise_variance,
                               skigp_model** out) {
  if (auto s = require(kernel != nullptr && out != nullptr, "non-NULL kernel and out required")) {
    return s;
  }
  return guarded([&] { *out = new skigp_model{GpModel::exact(kernel->k, noise_variance)}; });
}

skigp_status skigp_model_sor(const skigp_kernel* kernel, const double* inducing, int m, int dim,
                             double noise_variance, skigp_model** out) {
  if (auto s = require(kernel != nullptr && inducing != nullptr && out != nullptr && m > 0 &&
                           dim > 0,
                       "SoR needs kernel, inducing points, and out")) {
    return s;
  }
  return guarded([&] {
    *out = new skigp_model{GpModel::sor(kernel->k, to_matrix(inducing, m, dim), noise_variance)};
  });
}

skigp_status skigp_model_fitc(const skigp_kernel* kernel, const double* inducing, int m, int dim,
                              double noise_variance, skigp_model** out) {
  if (auto s = require(kernel != nullptr && inducing != nullptr && out != nullptr && m > 0 &&
                           dim > 0,
                       "FITC needs kernel, inducing points, and out")) {
    return s;
  }
  return guarded([&] {
    *out = new skigp_model{GpModel::fitc(kernel->k, to_matrix(inducing, m, dim), noise_variance)};
  });
}

skigp_status skigp_model_ski(const skigp_kernel* kernel, const skigp_grid* grid,
                             skigp_interp scheme, double noise_variance, skigp_model** out) {
  if (auto s = require(kernel != nullptr && grid != nullptr && out != nullptr,
                       "SKI needs kernel, grid, and out")) {
    return s;
  }
  return guarded([&] {
    *out = new skigp_model{GpModel::ski(kernel->k, grid->g, to_scheme(scheme), noise_variance)};
  });
}

void skigp_model_free(skigp_model* model) { delete model; }

skigp_status skigp_model_set_data(skigp_model* model, const double* x, const double* y, int n,
                                  int dim) {
  if (auto s = require(model != nullptr && x != nullptr && y != nullptr && n > 0 && dim > 0,
                       "set_data needs model, x, y")) {
    return s;
  }
  return guarded([&] {
    model->m.set_data(to_matrix(x, n, dim), Eigen::Map<const Eigen::VectorXd>(y, n));
  });
}

skigp_status skigp_model_set_empirical_mean(skigp_model* model, int enable) {
  if (auto s = require(model != nullptr, "non-NULL model required")) return s;
  return guarded([&] {
    model->m.set_mean_mode(enable != 0 ? skigp::MeanMode::Empirical : skigp::MeanMode::Zero);
  });
}

skigp_status skigp_model_set_cg(skigp_model* model, double tol, int max_iters) {
  if (auto s = require(model != nullptr, "non-NULL model required")) return s;
  return guarded([&] {
    skigp::CgConfig cfg;
    cfg.tol = tol;
    cfg.max_iters = max_iters;
    model->m.set_cg_config(cfg);
  });
}

skigp_status skigp_model_predict_mean(skigp_model* model, const double* x, int n, int dim,
                                      double* out) {
  if (auto s = require(model != nullptr && x != nullptr && out != nullptr && n > 0 && dim > 0,
                       "predict needs model, x, out")) {
    return s;
  }
  return guarded([&] {
    const Eigen::VectorXd mean = model->m.predict_mean(to_matrix(x, n, dim));
    std::memcpy(out, mean.data(), static_cast<std::size_t>(n) * sizeof(double));
  });
}

skigp_status skigp_model_predict_variance(skigp_model* model, const double* x, int n, int dim,
                                          double* out) {
  if (auto s = require(model != nullptr && x != nullptr && out != nullptr && n > 0 && dim > 0,
                       "predict needs model, x, out")) {
    return s;
  }
  return guarded([&] {
    const Eigen::VectorXd var = model->m.predict_variance(to_matrix(x, n, dim));
    std::memcpy(out, var.data(), static_cast<std::size_t>(n) * sizeof(double));
  });
}

skigp_status skigp_model_log_marginal_likelihood(skigp_model* model, double* out) {
  if (auto s = require(model != nullptr && out != nullptr, "non-NULL model and out required")) {
    return s;
  }
  return guarded([&] { *out = model->m.log_marginal_likelihood(); });
}

skigp_status skigp_model_noise_variance(const skigp_model* model, double* out) {
  if (auto s = require(model != nullptr && out != nullptr, "non-NULL model and out required")) {
    return s;
  }
  *out = model->m.sigma2();
  return SKIGP_OK;
}

int skigp_model_solves_converged(const skigp_model* model) {
  return model != nullptr && model->m.last_solves_converged() ? 1 : 0;
}

skigp_status skigp_model_learn(skigp_model* model, const skigp_learn_options* options,
                               double* objective_out) {
  if (auto s = require(model != nullptr, "non-NULL model required")) return s;
  return guarded([&] {
    skigp::LearnOptions opts;
    if (options != nullptr) {
      if (options->max_iters > 0) opts.max_iters = options->max_iters;
      if (options->max_evals > 0) opts.max_evals = options->max_evals;
      if (options->grad_tol > 0) opts.grad_tol = options->grad_tol;
      if (options->cg_tol > 0) opts.cg_tol = options->cg_tol;
      opts.verbose = options->verbose != 0;
    }
    const skigp::LearnResult res = skigp::learn_hypers(model->m, opts);
    if (objective_out != nullptr) *objective_out = res.best_objective;
  });
}

skigp_status skigp_model_save(const skigp_model* model, const char* path) {
  if (auto s = require(model != nullptr && path != nullptr, "non-NULL model and path required")) {
    return s;
  }
  return guarded([&] { model->m.save(std::string(path)); });
}

skigp_status skigp_model_load(const char* path, skigp_model** out) {
  if (auto s = require(path != nullptr && out != nullptr, "non-NULL path and out required")) {
    return s;
  }
  return guarded([&] { *out = new skigp_model{GpModel::load(std::string(path))}; });
}

/* --- sampling -------------------------------------------------------------------- */

skigp_status skigp_sample_prior(const skigp_kernel* kernel, const skigp_grid* grid,
                                skigp_interp scheme, const double* x, int n, int dim,
                                uint64_t seed, int count, double* out) {
  if (auto s = require(kernel != nullptr && grid != nullptr && x != nullptr && out != nullptr &&
                           n > 0 && dim > 0 && count > 0,
                       "sample_prior needs kernel, grid, x, out")) {
    return s;
  }
  return guarded([&] {
    const Eigen::MatrixXd samples =
        skigp::sample_prior(kernel->k, grid->g, to_scheme(scheme), to_matrix(x, n, dim), seed,
                            count);  // n x count
    for (int s = 0; s < count; ++s) {
      for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(s) * n + i] = samples(i, s);
      }
    }
  });
}

/* --- experiments -------------------------------------------------------------------- */

skigp_status skigp_experiment_run(const char* name, const char* config_path,
                                  const char* const* override_keys,
                                  const char* const* override_values, int n_overrides,
                                  const char* out_dir) {
  if (auto s = require(name != nullptr && out_dir != nullptr,
                       "experiment name and out_dir required")) {
    return s;
  }
  if (auto s = require(n_overrides == 0 || (override_keys != nullptr && override_values != nullptr),
                       "override arrays must be provided together")) {
    return s;
  }
  return guarded([&] {
    skigp::exper::Config cfg;
    if (config_path != nullptr && config_path[0] != '\0') {
      cfg = skigp::exper::Config::load_file(config_path);
    }
    for (int i = 0; i < n_overrides; ++i) {
      if (override_keys[i] == nullptr || override_values[i] == nullptr) {
        throw std::invalid_argument("NULL override entry");
      }
      cfg.set(override_keys[i], override_values[i]);
    }
    skigp::exper::run_experiment(name, cfg, out_dir);
  });
}

}  // extern "C"
