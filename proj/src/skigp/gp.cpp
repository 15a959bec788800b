#include "skigp/gp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "skigp/errors.hpp"
#include "skigp/optimize.hpp"
#include "skigp/rng.hpp"

namespace skigp {

namespace {

constexpr std::int64_t kDenseCap = 4096;

Eigen::MatrixXd axis_points(const ProductGrid& grid, int p) {
  const std::vector<double>& axis = grid.axis(p);
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(axis.size()), 1);
  for (std::size_t i = 0; i < axis.size(); ++i) pts(static_cast<Eigen::Index>(i), 0) = axis[i];
  return pts;
}

StructuredMatrix build_kuu(const Kernel& kernel, const ProductGrid& grid) {
  std::vector<StructuredMatrix> factors;
  factors.reserve(static_cast<std::size_t>(grid.dim()));
  for (int p = 0; p < grid.dim(); ++p) {
    const Kernel f = kernel.axis_factor(p);
    if (grid.axis_equispaced(p)) {
      factors.push_back(StructuredMatrix::toeplitz(f.toeplitz_column(grid.axis(p))));
    } else {
      const Eigen::MatrixXd pts = axis_points(grid, p);
      factors.push_back(StructuredMatrix::dense(f.matrix(pts, pts)));
    }
  }
  if (factors.size() == 1) return std::move(factors[0]);
  return StructuredMatrix::kronecker(std::move(factors));
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void Dataset::validate() const {
  if (x.rows() < 1) throw std::invalid_argument("dataset: need at least one point");
  if (x.rows() != y.size()) throw std::invalid_argument("dataset: |X| != |y|");
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("dataset: non-finite values");
  if (x_test.rows() > 0 && x_test.cols() != x.cols()) {
    throw std::invalid_argument("dataset: test input dimension mismatch");
  }
}

const char* gp_scheme_name(GpScheme s) {
  switch (s) {
    case GpScheme::Exact:
      return "exact";
    case GpScheme::Sor:
      return "sor";
    case GpScheme::Fitc:
      return "fitc";
    case GpScheme::Ski:
      return "ski";
  }
  return "?";
}

Eigen::LLT<Eigen::MatrixXd> chol_with_jitter(const Eigen::MatrixXd& a, double k0,
                                             const char* context) {
  Eigen::MatrixXd m = a;
  m.diagonal().array() += 1e-8 * k0;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return llt;
  m.diagonal().array() += (1e-6 - 1e-8) * k0;
  llt.compute(m);
  if (llt.info() == Eigen::Success) return llt;
  throw NumericError(std::string(context) + ": matrix not positive definite after jitter");
}

GpModel::GpModel(GpScheme scheme, Kernel kernel, double sigma2)
    : scheme_(scheme), kernel_(std::move(kernel)), sigma2_(sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("gp: sigma2 must be > 0");
}

GpModel GpModel::exact(Kernel kernel, double sigma2) {
  return GpModel(GpScheme::Exact, std::move(kernel), sigma2);
}

GpModel GpModel::sor(Kernel kernel, Eigen::MatrixXd inducing, double sigma2) {
  GpModel m(GpScheme::Sor, std::move(kernel), sigma2);
  if (inducing.rows() == 0) throw std::invalid_argument("gp: SoR needs nonempty inducing set");
  m.inducing_ = std::move(inducing);
  return m;
}

GpModel GpModel::fitc(Kernel kernel, Eigen::MatrixXd inducing, double sigma2) {
  GpModel m(GpScheme::Fitc, std::move(kernel), sigma2);
  if (inducing.rows() == 0) throw std::invalid_argument("gp: FITC needs nonempty inducing set");
  m.inducing_ = std::move(inducing);
  return m;
}

GpModel GpModel::ski(Kernel kernel, ProductGrid grid, InterpScheme scheme, double sigma2) {
  GpModel m(GpScheme::Ski, std::move(kernel), sigma2);
  m.grid_ = std::move(grid);
  m.interp_ = scheme;
  return m;
}

const ProductGrid& GpModel::grid() const {
  if (!grid_) throw std::logic_error("gp: model has no grid");
  return *grid_;
}

void GpModel::set_data(Eigen::MatrixXd x, Eigen::VectorXd y) {
  if (x.rows() != y.size() || x.rows() == 0) {
    throw std::invalid_argument("gp: data size mismatch or empty");
  }
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("gp: non-finite data");
  if (x.cols() != kernel_.input_dim()) {
    throw std::invalid_argument("gp: data dimension does not match kernel");
  }
  if (scheme_ == GpScheme::Ski) {
    std::vector<double> pt(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index d = 0; d < x.cols(); ++d) pt[static_cast<std::size_t>(d)] = x(i, d);
      if (!grid_->contains(pt)) {
        throw std::out_of_range("gp: training input outside the inducing grid");
      }
    }
  }
  x_ = std::move(x);
  y_ = std::move(y);
  w_.reset();
  invalidate();
}

void GpModel::set_mean_mode(MeanMode mode) {
  mean_mode_ = mode;
  invalidate();
}

void GpModel::set_cg_config(const CgConfig& cfg) {
  cg_cfg_ = cfg;
  invalidate();
}

void GpModel::set_logdet_mode(LogdetMode mode) { logdet_mode_ = mode; }

double GpModel::mean_offset() const {
  return mean_mode_ == MeanMode::Empirical && y_.size() > 0 ? y_.mean() : 0.0;
}

void GpModel::fit() {
  if (x_.rows() == 0) throw std::logic_error("gp: fit before set_data");
  const Eigen::Index n = x_.rows();
  const double mu = mean_offset();
  const Eigen::VectorXd yc = y_.array() - mu;
  cg_ok_ = true;
  last_cg_residuals_.clear();
  kuu_eig_.reset();

  switch (scheme_) {
    case GpScheme::Exact: {
      Eigen::MatrixXd k = kernel_.matrix(x_, x_);
      k.diagonal().array() += sigma2_;
      exact_llt_.compute(k);
      if (exact_llt_.info() != Eigen::Success) {
        // Single jitter retry, then hard error.
        k.diagonal().array() += 1e-8 * kernel_.variance_at_zero();
        exact_llt_.compute(k);
        if (exact_llt_.info() != Eigen::Success) {
          throw NumericError("gp: exact covariance not positive definite after jitter");
        }
      }
      alpha_ = exact_llt_.solve(yc);
      break;
    }
    case GpScheme::Sor:
    case GpScheme::Fitc: {
      const double k0 = kernel_.variance_at_zero();
      kmm_ = kernel_.matrix(inducing_, inducing_);
      kmm_.diagonal().array() += 1e-8 * k0;
      kmm_llt_.compute(kmm_);
      if (kmm_llt_.info() != Eigen::Success) {
        kmm_.diagonal().array() += (1e-6 - 1e-8) * k0;
        kmm_llt_.compute(kmm_);
        if (kmm_llt_.info() != Eigen::Success) {
          throw NumericError("gp: K_UU not positive definite after jitter");
        }
      }
      knm_ = kernel_.matrix(x_, inducing_);
      lambda_.resize(n);
      if (scheme_ == GpScheme::Sor) {
        lambda_.setConstant(sigma2_);
      } else {
        const Eigen::MatrixXd v = kmm_llt_.solve(knm_.transpose());  // m x n
        for (Eigen::Index i = 0; i < n; ++i) {
          const double q_ii = knm_.row(i).dot(v.col(i));
          lambda_[i] = std::max(k0 - q_ii, 0.0) + sigma2_;
        }
      }
      const Eigen::VectorXd inv_lambda = lambda_.cwiseInverse();
      Eigen::MatrixXd a = kmm_;
      a.noalias() += knm_.transpose() * inv_lambda.asDiagonal() * knm_;
      a_llt_.compute(a);
      if (a_llt_.info() != Eigen::Success) {
        a.diagonal().array() += 1e-6 * k0;
        a_llt_.compute(a);
        if (a_llt_.info() != Eigen::Success) {
          throw NumericError("gp: Woodbury system not positive definite after jitter");
        }
      }
      beta_ = a_llt_.solve(knm_.transpose() * (inv_lambda.asDiagonal() * yc));
      break;
    }
    case GpScheme::Ski: {
      if (!w_) w_ = build_weights(x_, *grid_, interp_);
      kuu_ = build_kuu(kernel_, *grid_);
      Eigen::VectorXd tmp_m(kuu_->size());
      const LinOp op = [this](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
        out = w_->apply(kuu_->matvec(w_->apply_transpose(v)));
        out += sigma2_ * v;
      };
      const SolveReport rep = cg_solve(op, yc, cg_cfg_);
      cg_ok_ = rep.converged;
      last_cg_iters_ = rep.iterations;
      if (cg_cfg_.record_residuals) last_cg_residuals_ = rep.residual_history;
      alpha_ = rep.x;
      break;
    }
  }
  fitted_ = true;
}

void GpModel::ensure_fitted() {
  if (!fitted_) fit();
}

Eigen::VectorXd GpModel::predict_mean(const Eigen::MatrixXd& xs) {
  ensure_fitted();
  const double mu = mean_offset();
  switch (scheme_) {
    case GpScheme::Exact: {
      const Eigen::MatrixXd ks = kernel_.matrix(xs, x_);
      return (ks * alpha_).array() + mu;
    }
    case GpScheme::Sor:
    case GpScheme::Fitc: {
      const Eigen::MatrixXd ksm = kernel_.matrix(xs, inducing_);
      return (ksm * beta_).array() + mu;
    }
    case GpScheme::Ski: {
      const SparseWeights ws = build_weights(xs, *grid_, interp_);
      const Eigen::VectorXd t = kuu_->matvec(w_->apply_transpose(alpha_));
      return ws.apply(t).array() + mu;
    }
  }
  throw std::logic_error("gp: unknown scheme");
}

Eigen::VectorXd GpModel::predict_variance(const Eigen::MatrixXd& xs) {
  ensure_fitted();
  const Eigen::Index ns = xs.rows();
  Eigen::VectorXd var(ns);
  switch (scheme_) {
    case GpScheme::Exact: {
      const double k0 = kernel_.variance_at_zero();
      const Eigen::MatrixXd ks = kernel_.matrix(x_, xs);  // n x ns
      const Eigen::MatrixXd sol = exact_llt_.solve(ks);
      for (Eigen::Index j = 0; j < ns; ++j) var[j] = k0 - ks.col(j).dot(sol.col(j));
      break;
    }
    case GpScheme::Sor:
    case GpScheme::Fitc: {
      const Eigen::MatrixXd ksm = kernel_.matrix(xs, inducing_);  // ns x m
      const Eigen::MatrixXd a_sol = a_llt_.solve(ksm.transpose());
      if (scheme_ == GpScheme::Sor) {
        for (Eigen::Index j = 0; j < ns; ++j) var[j] = ksm.row(j).dot(a_sol.col(j).eval());
      } else {
        const double k0 = kernel_.variance_at_zero();
        const Eigen::MatrixXd kmm_sol = kmm_llt_.solve(ksm.transpose());
        for (Eigen::Index j = 0; j < ns; ++j) {
          var[j] = k0 - ksm.row(j).dot(kmm_sol.col(j).eval()) + ksm.row(j).dot(a_sol.col(j).eval());
        }
      }
      break;
    }
    case GpScheme::Ski: {
      // One CG solve per test point against the interpolated cross column.
      const SparseWeights ws = build_weights(xs, *grid_, interp_);
      const std::int64_t m = kuu_->size();
      const LinOp op = [this](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
        out = w_->apply(kuu_->matvec(w_->apply_transpose(v)));
        out += sigma2_ * v;
      };
      Eigen::VectorXd wstar = Eigen::VectorXd::Zero(m);
      for (Eigen::Index j = 0; j < ns; ++j) {
        wstar.setZero();
        const auto idx = ws.row_indices(j);
        const auto val = ws.row_values(j);
        for (std::size_t t = 0; t < idx.size(); ++t) wstar[idx[t]] += val[t];
        const Eigen::VectorXd ku = kuu_->matvec(wstar);
        const double kss = wstar.dot(ku);
        const Eigen::VectorXd cross = w_->apply(ku);
        const SolveReport rep = cg_solve(op, cross, cg_cfg_);
        cg_ok_ = cg_ok_ && rep.converged;
        var[j] = kss - cross.dot(rep.x);
      }
      break;
    }
  }
  return var.cwiseMax(0.0);
}

const EigenSystem& GpModel::kuu_eigensystem() {
  if (!kuu_eig_) kuu_eig_ = kuu_->eig();
  return *kuu_eig_;
}

double GpModel::log_marginal_likelihood() {
  ensure_fitted();
  const Eigen::Index n = x_.rows();
  const double mu = mean_offset();
  const Eigen::VectorXd yc = y_.array() - mu;
  double fit_term = 0.0;
  double logdet = 0.0;

  switch (scheme_) {
    case GpScheme::Exact: {
      fit_term = yc.dot(alpha_);
      logdet = 2.0 * exact_llt_.matrixLLT().diagonal().array().log().sum();
      break;
    }
    case GpScheme::Sor:
    case GpScheme::Fitc: {
      const Eigen::VectorXd inv_lambda_y = yc.cwiseQuotient(lambda_);
      fit_term = yc.dot(inv_lambda_y) - (knm_.transpose() * inv_lambda_y).dot(beta_);
      const double log_a = 2.0 * a_llt_.matrixLLT().diagonal().array().log().sum();
      const double log_kmm = 2.0 * kmm_llt_.matrixLLT().diagonal().array().log().sum();
      logdet = log_a - log_kmm + lambda_.array().log().sum();
      break;
    }
    case GpScheme::Ski: {
      fit_term = yc.dot(alpha_);
      if (logdet_mode_ == LogdetMode::Scaled) {
        const Eigen::VectorXd lam = kuu_eigensystem().clamped_eigenvalues();
        logdet = logdet_scaled(std::span<const double>(lam.data(),
                                                       static_cast<std::size_t>(lam.size())),
                               n, sigma2_);
      } else {
        if (n > kDenseCap) {
          throw std::invalid_argument("gp: exact-dense logdet requested beyond size cap");
        }
        const Eigen::MatrixXd kuu_dense = kuu_->to_dense(kDenseCap);
        const Eigen::MatrixXd wd = w_->to_dense();
        Eigen::MatrixXd kski = wd * kuu_dense * wd.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kski);
        if (es.info() != Eigen::Success) throw NumericError("gp: dense logdet eigensolver failed");
        const Eigen::VectorXd lam = es.eigenvalues();
        logdet = logdet_exact(std::span<const double>(lam.data(),
                                                      static_cast<std::size_t>(lam.size())),
                              sigma2_);
      }
      break;
    }
  }
  return -0.5 * (fit_term + logdet + static_cast<double>(n) * std::log(2.0 * M_PI));
}

Eigen::VectorXd GpModel::params_raw() const {
  const std::vector<double> kraw = kernel_.hypers_raw();
  Eigen::VectorXd p(static_cast<Eigen::Index>(kraw.size()) + 1);
  for (std::size_t i = 0; i < kraw.size(); ++i) p[static_cast<Eigen::Index>(i)] = kraw[i];
  p[p.size() - 1] = std::log(sigma2_);
  return p;
}

void GpModel::set_params_raw(const Eigen::VectorXd& raw) {
  if (raw.size() != static_cast<Eigen::Index>(kernel_.num_hypers()) + 1) {
    throw std::invalid_argument("gp: parameter vector length mismatch");
  }
  std::vector<double> kraw(raw.data(), raw.data() + raw.size() - 1);
  kernel_.set_hypers_raw(kraw);
  const double s2 = std::exp(raw[raw.size() - 1]);
  if (!(s2 > 0.0) || !std::isfinite(s2)) {
    throw std::invalid_argument("gp: log-noise parameter out of range");
  }
  sigma2_ = s2;
  invalidate();
}

std::vector<std::string> GpModel::param_names() const {
  std::vector<std::string> names = kernel_.hyper_names();
  names.push_back("log_noise_variance");
  return names;
}

Eigen::VectorXd GpModel::ski_apply(const Eigen::VectorXd& v) {
  Eigen::VectorXd out = ski_cov_apply(v);
  out += sigma2_ * v;
  return out;
}

Eigen::VectorXd GpModel::ski_cov_apply(const Eigen::VectorXd& v) {
  if (scheme_ != GpScheme::Ski) throw std::logic_error("gp: ski_apply on non-SKI model");
  ensure_fitted();
  if (v.size() != x_.rows()) throw std::invalid_argument("gp: ski_apply dimension mismatch");
  return w_->apply(kuu_->matvec(w_->apply_transpose(v)));
}

// --- serialization ---------------------------------------------------------

namespace {

void save_kernel_lines(std::ostream& os, const Kernel& k, const std::string& prefix) {
  switch (k.family()) {
    case KernelFamily::Rbf:
      os << prefix << "family = rbf\n" << prefix << "dim = " << k.input_dim() << "\n";
      break;
    case KernelFamily::SpectralMixture:
      os << prefix << "family = sm\n" << prefix << "q = " << k.sm_components() << "\n";
      break;
    case KernelFamily::Product:
      os << prefix << "family = product\n" << prefix << "factors = " << k.factors().size() << "\n";
      for (std::size_t i = 0; i < k.factors().size(); ++i) {
        save_kernel_lines(os, k.factors()[i], prefix + "factor" + std::to_string(i) + ".");
      }
      return;
  }
  os << prefix << "raw =";
  for (double v : k.hypers_raw()) os << ' ' << format_g17(v);
  os << "\n";
}

std::vector<double> parse_doubles(const std::string& s) {
  std::istringstream is(s);
  std::vector<double> out;
  double v = 0.0;
  while (is >> v) out.push_back(v);
  return out;
}

Kernel load_kernel_lines(const std::map<std::string, std::string>& kv, const std::string& prefix) {
  const auto get = [&kv, &prefix](const std::string& key) -> const std::string& {
    auto it = kv.find(prefix + key);
    if (it == kv.end()) throw std::invalid_argument("model manifest: missing key " + prefix + key);
    return it->second;
  };
  const std::string family = get("family");
  if (family == "rbf") {
    const int dim = std::stoi(get("dim"));
    Kernel k = Kernel::rbf(dim, 1.0, 1.0);
    k.set_hypers_raw(parse_doubles(get("raw")));
    return k;
  }
  if (family == "sm") {
    const int q = std::stoi(get("q"));
    const std::vector<double> ones(static_cast<std::size_t>(q), 1.0);
    Kernel k = Kernel::spectral_mixture(ones, ones, ones);
    k.set_hypers_raw(parse_doubles(get("raw")));
    return k;
  }
  if (family == "product") {
    const int nf = std::stoi(get("factors"));
    std::vector<Kernel> factors;
    for (int i = 0; i < nf; ++i) {
      factors.push_back(load_kernel_lines(kv, prefix + "factor" + std::to_string(i) + "."));
    }
    return Kernel::product(std::move(factors));
  }
  throw std::invalid_argument("model manifest: unknown kernel family " + family);
}

}  // namespace

void GpModel::save(std::ostream& os) const {
  os << "skigp-model v1\n";
  os << "scheme = " << gp_scheme_name(scheme_) << "\n";
  os << "sigma2 = " << format_g17(sigma2_) << "\n";
  os << "mean_mode = " << (mean_mode_ == MeanMode::Zero ? "zero" : "empirical") << "\n";
  save_kernel_lines(os, kernel_, "kernel.");
  if (scheme_ == GpScheme::Ski) {
    os << "interp = " << interp_scheme_name(interp_) << "\n";
    os << "grid.dim = " << grid_->dim() << "\n";
    for (int p = 0; p < grid_->dim(); ++p) {
      const std::vector<double>& axis = grid_->axis(p);
      os << "grid.axis" << p << " =";
      if (grid_->axis_equispaced(p)) {
        os << " regular " << format_g17(axis.front()) << ' ' << format_g17(axis.back()) << ' '
           << axis.size();
      } else {
        os << " explicit";
        for (double v : axis) os << ' ' << format_g17(v);
      }
      os << "\n";
    }
  }
  if (scheme_ == GpScheme::Sor || scheme_ == GpScheme::Fitc) {
    os << "inducing.rows = " << inducing_.rows() << "\n";
    os << "inducing.dim = " << inducing_.cols() << "\n";
    for (Eigen::Index i = 0; i < inducing_.rows(); ++i) {
      os << "inducing.row" << i << " =";
      for (Eigen::Index j = 0; j < inducing_.cols(); ++j) os << ' ' << format_g17(inducing_(i, j));
      os << "\n";
    }
  }
  os << "end\n";
}

void GpModel::save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("gp: cannot open " + path + " for writing");
  save(os);
}

GpModel GpModel::load(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "skigp-model v1") {
    throw std::invalid_argument("model manifest: bad header");
  }
  std::map<std::string, std::string> kv;
  while (std::getline(is, line)) {
    if (line == "end") break;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto trim = [](std::string& s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
    };
    trim(key);
    trim(value);
    kv[key] = value;
  }
  const auto get = [&kv](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("model manifest: missing key " + key);
    return it->second;
  };

  Kernel kernel = load_kernel_lines(kv, "kernel.");
  const double sigma2 = std::stod(get("sigma2"));
  const std::string scheme = get("scheme");

  std::optional<GpModel> model;
  if (scheme == "exact") {
    model = GpModel::exact(std::move(kernel), sigma2);
  } else if (scheme == "sor" || scheme == "fitc") {
    const Eigen::Index rows = std::stoll(get("inducing.rows"));
    const Eigen::Index dim = std::stoll(get("inducing.dim"));
    Eigen::MatrixXd u(rows, dim);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const std::vector<double> vals = parse_doubles(get("inducing.row" + std::to_string(i)));
      if (static_cast<Eigen::Index>(vals.size()) != dim) {
        throw std::invalid_argument("model manifest: inducing row length mismatch");
      }
      for (Eigen::Index j = 0; j < dim; ++j) u(i, j) = vals[static_cast<std::size_t>(j)];
    }
    model = scheme == "sor" ? GpModel::sor(std::move(kernel), std::move(u), sigma2)
                            : GpModel::fitc(std::move(kernel), std::move(u), sigma2);
  } else if (scheme == "ski") {
    const int dim = std::stoi(get("grid.dim"));
    std::vector<std::vector<double>> axes;
    for (int p = 0; p < dim; ++p) {
      std::istringstream as(get("grid.axis" + std::to_string(p)));
      std::string kind;
      as >> kind;
      if (kind == "regular") {
        double lo = 0.0, hi = 0.0;
        std::size_t count = 0;
        as >> lo >> hi >> count;
        std::vector<double> axis(count);
        for (std::size_t i = 0; i < count; ++i) {
          axis[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        }
        axis.back() = hi;
        axes.push_back(std::move(axis));
      } else if (kind == "explicit") {
        std::vector<double> axis;
        double v = 0.0;
        while (as >> v) axis.push_back(v);
        axes.push_back(std::move(axis));
      } else {
        throw std::invalid_argument("model manifest: unknown axis kind " + kind);
      }
    }
    model = GpModel::ski(std::move(kernel), ProductGrid::from_axes(std::move(axes)),
                         interp_scheme_from_name(get("interp")), sigma2);
  } else {
    throw std::invalid_argument("model manifest: unknown scheme " + scheme);
  }

  if (get("mean_mode") == "empirical") model->set_mean_mode(MeanMode::Empirical);
  return std::move(*model);
}

GpModel GpModel::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("gp: cannot open " + path);
  return load(is);
}

// --- learning ---------------------------------------------------------------

LearnResult learn_hypers(GpModel& model, const LearnOptions& opts) {
  const CgConfig saved_cfg = model.cg_config();
  CgConfig learn_cfg = saved_cfg;
  learn_cfg.tol = opts.cg_tol;
  learn_cfg.record_residuals = false;
  model.set_cg_config(learn_cfg);

  const auto objective = [&model](const Eigen::VectorXd& p) -> double {
    try {
      model.set_params_raw(p);
      return -model.log_marginal_likelihood();
    } catch (const NumericError&) {
      return std::numeric_limits<double>::quiet_NaN();
    } catch (const std::invalid_argument&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  NlcgOptions nopts;
  nopts.max_iters = opts.max_iters;
  nopts.max_evals = opts.max_evals;
  nopts.grad_tol = opts.grad_tol;
  nopts.fd_step = opts.fd_step;
  nopts.verbose = opts.verbose;

  const NlcgResult nres = nlcg_minimize(objective, model.params_raw(), nopts);

  model.set_params_raw(nres.x);
  model.set_cg_config(saved_cfg);

  LearnResult res;
  res.objective_trace.reserve(nres.trace.size());
  for (double f : nres.trace) res.objective_trace.push_back(-f);
  res.best_objective = -nres.f;
  res.iterations = nres.iterations;
  res.evaluations = nres.evaluations;
  res.converged = nres.converged;
  res.eval_budget_hit = nres.eval_budget_hit;
  return res;
}

// --- prior sampling ----------------------------------------------------------

Eigen::MatrixXd sample_prior(const Kernel& kernel, const ProductGrid& grid, InterpScheme scheme,
                             const Eigen::MatrixXd& x, std::uint64_t seed, int count) {
  if (count < 1) throw std::invalid_argument("sample_prior: count must be >= 1");
  const SparseWeights w = build_weights(x, grid, scheme);
  const std::int64_t m = grid.size();

  std::vector<Eigen::MatrixXd> chol_lower;
  chol_lower.reserve(static_cast<std::size_t>(grid.dim()));
  for (int p = 0; p < grid.dim(); ++p) {
    const Kernel f = kernel.axis_factor(p);
    const Eigen::MatrixXd pts = axis_points(grid, p);
    const Eigen::MatrixXd kp = f.matrix(pts, pts);
    const Eigen::LLT<Eigen::MatrixXd> llt =
        chol_with_jitter(kp, f.variance_at_zero(), "sample_prior factor");
    chol_lower.push_back(llt.matrixL());
  }

  GaussianSampler rng(seed);
  Eigen::MatrixXd out(x.rows(), count);
  std::vector<double> nu(static_cast<std::size_t>(m));
  std::vector<double> tmp(static_cast<std::size_t>(m));
  for (int s = 0; s < count; ++s) {
    for (double& v : nu) v = rng.normal();
    std::int64_t left = 1;
    std::int64_t right = m;
    for (const Eigen::MatrixXd& l : chol_lower) {
      const std::int64_t np = l.rows();
      right /= np;
      apply_along_mode(nu, tmp, left, np, right,
                       [&l](std::span<const double> a, std::span<double> b) {
                         Eigen::Map<const Eigen::VectorXd> av(a.data(), l.rows());
                         Eigen::Map<Eigen::VectorXd> bv(b.data(), l.rows());
                         bv.noalias() = l * av;
                       });
      nu.swap(tmp);
      left *= np;
    }
    Eigen::VectorXd fs(x.rows());
    w.apply(nu, std::span<double>(fs.data(), static_cast<std::size_t>(fs.size())));
    out.col(s) = fs;
  }
  return out;
}

// --- pointwise SoR / FITC covariances ----------------------------------------

double sor_cov(const Kernel& kernel, std::span<const double> x, std::span<const double> z,
               const Eigen::MatrixXd& inducing) {
  const Eigen::Index m = inducing.rows();
  const Eigen::MatrixXd kmm = kernel.matrix(inducing, inducing);
  const Eigen::LLT<Eigen::MatrixXd> llt =
      chol_with_jitter(kmm, kernel.variance_at_zero(), "sor_cov");
  Eigen::VectorXd kxu(m), kuz(m);
  std::vector<double> u(static_cast<std::size_t>(inducing.cols()));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < inducing.cols(); ++j) u[static_cast<std::size_t>(j)] = inducing(i, j);
    kxu[i] = kernel.eval(x, u);
    kuz[i] = kernel.eval(u, z);
  }
  return kxu.dot(llt.solve(kuz));
}

double fitc_cov(const Kernel& kernel, std::span<const double> x, std::span<const double> z,
                const Eigen::MatrixXd& inducing) {
  const double sor = sor_cov(kernel, x, z, inducing);
  if (x.size() == z.size() && std::equal(x.begin(), x.end(), z.begin())) {
    return kernel.eval(x, z);  // diagonal correction restores the exact value
  }
  return sor;
}

}  // namespace skigp
