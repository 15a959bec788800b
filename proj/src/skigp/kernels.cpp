#include "skigp/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "skigp/errors.hpp"

namespace skigp {

namespace {

double safe_log(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("kernel: ") + name + " must be finite and > 0");
  }
  return std::log(v);
}

}  // namespace

bool is_equispaced(std::span<const double> axis) {
  if (axis.size() < 3) return true;
  const double mean_dx = (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
  if (!(mean_dx > 0.0)) return false;
  for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
    if (std::abs((axis[i + 1] - axis[i]) - mean_dx) > 1e-9 * mean_dx) return false;
  }
  return true;
}

Kernel Kernel::rbf(int input_dim, double lengthscale, double signal_variance) {
  if (input_dim < 1) throw std::invalid_argument("kernel: input_dim must be >= 1");
  Kernel k;
  k.family_ = KernelFamily::Rbf;
  k.input_dim_ = input_dim;
  k.raw_ = {safe_log(lengthscale, "lengthscale"), safe_log(signal_variance, "signal_variance")};
  return k;
}

Kernel Kernel::spectral_mixture(std::vector<double> weights, std::vector<double> means,
                                std::vector<double> variances) {
  const std::size_t q = weights.size();
  if (q == 0 || means.size() != q || variances.size() != q) {
    throw std::invalid_argument("kernel: spectral mixture needs equal-length, nonempty w/mu/v");
  }
  Kernel k;
  k.family_ = KernelFamily::SpectralMixture;
  k.input_dim_ = 1;
  k.q_ = static_cast<int>(q);
  k.raw_.reserve(3 * q);
  for (double w : weights) k.raw_.push_back(safe_log(w, "sm weight"));
  for (double mu : means) {
    // Frequencies are nonnegative; mu = 0 is a valid limit and maps to -inf.
    if (mu < 0.0 || !std::isfinite(mu)) throw std::invalid_argument("kernel: sm mean must be >= 0");
    k.raw_.push_back(std::log(mu));
  }
  for (double v : variances) k.raw_.push_back(safe_log(v, "sm variance"));
  return k;
}

Kernel Kernel::product(std::vector<Kernel> factors) {
  if (factors.empty()) throw std::invalid_argument("kernel: product needs at least one factor");
  for (const Kernel& f : factors) {
    if (f.input_dim() != 1) throw std::invalid_argument("kernel: product factors must be 1D");
  }
  Kernel k;
  k.family_ = KernelFamily::Product;
  k.input_dim_ = static_cast<int>(factors.size());
  k.factors_ = std::move(factors);
  return k;
}

double Kernel::eval_tau2_1d(double tau) const {
  tau = std::abs(tau);  // stationary and even; |tau| keeps eval(x,z) == eval(z,x) bitwise
  switch (family_) {
    case KernelFamily::Rbf: {
      const double ell = std::exp(raw_[0]);
      const double s2 = std::exp(raw_[1]);
      return s2 * std::exp(-0.5 * tau * tau / (ell * ell));
    }
    case KernelFamily::SpectralMixture: {
      double sum = 0.0;
      const double two_pi = 2.0 * M_PI;
      for (int i = 0; i < q_; ++i) {
        const double w = std::exp(raw_[i]);
        const double mu = std::exp(raw_[q_ + i]);
        const double v = std::exp(raw_[2 * q_ + i]);
        sum += w * std::exp(-2.0 * M_PI * M_PI * tau * tau * v) * std::cos(two_pi * tau * mu);
      }
      return sum;
    }
    case KernelFamily::Product:
      break;
  }
  throw std::logic_error("kernel: eval_tau2_1d on product family");
}

double Kernel::eval(std::span<const double> x, std::span<const double> z) const {
  if (static_cast<int>(x.size()) != input_dim_ || static_cast<int>(z.size()) != input_dim_) {
    throw std::invalid_argument("kernel: point dimension does not match input_dim");
  }
  switch (family_) {
    case KernelFamily::Rbf: {
      double d2 = 0.0;
      for (int i = 0; i < input_dim_; ++i) {
        const double d = x[i] - z[i];
        d2 += d * d;
      }
      const double ell = std::exp(raw_[0]);
      const double s2 = std::exp(raw_[1]);
      return s2 * std::exp(-0.5 * d2 / (ell * ell));
    }
    case KernelFamily::SpectralMixture:
      return eval_tau2_1d(x[0] - z[0]);
    case KernelFamily::Product: {
      double prod = 1.0;
      for (int p = 0; p < input_dim_; ++p) prod *= factors_[p].eval_tau2_1d(x[p] - z[p]);
      return prod;
    }
  }
  throw std::logic_error("kernel: unknown family");
}

double Kernel::eval1(double x, double z) const {
  if (input_dim_ != 1) throw std::invalid_argument("kernel: eval1 needs a 1D kernel");
  if (family_ == KernelFamily::Product) return factors_[0].eval_tau2_1d(x - z);
  return eval_tau2_1d(x - z);
}

double Kernel::variance_at_zero() const {
  if (family_ == KernelFamily::Product) {
    double prod = 1.0;
    for (const Kernel& f : factors_) prod *= f.eval_tau2_1d(0.0);
    return prod;
  }
  return eval_tau2_1d(0.0);
}

Eigen::MatrixXd Kernel::matrix(const Eigen::MatrixXd& x1, const Eigen::MatrixXd& x2) const {
  if (x1.cols() != input_dim_ || x2.cols() != input_dim_) {
    throw std::invalid_argument("kernel: point matrix column count does not match input_dim");
  }
  Eigen::MatrixXd out(x1.rows(), x2.rows());
  std::vector<double> a(static_cast<std::size_t>(input_dim_));
  std::vector<double> b(static_cast<std::size_t>(input_dim_));
  for (Eigen::Index i = 0; i < x1.rows(); ++i) {
    for (int d = 0; d < input_dim_; ++d) a[static_cast<std::size_t>(d)] = x1(i, d);
    for (Eigen::Index j = 0; j < x2.rows(); ++j) {
      for (int d = 0; d < input_dim_; ++d) b[static_cast<std::size_t>(d)] = x2(j, d);
      out(i, j) = eval(a, b);
    }
  }
  return out;
}

Kernel Kernel::axis_factor(int axis) const {
  if (axis < 0 || axis >= input_dim_) throw std::invalid_argument("kernel: axis out of range");
  switch (family_) {
    case KernelFamily::Product:
      return factors_[static_cast<std::size_t>(axis)];
    case KernelFamily::Rbf: {
      Kernel k;
      k.family_ = KernelFamily::Rbf;
      k.input_dim_ = 1;
      // Spread the signal variance across axes so the product of factors
      // reproduces the joint kernel.
      k.raw_ = {raw_[0], raw_[1] / static_cast<double>(input_dim_)};
      return k;
    }
    case KernelFamily::SpectralMixture:
      return *this;  // 1D by construction
  }
  throw std::logic_error("kernel: unknown family");
}

std::vector<double> Kernel::toeplitz_column(std::span<const double> axis) const {
  if (input_dim_ != 1) throw std::invalid_argument("kernel: toeplitz_column needs a 1D kernel");
  if (axis.empty()) throw std::invalid_argument("kernel: toeplitz_column on empty axis");
  if (!is_equispaced(axis)) {
    throw StructureError("kernel: toeplitz_column requires an equispaced axis");
  }
  const double dx = axis.size() > 1
                        ? (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1)
                        : 0.0;
  std::vector<double> col(axis.size());
  for (std::size_t t = 0; t < axis.size(); ++t) col[t] = eval1(0.0, static_cast<double>(t) * dx);
  return col;
}

std::size_t Kernel::num_hypers() const {
  switch (family_) {
    case KernelFamily::Rbf:
      return 2;
    case KernelFamily::SpectralMixture:
      return static_cast<std::size_t>(3 * q_);
    case KernelFamily::Product: {
      std::size_t n = 0;
      for (const Kernel& f : factors_) n += f.num_hypers();
      return n;
    }
  }
  return 0;
}

std::vector<double> Kernel::hypers_raw() const {
  if (family_ != KernelFamily::Product) return raw_;
  std::vector<double> out;
  out.reserve(num_hypers());
  for (const Kernel& f : factors_) {
    const std::vector<double> sub = f.hypers_raw();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

void Kernel::set_hypers_raw(std::span<const double> raw) {
  if (raw.size() != num_hypers()) {
    throw std::invalid_argument("kernel: hyperparameter vector length does not match arity");
  }
  for (double v : raw) {
    if (std::isnan(v)) throw std::invalid_argument("kernel: hyperparameter is NaN");
  }
  if (family_ != KernelFamily::Product) {
    raw_.assign(raw.begin(), raw.end());
    return;
  }
  std::size_t off = 0;
  for (Kernel& f : factors_) {
    const std::size_t n = f.num_hypers();
    f.set_hypers_raw(raw.subspan(off, n));
    off += n;
  }
}

std::vector<std::string> Kernel::hyper_names() const {
  std::vector<std::string> names;
  switch (family_) {
    case KernelFamily::Rbf:
      names = {"rbf.log_lengthscale", "rbf.log_signal_variance"};
      break;
    case KernelFamily::SpectralMixture:
      for (int i = 0; i < q_; ++i) names.push_back("sm.log_weight" + std::to_string(i));
      for (int i = 0; i < q_; ++i) names.push_back("sm.log_mean" + std::to_string(i));
      for (int i = 0; i < q_; ++i) names.push_back("sm.log_variance" + std::to_string(i));
      break;
    case KernelFamily::Product:
      for (std::size_t p = 0; p < factors_.size(); ++p) {
        for (const std::string& s : factors_[p].hyper_names()) {
          names.push_back("axis" + std::to_string(p) + "." + s);
        }
      }
      break;
  }
  return names;
}

std::string Kernel::describe() const {
  std::ostringstream os;
  switch (family_) {
    case KernelFamily::Rbf:
      os << "rbf dim=" << input_dim_;
      break;
    case KernelFamily::SpectralMixture:
      os << "sm q=" << q_;
      break;
    case KernelFamily::Product:
      os << "product";
      for (const Kernel& f : factors_) os << " [" << f.describe() << "]";
      break;
  }
  return os.str();
}

}  // namespace skigp
