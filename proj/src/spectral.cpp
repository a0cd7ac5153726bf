#include "glwt/spectral.hpp"

#include "glwt/error.hpp"
#include "glwt/rng.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace glwt {

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Heat: return "heat";
    case KernelFamily::MexicanHat: return "mexican_hat";
    case KernelFamily::Spline: return "spline";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(const std::string& text) {
  if (text == "heat") return KernelFamily::Heat;
  if (text == "mexican_hat") return KernelFamily::MexicanHat;
  if (text == "spline") return KernelFamily::Spline;
  fail(ErrorKind::UnsupportedFamily, "unknown kernel family '" + text + "'");
}

void FilterBank::validate() const {
  if (scales.empty()) fail(ErrorKind::InvalidArgument, "filter bank needs at least one scale");
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (!(scales[k] > 0.0) || !std::isfinite(scales[k])) {
      fail(ErrorKind::InvalidArgument, "scale " + std::to_string(k) + " must be positive");
    }
    if (k > 0 && !(scales[k] > scales[k - 1])) {
      fail(ErrorKind::InvalidArgument, "scales must be strictly increasing");
    }
  }
  if (cheb_order < 0) fail(ErrorKind::InvalidOrder, "cheb_order must be nonnegative");
  if (!(lambda_max > 0.0)) fail(ErrorKind::InvalidArgument, "lambda_max must be positive");
}

FilterBank FilterBank::standard() {
  FilterBank bank;
  bank.kernel.family = KernelFamily::Heat;
  bank.scales = {0.1, 0.3, 1.0, 3.0, 10.0};
  bank.cheb_order = 30;
  bank.lambda_max = 2.0;
  return bank;
}

double kernel_eval(const KernelSpec& spec, double scale, double lambda) {
  if (scale < 0.0) fail(ErrorKind::InvalidArgument, "scale must be nonnegative");
  if (lambda < 0.0) fail(ErrorKind::InvalidArgument, "eigenvalue must be nonnegative");
  const double x = scale * lambda;
  switch (spec.family) {
    case KernelFamily::Heat:
      return std::exp(-x);
    case KernelFamily::MexicanHat:
      return x * std::exp(-x);
    case KernelFamily::Spline:
      if (x < 1.0) return x * x;
      if (x <= 2.0) return -5.0 + x * (11.0 + x * (-6.0 + x));
      return 4.0 / (x * x);
  }
  fail(ErrorKind::UnsupportedFamily, "kernel family not implemented");
}

namespace {

Vector kernel_response(const SpectralBasis& basis, const KernelSpec& spec, double scale) {
  Vector g(basis.n());
  for (int i = 0; i < basis.n(); ++i) g[i] = kernel_eval(spec, scale, basis.eigenvalues[i]);
  return g;
}

void check_length(const Vector& v, int n, const char* what) {
  if (v.size() != n) {
    fail(ErrorKind::DimensionMismatch, std::string(what) + " length " + std::to_string(v.size()) +
                                           " != " + std::to_string(n));
  }
}

}  // namespace

Vector filter_apply_exact(const SpectralBasis& basis, const KernelSpec& spec, double scale,
                          const Vector& signal) {
  check_length(signal, basis.n(), "signal");
  const Vector g = kernel_response(basis, spec, scale);
  const Vector spectrum = basis.eigenvectors.transpose() * signal;
  return basis.eigenvectors * g.cwiseProduct(spectrum);
}

double estimate_lambda_max(const Matrix& laplacian, int iterations, std::uint64_t seed) {
  const Eigen::Index n = laplacian.rows();
  if (n == 0 || laplacian.cwiseAbs().maxCoeff() == 0.0) return 1.0;
  Rng rng(seed);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.normal();
  x.normalize();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector y = laplacian * x;
    const double norm = y.norm();
    if (norm == 0.0) break;
    estimate = norm;
    x = y / norm;
  }
  // Rayleigh quotient of the final iterate is a tighter lower bound
  const double rayleigh = x.dot(laplacian * x);
  estimate = std::max(estimate, rayleigh);
  if (!(estimate > 0.0)) return 1.0;
  return estimate * 1.01;
}

double ChebCoeffs::evaluate(double lambda) const {
  const double x = 2.0 * lambda / lambda_max - 1.0;
  double t_prev = 1.0;
  double t_cur = x;
  double sum = coefficients.empty() ? 0.0 : coefficients[0];
  for (std::size_t k = 1; k < coefficients.size(); ++k) {
    sum += coefficients[k] * t_cur;
    const double t_next = 2.0 * x * t_cur - t_prev;
    t_prev = t_cur;
    t_cur = t_next;
  }
  return sum;
}

ChebCoeffs chebyshev_fit(const KernelSpec& spec, double scale, int cheb_order, double lambda_max,
                         int quad_points) {
  if (cheb_order < 0) fail(ErrorKind::InvalidOrder, "cheb_order must be nonnegative");
  if (!(lambda_max > 0.0)) fail(ErrorKind::InvalidArgument, "lambda_max must be positive");
  const int order_plus_one = cheb_order + 1;
  if (quad_points <= 0) quad_points = std::max(64, 2 * order_plus_one);
  if (quad_points < order_plus_one) {
    fail(ErrorKind::InvalidOrder, "quad_points must be at least cheb_order + 1");
  }
  const double half = lambda_max / 2.0;
  std::vector<double> angle(static_cast<std::size_t>(quad_points));
  std::vector<double> value(static_cast<std::size_t>(quad_points));
  for (int m = 0; m < quad_points; ++m) {
    angle[m] = std::numbers::pi * (m + 0.5) / quad_points;
    const double lambda = half * (std::cos(angle[m]) + 1.0);
    value[m] = kernel_eval(spec, scale, std::max(0.0, lambda));
  }
  ChebCoeffs out;
  out.scale = scale;
  out.lambda_max = lambda_max;
  out.coefficients.resize(static_cast<std::size_t>(order_plus_one));
  for (int k = 0; k < order_plus_one; ++k) {
    double sum = 0.0;
    for (int m = 0; m < quad_points; ++m) sum += value[m] * std::cos(k * angle[m]);
    out.coefficients[k] = 2.0 * sum / quad_points;
  }
  out.coefficients[0] *= 0.5;
  return out;
}

Vector chebyshev_apply(const Matrix& laplacian, const ChebCoeffs& coeffs, const Vector& signal) {
  if (laplacian.rows() != laplacian.cols() || laplacian.rows() != signal.size()) {
    fail(ErrorKind::DimensionMismatch, "laplacian and signal sizes disagree");
  }
  if (!(coeffs.lambda_max > 0.0)) fail(ErrorKind::InvalidArgument, "lambda_max must be positive");
  if (coeffs.coefficients.empty()) return Vector::Zero(signal.size());
  const double a = 2.0 / coeffs.lambda_max;
  auto rescaled = [&](const Vector& v) -> Vector { return a * (laplacian * v) - v; };

  Vector t_prev = signal;
  Vector out = coeffs.coefficients[0] * t_prev;
  if (coeffs.coefficients.size() == 1) return out;
  Vector t_cur = rescaled(signal);
  out += coeffs.coefficients[1] * t_cur;
  for (std::size_t k = 2; k < coeffs.coefficients.size(); ++k) {
    Vector t_next = 2.0 * rescaled(t_cur) - t_prev;
    out += coeffs.coefficients[k] * t_next;
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
  }
  return out;
}

Vector wavelet_atom(const SpectralBasis& basis, const KernelSpec& spec, double scale, int node) {
  if (node < 0 || node >= basis.n()) {
    fail(ErrorKind::IndexOutOfRange, "node " + std::to_string(node) + " outside [0, " +
                                         std::to_string(basis.n()) + ")");
  }
  Vector delta = Vector::Zero(basis.n());
  delta[node] = 1.0;
  return filter_apply_exact(basis, spec, scale, delta);
}

double wavelet_coefficient(const Vector& atom, const Vector& signal) {
  if (atom.size() != signal.size()) fail(ErrorKind::DimensionMismatch, "atom and signal lengths differ");
  return atom.dot(signal);
}

Matrix frame_analyze(const SpectralBasis& basis, const KernelSpec& spec,
                     const std::vector<double>& scales, const Vector& signal) {
  check_length(signal, basis.n(), "signal");
  Matrix table(static_cast<Eigen::Index>(scales.size()), basis.n());
  for (std::size_t k = 0; k < scales.size(); ++k) {
    for (int i = 0; i < basis.n(); ++i) {
      table(static_cast<Eigen::Index>(k), i) =
          wavelet_coefficient(wavelet_atom(basis, spec, scales[k], i), signal);
    }
  }
  return table;
}

Vector frame_synthesize(const SpectralBasis& basis, const KernelSpec& spec,
                        const std::vector<double>& scales, const Matrix& coeffs) {
  if (coeffs.rows() != static_cast<Eigen::Index>(scales.size()) || coeffs.cols() != basis.n()) {
    fail(ErrorKind::DimensionMismatch, "coefficient table must be K x n");
  }
  Vector out = Vector::Zero(basis.n());
  for (std::size_t k = 0; k < scales.size(); ++k) {
    for (int i = 0; i < basis.n(); ++i) {
      out += coeffs(static_cast<Eigen::Index>(k), i) * wavelet_atom(basis, spec, scales[k], i);
    }
  }
  return out;
}

FrameBounds frame_bounds(const SpectralBasis& basis, const KernelSpec& spec,
                         const std::vector<double>& scales) {
  Vector total = Vector::Zero(basis.n());
  for (double s : scales) total += kernel_response(basis, spec, s).cwiseAbs2();
  return FrameBounds{total.minCoeff(), total.maxCoeff()};
}

ScaleFilter ScaleFilter::exact(std::shared_ptr<const SpectralBasis> basis, const FilterBank& bank) {
  bank.validate();
  ScaleFilter op;
  op.path_ = FilterPath::Exact;
  op.n_ = basis->n();
  op.kernel_ = bank.kernel;
  op.scales_ = bank.scales;
  for (double s : bank.scales) op.responses_.push_back(kernel_response(*basis, bank.kernel, s));
  op.basis_ = std::move(basis);
  return op;
}

ScaleFilter ScaleFilter::chebyshev(std::shared_ptr<const Matrix> laplacian, const FilterBank& bank) {
  bank.validate();
  ScaleFilter op;
  op.path_ = FilterPath::Chebyshev;
  op.n_ = static_cast<int>(laplacian->rows());
  op.kernel_ = bank.kernel;
  op.scales_ = bank.scales;
  for (double s : bank.scales) {
    op.cheb_.push_back(chebyshev_fit(bank.kernel, s, bank.cheb_order, bank.lambda_max));
  }
  op.laplacian_ = std::move(laplacian);
  return op;
}

ScaleFilter ScaleFilter::automatic(const Graph& g, LaplacianKind kind, const FilterBank& bank) {
  auto l = std::make_shared<const Matrix>(laplacian(g, kind));
  if (g.n() <= 512) {
    return exact(std::make_shared<const SpectralBasis>(eigendecompose(*l, kind)), bank);
  }
  return chebyshev(std::move(l), bank);
}

Vector ScaleFilter::apply(int k, const Vector& signal) const {
  if (k < 0 || k >= num_scales()) {
    fail(ErrorKind::IndexOutOfRange, "scale index " + std::to_string(k) + " outside [0, " +
                                         std::to_string(num_scales()) + ")");
  }
  check_length(signal, n_, "signal");
  if (path_ == FilterPath::Exact) {
    const Vector spectrum = basis_->eigenvectors.transpose() * signal;
    return basis_->eigenvectors * responses_[k].cwiseProduct(spectrum);
  }
  return chebyshev_apply(*laplacian_, cheb_[k], signal);
}

}  // namespace glwt
