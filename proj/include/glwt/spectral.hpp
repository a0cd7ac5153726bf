#pragma once

#include "glwt/graph.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace glwt {

enum class KernelFamily { Heat, MexicanHat, Spline };

std::string to_string(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& text);

/// Spectral kernel g evaluated at x = s * lambda.
///   Heat:       e^{-x}
///   MexicanHat: x e^{-x}
///   Spline:     cubic-spline band-pass (x^2 below 1, cubic blend on [1,2],
///               4/x^2 above 2)
struct KernelSpec {
  KernelFamily family = KernelFamily::Heat;
};

/// K scales of one kernel family. Invariants checked by validate():
/// K >= 1, scales positive and strictly increasing, lambda_max > 0.
struct FilterBank {
  KernelSpec kernel;
  std::vector<double> scales;
  int cheb_order = 30;
  double lambda_max = 2.0;

  int size() const { return static_cast<int>(scales.size()); }
  void validate() const;

  /// Heat bank on the log-spaced grid {0.1, 0.3, 1, 3, 10}.
  static FilterBank standard();
};

struct ChebCoeffs {
  std::vector<double> coefficients;  // c_0 .. c_order (c_0 already halved)
  double scale = 0.0;
  double lambda_max = 0.0;

  int order() const { return static_cast<int>(coefficients.size()) - 1; }
  /// Evaluates the expansion at a scalar eigenvalue.
  double evaluate(double lambda) const;
};

double kernel_eval(const KernelSpec& spec, double scale, double lambda);

/// U diag(g(s lambda_i)) U^T f.
Vector filter_apply_exact(const SpectralBasis& basis, const KernelSpec& spec, double scale,
                          const Vector& signal);

/// Power iteration on L from a seeded random start, times 1.01. Not a
/// certified upper bound. Returns 1.0 for the zero matrix.
double estimate_lambda_max(const Matrix& laplacian, int iterations, std::uint64_t seed);

/// Chebyshev-Gauss quadrature fit of g(s lambda) on [0, lambda_max].
/// quad_points <= 0 selects max(64, 2 (order + 1)).
ChebCoeffs chebyshev_fit(const KernelSpec& spec, double scale, int cheb_order, double lambda_max,
                         int quad_points = 0);

/// sum_k c_k T_k(L~) f with L~ = 2 L / lambda_max - I, via the three-term
/// recurrence.
Vector chebyshev_apply(const Matrix& laplacian, const ChebCoeffs& coeffs, const Vector& signal);

/// psi_{s,i} = g(s L) delta_i.
Vector wavelet_atom(const SpectralBasis& basis, const KernelSpec& spec, double scale, int node);

double wavelet_coefficient(const Vector& atom, const Vector& signal);

/// Coefficient table W(s_k, i): row k holds <psi_{s_k,i}, f> for every node.
Matrix frame_analyze(const SpectralBasis& basis, const KernelSpec& spec,
                     const std::vector<double>& scales, const Vector& signal);

/// sum_k sum_i W(k, i) psi_{s_k,i}. Exact inversion only for tight frames.
Vector frame_synthesize(const SpectralBasis& basis, const KernelSpec& spec,
                        const std::vector<double>& scales, const Matrix& coeffs);

struct FrameBounds {
  double lower = 0.0;  // min over eigenvalues of sum_k g(s_k lambda)^2
  double upper = 0.0;
  bool tight(double tol = 1e-9) const { return upper - lower <= tol; }
};

FrameBounds frame_bounds(const SpectralBasis& basis, const KernelSpec& spec,
                         const std::vector<double>& scales);

enum class FilterPath { Exact, Chebyshev };

/// The "basis or operator" behind every per-scale filtering in the model:
/// either the exact eigenbasis or the Laplacian with one Chebyshev fit per
/// scale. Immutable; cheap to copy.
class ScaleFilter {
 public:
  static ScaleFilter exact(std::shared_ptr<const SpectralBasis> basis, const FilterBank& bank);
  static ScaleFilter chebyshev(std::shared_ptr<const Matrix> laplacian, const FilterBank& bank);
  /// Exact for n <= 512, Chebyshev beyond.
  static ScaleFilter automatic(const Graph& g, LaplacianKind kind, const FilterBank& bank);

  FilterPath path() const { return path_; }
  int n() const { return n_; }
  int num_scales() const { return static_cast<int>(scales_.size()); }
  const std::vector<double>& scales() const { return scales_; }
  const SpectralBasis* basis() const { return basis_.get(); }

  /// g_k(s_k L) f. The operator is symmetric, so it is its own adjoint.
  Vector apply(int k, const Vector& signal) const;

 private:
  FilterPath path_ = FilterPath::Exact;
  int n_ = 0;
  KernelSpec kernel_;
  std::vector<double> scales_;
  std::shared_ptr<const SpectralBasis> basis_;
  std::shared_ptr<const Matrix> laplacian_;
  std::vector<ChebCoeffs> cheb_;
  std::vector<Vector> responses_;  // g(s_k lambda_i) per scale, exact path
};

}  // namespace glwt
