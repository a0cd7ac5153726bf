#pragma once

#include "glwt/spectral.hpp"

#include <vector>

namespace glwt {

/// Per-scale shrinkage threshold, gain and phase.
struct ModulationParams {
  Vector threshold;  // lambda_k >= 0
  Vector gain;       // gamma_k
  Vector phase;      // theta_k, radians; enters only through cos
};

struct FusionParams {
  Vector logits;  // alpha_k
};

/// Numerically stable softmax. Shifting all logits by a constant leaves the
/// result unchanged.
Vector softmax(const Vector& logits);

struct GlwtModel {
  FilterBank bank;
  ModulationParams modulation;
  FusionParams fusion;
  Vector tau;            // binarization threshold per scale
  double epsilon = 0.1;  // fuzzy sharpness

  int num_scales() const { return bank.size(); }
  Vector weights() const { return softmax(fusion.logits); }
  /// Throws InvalidArgument / NegativeThreshold on malformed parameters.
  void validate() const;

  /// lambda = 0, gamma = 1, theta = 0, alpha = 0, tau = 0.
  static GlwtModel identity_like(const FilterBank& bank, double epsilon = 0.1);
};

/// Row k holds c_k = g_k(s_k L) f.
using ScaleCoefficients = Matrix;

ScaleCoefficients decompose(const ScaleFilter& op, const GlwtModel& model, const Vector& signal);

/// cos(theta), with values within 1e-15 of zero snapped to exactly zero so
/// that theta = pi/2 closes the gate in floating point.
double phase_gate(double phase);

/// gamma * sign(c) * max(|c| - lambda, 0) * cos(theta), elementwise.
Vector modulate(const Vector& coeffs, double threshold, double gain, double phase);

/// g_k(s_k L) applied to the modulated coefficients of scale k.
Vector reconstruct_scale(const ScaleFilter& op, int k, const Vector& modulated);

/// sum_k softmax(alpha)_k partial_k; partials are the rows of the matrix.
Vector fuse(const Matrix& partials, const FusionParams& fusion);

struct ForwardResult {
  Vector output;
  Matrix coeffs;     // K x n, c_k
  Matrix modulated;  // K x n, phi_k(c_k)
  Matrix partials;   // K x n, f^(k)
  Vector weights;    // softmax(alpha)
};

ForwardResult forward(const GlwtModel& model, const ScaleFilter& op, const Vector& signal);

/// Runs forward on each column of an n x d feature matrix and averages the
/// modulated coefficients across columns. Returns K x n.
Matrix feature_activations(const GlwtModel& model, const ScaleFilter& op, const Matrix& features);

}  // namespace glwt
