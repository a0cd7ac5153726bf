#include "glwt/pipeline.hpp"

#include "glwt/error.hpp"

#include <cmath>

namespace glwt {

Vector softmax(const Vector& logits) {
  if (logits.size() == 0) fail(ErrorKind::InvalidArgument, "softmax of an empty vector");
  const double shift = logits.maxCoeff();
  Vector w = (logits.array() - shift).exp().matrix();
  return w / w.sum();
}

void GlwtModel::validate() const {
  bank.validate();
  const Eigen::Index k = bank.size();
  auto check = [k](const Vector& v, const char* name) {
    if (v.size() != k) {
      fail(ErrorKind::InvalidArgument, std::string(name) + " has length " +
                                           std::to_string(v.size()) + ", expected " +
                                           std::to_string(k));
    }
    if (!v.allFinite()) fail(ErrorKind::InvalidArgument, std::string(name) + " is not finite");
  };
  check(modulation.threshold, "threshold");
  check(modulation.gain, "gain");
  check(modulation.phase, "phase");
  check(fusion.logits, "logits");
  check(tau, "tau");
  if ((modulation.threshold.array() < 0.0).any()) {
    fail(ErrorKind::NegativeThreshold, "shrinkage thresholds must be nonnegative");
  }
  if (!(epsilon > 0.0)) fail(ErrorKind::NonPositiveEpsilon, "epsilon must be positive");
}

GlwtModel GlwtModel::identity_like(const FilterBank& bank, double epsilon) {
  GlwtModel m;
  m.bank = bank;
  const Eigen::Index k = bank.size();
  m.modulation.threshold = Vector::Zero(k);
  m.modulation.gain = Vector::Ones(k);
  m.modulation.phase = Vector::Zero(k);
  m.fusion.logits = Vector::Zero(k);
  m.tau = Vector::Zero(k);
  m.epsilon = epsilon;
  return m;
}

ScaleCoefficients decompose(const ScaleFilter& op, const GlwtModel& model, const Vector& signal) {
  if (op.num_scales() != model.num_scales()) {
    fail(ErrorKind::DimensionMismatch, "filter operator and model disagree on K");
  }
  if (signal.size() != op.n()) {
    fail(ErrorKind::DimensionMismatch, "signal length " + std::to_string(signal.size()) +
                                           " != " + std::to_string(op.n()));
  }
  Matrix c(op.num_scales(), op.n());
  for (int k = 0; k < op.num_scales(); ++k) c.row(k) = op.apply(k, signal).transpose();
  return c;
}

double phase_gate(double phase) {
  const double c = std::cos(phase);
  return std::abs(c) <= 1e-15 ? 0.0 : c;
}

Vector modulate(const Vector& coeffs, double threshold, double gain, double phase) {
  if (threshold < 0.0) fail(ErrorKind::NegativeThreshold, "threshold must be nonnegative");
  const double factor = gain * phase_gate(phase);
  Vector out(coeffs.size());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const double c = coeffs[i];
    const double shrunk = std::max(std::abs(c) - threshold, 0.0);
    const double sign = c > 0.0 ? 1.0 : (c < 0.0 ? -1.0 : 0.0);
    out[i] = factor * sign * shrunk;
  }
  return out;
}

Vector reconstruct_scale(const ScaleFilter& op, int k, const Vector& modulated) {
  return op.apply(k, modulated);
}

Vector fuse(const Matrix& partials, const FusionParams& fusion) {
  if (partials.rows() == 0) fail(ErrorKind::InvalidArgument, "fuse needs at least one partial");
  if (partials.rows() != fusion.logits.size()) {
    fail(ErrorKind::DimensionMismatch, "partials and logits disagree on K");
  }
  const Vector w = softmax(fusion.logits);
  Vector out = Vector::Zero(partials.cols());
  for (Eigen::Index k = 0; k < partials.rows(); ++k) out += w[k] * partials.row(k).transpose();
  return out;
}

ForwardResult forward(const GlwtModel& model, const ScaleFilter& op, const Vector& signal) {
  ForwardResult r;
  r.coeffs = decompose(op, model, signal);
  const int k_count = model.num_scales();
  r.modulated.resize(k_count, op.n());
  r.partials.resize(k_count, op.n());
  for (int k = 0; k < k_count; ++k) {
    const Vector phi = modulate(r.coeffs.row(k).transpose(), model.modulation.threshold[k],
                                model.modulation.gain[k], model.modulation.phase[k]);
    r.modulated.row(k) = phi.transpose();
    r.partials.row(k) = reconstruct_scale(op, k, phi).transpose();
  }
  r.weights = softmax(model.fusion.logits);
  r.output = fuse(r.partials, model.fusion);
  return r;
}

Matrix feature_activations(const GlwtModel& model, const ScaleFilter& op, const Matrix& features) {
  if (features.rows() != op.n()) {
    fail(ErrorKind::DimensionMismatch, "feature matrix must have one row per node");
  }
  if (features.cols() == 0) fail(ErrorKind::InvalidArgument, "feature matrix has no columns");
  Matrix sum = Matrix::Zero(model.num_scales(), op.n());
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    sum += forward(model, op, features.col(c)).modulated;
  }
  return sum / static_cast<double>(features.cols());
}

}  // namespace glwt
