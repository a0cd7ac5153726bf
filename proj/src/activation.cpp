#include "glwt/activation.hpp"

#include "glwt/error.hpp"

#include <cmath>

namespace glwt {

std::string to_string(ThresholdMode mode) {
  return mode == ThresholdMode::Absolute ? "absolute" : "signed";
}

ThresholdMode parse_threshold_mode(const std::string& text) {
  if (text == "absolute") return ThresholdMode::Absolute;
  if (text == "signed") return ThresholdMode::Signed;
  fail(ErrorKind::InvalidArgument, "unknown threshold mode '" + text + "'");
}

ActivationTensor::ActivationTensor(int num_scales, int num_nodes, std::vector<std::string> node_ids)
    : num_scales_(num_scales),
      num_nodes_(num_nodes),
      z_(static_cast<std::size_t>(num_scales) * static_cast<std::size_t>(num_nodes), 0),
      node_ids_(std::move(node_ids)) {
  if (num_scales < 0 || num_nodes < 0) fail(ErrorKind::InvalidArgument, "negative tensor shape");
  if (node_ids_.empty()) {
    for (int i = 0; i < num_nodes; ++i) node_ids_.push_back("n" + std::to_string(i));
  }
  if (static_cast<int>(node_ids_.size()) != num_nodes) {
    fail(ErrorKind::DimensionMismatch, "node_ids length does not match node count");
  }
}

std::size_t ActivationTensor::index(int scale, int node) const {
  if (scale < 0 || scale >= num_scales_) {
    fail(ErrorKind::ScaleOutOfRange, "scale " + std::to_string(scale) + " outside [0, " +
                                         std::to_string(num_scales_) + ")");
  }
  if (node < 0 || node >= num_nodes_) {
    fail(ErrorKind::IndexOutOfRange, "node " + std::to_string(node) + " outside [0, " +
                                         std::to_string(num_nodes_) + ")");
  }
  return static_cast<std::size_t>(scale) * static_cast<std::size_t>(num_nodes_) +
         static_cast<std::size_t>(node);
}

void ActivationTensor::set_fuzzy(Matrix z_star) {
  if (z_star.rows() != num_scales_ || z_star.cols() != num_nodes_) {
    fail(ErrorKind::DimensionMismatch, "fuzzy matrix shape does not match the tensor");
  }
  z_star_ = std::move(z_star);
}

std::string ActivationTensor::scale_name(int k) { return "scale" + std::to_string(k); }

bool ActivationTensor::operator==(const ActivationTensor& other) const {
  return num_scales_ == other.num_scales_ && num_nodes_ == other.num_nodes_ && z_ == other.z_ &&
         node_ids_ == other.node_ids_;
}

ActivationTensor binarize(const Matrix& modulated, const Vector& tau, ThresholdMode mode,
                          std::vector<std::string> node_ids) {
  if (tau.size() != modulated.rows()) {
    fail(ErrorKind::DimensionMismatch, "tau has " + std::to_string(tau.size()) +
                                           " entries for " + std::to_string(modulated.rows()) +
                                           " scales");
  }
  const int k_count = static_cast<int>(modulated.rows());
  const int n = static_cast<int>(modulated.cols());
  ActivationTensor acts(k_count, n, std::move(node_ids));
  for (int k = 0; k < k_count; ++k) {
    for (int i = 0; i < n; ++i) {
      const double v = mode == ThresholdMode::Absolute ? std::abs(modulated(k, i)) : modulated(k, i);
      acts.set(k, i, v > tau[k]);
    }
  }
  return acts;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Matrix fuzzify(const Matrix& modulated, const Vector& tau, double epsilon) {
  if (!(epsilon > 0.0)) fail(ErrorKind::NonPositiveEpsilon, "epsilon must be positive");
  if (tau.size() != modulated.rows()) fail(ErrorKind::DimensionMismatch, "tau length must equal K");
  Matrix z(modulated.rows(), modulated.cols());
  for (Eigen::Index k = 0; k < modulated.rows(); ++k) {
    for (Eigen::Index i = 0; i < modulated.cols(); ++i) {
      z(k, i) = sigmoid((modulated(k, i) - tau[k]) / epsilon);
    }
  }
  return z;
}

}  // namespace glwt
