#pragma once

#include "glwt/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace glwt {

/// Absolute: z = |phi| > tau. Signed: z = phi > tau (the form the fuzzy
/// indicator uses; crisp/fuzzy agreement only holds in this mode).
enum class ThresholdMode { Absolute, Signed };

std::string to_string(ThresholdMode mode);
ThresholdMode parse_threshold_mode(const std::string& text);

/// K x n binary activations, optionally with their fuzzy counterparts.
class ActivationTensor {
 public:
  ActivationTensor() = default;
  ActivationTensor(int num_scales, int num_nodes, std::vector<std::string> node_ids = {});

  int num_scales() const { return num_scales_; }
  int num_nodes() const { return num_nodes_; }

  bool active(int scale, int node) const { return z_[index(scale, node)] != 0; }
  void set(int scale, int node, bool value) { z_[index(scale, node)] = value ? 1 : 0; }

  const std::optional<Matrix>& fuzzy() const { return z_star_; }
  void set_fuzzy(Matrix z_star);

  /// "scale<k>"
  static std::string scale_name(int k);
  const std::string& node_id(int node) const { return node_ids_.at(static_cast<std::size_t>(node)); }
  const std::vector<std::string>& node_ids() const { return node_ids_; }

  bool operator==(const ActivationTensor& other) const;

 private:
  std::size_t index(int scale, int node) const;

  int num_scales_ = 0;
  int num_nodes_ = 0;
  std::vector<std::uint8_t> z_;  // row-major by scale
  std::optional<Matrix> z_star_;
  std::vector<std::string> node_ids_;
};

/// Strict inequality: a value equal to its threshold is inactive.
ActivationTensor binarize(const Matrix& modulated, const Vector& tau,
                          ThresholdMode mode = ThresholdMode::Absolute,
                          std::vector<std::string> node_ids = {});

/// z* = sigmoid((phi - tau) / epsilon), signed phi.
Matrix fuzzify(const Matrix& modulated, const Vector& tau, double epsilon);

double sigmoid(double x);

}  // namespace glwt
