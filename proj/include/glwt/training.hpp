#pragma once

#include "glwt/pipeline.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace glwt {

/// AsWritten: sum_k w_k log w_k (negative entropy, minimized by uniform w).
/// ConcentrationIntent: H(w) = -sum_k w_k log w_k (minimized by one-hot w).
enum class EntropyMode { AsWritten, ConcentrationIntent };

struct LossConfig {
  double beta = 0.0;
  EntropyMode entropy_mode = EntropyMode::ConcentrationIntent;
};

struct TrainConfig {
  double step_size = 0.05;
  int epochs = 200;
  std::uint64_t seed = 0;
  double lambda_clamp_min = 0.0;
  double finite_diff_step = 1e-5;
  /// Halve the step up to this many times when a step would raise the loss;
  /// if every halving fails the parameters are left unchanged for the epoch.
  int max_backtracks = 20;
};

struct TrainSample {
  Vector clean;
  Vector noisy;
};

struct LossTerms {
  double total = 0.0;
  double recon = 0.0;
  double entropy = 0.0;
};

struct Gradients {
  Vector threshold;
  Vector gain;
  Vector phase;
  Vector logits;
};

double recon_loss(const Vector& estimate, const Vector& clean);
double entropy_reg(const FusionParams& fusion, EntropyMode mode);
/// d entropy_reg / d alpha.
Vector entropy_gradient(const FusionParams& fusion, EntropyMode mode);

LossTerms loss_terms(const GlwtModel& model, const ScaleFilter& op, const TrainSample& sample,
                     const LossConfig& cfg);
double total_loss(const GlwtModel& model, const ScaleFilter& op, const TrainSample& sample,
                  const LossConfig& cfg);
/// Mean of per-sample losses, reduced in index order.
LossTerms dataset_loss(const GlwtModel& model, const ScaleFilter& op,
                       const std::vector<TrainSample>& data, const LossConfig& cfg);

/// Analytic gradient of total_loss by reverse-mode chain rule. At the
/// soft-threshold kink |c| = lambda the derivative is taken as 0.
Gradients gradients(const GlwtModel& model, const ScaleFilter& op, const TrainSample& sample,
                    const LossConfig& cfg);
Gradients dataset_gradients(const GlwtModel& model, const ScaleFilter& op,
                            const std::vector<TrainSample>& data, const LossConfig& cfg);

/// Initial parameters: lambda_k ~ U(0, 0.1 * median |c_k|) over the noisy
/// inputs, gamma = 1, theta = 0, alpha = 0, tau = 0, epsilon = 0.1.
GlwtModel init_uniform_prior(const FilterBank& bank, const ScaleFilter& op,
                             const std::vector<TrainSample>& data, std::uint64_t seed);

struct EpochRecord {
  int epoch = 0;
  double mean_loss = 0.0;
  double recon = 0.0;
  double entropy = 0.0;
};

struct TrainResult {
  GlwtModel model;
  std::vector<EpochRecord> trace;  // entry 0 is the initial model
};

/// Full-batch gradient descent; lambda clamped after each step.
/// Throws EmptyDataset, DivergedLoss.
TrainResult train(const GlwtModel& initial, const ScaleFilter& op,
                  const std::vector<TrainSample>& data, const TrainConfig& train_cfg,
                  const LossConfig& loss_cfg);

/// CSV with header "epoch,mean_loss,recon_term,entropy_term".
std::string format_loss_trace(const std::vector<EpochRecord>& trace);

enum class CheckStatus { Ok, Failed, SkippedKink };

struct GradientCheckEntry {
  std::string parameter;  // "threshold", "gain", "phase", "logits"
  int index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double relative_error = 0.0;
  CheckStatus status = CheckStatus::Ok;
};

struct GradientCheckReport {
  std::vector<GradientCheckEntry> entries;
  double max_relative_error = 0.0;  // over non-skipped entries
  int skipped = 0;
  int failed = 0;
};

/// Central differences per scalar parameter. Thresholds within `kink_margin`
/// of some |c_k[i]| are reported SkippedKink rather than compared.
GradientCheckReport finite_diff_check(const GlwtModel& model, const ScaleFilter& op,
                                      const TrainSample& sample, const LossConfig& cfg,
                                      double step, double tolerance = 1e-4,
                                      double kink_margin = 1e-3);

/// |a - b| / max(|a|, |b|), or 0 when both are below 1e-8.
double relative_error(double analytic, double numeric);

}  // namespace glwt
