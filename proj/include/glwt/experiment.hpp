#pragma once

#include "glwt/activation.hpp"
#include "glwt/data_io.hpp"
#include "glwt/learner.hpp"
#include "glwt/training.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace glwt {

// ---- denoising benchmark -------------------------------------------------

/// Training fixtures use trial ids from here upward so they never coincide
/// with test trials.
inline constexpr int kTrainTrialOffset = 100000;

std::vector<double> default_sigma_grid();

struct DenoiseConfig {
  SyntheticSpec data;
  std::vector<double> sigmas = default_sigma_grid();
  int train_trials = 20;
  FilterBank bank = FilterBank::standard();
  LaplacianKind kind = LaplacianKind::SymmetricNormalized;
  TrainConfig train{0.5, 500};
  LossConfig loss;
  double heat_scale = 0.5;
};

/// Samples for trials first_trial .. first_trial + count - 1 at noise level sigma.
std::vector<TrainSample> make_samples(const SpectralBasis& smoothing_basis, SyntheticSpec spec,
                                      double sigma, int first_trial, int count);

/// ||estimate - clean||^2 / n.
double mse(const Vector& estimate, const Vector& clean);

/// e^{-s L} noisy, exactly.
Vector heat_denoise(const SpectralBasis& basis, double scale, const Vector& noisy);

/// Analysis with the filter bank, per-coefficient hard threshold
/// sigma * ||row i of H_k|| * sqrt(2 ln n), synthesis with the canonical dual
/// frame S^{-1} sum_k H_k, S = sum_k H_k^2.
class WaveletHardThreshold {
 public:
  WaveletHardThreshold(std::shared_ptr<const SpectralBasis> basis, const FilterBank& bank);
  Vector denoise(const Vector& noisy, double sigma) const;

 private:
  std::shared_ptr<const SpectralBasis> basis_;
  Matrix responses_;  // K x n, g(s_k lambda_j)
  Matrix atom_norms_; // K x n, ||H_k delta_i||
  Vector inverse_frame_;
};

struct MethodResult {
  double sigma = 0.0;
  std::string method;
  double mse_mean = 0.0;
  double mse_std = 0.0;  // sample standard deviation (n - 1)
  int trials = 0;
};

MethodResult summarize(double sigma, const std::string& method, const std::vector<double>& errors);

/// Columns sigma,method,mse_mean,mse_std,trials.
std::string format_results_csv(const std::vector<MethodResult>& results);
std::string format_results_table(const std::vector<MethodResult>& results);

/// Methods whose mean MSE drops somewhere as sigma increases.
std::vector<std::string> monotonicity_violations(const std::vector<MethodResult>& results);

struct DenoiserFit {
  double sigma = 0.0;
  GlwtModel initial;
  GlwtModel trained;
  std::vector<EpochRecord> trace;
};

DenoiserFit fit_denoiser(const ScaleFilter& op, const std::vector<TrainSample>& train_set,
                         double sigma, const DenoiseConfig& cfg);

struct DenoiseMethods {
  std::shared_ptr<const SpectralBasis> basis;
  ScaleFilter op;
  WaveletHardThreshold wavelet;
  double heat_scale = 0.5;

  DenoiseMethods(std::shared_ptr<const SpectralBasis> b, const FilterBank& bank, double heat);
};

/// Rows for glwt, heat_fixed and wavelet_hard_thresh at one sigma; adds
/// glwt_untrained when `untrained` is given.
std::vector<MethodResult> score_methods(const DenoiseMethods& methods, double sigma,
                                        const GlwtModel& trained, const GlwtModel* untrained,
                                        const std::vector<TrainSample>& test_set);

/// Generates, trains and scores the whole grid in memory.
std::vector<MethodResult> run_denoise_benchmark(const DenoiseConfig& cfg, int test_trials,
                                                bool include_untrained);

// ---- node classification -------------------------------------------------

struct CommunitySpec {
  std::vector<int> sizes = {80, 60, 60};
  double p_in = 0.15;
  double p_out = 0.01;
  int feature_dims = 5;
  double feature_noise = 1.0;
  std::uint64_t seed = 0;
};

/// Stochastic block model with one label per community. Feature columns are
/// a per-community level (spread evenly over [-1, 1]) plus Gaussian noise, so
/// the class signal lives in the low graph frequencies.
NodeDataset make_community_dataset(const CommunitySpec& spec);

struct ClassifyConfig {
  int per_class = 20;
  int splits = 10;
  std::uint64_t seed = 0;
  ThresholdMode mode = ThresholdMode::Signed;
  LearnConfig learn;
};

struct SplitOutcome {
  std::uint64_t seed = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double majority_accuracy = 0.0;
  LearnResult learned;
};

struct ClassifyReport {
  Matrix phi;  // K x n aggregated modulated coefficients
  std::vector<SplitOutcome> splits;
  double mean_test = 0.0;
  double std_test = 0.0;
  double mean_majority = 0.0;
};

double accuracy(const std::vector<int>& predicted, const std::vector<int>& labels,
                const std::vector<int>& nodes);

/// Forward pass per feature column, then per split: learn rules on the train
/// mask, binarize with the learned tau, predict the test mask. The majority
/// baseline predicts the most frequent label of the whole graph.
ClassifyReport run_classification(NodeDataset data, const GlwtModel& model, const ScaleFilter& op,
                                  const ClassifyConfig& cfg);

std::string format_classify_report(const ClassifyReport& report);

}  // namespace glwt
