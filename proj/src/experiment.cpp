#include "glwt/experiment.hpp"

#include "glwt/error.hpp"
#include "glwt/evaluate.hpp"
#include "glwt/rng.hpp"
#include "glwt/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

namespace glwt {

std::vector<double> default_sigma_grid() { return {0.01, 0.05, 0.1, 0.3, 0.5}; }

std::vector<TrainSample> make_samples(const SpectralBasis& smoothing_basis, SyntheticSpec spec,
                                      double sigma, int first_trial, int count) {
  spec.sigma_noise = sigma;
  std::vector<TrainSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) out.push_back(gen_signal_pair(smoothing_basis, spec, first_trial + t));
  return out;
}

double mse(const Vector& estimate, const Vector& clean) {
  if (estimate.size() != clean.size() || clean.size() == 0) {
    fail(ErrorKind::DimensionMismatch, "mse needs two signals of equal nonzero length");
  }
  return (estimate - clean).squaredNorm() / static_cast<double>(clean.size());
}

Vector heat_denoise(const SpectralBasis& basis, double scale, const Vector& noisy) {
  return filter_apply_exact(basis, KernelSpec{KernelFamily::Heat}, scale, noisy);
}

WaveletHardThreshold::WaveletHardThreshold(std::shared_ptr<const SpectralBasis> basis,
                                           const FilterBank& bank)
    : basis_(std::move(basis)) {
  bank.validate();
  const int n = basis_->n();
  const int k_count = bank.size();
  responses_.resize(k_count, n);
  for (int k = 0; k < k_count; ++k) {
    for (int j = 0; j < n; ++j) {
      responses_(k, j) = kernel_eval(bank.kernel, bank.scales[k], basis_->eigenvalues[j]);
    }
  }
  const Matrix u2 = basis_->eigenvectors.cwiseAbs2();
  atom_norms_ = (u2 * responses_.cwiseAbs2().transpose()).transpose().cwiseSqrt();
  const Vector frame = responses_.cwiseAbs2().colwise().sum().transpose();
  if (frame.minCoeff() <= 0.0) {
    fail(ErrorKind::InvalidArgument, "filter bank frame operator is singular on this spectrum");
  }
  inverse_frame_ = frame.cwiseInverse();
}

Vector WaveletHardThreshold::denoise(const Vector& noisy, double sigma) const {
  const Matrix& u = basis_->eigenvectors;
  const int n = basis_->n();
  const double universal = sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
  const Vector spectrum = u.transpose() * noisy;
  Vector accum = Vector::Zero(n);
  for (Eigen::Index k = 0; k < responses_.rows(); ++k) {
    Vector c = u * responses_.row(k).transpose().cwiseProduct(spectrum);
    for (int i = 0; i < n; ++i) {
      if (std::abs(c[i]) <= universal * atom_norms_(k, i)) c[i] = 0.0;
    }
    accum += responses_.row(k).transpose().cwiseProduct(u.transpose() * c);
  }
  return u * inverse_frame_.cwiseProduct(accum);
}

MethodResult summarize(double sigma, const std::string& method, const std::vector<double>& errors) {
  MethodResult r;
  r.sigma = sigma;
  r.method = method;
  r.trials = static_cast<int>(errors.size());
  if (errors.empty()) return r;
  double sum = 0.0;
  for (double e : errors) sum += e;
  r.mse_mean = sum / static_cast<double>(errors.size());
  if (errors.size() > 1) {
    double ss = 0.0;
    for (double e : errors) ss += (e - r.mse_mean) * (e - r.mse_mean);
    r.mse_std = std::sqrt(ss / static_cast<double>(errors.size() - 1));
  }
  return r;
}

std::string format_results_csv(const std::vector<MethodResult>& results) {
  std::string out = "sigma,method,mse_mean,mse_std,trials\n";
  for (const MethodResult& r : results) {
    out += format_double(r.sigma) + "," + r.method + "," + format_double(r.mse_mean) + "," +
           format_double(r.mse_std) + "," + std::to_string(r.trials) + "\n";
  }
  return out;
}

std::string format_results_table(const std::vector<MethodResult>& results) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %-20s %14s %14s %7s\n", "sigma", "method", "mse_mean",
                "mse_std", "trials");
  out += line;
  for (const MethodResult& r : results) {
    std::snprintf(line, sizeof line, "%-8g %-20s %14.6e %14.6e %7d\n", r.sigma, r.method.c_str(),
                  r.mse_mean, r.mse_std, r.trials);
    out += line;
  }
  return out;
}

std::vector<std::string> monotonicity_violations(const std::vector<MethodResult>& results) {
  std::map<std::string, std::vector<std::pair<double, double>>> by_method;
  std::vector<std::string> order;
  for (const MethodResult& r : results) {
    if (!by_method.contains(r.method)) order.push_back(r.method);
    by_method[r.method].emplace_back(r.sigma, r.mse_mean);
  }
  std::vector<std::string> bad;
  for (const std::string& m : order) {
    auto rows = by_method[m];
    std::stable_sort(rows.begin(), rows.end());
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].second < rows[i - 1].second) {
        bad.push_back(m);
        break;
      }
    }
  }
  return bad;
}

DenoiserFit fit_denoiser(const ScaleFilter& op, const std::vector<TrainSample>& train_set,
                         double sigma, const DenoiseConfig& cfg) {
  DenoiserFit fit;
  fit.sigma = sigma;
  fit.initial = init_uniform_prior(cfg.bank, op, train_set, cfg.train.seed);
  TrainResult tr = train(fit.initial, op, train_set, cfg.train, cfg.loss);
  fit.trained = std::move(tr.model);
  fit.trace = std::move(tr.trace);
  return fit;
}

DenoiseMethods::DenoiseMethods(std::shared_ptr<const SpectralBasis> b, const FilterBank& bank,
                               double heat)
    : basis(b), op(ScaleFilter::exact(b, bank)), wavelet(b, bank), heat_scale(heat) {}

std::vector<MethodResult> score_methods(const DenoiseMethods& methods, double sigma,
                                        const GlwtModel& trained, const GlwtModel* untrained,
                                        const std::vector<TrainSample>& test_set) {
  std::vector<double> glwt, heat, wavelet, plain;
  for (const TrainSample& s : test_set) {
    glwt.push_back(mse(forward(trained, methods.op, s.noisy).output, s.clean));
    heat.push_back(mse(heat_denoise(*methods.basis, methods.heat_scale, s.noisy), s.clean));
    wavelet.push_back(mse(methods.wavelet.denoise(s.noisy, sigma), s.clean));
    if (untrained) plain.push_back(mse(forward(*untrained, methods.op, s.noisy).output, s.clean));
  }
  std::vector<MethodResult> rows = {summarize(sigma, "glwt", glwt),
                                    summarize(sigma, "heat_fixed", heat),
                                    summarize(sigma, "wavelet_hard_thresh", wavelet)};
  if (untrained) rows.push_back(summarize(sigma, "glwt_untrained", plain));
  return rows;
}

std::vector<MethodResult> run_denoise_benchmark(const DenoiseConfig& cfg, int test_trials,
                                                bool include_untrained) {
  const Graph g = gen_graph(cfg.data);
  auto smoothing = std::make_shared<const SpectralBasis>(spectral_basis(g, cfg.data.smoothing_laplacian));
  auto basis = cfg.kind == cfg.data.smoothing_laplacian
                   ? smoothing
                   : std::make_shared<const SpectralBasis>(spectral_basis(g, cfg.kind));
  const DenoiseMethods methods(basis, cfg.bank, cfg.heat_scale);
  std::vector<MethodResult> rows;
  for (double sigma : cfg.sigmas) {
    const auto train_set = make_samples(*smoothing, cfg.data, sigma, kTrainTrialOffset, cfg.train_trials);
    const auto test_set = make_samples(*smoothing, cfg.data, sigma, 0, test_trials);
    const DenoiserFit fit = fit_denoiser(methods.op, train_set, sigma, cfg);
    auto scored = score_methods(methods, sigma, fit.trained, include_untrained ? &fit.initial : nullptr,
                                test_set);
    rows.insert(rows.end(), scored.begin(), scored.end());
  }
  return rows;
}

NodeDataset make_community_dataset(const CommunitySpec& spec) {
  if (spec.sizes.size() < 2) fail(ErrorKind::InvalidArgument, "need at least two communities");
  if (spec.feature_dims < 1) fail(ErrorKind::InvalidArgument, "feature_dims must be >= 1");
  std::vector<int> labels;
  for (std::size_t c = 0; c < spec.sizes.size(); ++c) {
    if (spec.sizes[c] < 1) fail(ErrorKind::InvalidArgument, "community sizes must be positive");
    labels.insert(labels.end(), static_cast<std::size_t>(spec.sizes[c]), static_cast<int>(c));
  }
  const int n = static_cast<int>(labels.size());
  Rng rng(derive_seed(spec.seed, 0xC0));
  std::optional<Graph> graph;
  for (int attempt = 0; attempt < 100 && !graph; ++attempt) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double p = labels[i] == labels[j] ? spec.p_in : spec.p_out;
        if (rng.uniform() < p) edges.push_back({i, j, 1.0});
      }
    }
    Graph g = build_graph(n, std::move(edges));
    if (g.connected()) graph = std::move(g);
  }
  if (!graph) fail(ErrorKind::ConnectivityFailure, "no connected community graph after 100 attempts");

  const int classes = static_cast<int>(spec.sizes.size());
  Matrix features(n, spec.feature_dims);
  for (int i = 0; i < n; ++i) {
    const double level = -1.0 + 2.0 * labels[i] / (classes - 1);
    for (int d = 0; d < spec.feature_dims; ++d) features(i, d) = level + spec.feature_noise * rng.normal();
  }
  return NodeDataset{std::move(*graph), std::move(features), std::move(labels), {}, {}};
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& labels,
                const std::vector<int>& nodes) {
  if (nodes.empty()) return 0.0;
  int hits = 0;
  for (int i : nodes) hits += predicted.at(static_cast<std::size_t>(i)) == labels.at(static_cast<std::size_t>(i));
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

ClassifyReport run_classification(NodeDataset data, const GlwtModel& model, const ScaleFilter& op,
                                  const ClassifyConfig& cfg) {
  if (cfg.splits < 1) fail(ErrorKind::InvalidArgument, "splits must be >= 1");
  ClassifyReport report;
  report.phi = feature_activations(model, op, data.features);

  std::map<int, int> counts;
  for (int l : data.labels) ++counts[l];
  int majority = counts.begin()->first;
  for (const auto& [label, count] : counts) {
    if (count > counts[majority]) majority = label;
  }
  if (counts.size() < 2) fail(ErrorKind::DegenerateLabels, "labels contain a single class");

  const std::vector<int> all_majority(data.labels.size(), majority);
  for (int s = 0; s < cfg.splits; ++s) {
    SplitOutcome out;
    out.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(s));
    make_split(data, SplitSpec{cfg.per_class, out.seed});
    const std::vector<int> train_nodes = data.train_nodes();
    const std::vector<int> test_nodes = data.test_nodes();
    out.learned = learn_rules(report.phi, data.labels, train_nodes, cfg.learn);
    const ActivationTensor acts = binarize(report.phi, out.learned.tau, cfg.mode, data.graph.node_ids());
    const std::vector<int> predicted =
        predict_labels(out.learned.program, acts, out.learned.head_labels, out.learned.default_label);
    out.train_accuracy = accuracy(predicted, data.labels, train_nodes);
    out.test_accuracy = accuracy(predicted, data.labels, test_nodes);
    out.majority_accuracy = accuracy(all_majority, data.labels, test_nodes);
    report.splits.push_back(std::move(out));
  }
  double sum = 0.0, base = 0.0;
  for (const SplitOutcome& o : report.splits) {
    sum += o.test_accuracy;
    base += o.majority_accuracy;
  }
  const double k = static_cast<double>(report.splits.size());
  report.mean_test = sum / k;
  report.mean_majority = base / k;
  if (report.splits.size() > 1) {
    double ss = 0.0;
    for (const SplitOutcome& o : report.splits) ss += (o.test_accuracy - report.mean_test) * (o.test_accuracy - report.mean_test);
    report.std_test = std::sqrt(ss / (k - 1.0));
  }
  return report;
}

std::string format_classify_report(const ClassifyReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-6s %-20s %10s %10s %10s %6s\n", "split", "seed", "train_acc",
                "test_acc", "majority", "rules");
  out += line;
  for (std::size_t i = 0; i < report.splits.size(); ++i) {
    const SplitOutcome& o = report.splits[i];
    std::snprintf(line, sizeof line, "%-6zu %-20llu %10.4f %10.4f %10.4f %6zu\n", i,
                  static_cast<unsigned long long>(o.seed), o.train_accuracy, o.test_accuracy,
                  o.majority_accuracy, o.learned.program.rules.size());
    out += line;
  }
  std::snprintf(line, sizeof line, "test accuracy %.4f +/- %.4f over %zu splits (majority baseline %.4f)\n",
                report.mean_test, report.std_test, report.splits.size(), report.mean_majority);
  out += line;
  return out;
}

}  // namespace glwt
