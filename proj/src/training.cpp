#include "glwt/training.hpp"

#include "glwt/error.hpp"
#include "glwt/rng.hpp"
#include "glwt/text_io.hpp"

#include <algorithm>
#include <cmath>

namespace glwt {

double recon_loss(const Vector& estimate, const Vector& clean) {
  if (estimate.size() != clean.size()) {
    fail(ErrorKind::DimensionMismatch, "estimate and clean signal lengths differ");
  }
  return (estimate - clean).squaredNorm();
}

double entropy_reg(const FusionParams& fusion, EntropyMode mode) {
  const Vector w = softmax(fusion.logits);
  double neg_entropy = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w[k] > 0.0) neg_entropy += w[k] * std::log(w[k]);
  }
  return mode == EntropyMode::AsWritten ? neg_entropy : -neg_entropy;
}

Vector entropy_gradient(const FusionParams& fusion, EntropyMode mode) {
  const Vector w = softmax(fusion.logits);
  double neg_entropy = 0.0;
  Vector log_w(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    log_w[k] = w[k] > 0.0 ? std::log(w[k]) : 0.0;
    neg_entropy += w[k] * log_w[k];
  }
  // d/d alpha_j sum_k w_k log w_k = w_j (log w_j - sum_k w_k log w_k)
  Vector g = w.cwiseProduct((log_w.array() - neg_entropy).matrix());
  return mode == EntropyMode::AsWritten ? g : Vector(-g);
}

LossTerms loss_terms(const GlwtModel& model, const ScaleFilter& op, const TrainSample& sample,
                     const LossConfig& cfg) {
  if (sample.clean.size() != sample.noisy.size()) {
    fail(ErrorKind::DimensionMismatch, "clean and noisy signal lengths differ");
  }
  LossTerms t;
  t.recon = recon_loss(forward(model, op, sample.noisy).output, sample.clean);
  t.entropy = entropy_reg(model.fusion, cfg.entropy_mode);
  t.total = t.recon + cfg.beta * t.entropy;
  return t;
}

double total_loss(const GlwtModel& model, const ScaleFilter& op, const TrainSample& sample,
                  const LossConfig& cfg) {
  return loss_terms(model, op, sample, cfg).total;
}

LossTerms dataset_loss(const GlwtModel& model, const ScaleFilter& op,
                       const std::vector<TrainSample>& data, const LossConfig& cfg) {
  if (data.empty()) fail(ErrorKind::EmptyDataset, "dataset is empty");
  LossTerms sum;
  for (const TrainSample& s : data) {
    const LossTerms t = loss_terms(model, op, s, cfg);
    sum.total += t.total;
    sum.recon += t.recon;
    sum.entropy += t.entropy;
  }
  const double count = static_cast<double>(data.size());
  return LossTerms{sum.total / count, sum.recon / count, sum.entropy / count};
}

Gradients gradients(const GlwtModel& model, const ScaleFilter& op, const TrainSample& sample,
                    const LossConfig& cfg) {
  if (sample.clean.size() != sample.noisy.size()) {
    fail(ErrorKind::DimensionMismatch, "clean and noisy signal lengths differ");
  }
  const ForwardResult fw = forward(model, op, sample.noisy);
  const int k_count = model.num_scales();
  const Vector residual2 = 2.0 * (fw.output - sample.clean);

  Gradients g;
  g.threshold = Vector::Zero(k_count);
  g.gain = Vector::Zero(k_count);
  g.phase = Vector::Zero(k_count);

  // fusion: d/d w_k = <2r, p_k>, pushed through the softmax Jacobian
  Vector dw(k_count);
  for (int k = 0; k < k_count; ++k) dw[k] = residual2.dot(fw.partials.row(k).transpose());
  const double mean_dw = fw.weights.dot(dw);
  g.logits = fw.weights.cwiseProduct((dw.array() - mean_dw).matrix());
  g.logits += cfg.beta * entropy_gradient(model.fusion, cfg.entropy_mode);

  for (int k = 0; k < k_count; ++k) {
    // the filter is symmetric, so its adjoint is itself
    const Vector d_phi = op.apply(k, fw.weights[k] * residual2);
    const double lambda = model.modulation.threshold[k];
    const double gamma = model.modulation.gain[k];
    const double theta = model.modulation.phase[k];
    const double gate = phase_gate(theta);
    double dot_shrunk = 0.0;  // <d_phi, u_k>
    double dot_sign = 0.0;    // <d_phi, d u_k / d lambda>
    for (int i = 0; i < op.n(); ++i) {
      const double c = fw.coeffs(k, i);
      const double mag = std::abs(c);
      if (mag > lambda) {
        const double sign = c > 0.0 ? 1.0 : -1.0;
        dot_shrunk += d_phi[i] * sign * (mag - lambda);
        dot_sign -= d_phi[i] * sign;
      }
    }
    g.gain[k] = gate * dot_shrunk;
    g.phase[k] = -gamma * std::sin(theta) * dot_shrunk;
    g.threshold[k] = gamma * gate * dot_sign;
  }
  return g;
}

Gradients dataset_gradients(const GlwtModel& model, const ScaleFilter& op,
                            const std::vector<TrainSample>& data, const LossConfig& cfg) {
  if (data.empty()) fail(ErrorKind::EmptyDataset, "dataset is empty");
  Gradients sum = gradients(model, op, data.front(), cfg);
  for (std::size_t s = 1; s < data.size(); ++s) {
    const Gradients g = gradients(model, op, data[s], cfg);
    sum.threshold += g.threshold;
    sum.gain += g.gain;
    sum.phase += g.phase;
    sum.logits += g.logits;
  }
  const double inv = 1.0 / static_cast<double>(data.size());
  sum.threshold *= inv;
  sum.gain *= inv;
  sum.phase *= inv;
  sum.logits *= inv;
  return sum;
}

GlwtModel init_uniform_prior(const FilterBank& bank, const ScaleFilter& op,
                             const std::vector<TrainSample>& data, std::uint64_t seed) {
  if (data.empty()) fail(ErrorKind::EmptyDataset, "calibration needs at least one sample");
  GlwtModel model = GlwtModel::identity_like(bank);
  Rng rng(seed);
  for (int k = 0; k < bank.size(); ++k) {
    std::vector<double> mags;
    mags.reserve(data.size() * static_cast<std::size_t>(op.n()));
    for (const TrainSample& s : data) {
      const Vector c = op.apply(k, s.noisy);
      for (Eigen::Index i = 0; i < c.size(); ++i) mags.push_back(std::abs(c[i]));
    }
    const auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
    std::nth_element(mags.begin(), mid, mags.end());
    double median = *mid;
    if (mags.size() % 2 == 0) {
      median = 0.5 * (median + *std::max_element(mags.begin(), mid));
    }
    model.modulation.threshold[k] = rng.uniform(0.0, 0.1 * median);
  }
  return model;
}

namespace {

void apply_step(GlwtModel& m, const Gradients& g, double step, double lambda_min) {
  m.modulation.threshold -= step * g.threshold;
  m.modulation.gain -= step * g.gain;
  m.modulation.phase -= step * g.phase;
  m.fusion.logits -= step * g.logits;
  m.modulation.threshold = m.modulation.threshold.cwiseMax(lambda_min);
}

bool finite(const Gradients& g) {
  return g.threshold.allFinite() && g.gain.allFinite() && g.phase.allFinite() &&
         g.logits.allFinite();
}

}  // namespace

TrainResult train(const GlwtModel& initial, const ScaleFilter& op,
                  const std::vector<TrainSample>& data, const TrainConfig& train_cfg,
                  const LossConfig& loss_cfg) {
  if (data.empty()) fail(ErrorKind::EmptyDataset, "training set is empty");
  if (!(train_cfg.step_size > 0.0)) fail(ErrorKind::InvalidArgument, "step_size must be positive");
  if (train_cfg.epochs < 0) fail(ErrorKind::InvalidArgument, "epochs must be nonnegative");
  initial.validate();

  TrainResult result;
  result.model = initial;
  LossTerms current = dataset_loss(result.model, op, data, loss_cfg);
  if (!std::isfinite(current.total)) fail(ErrorKind::DivergedLoss, "initial loss is not finite");
  result.trace.push_back({0, current.total, current.recon, current.entropy});

  for (int epoch = 1; epoch <= train_cfg.epochs; ++epoch) {
    const Gradients g = dataset_gradients(result.model, op, data, loss_cfg);
    if (!finite(g)) fail(ErrorKind::DivergedLoss, "gradient became non-finite at epoch " + std::to_string(epoch));
    double step = train_cfg.step_size;
    for (int attempt = 0; attempt <= train_cfg.max_backtracks; ++attempt) {
      GlwtModel candidate = result.model;
      apply_step(candidate, g, step, train_cfg.lambda_clamp_min);
      const LossTerms trial = dataset_loss(candidate, op, data, loss_cfg);
      if (std::isfinite(trial.total) && trial.total <= current.total) {
        result.model = std::move(candidate);
        current = trial;
        break;
      }
      step *= 0.5;
    }
    result.trace.push_back({epoch, current.total, current.recon, current.entropy});
  }
  return result;
}

std::string format_loss_trace(const std::vector<EpochRecord>& trace) {
  std::string out = "epoch,mean_loss,recon_term,entropy_term\n";
  for (const EpochRecord& r : trace) {
    out += std::to_string(r.epoch) + "," + format_double(r.mean_loss) + "," +
           format_double(r.recon) + "," + format_double(r.entropy) + "\n";
  }
  return out;
}

double relative_error(double analytic, double numeric) {
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  if (scale < 1e-8) return 0.0;
  return std::abs(analytic - numeric) / scale;
}

GradientCheckReport finite_diff_check(const GlwtModel& model, const ScaleFilter& op,
                                      const TrainSample& sample, const LossConfig& cfg,
                                      double step, double tolerance, double kink_margin) {
  if (!(step > 0.0)) fail(ErrorKind::InvalidArgument, "finite-difference step must be positive");
  const Gradients analytic = gradients(model, op, sample, cfg);
  const Matrix coeffs = decompose(op, model, sample.noisy);

  GradientCheckReport report;
  auto probe = [&](const char* name, auto accessor, const Vector& grad) {
    for (int k = 0; k < model.num_scales(); ++k) {
      GradientCheckEntry e;
      e.parameter = name;
      e.index = k;
      e.analytic = grad[k];
      bool near_kink = false;
      if (e.parameter == "threshold") {
        // lambda must stay nonnegative on both sides of the stencil
        const double lambda = model.modulation.threshold[k];
        const double gap = (coeffs.row(k).array().abs() - lambda).abs().minCoeff();
        near_kink = gap < kink_margin || lambda - step < 0.0;
      }
      if (near_kink) {
        e.status = CheckStatus::SkippedKink;
        ++report.skipped;
        report.entries.push_back(e);
        continue;
      }
      GlwtModel plus = model;
      GlwtModel minus = model;
      accessor(plus)[k] += step;
      accessor(minus)[k] -= step;
      e.numeric = (total_loss(plus, op, sample, cfg) - total_loss(minus, op, sample, cfg)) / (2.0 * step);
      e.relative_error = relative_error(e.analytic, e.numeric);
      e.status = e.relative_error <= tolerance ? CheckStatus::Ok : CheckStatus::Failed;
      if (e.status == CheckStatus::Failed) ++report.failed;
      report.max_relative_error = std::max(report.max_relative_error, e.relative_error);
      report.entries.push_back(e);
    }
  };
  probe("threshold", [](GlwtModel& m) -> Vector& { return m.modulation.threshold; },
        analytic.threshold);
  probe("gain", [](GlwtModel& m) -> Vector& { return m.modulation.gain; }, analytic.gain);
  probe("phase", [](GlwtModel& m) -> Vector& { return m.modulation.phase; }, analytic.phase);
  probe("logits", [](GlwtModel& m) -> Vector& { return m.fusion.logits; }, analytic.logits);
  return report;
}

}  // namespace glwt
