#include "glwt/learner.hpp"

#include "glwt/error.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

namespace glwt {

double binary_entropy(int pos, int neg) {
  const int total = pos + neg;
  if (total == 0 || pos == 0 || neg == 0) return 0.0;
  const double p = static_cast<double>(pos) / total;
  const double q = static_cast<double>(neg) / total;
  return -(p * std::log2(p) + q * std::log2(q));
}

double information_gain(int parent_pos, int parent_neg, int true_pos, int true_neg) {
  const int total = parent_pos + parent_neg;
  if (total == 0) return 0.0;
  const int in = true_pos + true_neg;
  const int out = total - in;
  return binary_entropy(parent_pos, parent_neg) -
         (static_cast<double>(in) / total) * binary_entropy(true_pos, true_neg) -
         (static_cast<double>(out) / total) *
             binary_entropy(parent_pos - true_pos, parent_neg - true_neg);
}

std::string class_head(int label) { return "class_" + std::to_string(label); }

std::vector<double> threshold_grid(const Matrix& phi, int scale, const std::vector<int>& nodes,
                                   const std::vector<double>& extra) {
  std::vector<double> values;
  values.reserve(nodes.size());
  for (int i : nodes) values.push_back(phi(scale, i));
  std::vector<double> grid;
  if (!values.empty()) {
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    for (int d = 1; d <= 9; ++d) {
      grid.push_back(values[(static_cast<std::size_t>(d) * (m - 1)) / 10]);
    }
  }
  grid.insert(grid.end(), extra.begin(), extra.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

namespace {

struct Candidate {
  int scale = 0;
  double threshold = 0.0;
  bool greater = true;
  double gain = -1.0;
  int true_pos = 0;
  int true_neg = 0;
};

bool predicate(double value, double threshold, bool greater) {
  return greater ? value > threshold : value <= threshold;
}

LearnResult learn_impl(const Matrix& phi, const std::vector<int>& labels,
                       const std::vector<int>& train_nodes, const LearnConfig& cfg,
                       const std::vector<std::vector<double>>* fixed_grids) {
  const int k_count = static_cast<int>(phi.rows());
  const int n = static_cast<int>(phi.cols());
  if (static_cast<int>(labels.size()) != n) {
    fail(ErrorKind::DimensionMismatch, "need one label per node");
  }
  if (cfg.max_body_literals < 1) fail(ErrorKind::InvalidArgument, "max_body_literals must be >= 1");
  std::vector<int> nodes = train_nodes;
  if (nodes.empty()) {
    for (int i = 0; i < n; ++i) nodes.push_back(i);
  }
  for (int i : nodes) {
    if (i < 0 || i >= n) fail(ErrorKind::IndexOutOfRange, "training node out of range");
  }

  std::map<int, int> class_counts;
  for (int i : nodes) ++class_counts[labels[static_cast<std::size_t>(i)]];
  if (class_counts.size() < 2) {
    fail(ErrorKind::DegenerateLabels, "training labels contain fewer than two classes");
  }

  std::vector<std::vector<double>> grids(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) {
    grids[k] = fixed_grids ? (*fixed_grids)[k] : threshold_grid(phi, k, nodes, cfg.extra_thresholds);
  }
  if (std::all_of(grids.begin(), grids.end(), [](const auto& g) { return g.empty(); })) {
    fail(ErrorKind::EmptyGrid, "no candidate thresholds");
  }

  LearnResult result;
  int best_count = -1;
  for (const auto& [label, count] : class_counts) {
    if (count > best_count) {
      best_count = count;
      result.default_label = label;
    }
  }

  std::vector<std::optional<double>> tau(static_cast<std::size_t>(k_count));
  for (const auto& [label, count] : class_counts) {
    if (label == result.default_label) continue;
    std::vector<int> pool = nodes;  // shrinks as positives are covered
    for (int r = 0; r < cfg.max_rules_per_class; ++r) {
      std::vector<int> covered = pool;
      LearnedRule rule;
      rule.label = label;
      while (static_cast<int>(rule.literals.size()) < cfg.max_body_literals) {
        int parent_pos = 0;
        for (int i : covered) parent_pos += labels[static_cast<std::size_t>(i)] == label;
        const int parent_neg = static_cast<int>(covered.size()) - parent_pos;
        if (parent_pos == 0 || parent_neg == 0) break;
        const double parent_rate = static_cast<double>(parent_pos) / covered.size();

        Candidate best;
        for (int k = 0; k < k_count; ++k) {
          std::vector<double> options = grids[k];
          if (tau[k]) options = {*tau[k]};
          for (double t : options) {
            for (bool greater : {true, false}) {
              int tp = 0;
              int tn = 0;
              for (int i : covered) {
                if (predicate(phi(k, i), t, greater)) {
                  (labels[static_cast<std::size_t>(i)] == label ? tp : tn) += 1;
                }
              }
              if (tp + tn == 0) continue;
              if (!(static_cast<double>(tp) / (tp + tn) > parent_rate)) continue;
              const double gain = information_gain(parent_pos, parent_neg, tp, tn);
              if (gain > best.gain) best = Candidate{k, t, greater, gain, tp, tn};
            }
          }
        }
        if (best.gain < cfg.min_gain) break;
        rule.literals.push_back(LearnedLiteral{best.scale, best.threshold, best.greater, best.gain,
                                               parent_pos, parent_neg, best.true_pos, best.true_neg});
        tau[best.scale] = best.threshold;
        std::vector<int> next;
        for (int i : covered) {
          if (predicate(phi(best.scale, i), best.threshold, best.greater)) next.push_back(i);
        }
        covered = std::move(next);
      }
      if (rule.literals.empty()) break;

      Rule dsl;
      dsl.head = class_head(label);
      dsl.var = "Node";
      for (const LearnedLiteral& l : rule.literals) {
        dsl.body.push_back(Literal{"Node", l.scale,
                                   l.greater ? ActivationState::Active : ActivationState::Inactive,
                                   false});
      }
      result.head_labels[dsl.head] = label;
      result.program.rules.push_back(std::move(dsl));
      result.rules.push_back(std::move(rule));

      std::set<int> covered_set(covered.begin(), covered.end());
      std::vector<int> next_pool;
      bool positives_left = false;
      for (int i : pool) {
        const bool pos = labels[static_cast<std::size_t>(i)] == label;
        if (pos && covered_set.contains(i)) continue;
        positives_left = positives_left || pos;
        next_pool.push_back(i);
      }
      pool = std::move(next_pool);
      if (!positives_left) break;
    }
  }
  result.program.class_priority = result.program.heads();
  result.tau = Vector::Zero(k_count);
  for (int k = 0; k < k_count; ++k) {
    if (tau[k]) result.tau[k] = *tau[k];
  }
  return result;
}

}  // namespace

LearnResult learn_rules(const Matrix& phi, const std::vector<int>& labels,
                        const std::vector<int>& train_nodes, const LearnConfig& cfg) {
  return learn_impl(phi, labels, train_nodes, cfg, nullptr);
}

LearnResult learn_rules(const ActivationTensor& acts, const std::vector<int>& labels,
                        const std::vector<int>& train_nodes, const LearnConfig& cfg) {
  Matrix z(acts.num_scales(), acts.num_nodes());
  for (int k = 0; k < acts.num_scales(); ++k) {
    for (int i = 0; i < acts.num_nodes(); ++i) z(k, i) = acts.active(k, i) ? 1.0 : 0.0;
  }
  const std::vector<std::vector<double>> grids(static_cast<std::size_t>(acts.num_scales()), {0.5});
  return learn_impl(z, labels, train_nodes, cfg, &grids);
}

}  // namespace glwt
