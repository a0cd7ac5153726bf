#pragma once

#include "glwt/rules.hpp"

#include <map>
#include <vector>

namespace glwt {

struct LearnConfig {
  int max_body_literals = 2;
  double min_gain = 0.01;  // bits
  /// Added to the per-scale decile grid.
  std::vector<double> extra_thresholds = {0.2, 0.4, 0.5};
  int max_rules_per_class = 1;
};

/// One selected predicate "phi_k > t" (greater) or "phi_k <= t", with the
/// counts it was scored on so the gain can be recomputed.
struct LearnedLiteral {
  int scale = 0;
  double threshold = 0.0;
  bool greater = true;
  double gain = 0.0;
  int parent_pos = 0;
  int parent_neg = 0;
  int true_pos = 0;  // positives on the predicate-true side
  int true_neg = 0;
};

struct LearnedRule {
  int label = 0;
  std::vector<LearnedLiteral> literals;
};

struct LearnResult {
  RuleProgram program;
  Vector tau;  // per-scale threshold for signed binarization
  std::vector<LearnedRule> rules;
  std::map<std::string, int> head_labels;
  int default_label = 0;
};

/// Binary entropy in bits of a (pos, neg) split.
double binary_entropy(int pos, int neg);
/// Gain of splitting (parent_pos, parent_neg) into the predicate-true side
/// (true_pos, true_neg) and its complement.
double information_gain(int parent_pos, int parent_neg, int true_pos, int true_neg);

/// Head predicate used for a class label: "class_<label>".
std::string class_head(int label);

/// Greedy one-vs-rest induction over modulated coefficients phi (K x n).
/// The most frequent training class (lowest label on ties) is the default and
/// gets no rules; every other class, in ascending label order, gets up to
/// max_rules_per_class conjunctions of at most max_body_literals predicates.
/// A predicate is admissible only if its true side is purer in the class than
/// the covered set. Once a scale's threshold is chosen it is fixed for the
/// rest of the program, since each scale has one tau.
/// Ties go to lower scale, then lower threshold, then ">" before "<=".
/// `train_nodes` empty means every node. Throws DegenerateLabels, EmptyGrid.
LearnResult learn_rules(const Matrix& phi, const std::vector<int>& labels,
                        const std::vector<int>& train_nodes, const LearnConfig& cfg);

/// Same search over binary activations: each scale offers only active /
/// inactive.
LearnResult learn_rules(const ActivationTensor& acts, const std::vector<int>& labels,
                        const std::vector<int>& train_nodes, const LearnConfig& cfg);

/// Decile grid of phi_k over the given nodes plus the extra thresholds,
/// sorted and deduplicated.
std::vector<double> threshold_grid(const Matrix& phi, int scale, const std::vector<int>& nodes,
                                   const std::vector<double>& extra);

}  // namespace glwt
