#pragma once

#include "glwt/rules.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace glwt {

/// Per-node truth of every head in the program, heads in first-appearance
/// order. Negation is negation-as-failure over the activation facts.
struct CrispVerdicts {
  std::vector<std::string> heads;
  std::vector<std::vector<char>> holds;  // [node][head]

  bool at(int node, const std::string& head) const;
};

/// Soft scores: active literal -> z*, inactive -> 1 - z*, `not` -> 1 - score;
/// a body is the product of its literals and a head the max over its rules.
struct SoftVerdicts {
  std::vector<std::string> heads;
  Matrix scores;  // nodes x heads

  double at(int node, const std::string& head) const;
};

bool literal_holds(const Literal& literal, const ActivationTensor& acts, int node);
double literal_score(const Literal& literal, const Matrix& z_star, int node);

/// Throws ScaleOutOfRange when a rule references a scale the tensor lacks.
CrispVerdicts evaluate(const RuleProgram& program, const ActivationTensor& acts);
SoftVerdicts soft_evaluate(const RuleProgram& program, const Matrix& z_star);

struct RuleTrace {
  int rule = 0;
  bool fired = false;
  std::optional<int> first_failure;  // literal index, blocked rules only
};

struct NodeTrace {
  int node = 0;
  std::vector<RuleTrace> rules;
  std::vector<std::pair<std::string, bool>> verdicts;
  std::string text;
};

/// Proof trace for one node: its activation facts, each rule's outcome
/// (with the first failing literal when blocked), then one
/// "head(node) :- true|false" verdict line per head.
NodeTrace trace(const RuleProgram& program, const ActivationTensor& acts, int node);

/// One "z(node, scaleK, active|inactive)." line per (node, scale), node-major,
/// followed by the program in rule syntax.
std::string export_facts(const ActivationTensor& acts, const RuleProgram& program);

/// First head in class_priority that fires picks the label; otherwise
/// `default_label`.
std::vector<int> predict_labels(const RuleProgram& program, const ActivationTensor& acts,
                                const std::map<std::string, int>& head_labels, int default_label);

}  // namespace glwt
