#pragma once

#include "glwt/activation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace glwt {

// Rule language:
//
//   program  := { rule | fact } ;
//   rule     := "rule" "(" ident "(" Var ")" ")" ":-" literal { "," literal } "." ;
//   literal  := [ "not" ] "z" "(" Var "," scaleN "," ( "active" | "inactive" ) ")" ;
//   fact     := "z" "(" node "," scaleN "," ( "active" | "inactive" ) ")" "." ;
//
// Var starts uppercase, ident lowercase, node is an ident or digits.
// '%' comments run to end of line.

enum class ActivationState { Active, Inactive };

struct Literal {
  std::string var;
  int scale = 0;
  ActivationState state = ActivationState::Active;
  bool negated = false;

  bool operator==(const Literal&) const = default;
};

struct Rule {
  std::string head;  // predicate name
  std::string var;   // head variable
  std::vector<Literal> body;

  bool operator==(const Rule&) const = default;
};

struct RuleProgram {
  std::vector<Rule> rules;
  /// Head predicates in resolution order; defaults to first appearance.
  std::vector<std::string> class_priority;

  /// Distinct heads in first-appearance order.
  std::vector<std::string> heads() const;
  int max_scale() const;  // -1 for an empty program

  bool operator==(const RuleProgram&) const = default;
};

struct Fact {
  std::string node;
  int scale = 0;
  ActivationState state = ActivationState::Active;

  bool operator==(const Fact&) const = default;
};

struct RuleSource {
  RuleProgram program;
  std::vector<Fact> facts;
};

/// Parses rules and facts. With num_scales set, a scale >= num_scales is an
/// UnknownScale error. Throws ParseError (SyntaxError, UnknownScale,
/// UnboundVariable, DuplicateRule) with the offending location.
RuleSource parse_source(const std::string& text, std::optional<int> num_scales = std::nullopt);

/// parse_source, keeping only the rules.
RuleProgram parse_rules(const std::string& text, std::optional<int> num_scales = std::nullopt);

/// Canonical text; parse_rules(print_rules(p)) == p.
std::string print_rules(const RuleProgram& program);
std::string print_literal(const Literal& literal, const std::string& node);

/// Nodes in first-appearance order; K = max scale + 1 unless given.
ActivationTensor facts_to_activations(const std::vector<Fact>& facts,
                                      std::optional<int> num_scales = std::nullopt);

}  // namespace glwt
