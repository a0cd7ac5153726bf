#include "glwt/evaluate.hpp"

#include "glwt/error.hpp"

#include <algorithm>
#include <cctype>

namespace glwt {

namespace {

std::size_t head_index(const std::vector<std::string>& heads, const std::string& head) {
  const auto it = std::find(heads.begin(), heads.end(), head);
  if (it == heads.end()) return heads.size();
  return static_cast<std::size_t>(it - heads.begin());
}

void check_scales(const RuleProgram& program, int num_scales) {
  const int m = program.max_scale();
  if (m >= num_scales) {
    fail(ErrorKind::ScaleOutOfRange, "program references scale" + std::to_string(m) +
                                         " but only " + std::to_string(num_scales) +
                                         " scales are available");
  }
}

bool valid_constant(const std::string& id) {
  if (id.empty()) return false;
  const unsigned char first = static_cast<unsigned char>(id[0]);
  if (std::isdigit(first)) {
    return std::all_of(id.begin(), id.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  }
  if (!std::islower(first)) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

bool CrispVerdicts::at(int node, const std::string& head) const {
  const std::size_t h = head_index(heads, head);
  if (h == heads.size()) return false;
  return holds.at(static_cast<std::size_t>(node))[h] != 0;
}

double SoftVerdicts::at(int node, const std::string& head) const {
  const std::size_t h = head_index(heads, head);
  if (h == heads.size()) return 0.0;
  return scores(node, static_cast<Eigen::Index>(h));
}

bool literal_holds(const Literal& literal, const ActivationTensor& acts, int node) {
  const bool z = acts.active(literal.scale, node);
  const bool atom = literal.state == ActivationState::Active ? z : !z;
  return literal.negated ? !atom : atom;
}

double literal_score(const Literal& literal, const Matrix& z_star, int node) {
  const double z = z_star(literal.scale, node);
  const double atom = literal.state == ActivationState::Active ? z : 1.0 - z;
  return literal.negated ? 1.0 - atom : atom;
}

CrispVerdicts evaluate(const RuleProgram& program, const ActivationTensor& acts) {
  check_scales(program, acts.num_scales());
  CrispVerdicts out;
  out.heads = program.heads();
  out.holds.assign(static_cast<std::size_t>(acts.num_nodes()), std::vector<char>(out.heads.size(), 0));
  for (int i = 0; i < acts.num_nodes(); ++i) {
    for (const Rule& rule : program.rules) {
      const bool fires = std::all_of(rule.body.begin(), rule.body.end(),
                                     [&](const Literal& l) { return literal_holds(l, acts, i); });
      if (fires) out.holds[static_cast<std::size_t>(i)][head_index(out.heads, rule.head)] = 1;
    }
  }
  return out;
}

SoftVerdicts soft_evaluate(const RuleProgram& program, const Matrix& z_star) {
  check_scales(program, static_cast<int>(z_star.rows()));
  SoftVerdicts out;
  out.heads = program.heads();
  out.scores = Matrix::Zero(z_star.cols(), static_cast<Eigen::Index>(out.heads.size()));
  for (Eigen::Index i = 0; i < z_star.cols(); ++i) {
    for (const Rule& rule : program.rules) {
      double body = 1.0;
      for (const Literal& l : rule.body) body *= literal_score(l, z_star, static_cast<int>(i));
      double& slot = out.scores(i, static_cast<Eigen::Index>(head_index(out.heads, rule.head)));
      slot = std::max(slot, body);
    }
  }
  return out;
}

NodeTrace trace(const RuleProgram& program, const ActivationTensor& acts, int node) {
  if (node < 0 || node >= acts.num_nodes()) {
    fail(ErrorKind::IndexOutOfRange, "node " + std::to_string(node) + " outside [0, " +
                                         std::to_string(acts.num_nodes()) + ")");
  }
  check_scales(program, acts.num_scales());
  const std::string& id = acts.node_id(node);
  NodeTrace t;
  t.node = node;
  t.text = "% activations for node " + id + "\n";
  for (int k = 0; k < acts.num_scales(); ++k) {
    t.text += "z(" + id + ", " + ActivationTensor::scale_name(k) + ", " +
              (acts.active(k, node) ? "active" : "inactive") + ").\n";
  }
  t.text += "% rules\n";
  std::vector<std::string> heads = program.heads();
  std::vector<bool> verdict(heads.size(), false);
  for (std::size_t r = 0; r < program.rules.size(); ++r) {
    const Rule& rule = program.rules[r];
    RuleTrace rt;
    rt.rule = static_cast<int>(r);
    for (std::size_t l = 0; l < rule.body.size(); ++l) {
      if (!literal_holds(rule.body[l], acts, node)) {
        rt.first_failure = static_cast<int>(l);
        break;
      }
    }
    rt.fired = !rt.first_failure.has_value();
    t.text += "rule(" + rule.head + "(" + id + ")) ";
    if (rt.fired) {
      verdict[head_index(heads, rule.head)] = true;
      t.text += "fired:";
      for (std::size_t l = 0; l < rule.body.size(); ++l) {
        t.text += (l ? ", " : " ") + print_literal(rule.body[l], id);
      }
      t.text += "\n";
    } else {
      t.text += "blocked: " + print_literal(rule.body[static_cast<std::size_t>(*rt.first_failure)], id) + "\n";
    }
    t.rules.push_back(rt);
  }
  t.text += "% verdicts\n";
  for (std::size_t h = 0; h < heads.size(); ++h) {
    t.verdicts.emplace_back(heads[h], verdict[h]);
    t.text += heads[h] + "(" + id + ") :- " + (verdict[h] ? "true" : "false") + "\n";
  }
  return t;
}

std::string export_facts(const ActivationTensor& acts, const RuleProgram& program) {
  std::string out;
  for (int i = 0; i < acts.num_nodes(); ++i) {
    const std::string& id = acts.node_id(i);
    if (!valid_constant(id)) {
      fail(ErrorKind::InvalidArgument, "node id '" + id + "' is not a valid rule-language constant");
    }
    for (int k = 0; k < acts.num_scales(); ++k) {
      out += "z(" + id + ", " + ActivationTensor::scale_name(k) + ", " +
             (acts.active(k, i) ? "active" : "inactive") + ").\n";
    }
  }
  if (!program.rules.empty()) {
    if (!out.empty()) out += '\n';
    out += print_rules(program);
  }
  return out;
}

std::vector<int> predict_labels(const RuleProgram& program, const ActivationTensor& acts,
                                const std::map<std::string, int>& head_labels, int default_label) {
  const CrispVerdicts v = evaluate(program, acts);
  std::vector<int> labels(static_cast<std::size_t>(acts.num_nodes()), default_label);
  for (int i = 0; i < acts.num_nodes(); ++i) {
    for (const std::string& head : program.class_priority) {
      const auto it = head_labels.find(head);
      if (it != head_labels.end() && v.at(i, head)) {
        labels[static_cast<std::size_t>(i)] = it->second;
        break;
      }
    }
  }
  return labels;
}

}  // namespace glwt
