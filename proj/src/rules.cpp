#include "glwt/rules.hpp"

#include "glwt/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace glwt {

std::vector<std::string> RuleProgram::heads() const {
  std::vector<std::string> out;
  for (const Rule& r : rules) {
    if (std::find(out.begin(), out.end(), r.head) == out.end()) out.push_back(r.head);
  }
  return out;
}

int RuleProgram::max_scale() const {
  int m = -1;
  for (const Rule& r : rules) {
    for (const Literal& l : r.body) m = std::max(m, l.scale);
  }
  return m;
}

namespace {

// Bad marks an unlexable character; it ends the stream so the parser reports
// whichever problem comes first in reading order.
enum class Tok { Ident, Var, Number, LParen, RParen, Comma, Dot, Turnstile, End, Bad };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  if (t.kind == Tok::Bad) return "unexpected character '" + t.text + "'";
  return "'" + t.text + "'";
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          t.text.push_back(text_[pos_]);
          advance();
        }
        t.kind = std::isupper(static_cast<unsigned char>(c)) || c == '_' ? Tok::Var : Tok::Ident;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          t.text.push_back(text_[pos_]);
          advance();
        }
        t.kind = Tok::Number;
      } else if (c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
        t.kind = Tok::Turnstile;
        t.text = ":-";
        advance();
        advance();
      } else {
        t.text = std::string(1, c);
        switch (c) {
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case ',': t.kind = Tok::Comma; break;
          case '.': t.kind = Tok::Dot; break;
          default:
            t.kind = Tok::Bad;
            out.push_back(std::move(t));
            return out;
        }
        advance();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::optional<int> num_scales)
      : toks_(std::move(tokens)), num_scales_(num_scales) {}

  RuleSource run() {
    RuleSource src;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (t.kind == Tok::Ident && t.text == "rule") {
        const Token start = t;
        Rule r = rule();
        if (std::find(src.program.rules.begin(), src.program.rules.end(), r) != src.program.rules.end()) {
          throw ParseError(ErrorKind::DuplicateRule, start.line, start.column,
                           "rule for '" + r.head + "' repeats an earlier rule");
        }
        src.program.rules.push_back(std::move(r));
      } else if (t.kind == Tok::Ident && t.text == "z") {
        src.facts.push_back(fact());
      } else {
        error(t, "expected 'rule' or a z(...) fact");
      }
    }
    src.program.class_priority = src.program.heads();
    return src;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void error(const Token& t, const std::string& expected) const {
    throw ParseError(ErrorKind::SyntaxError, t.line, t.column, expected + ", found " + describe(t));
  }

  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) error(peek(), std::string("expected ") + what);
    return take();
  }

  void expect_keyword(const char* word) {
    if (peek().kind != Tok::Ident || peek().text != word) {
      error(peek(), std::string("expected '") + word + "'");
    }
    take();
  }

  int scale() {
    const Token t = peek();
    if (t.kind != Tok::Ident || t.text.size() <= 5 || t.text.compare(0, 5, "scale") != 0 ||
        !std::all_of(t.text.begin() + 5, t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      error(t, "expected a scale name like 'scale1'");
    }
    take();
    const std::string digits = t.text.substr(5);
    if (digits.size() > 6) {
      throw ParseError(ErrorKind::UnknownScale, t.line, t.column, "scale index too large");
    }
    const int k = std::stoi(digits);
    if (num_scales_ && k >= *num_scales_) {
      throw ParseError(ErrorKind::UnknownScale, t.line, t.column,
                       "'" + t.text + "' but the model has " + std::to_string(*num_scales_) + " scales");
    }
    return k;
  }

  ActivationState state() {
    const Token t = peek();
    if (t.kind == Tok::Ident && t.text == "active") {
      take();
      return ActivationState::Active;
    }
    if (t.kind == Tok::Ident && t.text == "inactive") {
      take();
      return ActivationState::Inactive;
    }
    error(t, "expected 'active' or 'inactive'");
  }

  Rule rule() {
    expect_keyword("rule");
    expect(Tok::LParen, "'('");
    const Token head = expect(Tok::Ident, "a lowercase head predicate");
    expect(Tok::LParen, "'('");
    const Token var = expect(Tok::Var, "an uppercase variable");
    expect(Tok::RParen, "')'");
    expect(Tok::RParen, "')'");
    expect(Tok::Turnstile, "':-'");
    Rule r;
    r.head = head.text;
    r.var = var.text;
    for (;;) {
      const Token at = peek();
      Literal lit = literal();
      if (lit.var != r.var) {
        throw ParseError(ErrorKind::UnboundVariable, at.line, at.column,
                         "literal uses '" + lit.var + "' but the head binds '" + r.var + "'");
      }
      r.body.push_back(lit);
      if (peek().kind == Tok::Comma) {
        take();
        continue;
      }
      if (peek().kind == Tok::Dot) {
        take();
        break;
      }
      error(peek(), "expected ',' or '.'");
    }
    return r;
  }

  Literal literal() {
    Literal lit;
    if (peek().kind == Tok::Ident && peek().text == "not") {
      take();
      lit.negated = true;
    }
    expect_keyword("z");
    expect(Tok::LParen, "'('");
    lit.var = expect(Tok::Var, "an uppercase variable").text;
    expect(Tok::Comma, "','");
    lit.scale = scale();
    expect(Tok::Comma, "','");
    lit.state = state();
    expect(Tok::RParen, "')'");
    return lit;
  }

  Fact fact() {
    expect_keyword("z");
    expect(Tok::LParen, "'('");
    Fact f;
    const Token node = peek();
    if (node.kind != Tok::Ident && node.kind != Tok::Number) error(node, "expected a node constant");
    take();
    f.node = node.text;
    expect(Tok::Comma, "','");
    f.scale = scale();
    expect(Tok::Comma, "','");
    f.state = state();
    expect(Tok::RParen, "')'");
    expect(Tok::Dot, "'.'");
    return f;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::optional<int> num_scales_;
};

const char* state_name(ActivationState s) {
  return s == ActivationState::Active ? "active" : "inactive";
}

}  // namespace

RuleSource parse_source(const std::string& text, std::optional<int> num_scales) {
  return Parser(Lexer(text).run(), num_scales).run();
}

RuleProgram parse_rules(const std::string& text, std::optional<int> num_scales) {
  return parse_source(text, num_scales).program;
}

std::string print_literal(const Literal& literal, const std::string& node) {
  std::string out = literal.negated ? "not " : "";
  out += "z(" + node + ", " + ActivationTensor::scale_name(literal.scale) + ", " +
         state_name(literal.state) + ")";
  return out;
}

std::string print_rules(const RuleProgram& program) {
  std::string out;
  for (std::size_t r = 0; r < program.rules.size(); ++r) {
    const Rule& rule = program.rules[r];
    if (r) out += '\n';
    out += "rule(" + rule.head + "(" + rule.var + ")) :-\n";
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      out += "    " + print_literal(rule.body[i], rule.var);
      out += i + 1 < rule.body.size() ? ",\n" : ".\n";
    }
  }
  return out;
}

ActivationTensor facts_to_activations(const std::vector<Fact>& facts, std::optional<int> num_scales) {
  std::vector<std::string> nodes;
  std::map<std::string, int> index;
  int k_count = num_scales.value_or(0);
  for (const Fact& f : facts) {
    if (!index.contains(f.node)) {
      index[f.node] = static_cast<int>(nodes.size());
      nodes.push_back(f.node);
    }
    if (!num_scales) k_count = std::max(k_count, f.scale + 1);
  }
  ActivationTensor acts(k_count, static_cast<int>(nodes.size()), nodes);
  for (const Fact& f : facts) acts.set(f.scale, index[f.node], f.state == ActivationState::Active);
  return acts;
}

}  // namespace glwt
