#pragma once

// Text syntax for terms and theories.
//
//   mod NAME is
//     op f : 2 [assoc comm] .
//     op g : 1 -> Nat .
//     op + : 2 [builtin] .
//     vars X Y .
//     eq [name] : lhs = rhs .
//     rl [name] : lhs => rhs .
//   endm
//
// Identifiers starting with an uppercase letter are variables. `•` and `_`
// denote the irrelevance symbol in term slices. `***` and `---` start a
// comment that runs to the end of the line.

#include <rwslice/errors.hpp>
#include <rwslice/signature.hpp>
#include <rwslice/term.hpp>
#include <rwslice/theory.hpp>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rwslice {

struct Token {
  enum class Kind { Name, Punct, End } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      if (pos_ >= text_.size()) {
        out.push_back({Token::Kind::End, "", line_, col_});
        return out;
      }
      std::size_t line = line_, col = col_;
      char c = text_[pos_];
      if (is_punct(c)) {
        advance();
        out.push_back({Token::Kind::Punct, std::string(1, c), line, col});
        continue;
      }
      std::size_t start = pos_;
      while (pos_ < text_.size() && !is_space(text_[pos_]) && !is_punct(text_[pos_])) advance();
      out.push_back({Token::Kind::Name, std::string(text_.substr(start, pos_ - start)), line, col});
    }
  }

 private:
  static bool is_punct(char c) { return c == '(' || c == ')' || c == ',' || c == '[' || c == ']' || c == ':' || c == '.'; }
  static bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      if (is_space(text_[pos_])) {
        advance();
      } else if (text_.substr(pos_, 3) == "***" || text_.substr(pos_, 3) == "---") {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  /// With a theory, operators must be declared with the right arity.
  explicit Parser(std::string_view text, const RewriteTheory* theory = nullptr, bool allow_bullets = false)
      : tokens_(Lexer(text).tokenize()), theory_(theory), allow_bullets_(allow_bullets) {}

  Term parse_term() {
    const Token& t = expect_name("a term");
    std::vector<Term> args;
    bool applied = false;
    if (is_punct("(")) {
      applied = true;
      next();
      args.push_back(parse_term());
      while (is_punct(",")) {
        next();
        args.push_back(parse_term());
      }
      expect_punct(")");
    }
    if (t.text == "•" || t.text == "_") {
      if (!allow_bullets_) throw SyntaxError("'" + t.text + "' is only allowed in term slices", t.line, t.column);
      if (applied) throw SyntaxError("• takes no arguments", t.line, t.column);
      return Term::bullet();
    }
    if (is_variable_name(t.text)) {
      if (applied) throw SyntaxError("variable " + t.text + " applied to arguments", t.line, t.column);
      return Term::variable(t.text);
    }
    if (theory_) check_operator(t, args.size());
    return Term::op(t.text, std::move(args));
  }

  Term parse_single_term() {
    Term t = parse_term();
    if (peek().kind != Token::Kind::End) throw SyntaxError("unexpected '" + peek().text + "' after term", peek().line, peek().column);
    return t;
  }

  RewriteTheory parse_theory() {
    RewriteTheory th;
    bool module = false;
    if (is_name("mod")) {
      next();
      th.set_name(expect_name("a module name").text);
      expect_keyword("is");
      module = true;
    }
    theory_ = &th;
    std::size_t eq_count = 0;
    std::size_t rl_count = 0;
    while (true) {
      const Token& t = peek();
      if (t.kind == Token::Kind::End) {
        if (module) throw SyntaxError("missing 'endm'", t.line, t.column);
        break;
      }
      if (module && is_name("endm")) {
        next();
        if (peek().kind != Token::Kind::End) throw SyntaxError("text after 'endm'", peek().line, peek().column);
        break;
      }
      if (is_name("op")) {
        parse_op(th);
      } else if (is_name("var") || is_name("vars")) {
        parse_vars();
      } else if (is_name("eq")) {
        parse_rule(th, RuleKind::Equation, ++eq_count);
      } else if (is_name("rl")) {
        parse_rule(th, RuleKind::Rule, ++rl_count);
      } else {
        throw SyntaxError("expected 'op', 'vars', 'eq' or 'rl', found '" + t.text + "'", t.line, t.column);
      }
    }
    theory_ = nullptr;
    return th;
  }

 private:
  const Token& peek() const { return tokens_[index_]; }
  const Token& next() { return tokens_[index_ < tokens_.size() - 1 ? index_++ : index_]; }
  bool is_punct(std::string_view p) const { return peek().kind == Token::Kind::Punct && peek().text == p; }
  bool is_name(std::string_view n) const { return peek().kind == Token::Kind::Name && peek().text == n; }

  const Token& expect_name(const std::string& what) {
    if (peek().kind != Token::Kind::Name)
      throw SyntaxError("expected " + what + ", found '" + peek().text + "'", peek().line, peek().column);
    return next();
  }
  void expect_punct(std::string_view p) {
    if (!is_punct(p)) throw SyntaxError("expected '" + std::string(p) + "', found '" + peek().text + "'", peek().line, peek().column);
    next();
  }
  void expect_keyword(std::string_view k) {
    if (!is_name(k)) throw SyntaxError("expected '" + std::string(k) + "', found '" + peek().text + "'", peek().line, peek().column);
    next();
  }

  void check_operator(const Token& t, std::size_t arity) const {
    if (is_value_name(t.text)) {
      if (arity != 0) throw ArityMismatch("value " + t.text + " takes no arguments", t.line, t.column);
      return;
    }
    const OpDecl* d = theory_->signature().find(t.text);
    if (!d) throw UnknownSymbol(t.text, t.line, t.column);
    bool ok = d->assoc_comm ? arity >= 2 : arity == d->arity;
    if (!ok)
      throw ArityMismatch(t.text + " expects " + std::to_string(d->arity) + " arguments, got " + std::to_string(arity),
                          t.line, t.column);
  }

  void parse_op(RewriteTheory& th) {
    const Token& kw = next();
    OpDecl d;
    d.name = expect_name("an operator name").text;
    expect_punct(":");
    const Token& ar = expect_name("an arity");
    if (!is_numeral(ar.text) || ar.text.front() == '-') throw SyntaxError("arity must be a natural number", ar.line, ar.column);
    d.arity = std::stoul(ar.text);
    if (is_name("->")) {
      next();
      d.sort = expect_name("a sort").text;
    }
    bool assoc = false, comm = false;
    if (is_punct("[")) {
      next();
      while (!is_punct("]")) {
        const Token& a = expect_name("an attribute");
        if (a.text == "assoc") assoc = true;
        else if (a.text == "comm") comm = true;
        else if (a.text == "builtin") d.builtin = true;
        else throw SyntaxError("unknown attribute '" + a.text + "'", a.line, a.column);
      }
      next();
    }
    if (assoc != comm) throw SyntaxError("assoc and comm must be declared together", kw.line, kw.column);
    d.assoc_comm = assoc;
    expect_punct(".");
    try {
      th.declare(std::move(d));
    } catch (const InvalidTheory& e) {
      throw ParseError("invalid declaration", e.what(), kw.line, kw.column);
    }
  }

  void parse_vars() {
    next();
    bool any = false;
    while (peek().kind == Token::Kind::Name) {
      const Token& v = next();
      if (!is_variable_name(v.text)) throw SyntaxError("variable names must start with an uppercase letter", v.line, v.column);
      any = true;
    }
    if (!any) throw SyntaxError("expected variable names", peek().line, peek().column);
    if (is_punct(":")) {
      next();
      expect_name("a sort");
    }
    expect_punct(".");
  }

  void parse_rule(RewriteTheory& th, RuleKind kind, std::size_t ordinal) {
    const Token& kw = next();
    std::string name = (kind == RuleKind::Equation ? "eq" : "rl") + std::to_string(ordinal);
    if (is_punct("[")) {
      next();
      name = expect_name("a rule name").text;
      expect_punct("]");
      expect_punct(":");
    }
    Term lhs = parse_term();
    expect_keyword(kind == RuleKind::Equation ? "=" : "=>");
    Term rhs = parse_term();
    expect_punct(".");
    try {
      th.add({name, lhs, rhs, kind});
    } catch (const InvalidTheory& e) {
      throw ParseError("invalid rule", e.what(), kw.line, kw.column);
    }
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
  const RewriteTheory* theory_;
  bool allow_bullets_;
};

/// Parses a term without signature checks.
inline Term parse_term(std::string_view text) { return Parser(text).parse_single_term(); }

/// Parses a term whose operators must be declared in `theory`.
inline Term parse_term(std::string_view text, const RewriteTheory& theory) { return Parser(text, &theory).parse_single_term(); }

/// Parses a term slice (• and _ allowed).
inline Term parse_slice(std::string_view text) { return Parser(text, nullptr, true).parse_single_term(); }

inline RewriteTheory parse_theory(std::string_view text) { return Parser(text).parse_theory(); }

inline std::string render_theory(const RewriteTheory& th) {
  std::string out;
  const bool module = !th.name().empty();
  const std::string indent = module ? "  " : "";
  if (module) out += "mod " + th.name() + " is\n";
  for (const auto& d : th.signature().decls()) {
    out += indent + "op " + d.name + " : " + std::to_string(d.arity);
    if (d.sort) out += " -> " + *d.sort;
    if (d.assoc_comm || d.builtin) {
      out += " [";
      if (d.assoc_comm) out += "assoc comm";
      if (d.builtin) out += d.assoc_comm ? " builtin" : "builtin";
      out += "]";
    }
    out += " .\n";
  }
  for (const auto& e : th.equations()) out += indent + "eq [" + e.name + "] : " + to_string(e.lhs) + " = " + to_string(e.rhs) + " .\n";
  for (const auto& r : th.rules()) out += indent + "rl [" + r.name + "] : " + to_string(r.lhs) + " => " + to_string(r.rhs) + " .\n";
  if (module) out += "endm\n";
  return out;
}

/// Parses a comma-separated list of positions (`^` or dot-separated
/// naturals). The empty string is the empty criterion.
inline PositionSet parse_criterion(std::string_view text) {
  PositionSet out;
  auto trim = [](std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
  };
  text = trim(text);
  if (text.empty()) return out;
  while (true) {
    std::size_t end = text.find(',');
    std::string_view item = trim(text.substr(0, end));
    auto p = parse_position(item);
    if (!p) throw InvalidCriterion("malformed position '" + std::string(item) + "'");
    out.insert(*p);
    if (end == std::string_view::npos) return out;
    text.remove_prefix(end + 1);
  }
}

}  // namespace rwslice
