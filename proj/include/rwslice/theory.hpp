#pragma once

#include <rwslice/builtins.hpp>
#include <rwslice/errors.hpp>
#include <rwslice/signature.hpp>
#include <rwslice/term.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rwslice {

enum class RuleKind { Rule, Equation };

struct Rule {
  std::string name;
  Term lhs;
  Term rhs;
  RuleKind kind = RuleKind::Rule;

  bool is_collapsing() const { return rhs.is_variable(); }

  /// Variables occurring more than once in the left-hand side.
  std::vector<std::string> repeated_variables() const {
    std::vector<std::string> out;
    for (const auto& v : variables_in_order(lhs))
      if (occurrences(lhs, v).size() > 1) out.push_back(v);
    return out;
  }
  bool is_left_linear() const { return repeated_variables().empty(); }

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Signature, oriented equations and rules. AC axioms are carried by the
/// signature's operator attributes.
class RewriteTheory {
 public:
  RewriteTheory() = default;
  explicit RewriteTheory(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const Signature& signature() const noexcept { return signature_; }
  const std::vector<Rule>& equations() const noexcept { return equations_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }

  void declare(OpDecl decl) {
    if (decl.name.empty()) throw InvalidTheory("operator name must be nonempty");
    if (is_variable_name(decl.name)) throw InvalidTheory("operator '" + decl.name + "' must not start with an uppercase letter");
    if (is_value_name(decl.name)) throw InvalidTheory("'" + decl.name + "' is a value constant and cannot be declared");
    if (decl.name == "•" || decl.name == "_" || decl.name == "□")
      throw InvalidTheory("'" + decl.name + "' is reserved");
    if (signature_.contains(decl.name)) throw InvalidTheory("operator '" + decl.name + "' declared twice");
    if (decl.assoc_comm && decl.arity != 2) throw InvalidTheory("AC operator '" + decl.name + "' must be binary");
    if (decl.builtin) {
      const BuiltinOp* op = BuiltinRegistry::standard().find(decl.name);
      if (!op) throw InvalidTheory("'" + decl.name + "' is not a known builtin operator");
      if (op->arity != decl.arity)
        throw InvalidTheory("builtin '" + decl.name + "' has arity " + std::to_string(op->arity));
      if (decl.assoc_comm) throw InvalidTheory("builtin '" + decl.name + "' cannot be AC");
    } else if (is_reserved_builtin(decl.name)) {
      throw InvalidTheory("'" + decl.name + "' is a reserved builtin name; declare it with [builtin]");
    }
    signature_.add(std::move(decl));
  }

  void add(Rule rule) {
    validate(rule);
    (rule.kind == RuleKind::Rule ? rules_ : equations_).push_back(std::move(rule));
  }
  void add_rule(std::string name, Term lhs, Term rhs) { add({std::move(name), std::move(lhs), std::move(rhs), RuleKind::Rule}); }
  void add_equation(std::string name, Term lhs, Term rhs) {
    add({std::move(name), std::move(lhs), std::move(rhs), RuleKind::Equation});
  }

  /// Looks up a rule or equation by name.
  const Rule* find(const std::string& name) const {
    for (const auto* list : {&rules_, &equations_})
      for (const auto& r : *list)
        if (r.name == name) return &r;
    return nullptr;
  }

  /// Checks arities and that every operator is declared. Variables are
  /// allowed only when `allow_variables` is set.
  void check_term(const Term& t, bool allow_variables) const {
    if (t.is_variable()) {
      if (!allow_variables) throw InvalidTheory("unexpected variable " + t.name());
      return;
    }
    if (t.is_hole() || t.is_bullet()) throw InvalidTheory("unexpected " + t.name() + " in a plain term");
    if (is_value_name(t.name())) {
      if (t.arity() != 0) throw InvalidTheory("value constant " + t.name() + " applied to arguments");
      return;
    }
    const OpDecl* d = signature_.find(t.name());
    if (!d) throw InvalidTheory("undeclared operator " + t.name());
    bool ok = d->assoc_comm ? t.arity() >= 2 : t.arity() == d->arity;
    if (!ok)
      throw InvalidTheory("operator " + t.name() + " expects " + std::to_string(d->arity) + " arguments, got " +
                          std::to_string(t.arity()));
    for (const auto& a : t.args()) check_term(a, allow_variables);
  }

  friend bool operator==(const RewriteTheory&, const RewriteTheory&) = default;

 private:
  void validate(const Rule& rule) const {
    if (rule.name.empty()) throw InvalidTheory("rule name must be nonempty");
    if (find(rule.name)) throw InvalidTheory("duplicate rule name '" + rule.name + "'");
    if (rule.lhs.is_variable()) throw InvalidTheory("rule '" + rule.name + "': left-hand side is a variable");
    check_term(rule.lhs, true);
    check_term(rule.rhs, true);
    auto lv = variables(rule.lhs);
    for (const auto& v : variables(rule.rhs))
      if (!lv.count(v)) throw InvalidTheory("rule '" + rule.name + "': variable " + v + " not bound by the left-hand side");
    if (signature_.is_builtin(rule.lhs.name()))
      throw InvalidTheory("rule '" + rule.name + "': builtin operator " + rule.lhs.name() + " at the root of a left-hand side");
  }

  std::string name_;
  Signature signature_;
  std::vector<Rule> equations_;
  std::vector<Rule> rules_;
};

}  // namespace rwslice
