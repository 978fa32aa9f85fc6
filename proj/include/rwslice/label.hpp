#pragma once

// Labels and the labeling calculus used to relate the positions of the two
// terms of a rewrite step: rule, substitution and rewrite-step labeling,
// the collapsing / nonleft-linear / builtin extensions, and the labeling of
// AC flat/unflat transformations.

#include <rwslice/builtins.hpp>
#include <rwslice/errors.hpp>
#include <rwslice/match.hpp>
#include <rwslice/theory.hpp>
#include <rwslice/trace.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <iterator>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rwslice {

using AtomId = std::uint32_t;

/// A composite label: a finite set of atomic labels.
class Label {
 public:
  Label() = default;
  Label(std::initializer_list<AtomId> atoms) : atoms_(atoms) { normalize(); }
  static Label atom(AtomId id) { return Label{id}; }

  const std::vector<AtomId>& atoms() const noexcept { return atoms_; }
  bool empty() const noexcept { return atoms_.empty(); }
  std::size_t size() const noexcept { return atoms_.size(); }

  Label join(const Label& other) const {
    Label out;
    std::set_union(atoms_.begin(), atoms_.end(), other.atoms_.begin(), other.atoms_.end(), std::back_inserter(out.atoms_));
    return out;
  }
  Label& operator|=(const Label& other) { return *this = join(other); }

  bool subset_of(const Label& other) const {
    return std::includes(other.atoms_.begin(), other.atoms_.end(), atoms_.begin(), atoms_.end());
  }
  bool disjoint_from(const Label& other) const {
    auto a = atoms_.begin();
    auto b = other.atoms_.begin();
    while (a != atoms_.end() && b != other.atoms_.end()) {
      if (*a == *b) return false;
      *a < *b ? ++a : ++b;
    }
    return true;
  }

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;

 private:
  void normalize() {
    std::sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
  }
  std::vector<AtomId> atoms_;
};

/// A partial map from positions to labels.
using Labeling = std::map<Position, Label>;

/// The set of labels a labeling assigns.
inline std::set<Label> codomain(const Labeling& l) {
  std::set<Label> out;
  for (const auto& [p, lab] : l) out.insert(lab);
  return out;
}

/// Union of every label a labeling assigns.
inline Label joined(const Labeling& l) {
  Label out;
  for (const auto& [p, lab] : l) out |= lab;
  return out;
}

/// Monotone source of fresh atomic labels.
class LabelSupply {
 public:
  explicit LabelSupply(AtomId seed = 0) : next_(seed) {}
  AtomId fresh() { return next_++; }
  AtomId peek() const noexcept { return next_; }

 private:
  AtomId next_;
};

/// Distinct fresh atoms for each non-hole position, in lexicographic
/// position order.
inline Labeling initial_labeling(const Term& t, LabelSupply& supply) {
  Labeling out;
  for (const auto& p : position_list(t)) out.emplace(p, Label::atom(supply.fresh()));
  return out;
}

/// Shifts every position of `l` below `prefix`.
inline Labeling rebase(const Labeling& l, const Position& prefix) {
  Labeling out;
  for (const auto& [p, lab] : l) out.emplace(prefix.concat(p), lab);
  return out;
}

// ---------------------------------------------------------------------------
// Rules and substitutions

/// Labels of the redex pattern (on the left-hand side's non-variable
/// positions) and of the contractum pattern (on the right-hand side's).
struct RuleLabeling {
  Labeling lhs;
  Labeling rhs;
};

/// Completes a rule labeling from a labeling of the redex pattern: every
/// contractum-pattern symbol receives the join of all redex labels.
inline RuleLabeling rule_labeling_from(const Rule& rule, Labeling lhs) {
  RuleLabeling out{std::move(lhs), {}};
  Label l = joined(out.lhs);
  for (const auto& p : position_list(holed(rule.rhs))) out.rhs.emplace(p, l);
  return out;
}

inline RuleLabeling label_rule(const Rule& rule, LabelSupply& supply) {
  return rule_labeling_from(rule, initial_labeling(holed(rule.lhs), supply));
}

/// One initial labeling per binding, with pairwise disjoint codomains.
struct SubstitutionLabeling {
  std::vector<std::pair<std::string, Labeling>> bindings;

  const Labeling* find(const std::string& var) const {
    for (const auto& [v, l] : bindings)
      if (v == var) return &l;
    return nullptr;
  }
};

/// Labels the bindings of `sigma` in the given variable order; variables not
/// bound by `sigma` are skipped.
inline SubstitutionLabeling label_substitution(const Substitution& sigma, LabelSupply& supply,
                                               const std::vector<std::string>& order) {
  SubstitutionLabeling out;
  for (const auto& v : order)
    if (const Term* t = sigma.find(v)) out.bindings.emplace_back(v, initial_labeling(*t, supply));
  return out;
}

inline SubstitutionLabeling label_substitution(const Substitution& sigma, LabelSupply& supply) {
  std::vector<std::string> order;
  for (const auto& [v, t] : sigma) order.push_back(v);
  return label_substitution(sigma, supply, order);
}

// ---------------------------------------------------------------------------
// Steps

struct LabeledStep {
  TraceStep step;
  Labeling before;
  Labeling after;
};

/// The component labelings of a rule or equation step.
struct RewriteStepLabels {
  RuleLabeling rule;
  Labeling context;
  SubstitutionLabeling substitution;
};

/// Positions of `t` outside the subtree at `q`.
inline Term context_of(const Term& t, const Position& q) { return replace_at(t, q, Term::hole()); }

namespace detail {
inline void copy_under(Labeling& dst, const Position& at, const Labeling& src) {
  for (const auto& [p, lab] : src) dst[at.concat(p)] = lab;
}
}  // namespace detail

/// Labels a rule or equation step from its component labelings. Extended for
/// collapsing rules (the bound term's root also receives the redex label)
/// and nonleft-linear rules (the contractum root also receives every label
/// of each repeated variable's binding).
inline LabeledStep label_rewrite_step(const TraceStep& step, const Rule& rule, const RewriteStepLabels& labels) {
  const Position& q = step.position;
  LabeledStep out{step, labels.context, labels.context};
  detail::copy_under(out.before, q, labels.rule.lhs);
  detail::copy_under(out.after, q, labels.rule.rhs);
  for (const auto& [var, lab] : labels.substitution.bindings) {
    for (const auto& u : occurrences(rule.lhs, var)) detail::copy_under(out.before, q.concat(u), lab);
    for (const auto& u : occurrences(rule.rhs, var)) detail::copy_under(out.after, q.concat(u), lab);
  }
  if (rule.is_collapsing()) out.after[q] |= joined(labels.rule.lhs);
  for (const auto& var : rule.repeated_variables())
    if (const Labeling* lab = labels.substitution.find(var)) out.after[q] |= joined(*lab);
  return out;
}

/// Propagates a labeling of a flat or unflat step's source term to its
/// target: flattening joins the labels of the collapsed spine onto the new
/// root, unflattening copies the root label to every node of the created
/// spine, and everything else keeps its label.
inline Labeling propagate_ac(const TraceStep& step, const Labeling& before) {
  const Position& q = step.position;
  const Term& src = subterm_at(step.before, q);
  const Term& dst = subterm_at(step.after, q);
  auto corr = leaf_correspondence(src, dst);
  if (!corr) throw MalformedStep("AC step at " + to_string(q) + " does not preserve the argument multiset");
  Labeling after;
  for (const auto& [p, lab] : before)
    if (!q.is_prefix_of(p)) after.emplace(p, lab);
  if (step.kind == StepKind::Flat) {
    Label l;
    for (const auto& n : spine_of(src).nodes)
      if (auto it = before.find(q.concat(n)); it != before.end()) l |= it->second;
    after[q] = l;
  } else {
    Label l;
    if (auto it = before.find(q); it != before.end()) l = it->second;
    for (const auto& n : spine_of(dst).nodes) after[q.concat(n)] = l;
  }
  for (const auto& [sp, dp] : *corr) {
    const Position from = q.concat(sp);
    const Position to = q.concat(dp);
    for (auto it = before.lower_bound(from); it != before.end() && from.is_prefix_of(it->first); ++it)
      after[to.concat(*it->first.relative_to(from))] = it->second;
  }
  return after;
}

/// Checks that `step` can be replayed in `theory`; throws MalformedStep.
inline void validate_step(const TraceStep& step, const RewriteTheory& theory) {
  const Position& q = step.position;
  auto fail = [&](const std::string& why) {
    throw MalformedStep(std::string(to_string(step.kind)) + " step at " + to_string(q) + ": " + why);
  };
  if (!is_position_of(step.before, q) || !is_position_of(step.after, q)) fail("position out of range");
  const Term& src = subterm_at(step.before, q);
  const Term& dst = subterm_at(step.after, q);
  if (!(replace_at(step.before, q, dst) == step.after)) fail("terms differ outside the step position");
  const Signature& sig = theory.signature();
  switch (step.kind) {
    case StepKind::Rule:
    case StepKind::Equation: {
      const Rule* rule = step.rule_name ? theory.find(*step.rule_name) : nullptr;
      if (!rule) fail("unknown rule '" + step.rule_name.value_or("") + "'");
      bool is_rule = rule->kind == RuleKind::Rule;
      if (is_rule != (step.kind == StepKind::Rule)) fail("'" + rule->name + "' has the wrong kind");
      for (const auto& v : variables(rule->lhs))
        if (!step.matcher.contains(v)) fail("matcher does not bind " + v);
      if (!(apply(rule->lhs, step.matcher) == src)) fail("left-hand side of '" + rule->name + "' does not match");
      if (!(apply(rule->rhs, step.matcher) == dst)) fail("right-hand side of '" + rule->name + "' does not fit");
      break;
    }
    case StepKind::Builtin: {
      if (!src.is_operator() || !sig.is_builtin(src.name())) fail("not a builtin call");
      if (step.rule_name && *step.rule_name != src.name()) fail("operator name mismatch");
      auto value = eval_builtin_call(src, sig);
      if (!value || !(*value == dst)) fail("builtin value mismatch");
      break;
    }
    case StepKind::Flat:
    case StepKind::Unflat: {
      if (!sig.is_ac_term(src) || !dst.is_operator() || dst.name() != src.name()) fail("not an AC node");
      const Term& flat_side = step.kind == StepKind::Flat ? dst : src;
      if (!is_flat_node(flat_side)) fail("flattened side is nested");
      if (!leaf_correspondence(src, dst)) fail("argument multisets differ");
      break;
    }
  }
}

/// Labels one trace step using fresh atoms from `supply`. Rule and equation
/// steps draw atoms for the rule first, then the context, then each binding
/// in order of first occurrence in the left-hand side. Builtin steps label
/// the call, then the context. Flat and unflat steps label the whole source
/// term.
inline LabeledStep label_step(const TraceStep& step, const RewriteTheory& theory, LabelSupply& supply) {
  validate_step(step, theory);
  const Position& q = step.position;
  switch (step.kind) {
    case StepKind::Rule:
    case StepKind::Equation: {
      const Rule& rule = *theory.find(*step.rule_name);
      RewriteStepLabels labels;
      labels.rule = label_rule(rule, supply);
      labels.context = initial_labeling(context_of(step.before, q), supply);
      labels.substitution = label_substitution(step.matcher, supply, variables_in_order(rule.lhs));
      return label_rewrite_step(step, rule, labels);
    }
    case StepKind::Builtin: {
      const Term& call = subterm_at(step.before, q);
      Labeling call_labels = initial_labeling(call, supply);
      Labeling context = initial_labeling(context_of(step.before, q), supply);
      Label args;
      for (const auto& [p, lab] : call_labels)
        if (!p.is_root()) args |= lab;
      LabeledStep out{step, context, context};
      detail::copy_under(out.before, q, call_labels);
      for (const auto& p : position_list(subterm_at(step.after, q))) out.after[q.concat(p)] = args;
      return out;
    }
    case StepKind::Flat:
    case StepKind::Unflat: {
      Labeling before = initial_labeling(step.before, supply);
      Labeling after = propagate_ac(step, before);
      return {step, std::move(before), std::move(after)};
    }
  }
  throw MalformedStep("unknown step kind");
}

/// Labels a chained sequence of flat/unflat steps from a single initial
/// labeling of the first term.
inline std::vector<LabeledStep> label_ac_segment(std::span<const TraceStep> steps, LabelSupply& supply) {
  std::vector<LabeledStep> out;
  if (steps.empty()) return out;
  Labeling cur = initial_labeling(steps.front().before, supply);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const TraceStep& s = steps[i];
    if (s.kind != StepKind::Flat && s.kind != StepKind::Unflat)
      throw MalformedStep("AC segment contains a " + std::string(to_string(s.kind)) + " step");
    if (i > 0 && !(steps[i - 1].after == s.before)) throw MalformedStep("AC segment is not chained");
    Labeling next = propagate_ac(s, cur);
    out.push_back({s, cur, next});
    cur = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string atom_name(AtomId id) {
  static constexpr std::array<std::string_view, 24> greek = {"α", "β", "γ", "δ", "ε", "ζ", "η", "θ",
                                                             "ι", "κ", "λ", "μ", "ν", "ξ", "ο", "π",
                                                             "ρ", "σ", "τ", "υ", "φ", "χ", "ψ", "ω"};
  if (id < greek.size()) return std::string(greek[id]);
  return "l" + std::to_string(id);
}

inline std::string to_string(const Label& l) {
  std::string out;
  for (std::size_t i = 0; i < l.atoms().size(); ++i) {
    if (i) out += ' ';
    out += atom_name(l.atoms()[i]);
  }
  return out;
}

namespace detail {
inline void render_labeled(std::string& out, const Term& t, const Labeling& l, Position& at) {
  out += t.is_bullet() ? "•" : t.name();
  if (auto it = l.find(at); it != l.end()) out += "^{" + to_string(it->second) + "}";
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    at = at.child(i + 1);
    render_labeled(out, t.arg(i), l, at);
    at = at.parent();
  }
  out += ')';
}
}  // namespace detail

/// Debug rendering `sym^{a1 a2 ...}(...)`; unlabeled nodes print bare.
inline std::string render_labeled(const Term& t, const Labeling& l) {
  std::string out;
  Position at;
  detail::render_labeled(out, t, l, at);
  return out;
}

inline std::string render_labeled(const LabeledStep& ls) {
  return render_labeled(ls.step.before, ls.before) + " -> " + render_labeled(ls.step.after, ls.after);
}

}  // namespace rwslice
