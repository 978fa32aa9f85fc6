#pragma once

// Deterministic rewriting modulo equations and AC axioms, producing fully
// expanded traces (flat, unflat, builtin, equation and rule steps).
//
// Strategy: equational simplification is leftmost-innermost; at each
// position AC flattening comes first, then builtin evaluation, then the
// equations in declaration order. Rules are tried at positions in
// lexicographic (leftmost-outermost) order, and at each position in
// declaration order.

#include <rwslice/builtins.hpp>
#include <rwslice/errors.hpp>
#include <rwslice/match.hpp>
#include <rwslice/theory.hpp>
#include <rwslice/trace.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rwslice {

inline constexpr std::size_t kDefaultStepBudget = 10000;

struct EngineOptions {
  /// Maximum number of elementary steps per engine instance.
  std::size_t max_steps = kDefaultStepBudget;
};

/// Selects a specific rule application; `matcher_index` indexes the list
/// returned by match_modulo_ac at `position`.
struct RuleChoice {
  std::string rule_name;
  Position position;
  std::size_t matcher_index = 0;
};

struct StepResult {
  Term term;
  std::vector<TraceStep> steps;
};

/// Builds the rule or equation step `before → before[rhs·matcher]_at`.
inline TraceStep make_rewrite_step(const Term& before, const Position& at, const Rule& rule, const Substitution& matcher) {
  TraceStep step;
  step.kind = rule.kind == RuleKind::Rule ? StepKind::Rule : StepKind::Equation;
  step.rule_name = rule.name;
  step.position = at;
  step.matcher = matcher;
  step.before = before;
  step.after = replace_at(before, at, apply(rule.rhs, matcher));
  return step;
}

class Engine {
 public:
  explicit Engine(const RewriteTheory& theory, EngineOptions options = {}) : theory_(theory), options_(options) {}

  std::size_t steps_used() const noexcept { return used_; }

  StepResult normalize(const Term& t) {
    StepResult r{t, {}};
    while (true) {
      auto next = next_simplification(r.term);
      if (next.empty()) return r;
      for (auto& s : next) push(r, std::move(s));
    }
  }

  /// One rewrite step modulo E: normalize, unflatten as the match requires,
  /// apply the rule, normalize again.
  StepResult rewrite_step(const Term& t, const std::optional<RuleChoice>& choice = std::nullopt) {
    StepResult r = normalize(t);
    auto application = choice ? chosen_application(r.term, *choice) : first_application(r.term);
    if (!application) throw NoRuleApplicable("no rule applies to " + to_string(r.term));
    const auto& [rule, at, m] = *application;
    for (auto& s : unflat_steps(r.term, at, m.shape, theory_.signature())) push(r, std::move(s));
    push(r, make_rewrite_step(r.term, at, *rule, m.matcher));
    StepResult tail = normalize(r.term);
    for (auto& s : tail.steps) r.steps.push_back(std::move(s));
    r.term = tail.term;
    return r;
  }

  /// Iterates rewrite steps until `max_rule_steps` rules have fired or none
  /// applies.
  InstrumentedTrace run(const Term& t0, std::size_t max_rule_steps) {
    InstrumentedTrace trace;
    trace.theory = theory_.name();
    trace.initial = t0;
    StepResult start = normalize(t0);
    trace.steps = std::move(start.steps);
    Term cur = start.term;
    for (std::size_t n = 0; n < max_rule_steps; ++n) {
      if (!first_application(cur)) break;
      StepResult r = rewrite_step(cur);
      for (auto& s : r.steps) trace.steps.push_back(std::move(s));
      cur = r.term;
    }
    return trace;
  }

  struct Application {
    const Rule* rule;
    Position position;
    AcMatch match;
  };

  std::optional<Application> first_application(const Term& t) const {
    std::optional<Application> found;
    for_each_subterm(t, [&](const Term& s, const Position& p) {
      if (found) return;
      for (const auto& rule : theory_.rules()) {
        auto ms = match_modulo_ac(rule.lhs, s, theory_.signature());
        if (!ms.empty()) {
          found = Application{&rule, p, std::move(ms.front())};
          return;
        }
      }
    });
    return found;
  }

 private:
  std::optional<Application> chosen_application(const Term& t, const RuleChoice& choice) const {
    const Rule* rule = theory_.find(choice.rule_name);
    if (!rule || rule->kind != RuleKind::Rule) throw NoRuleApplicable("unknown rule '" + choice.rule_name + "'");
    if (!is_position_of(t, choice.position))
      throw NoRuleApplicable("position " + to_string(choice.position) + " is not a position of " + to_string(t));
    auto ms = match_modulo_ac(rule->lhs, subterm_at(t, choice.position), theory_.signature());
    if (choice.matcher_index >= ms.size())
      throw NoRuleApplicable("rule '" + rule->name + "' has no matcher " + std::to_string(choice.matcher_index) +
                             " at " + to_string(choice.position));
    return Application{rule, choice.position, std::move(ms[choice.matcher_index])};
  }

  // The steps of the next simplification (possibly preceded by unflat
  // steps), or empty if `t` is a canonical form.
  std::vector<TraceStep> next_simplification(const Term& t) const {
    const Signature& sig = theory_.signature();
    std::vector<TraceStep> out;
    for_each_subterm_postorder(t, [&](const Term& s, const Position& p) {
      if (!out.empty()) return;
      if (sig.is_ac_term(s) && !is_canonical_node(s)) {
        out.push_back(make_flat_step(t, p));
        return;
      }
      if (auto value = eval_builtin_call(s, sig)) {
        TraceStep step;
        step.kind = StepKind::Builtin;
        step.rule_name = s.name();
        step.position = p;
        step.before = t;
        step.after = replace_at(t, p, *value);
        out.push_back(std::move(step));
        return;
      }
      for (const auto& eq : theory_.equations()) {
        auto ms = match_modulo_ac(eq.lhs, s, sig);
        if (ms.empty()) continue;
        out = unflat_steps(t, p, ms.front().shape, sig);
        const Term& before = out.empty() ? t : out.back().after;
        out.push_back(make_rewrite_step(before, p, eq, ms.front().matcher));
        return;
      }
    });
    return out;
  }

  void push(StepResult& r, TraceStep step) {
    if (++used_ > options_.max_steps) throw StepBudgetExceeded(options_.max_steps);
    r.term = step.after;
    r.steps.push_back(std::move(step));
  }

  const RewriteTheory& theory_;
  EngineOptions options_;
  std::size_t used_ = 0;
};

inline StepResult normalize(const Term& t, const RewriteTheory& theory, EngineOptions options = {}) {
  return Engine(theory, options).normalize(t);
}

inline StepResult rewrite_step_modulo_e(const Term& t, const RewriteTheory& theory,
                                        const std::optional<RuleChoice>& choice = std::nullopt,
                                        EngineOptions options = {}) {
  return Engine(theory, options).rewrite_step(t, choice);
}

inline InstrumentedTrace run(const Term& t0, const RewriteTheory& theory, std::size_t max_rule_steps,
                             EngineOptions options = {}) {
  return Engine(theory, options).run(t0, max_rule_steps);
}

}  // namespace rwslice
