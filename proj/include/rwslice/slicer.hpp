#pragma once

// Backward trace slicing: origin positions of a labeled step, relevant
// position sets across a trace, term slices with the irrelevance symbol •,
// concretization, trace-slice assembly and replay on concretizations.

#include <rwslice/builtins.hpp>
#include <rwslice/errors.hpp>
#include <rwslice/label.hpp>
#include <rwslice/match.hpp>
#include <rwslice/theory.hpp>
#include <rwslice/trace.hpp>

#include <span>
#include <string>
#include <vector>

namespace rwslice {

/// Observed positions of the final trace term.
using SlicingCriterion = PositionSet;

/// Positions v of the step's source term whose label is contained in the
/// label of some position on the path from the target's root to `w`.
inline PositionSet origin_positions(const LabeledStep& ls, const Position& w) {
  if (!is_position_of(ls.step.after, w))
    throw PositionOutOfRange("position " + to_string(w) + " is not a position of " + to_string(ls.step.after));
  std::vector<const Label*> path;
  for (const auto& p : w.prefixes())
    if (auto it = ls.after.find(p); it != ls.after.end()) path.push_back(&it->second);
  PositionSet out;
  for (const auto& [v, lv] : ls.before)
    for (const Label* lp : path)
      if (lv.subset_of(*lp)) {
        out.insert(v);
        break;
      }
  return out;
}

/// Labels every step independently, each with a fresh supply starting at α.
inline std::vector<LabeledStep> label_trace(const InstrumentedTrace& trace, const RewriteTheory& theory) {
  if (!trace.is_chained()) throw MalformedStep("trace is not chained");
  std::vector<LabeledStep> out;
  out.reserve(trace.steps.size());
  for (const auto& s : trace.steps) {
    LabelSupply supply;
    out.push_back(label_step(s, theory, supply));
  }
  return out;
}

inline void validate_criterion(const Term& final_term, const SlicingCriterion& criterion) {
  for (const auto& p : criterion)
    if (!is_position_of(final_term, p))
      throw InvalidCriterion("position " + to_string(p) + " is not a position of the final term " + to_string(final_term));
}

/// [P_0, ..., P_n] with P_n = criterion and each P_j the union of the origin
/// positions of P_{j+1}, computed in one backward pass.
inline std::vector<PositionSet> relevant_positions(const InstrumentedTrace& trace, std::span<const LabeledStep> labeled,
                                                   const SlicingCriterion& criterion) {
  if (labeled.size() != trace.steps.size()) throw MalformedStep("labeled steps do not cover the trace");
  validate_criterion(trace.final_term(), criterion);
  std::vector<PositionSet> sets(trace.steps.size() + 1);
  sets.back() = criterion;
  for (std::size_t j = trace.steps.size(); j-- > 0;) {
    const LabeledStep& ls = labeled[j];
    // The union over w of the labels on root-to-w paths is the set of labels
    // on the prefix closure.
    std::vector<const Label*> targets;
    for (const auto& p : prefix_closure(sets[j + 1]))
      if (auto it = ls.after.find(p); it != ls.after.end()) targets.push_back(&it->second);
    PositionSet& out = sets[j];
    for (const auto& [v, lv] : ls.before)
      for (const Label* lp : targets)
        if (lv.subset_of(*lp)) {
          out.insert(v);
          break;
        }
  }
  return sets;
}

namespace detail {
inline Term slice_rec(const Term& t, const PositionSet& closed, Position& at) {
  if (!closed.count(at)) return Term::bullet();
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) {
    at = at.child(i + 1);
    args.push_back(slice_rec(t.arg(i), closed, at));
    at = at.parent();
  }
  return t.with_args(std::move(args));
}
}  // namespace detail

/// Keeps the symbol at p iff p is a prefix of some member of P; every other
/// subterm becomes •.
inline Term slice(const Term& t, const PositionSet& relevant) {
  for (const auto& p : relevant)
    if (!is_position_of(t, p)) throw PositionOutOfRange("position " + to_string(p) + " is not a position of " + to_string(t));
  PositionSet closed = prefix_closure(relevant);
  Position at;
  return detail::slice_rec(t, closed, at);
}

/// [t•]: each • replaced by a distinct fresh variable.
inline Term bracket(const Term& slice_term) {
  std::size_t counter = 0;
  auto rec = [&](auto&& self, const Term& t) -> Term {
    if (t.is_bullet()) return Term::variable("•" + std::to_string(++counter));
    if (t.arity() == 0) return t;
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(self(self, a));
    return t.with_args(std::move(args));
  };
  return rec(rec, slice_term);
}

/// True iff [slice_term] syntactically matches `t`.
inline bool concretizes(const Term& slice_term, const Term& t) { return match(bracket(slice_term), t).has_value(); }

struct SlicedStep {
  /// 1-based index of the step in the instrumented trace.
  std::size_t index = 0;
  TraceStep step;
  Term before;
  Term after;
};

struct TraceSlice {
  SlicingCriterion criterion;
  std::vector<PositionSet> relevant;
  /// t_j• for every trace term.
  std::vector<Term> term_slices;
  /// Steps whose slices differ, in trace order.
  std::vector<SlicedStep> steps;
  std::size_t original_size = 0;
  std::size_t sliced_size = 0;
  double reduction_percent = 0.0;

  const Term& initial_slice() const { return term_slices.front(); }
};

/// Size of a term sequence as the total length of its canonical printing.
inline std::size_t printed_size(std::span<const Term> terms) {
  std::size_t n = 0;
  for (const auto& t : terms) n += printed_length(t);
  return n;
}

inline double reduction_percent(std::size_t original, std::size_t sliced) {
  if (original == 0) return 0.0;
  return 100.0 * (1.0 - static_cast<double>(sliced) / static_cast<double>(original));
}

inline TraceSlice trace_slice(const InstrumentedTrace& trace, const RewriteTheory& theory,
                              const SlicingCriterion& criterion) {
  validate_criterion(trace.final_term(), criterion);
  auto labeled = label_trace(trace, theory);
  TraceSlice ts;
  ts.criterion = criterion;
  ts.relevant = relevant_positions(trace, labeled, criterion);
  auto terms = trace.terms();
  for (std::size_t j = 0; j < terms.size(); ++j) ts.term_slices.push_back(slice(terms[j], ts.relevant[j]));
  std::vector<Term> glued{ts.term_slices.front()};
  for (std::size_t k = 1; k < terms.size(); ++k) {
    if (ts.term_slices[k - 1] == ts.term_slices[k]) continue;
    ts.steps.push_back({k, trace.steps[k - 1], ts.term_slices[k - 1], ts.term_slices[k]});
    glued.push_back(ts.term_slices[k]);
  }
  ts.original_size = printed_size(terms);
  ts.sliced_size = printed_size(glued);
  ts.reduction_percent = reduction_percent(ts.original_size, ts.sliced_size);
  return ts;
}

/// Reapplies every sliced step to the concretization chain starting at
/// `concretization`, checking that each intermediate term concretizes the
/// corresponding slice. Returns t_0', t_1', ... for the kept steps. A
/// failure reports 0 for the initial term and k for the k-th kept step.
inline std::vector<Term> replay(const TraceSlice& ts, const RewriteTheory& theory, const Term& concretization) {
  std::vector<Term> chain{concretization};
  if (!concretizes(ts.initial_slice(), concretization))
    throw ReplayFailure(0, to_string(concretization) + " is not a concretization of " + to_string(ts.initial_slice()));
  const Signature& sig = theory.signature();
  Term cur = concretization;
  for (std::size_t i = 0; i < ts.steps.size(); ++i) {
    const SlicedStep& s = ts.steps[i];
    const Position& q = s.step.position;
    if (!concretizes(s.before, cur)) throw ReplayFailure(i + 1, to_string(cur) + " does not concretize " + to_string(s.before));
    const Term* sub = find_subterm(cur, q);
    if (!sub) throw ReplayFailure(i + 1, "position " + to_string(q) + " missing in " + to_string(cur));
    switch (s.step.kind) {
      case StepKind::Rule:
      case StepKind::Equation: {
        const Rule* rule = s.step.rule_name ? theory.find(*s.step.rule_name) : nullptr;
        if (!rule) throw ReplayFailure(i + 1, "unknown rule");
        auto sigma = match(rule->lhs, *sub);
        if (!sigma) throw ReplayFailure(i + 1, "rule '" + rule->name + "' does not match " + to_string(*sub));
        cur = replace_at(cur, q, apply(rule->rhs, *sigma));
        break;
      }
      case StepKind::Builtin: {
        std::optional<Term> value;
        try {
          value = eval_builtin_call(*sub, sig);
        } catch (const ArithmeticError& e) {
          throw ReplayFailure(i + 1, e.what());
        }
        if (!value) throw ReplayFailure(i + 1, "builtin not applicable to " + to_string(*sub));
        cur = replace_at(cur, q, *value);
        break;
      }
      case StepKind::Flat:
      case StepKind::Unflat: {
        const Term& src = subterm_at(s.step.before, q);
        const Term& dst = subterm_at(s.step.after, q);
        auto corr = leaf_correspondence(src, dst);
        if (!corr) throw ReplayFailure(i + 1, "malformed AC step");
        auto shaped = transplant_spine(*sub, src, dst, *corr);
        if (!shaped) throw ReplayFailure(i + 1, "AC spine missing in " + to_string(*sub));
        cur = replace_at(cur, q, *shaped);
        break;
      }
    }
    if (!concretizes(s.after, cur)) throw ReplayFailure(i + 1, to_string(cur) + " does not concretize " + to_string(s.after));
    chain.push_back(cur);
  }
  return chain;
}

inline bool check_soundness(const TraceSlice& ts, const RewriteTheory& theory, const Term& concretization) {
  try {
    replay(ts, theory, concretization);
    return true;
  } catch (const ReplayFailure&) {
    return false;
  }
}

}  // namespace rwslice
