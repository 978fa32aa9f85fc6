#pragma once

// Random generators and single-case property checks shared by the property
// suite and the acceptance binary. Each check returns an empty string on
// success and a description of the counterexample otherwise.

#include <rwslice/concretize.hpp>
#include <rwslice/engine.hpp>
#include <rwslice/slicer.hpp>
#include <rwslice/syntax.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace rwslice::props {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

struct Sym {
  std::string name;
  std::size_t arity;
};

// Random terms over a fixed symbol list; leaves may also be numerals.
class TermGen {
 public:
  TermGen(std::vector<Sym> syms, std::size_t depth, bool numerals = false) : depth_(depth), numerals_(numerals) {
    for (auto& s : syms) (s.arity == 0 ? leaves_ : nodes_).push_back(std::move(s));
  }

  Term operator()(Rng& rng) const { return gen(rng, 0); }

 private:
  Term gen(Rng& rng, std::size_t d) const {
    if (d >= depth_ || nodes_.empty() || coin(rng, 0.3)) {
      if (numerals_ && coin(rng, 0.4)) return Term::constant(std::to_string(pick(rng, 6)));
      return Term::constant(leaves_[pick(rng, leaves_.size())].name);
    }
    const Sym& s = nodes_[pick(rng, nodes_.size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < s.arity; ++i) args.push_back(gen(rng, d + 1));
    return Term::op(s.name, std::move(args));
  }

  std::size_t depth_;
  bool numerals_;
  std::vector<Sym> leaves_, nodes_;
};

inline const TermGen& free_terms() {
  static const TermGen gen({{"f", 2}, {"g", 1}, {"h", 3}, {"a", 0}, {"b", 0}, {"c", 0}}, 4);
  return gen;
}

inline Position random_position(const Term& t, Rng& rng) {
  auto all = position_list(t);
  return all[pick(rng, all.size())];
}

inline PositionSet random_positions(const Term& t, Rng& rng, double density = 0.2) {
  PositionSet out;
  for (const auto& p : position_list(t))
    if (coin(rng, density)) out.insert(p);
  return out;
}

// [a] ◁ [b]: every concretization of b is one of a.
inline bool less_defined(const Term& a, const Term& b) { return match(bracket(a), bracket(b)).has_value(); }

inline std::set<AtomId> atoms_of(const Labeling& l) {
  std::set<AtomId> out;
  for (const auto& [p, lab] : l) out.insert(lab.atoms().begin(), lab.atoms().end());
  return out;
}

// ---------------------------------------------------------------------------
// Slices

inline std::string check_prefix_closure(Rng& rng) {
  Term t = free_terms()(rng);
  PositionSet s = random_positions(t, rng);
  PositionSet c = prefix_closure(s);
  for (const auto& p : s)
    if (!c.count(p)) return "closure of " + to_string(s) + " misses " + to_string(p);
  for (const auto& p : c) {
    for (const auto& q : p.prefixes())
      if (!c.count(q)) return "closure of " + to_string(s) + " is not prefix closed";
    if (std::none_of(s.begin(), s.end(), [&](const Position& u) { return p.is_prefix_of(u); }))
      return "closure of " + to_string(s) + " adds " + to_string(p);
  }
  if (prefix_closure(c) != c) return "closure of " + to_string(s) + " is not idempotent";
  // Slicing keeps exactly the prefix closure.
  Term sl = slice(t, s);
  for (const auto& p : position_list(sl))
    if (!subterm_at(sl, p).is_bullet() && !c.count(p)) return "slice keeps " + to_string(p);
  return {};
}

inline std::string check_self_concretization(Rng& rng) {
  Term t = free_terms()(rng);
  PositionSet p = random_positions(t, rng);
  Term s = slice(t, p);
  if (!concretizes(s, t)) return to_string(t) + " does not concretize its slice " + to_string(s);
  if (!(slice(t, positions(t)) == t)) return "full slice of " + to_string(t) + " differs";
  if (!slice(t, {}).is_bullet()) return "empty slice of " + to_string(t) + " is not •";
  return {};
}

inline std::string check_slice_monotone(Rng& rng) {
  Term t = free_terms()(rng);
  PositionSet small = random_positions(t, rng, 0.15);
  PositionSet big = small;
  for (const auto& p : random_positions(t, rng, 0.15)) big.insert(p);
  Term a = slice(t, small), b = slice(t, big);
  if (!less_defined(a, b)) return to_string(a) + " is not below " + to_string(b);
  if (!less_defined(b, t)) return to_string(b) + " is not below " + to_string(t);
  return {};
}

// ---------------------------------------------------------------------------
// Labels

inline const char* kLabelRules = R"(
  op f : 2 . op g : 1 . op h : 3 . op k : 1 . op a : 0 . op b : 0 . op c : 0 .
  rl [r1] : f(g(X),Y) => h(Y,X,a) .
  rl [r2] : h(X,b,Y) => k(f(Y,X)) .
  rl [r3] : g(X) => X .
  rl [r4] : f(X,X) => g(X) .
  rl [r5] : k(X) => f(X,g(X)) .
)";

inline const TermGen& label_terms() {
  static const TermGen gen({{"f", 2}, {"g", 1}, {"h", 3}, {"k", 1}, {"a", 0}, {"b", 0}, {"c", 0}}, 4);
  return gen;
}

// Labels one random rule step from its components and checks that the
// components have disjoint codomains, that the context keeps its labels,
// and that every position at or below the rewrite position has the whole
// redex pattern among its origins.
inline std::string check_rule_step_labels(Rng& rng) {
  static const RewriteTheory th = parse_theory(kLabelRules);
  Term t;
  do t = label_terms()(rng);
  while (!Engine(th).first_application(t));
  TraceStep s;
  for (auto& step : Engine(th).rewrite_step(t).steps)
    if (step.kind == StepKind::Rule) s = step;
  const Rule& rule = *th.find(*s.rule_name);
  LabelSupply supply;
  RewriteStepLabels labels;
  labels.rule = label_rule(rule, supply);
  labels.context = initial_labeling(context_of(s.before, s.position), supply);
  labels.substitution = label_substitution(s.matcher, supply, variables_in_order(rule.lhs));
  std::vector<std::set<AtomId>> parts{atoms_of(labels.rule.lhs), atoms_of(labels.context)};
  for (const auto& [v, l] : labels.substitution.bindings) parts.push_back(atoms_of(l));
  std::size_t total = 0;
  std::set<AtomId> all;
  for (const auto& p : parts) {
    total += p.size();
    all.insert(p.begin(), p.end());
  }
  if (all.size() != total) return "label components overlap for " + to_string(s.before);

  LabeledStep ls = label_rewrite_step(s, rule, labels);
  if (ls.before.size() != position_list(s.before).size() || ls.after.size() != position_list(s.after).size())
    return "unlabeled positions in " + render_labeled(ls);
  Term ctx = context_of(s.before, s.position);
  for (const auto& [p, lab] : labels.context) {
    if (subterm_at(ctx, p).is_hole()) continue;
    if (!(ls.before.at(p) == lab) || !(ls.after.at(p) == lab)) return "context label changed at " + to_string(p);
  }
  for (const auto& w : position_list(s.after)) {
    if (!s.position.is_prefix_of(w)) continue;
    PositionSet o = origin_positions(ls, w);
    for (const auto& u : position_list(holed(rule.lhs)))
      if (!o.count(s.position.concat(u))) return "redex position " + to_string(u) + " is not an origin of " + to_string(w);
  }
  return {};
}

// ---------------------------------------------------------------------------
// AC

inline std::string check_flatten(Rng& rng) {
  static const RewriteTheory th = parse_theory("op u : 2 [assoc comm] . op g : 1 . op a : 0 . op b : 0 .");
  static const TermGen gen({{"u", 2}, {"g", 1}, {"a", 0}, {"b", 0}}, 5);
  const Signature& sig = th.signature();
  Term t = gen(rng);
  auto r = flatten(t, sig);
  Term cur = t;
  for (const auto& s : r.steps) {
    if (!(s.before == cur)) return "flat steps of " + to_string(t) + " are not chained";
    cur = s.after;
  }
  if (!(cur == r.term)) return "flat steps of " + to_string(t) + " do not end at the result";
  if (!flatten(r.term, sig).steps.empty()) return "flatten is not idempotent on " + to_string(t);
  Term c = canonical(t, sig);
  if (!(canonical(c, sig) == c) || !is_canonical(c, sig)) return "canonical form of " + to_string(t) + " is unstable";
  auto swap = [&](auto& self, const Term& s) -> Term {
    if (s.arity() == 0) return s;
    std::vector<Term> args;
    for (const auto& a : s.args()) args.push_back(self(self, a));
    if (s.name() == "u" && coin(rng)) std::swap(args[0], args[1]);
    return s.with_args(std::move(args));
  };
  Term permuted = swap(swap, t);
  if (!(canonical(permuted, sig) == c)) return to_string(t) + " and " + to_string(permuted) + " differ modulo AC";
  return {};
}

// Compares AC matching against generate-and-test: every candidate
// substitution mapping the pattern's variables to sub-multisets of the
// subject's leaves (at most six).
inline std::string check_ac_match(Rng& rng) {
  static const RewriteTheory th = parse_theory("op u : 2 [assoc comm] . op g : 1 . op a : 0 . op b : 0 . op c : 0 .");
  const Signature& sig = th.signature();
  static const std::vector<Term> atoms{Term::constant("a"), Term::constant("b"), Term::constant("c"),
                                       parse_term("g(a)")};
  std::size_t m = 2 + pick(rng, 5);
  std::vector<Term> sl;
  for (std::size_t i = 0; i < m; ++i) sl.push_back(atoms[pick(rng, atoms.size())]);
  Term subject = canonical(Term::op("u", sl), sig);

  std::vector<Term> pl;
  std::vector<std::string> vars{"X"};
  if (coin(rng)) vars.push_back("Y");
  for (const auto& v : vars) pl.push_back(Term::variable(v));
  if (coin(rng, 0.2)) pl.push_back(Term::variable("X"));
  for (std::size_t i = pick(rng, 2); i > 0; --i) pl.push_back(atoms[pick(rng, atoms.size())]);
  std::shuffle(pl.begin(), pl.end(), rng);
  Term pattern = pl.front();
  for (std::size_t i = 1; i < pl.size(); ++i) pattern = Term::op("u", {pattern, pl[i]});

  std::set<Term> groups;
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<Term> g;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t{1} << i)) g.push_back(sl[i]);
    groups.insert(canonical(g.size() == 1 ? g[0] : Term::op("u", g), sig));
  }
  std::vector<Term> gv(groups.begin(), groups.end());
  std::set<Substitution> expected;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Substitution sigma;
    for (std::size_t i = 0; i < vars.size(); ++i) sigma.bind(vars[i], gv[idx[i]]);
    if (canonical(apply(pattern, sigma), sig) == subject) expected.insert(sigma);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == gv.size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }

  const std::string where = to_string(pattern) + " against " + to_string(subject);
  std::set<Substitution> actual;
  auto matches = match_modulo_ac(pattern, subject, sig);
  for (const auto& am : matches) {
    if (!actual.insert(am.matcher).second) return "duplicate matcher for " + where;
    if (!(am.shape == apply(pattern, am.matcher)) || !(canonical(am.shape, sig) == subject))
      return "bad shape " + to_string(am.shape) + " for " + where;
  }
  if (actual != expected)
    return std::to_string(actual.size()) + " matchers instead of " + std::to_string(expected.size()) + " for " + where;
  return {};
}

// ---------------------------------------------------------------------------
// Soundness

struct Category {
  std::string name;
  std::string theory;
  std::vector<Sym> syms;
  bool numerals;
};

inline const std::vector<Category>& soundness_categories() {
  static const std::vector<Category> cats = {
      {"elementary",
       "op f : 2 . op g : 1 . op k : 2 . op a : 0 . op b : 0 .\n"
       "rl [r1] : f(g(X),Y) => k(Y,g(a)) . rl [r2] : g(a) => b . rl [r3] : k(b,X) => f(X,g(b)) .",
       {{"f", 2}, {"g", 1}, {"k", 2}, {"a", 0}, {"b", 0}},
       false},
      {"collapsing",
       "op f : 2 . op g : 1 . op k : 2 . op a : 0 . op b : 0 .\n"
       "rl [r1] : k(X,Y) => Y . rl [r2] : g(f(X,Y)) => X . rl [r3] : f(a,X) => g(X) .",
       {{"f", 2}, {"g", 1}, {"k", 2}, {"a", 0}, {"b", 0}},
       false},
      {"nonlinear",
       "op f : 2 . op g : 1 . op d : 1 . op a : 0 . op b : 0 .\n"
       "rl [r1] : f(X,X) => g(X) . rl [r2] : d(X) => f(X,X) . rl [r3] : g(g(X)) => f(X,a) .",
       {{"f", 2}, {"g", 1}, {"d", 1}, {"a", 0}, {"b", 0}},
       false},
      {"builtin",
       "op c : 2 . op t : 1 . op + : 2 [builtin] . op * : 2 [builtin] . op < : 2 [builtin] . op a : 0 .\n"
       "eq [e1] : t(0) = t(1) .\n"
       "rl [r1] : c(N,M) => c(+(N,1),*(M,2)) . rl [r2] : t(N) => c(N,<(N,3)) .",
       {{"c", 2}, {"t", 1}, {"a", 0}},
       true},
      {"ac",
       "op u : 2 [assoc comm] . op g : 1 . op a : 0 . op b : 0 . op c : 0 .\n"
       "rl [r1] : u(a,X) => u(b,g(X)) . rl [r2] : u(b,b,X) => X . rl [r3] : g(u(c,X)) => u(X,a) .",
       {{"u", 2}, {"g", 1}, {"a", 0}, {"b", 0}, {"c", 0}},
       false},
  };
  return cats;
}

// One random (trace, criterion, concretization) case: the original initial
// term and a random concretization of the initial slice must both replay
// the trace slice and keep the observed symbols.
inline std::string check_soundness_case(const Category& cat, const RewriteTheory& th, Rng& rng, bool* rewrote = nullptr) {
  TermGen gen(cat.syms, 4, cat.numerals);
  InstrumentedTrace tr;
  while (true) {
    try {
      tr = run(canonical(gen(rng), th.signature()), th, 1 + pick(rng, 4), {500});
      break;
    } catch (const StepBudgetExceeded&) {
    }
  }
  if (rewrote) *rewrote = tr.rule_step_count() > 0;
  SlicingCriterion crit = random_positions(tr.final_term(), rng, 0.25);
  TraceSlice ts = trace_slice(tr, th, crit);
  const std::string where = "\n  init " + to_string(tr.initial) + "\n  criterion " + to_string(crit);
  if (ts.sliced_size > ts.original_size) return "slice larger than trace" + where;
  GroundTermGenerator ground(th.signature(), rng());
  for (int c = 0; c < 3; ++c) {
    Term conc = c == 0 ? tr.initial : concretize(ts.initial_slice(), ground);
    try {
      auto chain = replay(ts, th, conc);
      for (const auto& p : crit)
        if (subterm_at(chain.back(), p).name() != subterm_at(tr.final_term(), p).name())
          return "observed symbol lost at " + to_string(p) + where + "\n  concretization " + to_string(conc);
    } catch (const ReplayFailure& e) {
      return std::string(e.what()) + where + "\n  concretization " + to_string(conc);
    }
  }
  return {};
}

}  // namespace rwslice::props
