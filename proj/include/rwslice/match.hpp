#pragma once

// Syntactic matching, AC canonical forms (flattening), and matching modulo
// associativity-commutativity over flattened argument lists.

#include <rwslice/signature.hpp>
#include <rwslice/term.hpp>
#include <rwslice/trace.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rwslice {

// ---------------------------------------------------------------------------
// Syntactic matching

/// Extends `sigma` so that pattern·sigma == subject. On failure `sigma` may
/// hold partial bindings.
inline bool match_into(const Term& pattern, const Term& subject, Substitution& sigma) {
  if (pattern.is_variable()) return sigma.bind(pattern.name(), subject);
  if (pattern.kind() != subject.kind() || pattern.name() != subject.name() || pattern.arity() != subject.arity())
    return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match_into(pattern.arg(i), subject.arg(i), sigma)) return false;
  return true;
}

/// The unique syntactic matcher, or nullopt. Repeated variables must be bound
/// to syntactically equal subterms.
inline std::optional<Substitution> match(const Term& pattern, const Term& subject) {
  Substitution sigma;
  if (!match_into(pattern, subject, sigma)) return std::nullopt;
  return sigma;
}

// ---------------------------------------------------------------------------
// Spines

/// The maximal region below the root in which every node is the AC symbol
/// `f`, in relative positions. `nodes` includes the root; `leaves` are the
/// children of spine nodes that are not themselves `f`. Both lists are in
/// lexicographic order.
struct Spine {
  std::vector<Position> nodes;
  std::vector<Position> leaves;
};

namespace detail {
inline void collect_spine(const Term& t, const std::string& f, Position& at, Spine& out) {
  out.nodes.push_back(at);
  for (std::size_t i = 0; i < t.arity(); ++i) {
    at = at.child(i + 1);
    const Term& c = t.arg(i);
    if (c.is_operator() && c.name() == f)
      collect_spine(c, f, at, out);
    else
      out.leaves.push_back(at);
    at = at.parent();
  }
}
}  // namespace detail

inline Spine spine_of(const Term& t) {
  Spine s;
  Position at;
  detail::collect_spine(t, t.name(), at, s);
  return s;
}

inline std::vector<Term> spine_leaves(const Term& t) {
  std::vector<Term> out;
  for (const auto& p : spine_of(t).leaves) out.push_back(subterm_at(t, p));
  return out;
}

/// An AC node with no AC child of the same symbol.
inline bool is_flat_node(const Term& t) {
  return std::none_of(t.args().begin(), t.args().end(),
                      [&](const Term& a) { return a.is_operator() && a.name() == t.name(); });
}

inline bool is_canonical_node(const Term& t) {
  return is_flat_node(t) && std::is_sorted(t.args().begin(), t.args().end());
}

inline bool is_canonical(const Term& t, const Signature& sig) {
  if (sig.is_ac_term(t) && !is_canonical_node(t)) return false;
  return std::all_of(t.args().begin(), t.args().end(), [&](const Term& a) { return is_canonical(a, sig); });
}

/// Flattens the spine at the root and stably sorts its leaves.
inline Term flatten_node(const Term& t) {
  auto leaves = spine_leaves(t);
  std::stable_sort(leaves.begin(), leaves.end());
  return t.with_args(std::move(leaves));
}

/// First position, innermost and leftmost first, whose AC node is not in
/// canonical form.
inline std::optional<Position> next_flat_position(const Term& t, const Signature& sig) {
  std::optional<Position> found;
  for_each_subterm_postorder(t, [&](const Term& s, const Position& p) {
    if (!found && sig.is_ac_term(s) && !is_canonical_node(s)) found = p;
  });
  return found;
}

inline TraceStep make_flat_step(const Term& t, const Position& at) {
  TraceStep step;
  step.kind = StepKind::Flat;
  step.position = at;
  step.before = t;
  step.after = replace_at(t, at, flatten_node(subterm_at(t, at)));
  return step;
}

struct FlattenResult {
  Term term;
  std::vector<TraceStep> steps;
};

/// Computes the AC canonical form, recording one flat step per collapsed
/// node, innermost first.
inline FlattenResult flatten(const Term& t, const Signature& sig) {
  FlattenResult r{t, {}};
  while (auto at = next_flat_position(r.term, sig)) {
    r.steps.push_back(make_flat_step(r.term, *at));
    r.term = r.steps.back().after;
  }
  return r;
}

/// Canonical form without the step record.
inline Term canonical(const Term& t, const Signature& sig) {
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(canonical(a, sig));
  Term rebuilt = t.with_args(std::move(args));
  return sig.is_ac_term(rebuilt) ? flatten_node(rebuilt) : rebuilt;
}

using LeafCorrespondence = std::vector<std::pair<Position, Position>>;

/// Pairs the spine leaves of `src` with those of `dst` (both rooted at the
/// same AC symbol): the k-th occurrence of a leaf in `dst`, in lexicographic
/// position order, corresponds to the k-th equal occurrence in `src`.
/// Returns nullopt if the leaf multisets differ.
inline std::optional<LeafCorrespondence> leaf_correspondence(const Term& src, const Term& dst) {
  if (!src.is_operator() || !dst.is_operator() || src.name() != dst.name()) return std::nullopt;
  auto s = spine_of(src);
  auto d = spine_of(dst);
  if (s.leaves.size() != d.leaves.size()) return std::nullopt;
  std::vector<bool> used(s.leaves.size(), false);
  LeafCorrespondence out;
  for (const auto& dp : d.leaves) {
    const Term& leaf = subterm_at(dst, dp);
    bool found = false;
    for (std::size_t i = 0; i < s.leaves.size(); ++i) {
      if (!used[i] && subterm_at(src, s.leaves[i]) == leaf) {
        used[i] = true;
        out.emplace_back(s.leaves[i], dp);
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return out;
}

/// Rebuilds `dst`'s spine over the leaves of `concrete`, taking each leaf
/// from the source position the correspondence assigns to it. Returns
/// nullopt if `concrete` lacks the source spine shape.
inline std::optional<Term> transplant_spine(const Term& concrete, const Term& src, const Term& dst,
                                            const LeafCorrespondence& corr) {
  for (const auto& node : spine_of(src).nodes) {
    const Term* c = find_subterm(concrete, node);
    const Term& s = subterm_at(src, node);
    if (!c || !c->is_operator() || c->name() != s.name() || c->arity() != s.arity()) return std::nullopt;
  }
  Term out = dst;
  for (const auto& [sp, dp] : corr) out = replace_at(out, dp, subterm_at(concrete, sp));
  return out;
}

// ---------------------------------------------------------------------------
// Matching modulo AC

/// A matcher together with the unflattened subject shape (pattern·matcher)
/// that aligns with the pattern's nesting.
struct AcMatch {
  Substitution matcher;
  Term shape;
};

namespace detail {

class AcMatcher {
 public:
  AcMatcher(const Signature& sig, std::vector<Substitution>& out) : sig_(sig), out_(out) {}

  // Goals are processed from the back.
  void solve(std::vector<std::pair<Term, Term>> goals, Substitution sigma) {
    while (!goals.empty()) {
      auto [p, s] = std::move(goals.back());
      goals.pop_back();
      if (p.is_variable()) {
        if (!sigma.bind(p.name(), s)) return;
        continue;
      }
      if (p.kind() != s.kind() || p.name() != s.name()) return;
      if (sig_.is_ac_term(p)) {
        solve_ac(p, s, std::move(goals), std::move(sigma));
        return;
      }
      if (p.arity() != s.arity()) return;
      for (std::size_t i = p.arity(); i-- > 0;) goals.emplace_back(p.arg(i), s.arg(i));
    }
    out_.push_back(std::move(sigma));
  }

 private:
  // Enumerates assignments of subject leaves to pattern leaves in
  // lexicographic order of the assignment vector.
  void solve_ac(const Term& p, const Term& s, std::vector<std::pair<Term, Term>> goals, Substitution sigma) {
    auto pl = spine_leaves(p);
    auto sl = spine_leaves(s);
    const std::size_t k = pl.size();
    const std::size_t m = sl.size();
    if (m < k) return;
    std::vector<std::size_t> assign(m, 0);
    while (true) {
      std::vector<std::vector<std::size_t>> groups(k);
      for (std::size_t i = 0; i < m; ++i) groups[assign[i]].push_back(i);
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) {
        if (groups[j].empty()) ok = false;
        else if (groups[j].size() > 1 && !pl[j].is_variable()) ok = false;
      }
      if (ok) {
        auto next = goals;
        for (std::size_t j = k; j-- > 0;) {
          if (groups[j].size() == 1) {
            next.emplace_back(pl[j], sl[groups[j][0]]);
          } else {
            std::vector<Term> members;
            for (auto i : groups[j]) members.push_back(sl[i]);
            std::stable_sort(members.begin(), members.end());
            next.emplace_back(pl[j], s.with_args(std::move(members)));
          }
        }
        solve(std::move(next), sigma);
      }
      // Next assignment vector.
      std::size_t i = m;
      while (true) {
        if (i == 0) return;
        --i;
        if (++assign[i] < k) break;
        assign[i] = 0;
      }
    }
  }

  const Signature& sig_;
  std::vector<Substitution>& out_;
};

}  // namespace detail

/// All matchers of `pattern` against the canonical `subject`, deduplicated,
/// in deterministic order.
inline std::vector<AcMatch> match_modulo_ac(const Term& pattern, const Term& subject, const Signature& sig) {
  std::vector<Substitution> raw;
  detail::AcMatcher(sig, raw).solve({{pattern, subject}}, Substitution{});
  std::vector<AcMatch> out;
  std::set<Substitution> seen;
  for (auto& sigma : raw) {
    if (!seen.insert(sigma).second) continue;
    Term shape = apply(pattern, sigma);
    out.push_back({std::move(sigma), std::move(shape)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unflattening

namespace detail {

inline void reshape(Term& whole, const Position& at, const Term& target, const Signature& sig,
                    std::vector<TraceStep>& steps) {
  const Term cur = subterm_at(whole, at);
  if (cur == target) return;
  if (sig.is_ac_term(target) && cur.is_operator() && cur.name() == target.name()) {
    auto tspine = spine_of(target);
    auto cur_leaves = spine_leaves(cur);
    std::vector<bool> used(cur_leaves.size(), false);
    Term shaped = target;
    for (const auto& lp : tspine.leaves) {
      Term want = canonical(subterm_at(target, lp), sig);
      bool found = false;
      for (std::size_t i = 0; i < cur_leaves.size(); ++i) {
        if (!used[i] && cur_leaves[i] == want) {
          used[i] = true;
          shaped = replace_at(shaped, lp, cur_leaves[i]);
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("reshape: target is not AC-equivalent to " + to_string(cur));
    }
    if (!(shaped == cur)) {
      TraceStep step;
      step.kind = StepKind::Unflat;
      step.position = at;
      step.before = whole;
      step.after = replace_at(whole, at, shaped);
      whole = step.after;
      steps.push_back(std::move(step));
    }
    for (const auto& lp : tspine.leaves) reshape(whole, at.concat(lp), subterm_at(target, lp), sig, steps);
    return;
  }
  if (cur.kind() != target.kind() || cur.name() != target.name() || cur.arity() != target.arity())
    throw std::logic_error("reshape: " + to_string(target) + " does not fit " + to_string(cur));
  for (std::size_t i = 0; i < cur.arity(); ++i) reshape(whole, at.child(i + 1), target.arg(i), sig, steps);
}

}  // namespace detail

/// Unflat steps turning the canonical subterm of `whole` at `at` into the
/// AC-equivalent `target`, outermost first. Empty if they already agree.
inline std::vector<TraceStep> unflat_steps(const Term& whole, const Position& at, const Term& target,
                                           const Signature& sig) {
  std::vector<TraceStep> steps;
  Term cur = whole;
  detail::reshape(cur, at, target, sig, steps);
  return steps;
}

}  // namespace rwslice
