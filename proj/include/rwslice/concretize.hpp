#pragma once

// Random concretizations of term slices, for soundness self-checks.

#include <rwslice/signature.hpp>
#include <rwslice/term.hpp>

#include <random>
#include <string>
#include <vector>

namespace rwslice {

/// Random ground terms over the non-builtin operators of a signature, plus
/// small numerals and the booleans.
class GroundTermGenerator {
 public:
  GroundTermGenerator(const Signature& sig, std::uint64_t seed, std::size_t max_depth = 2)
      : rng_(seed), max_depth_(max_depth) {
    for (const auto& d : sig.decls()) {
      if (d.builtin) continue;
      (d.arity == 0 ? constants_ : functions_).push_back(&d);
    }
  }

  Term generate() { return generate(0); }

  std::mt19937_64& rng() { return rng_; }

 private:
  Term generate(std::size_t depth) {
    const bool leaf = depth >= max_depth_ || functions_.empty() || pick(3) == 0;
    if (leaf) {
      std::size_t n = constants_.size() + 3;
      std::size_t i = pick(n);
      if (i < constants_.size()) return Term::constant(constants_[i]->name);
      if (i == constants_.size()) return Term::constant(pick(2) ? "true" : "false");
      return Term::constant(std::to_string(pick(10)));
    }
    const OpDecl* d = functions_[pick(functions_.size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < d->arity; ++i) args.push_back(generate(depth + 1));
    return Term::op(d->name, std::move(args));
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::mt19937_64 rng_;
  std::size_t max_depth_;
  std::vector<const OpDecl*> constants_;
  std::vector<const OpDecl*> functions_;
};

/// Replaces every • of `slice_term` by a term from `gen`.
inline Term concretize(const Term& slice_term, GroundTermGenerator& gen) {
  if (slice_term.is_bullet()) return gen.generate();
  if (slice_term.arity() == 0) return slice_term;
  std::vector<Term> args;
  for (const auto& a : slice_term.args()) args.push_back(concretize(a, gen));
  return slice_term.with_args(std::move(args));
}

}  // namespace rwslice
