#pragma once

// Predefined operators evaluated on ground values. Numerals are
// arbitrary-precision integer constants; booleans are `true` and `false`.

#include <rwslice/errors.hpp>
#include <rwslice/signature.hpp>
#include <rwslice/term.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rwslice {

using Integer = boost::multiprecision::cpp_int;

/// `eval` returns nullopt when the arguments are not values of the expected
/// shape (the call is left intact) and throws ArithmeticError on undefined
/// cases.
struct BuiltinOp {
  std::string name;
  std::size_t arity = 0;
  std::function<std::optional<Term>(std::span<const Term>)> eval;
};

inline std::optional<Integer> as_integer(const Term& t) {
  if (!t.is_operator() || t.arity() != 0 || !is_numeral(t.name())) return std::nullopt;
  return Integer(t.name());
}

inline std::optional<bool> as_boolean(const Term& t) {
  if (!t.is_operator() || t.arity() != 0 || !is_boolean(t.name())) return std::nullopt;
  return t.name() == "true";
}

inline Term numeral(const Integer& v) { return Term::constant(v.str()); }
inline Term boolean(bool v) { return Term::constant(v ? "true" : "false"); }

class BuiltinRegistry {
 public:
  void add(BuiltinOp op) { ops_[op.name] = std::move(op); }
  const BuiltinOp* find(const std::string& name) const {
    auto it = ops_.find(name);
    return it == ops_.end() ? nullptr : &it->second;
  }
  bool contains(const std::string& name) const { return ops_.count(name) != 0; }
  const std::map<std::string, BuiltinOp>& ops() const noexcept { return ops_; }

  /// Integer + - * div rem, comparisons < <= ==, boolean and/or/not and
  /// if-then-else.
  static const BuiltinRegistry& standard() {
    static const BuiltinRegistry registry = make_standard();
    return registry;
  }

 private:
  using IntFn = std::function<Term(const Integer&, const Integer&)>;

  static BuiltinOp binary_int(std::string name, IntFn fn) {
    return {name, 2, [fn](std::span<const Term> args) -> std::optional<Term> {
              auto a = as_integer(args[0]);
              auto b = as_integer(args[1]);
              if (!a || !b) return std::nullopt;
              return fn(*a, *b);
            }};
  }

  static BuiltinRegistry make_standard() {
    BuiltinRegistry r;
    r.add(binary_int("+", [](const Integer& a, const Integer& b) { return numeral(a + b); }));
    r.add(binary_int("-", [](const Integer& a, const Integer& b) { return numeral(a - b); }));
    r.add(binary_int("*", [](const Integer& a, const Integer& b) { return numeral(a * b); }));
    r.add(binary_int("div", [](const Integer& a, const Integer& b) {
      if (b == 0) throw ArithmeticError("division by zero in div(" + a.str() + ",0)");
      return numeral(a / b);
    }));
    r.add(binary_int("rem", [](const Integer& a, const Integer& b) {
      if (b == 0) throw ArithmeticError("division by zero in rem(" + a.str() + ",0)");
      return numeral(a % b);
    }));
    r.add(binary_int("<", [](const Integer& a, const Integer& b) { return boolean(a < b); }));
    r.add(binary_int("<=", [](const Integer& a, const Integer& b) { return boolean(a <= b); }));
    r.add({"==", 2, [](std::span<const Term> args) -> std::optional<Term> {
             if (auto a = as_integer(args[0]), b = as_integer(args[1]); a && b) return boolean(*a == *b);
             if (auto a = as_boolean(args[0]), b = as_boolean(args[1]); a && b) return boolean(*a == *b);
             return std::nullopt;
           }});
    r.add({"and", 2, [](std::span<const Term> args) -> std::optional<Term> {
             auto a = as_boolean(args[0]);
             auto b = as_boolean(args[1]);
             if (!a || !b) return std::nullopt;
             return boolean(*a && *b);
           }});
    r.add({"or", 2, [](std::span<const Term> args) -> std::optional<Term> {
             auto a = as_boolean(args[0]);
             auto b = as_boolean(args[1]);
             if (!a || !b) return std::nullopt;
             return boolean(*a || *b);
           }});
    r.add({"not", 1, [](std::span<const Term> args) -> std::optional<Term> {
             auto a = as_boolean(args[0]);
             if (!a) return std::nullopt;
             return boolean(!*a);
           }});
    r.add({"if-then-else", 3, [](std::span<const Term> args) -> std::optional<Term> {
             auto c = as_boolean(args[0]);
             if (!c || !args[1].is_ground() || !args[2].is_ground()) return std::nullopt;
             return *c ? args[1] : args[2];
           }});
    return r;
  }

  std::map<std::string, BuiltinOp> ops_;
};

inline bool is_reserved_builtin(const std::string& name) { return BuiltinRegistry::standard().contains(name); }

/// Evaluates `op` on `args`; nullopt means not applicable.
inline std::optional<Term> eval_builtin(const BuiltinOp& op, std::span<const Term> args) {
  if (args.size() != op.arity) return std::nullopt;
  return op.eval(args);
}

/// Evaluates the builtin call `call` if it is one and is applicable.
inline std::optional<Term> eval_builtin_call(const Term& call, const Signature& sig,
                                             const BuiltinRegistry& registry = BuiltinRegistry::standard()) {
  if (!call.is_operator() || !sig.is_builtin(call.name())) return std::nullopt;
  const BuiltinOp* op = registry.find(call.name());
  if (!op) return std::nullopt;
  return eval_builtin(*op, call.args());
}

}  // namespace rwslice
