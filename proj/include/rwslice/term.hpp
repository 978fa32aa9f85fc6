#pragma once

// Terms, positions and substitutions. Terms are immutable trees with shared
// structure; copying a Term copies a pointer.

#include <rwslice/errors.hpp>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rwslice {

enum class TermKind : std::uint8_t { Operator, Variable, Hole, Bullet };

/// How the irrelevance symbol is printed. Both spellings have length one.
enum class BulletStyle { Unicode, Ascii };

class Term {
 public:
  /// The hole □.
  Term() : Term(hole()) {}

  static Term op(std::string name, std::vector<Term> args = {}) {
    return Term(TermKind::Operator, std::move(name), std::move(args));
  }
  static Term constant(std::string name) { return op(std::move(name)); }
  static Term variable(std::string name) { return Term(TermKind::Variable, std::move(name), {}); }
  static Term hole() {
    static const Term h(TermKind::Hole, "□", {});
    return h;
  }
  static Term bullet() { return Term(TermKind::Bullet, "•", {}); }

  TermKind kind() const noexcept { return node_->kind; }
  const std::string& name() const noexcept { return node_->name; }
  std::span<const Term> args() const noexcept { return node_->args; }
  std::size_t arity() const noexcept { return node_->args.size(); }
  /// Zero-based child access.
  const Term& arg(std::size_t i) const { return node_->args.at(i); }

  bool is_variable() const noexcept { return kind() == TermKind::Variable; }
  bool is_operator() const noexcept { return kind() == TermKind::Operator; }
  bool is_hole() const noexcept { return kind() == TermKind::Hole; }
  bool is_bullet() const noexcept { return kind() == TermKind::Bullet; }

  std::size_t hash() const noexcept { return node_->hash; }
  /// Number of nodes in the tree.
  std::size_t size() const noexcept { return node_->size; }
  bool is_ground() const noexcept { return node_->ground; }
  bool same_node(const Term& other) const noexcept { return node_ == other.node_; }

  Term with_args(std::vector<Term> args) const { return Term(kind(), name(), std::move(args)); }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind() || a.name() != b.name() ||
        a.arity() != b.arity())
      return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!(a.node_->args[i] == b.node_->args[i])) return false;
    return true;
  }

  /// Total term order used for AC canonical forms: root name, then arity,
  /// then kind, then arguments left to right.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.name().compare(b.name()); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = a.arity() <=> b.arity(); c != 0) return c;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (auto c = a.node_->args[i] <=> b.node_->args[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

 private:
  struct Node {
    TermKind kind;
    std::string name;
    std::vector<Term> args;
    std::size_t hash;
    std::size_t size;
    bool ground;
  };

  Term(TermKind kind, std::string name, std::vector<Term> args) {
    std::size_t h = std::hash<std::string>{}(name) ^ (static_cast<std::size_t>(kind) * 0x9e3779b97f4a7c15ULL);
    std::size_t n = 1;
    bool ground = kind == TermKind::Operator;
    for (const auto& a : args) {
      h = h * 1000003u ^ a.hash();
      n += a.size();
      ground = ground && a.is_ground();
    }
    node_ = std::make_shared<const Node>(Node{kind, std::move(name), std::move(args), h, n, ground});
  }

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

// ---------------------------------------------------------------------------
// Positions

/// An access path into a term; children are numbered from 1 and the empty
/// path is the root. The defaulted ordering is the lexicographic order on
/// positions, under which a prefix precedes its extensions.
class Position {
 public:
  Position() = default;
  Position(std::initializer_list<std::size_t> path) : path_(path) {}
  explicit Position(std::vector<std::size_t> path) : path_(std::move(path)) {}

  static Position root() { return {}; }

  bool is_root() const noexcept { return path_.empty(); }
  std::size_t depth() const noexcept { return path_.size(); }
  const std::vector<std::size_t>& path() const noexcept { return path_; }

  Position child(std::size_t i) const {
    Position p = *this;
    p.path_.push_back(i);
    return p;
  }
  Position concat(const Position& suffix) const {
    Position p = *this;
    p.path_.insert(p.path_.end(), suffix.path_.begin(), suffix.path_.end());
    return p;
  }
  Position parent() const {
    Position p = *this;
    if (!p.path_.empty()) p.path_.pop_back();
    return p;
  }

  /// Prefix order: `*this <= other` in the usual notation.
  bool is_prefix_of(const Position& other) const noexcept {
    return path_.size() <= other.path_.size() && std::equal(path_.begin(), path_.end(), other.path_.begin());
  }

  /// The suffix `v` such that `prefix.v == *this`, if `prefix` is a prefix.
  std::optional<Position> relative_to(const Position& prefix) const {
    if (!prefix.is_prefix_of(*this)) return std::nullopt;
    return Position(std::vector<std::size_t>(path_.begin() + static_cast<std::ptrdiff_t>(prefix.depth()), path_.end()));
  }

  /// All prefixes from the root down to and including this position.
  std::vector<Position> prefixes() const {
    std::vector<Position> out;
    out.reserve(path_.size() + 1);
    for (std::size_t n = 0; n <= path_.size(); ++n)
      out.emplace_back(std::vector<std::size_t>(path_.begin(), path_.begin() + static_cast<std::ptrdiff_t>(n)));
    return out;
  }

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;

 private:
  std::vector<std::size_t> path_;
};

using PositionSet = std::set<Position>;

inline std::string to_string(const Position& p) {
  if (p.is_root()) return "^";
  std::string out;
  for (std::size_t i = 0; i < p.depth(); ++i) {
    if (i) out += '.';
    out += std::to_string(p.path()[i]);
  }
  return out;
}

/// Parses `^` (root) or dot-separated positive naturals.
inline std::optional<Position> parse_position(std::string_view text) {
  if (text == "^" || text == "Λ") return Position::root();
  if (text.empty()) return std::nullopt;
  std::vector<std::size_t> path;
  std::size_t value = 0;
  bool have_digit = false;
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      value = value * 10 + static_cast<std::size_t>(c - '0');
      have_digit = true;
    } else if (c == '.') {
      if (!have_digit || value == 0) return std::nullopt;
      path.push_back(value);
      value = 0;
      have_digit = false;
    } else {
      return std::nullopt;
    }
  }
  if (!have_digit || value == 0) return std::nullopt;
  path.push_back(value);
  return Position(std::move(path));
}

inline std::string to_string(const PositionSet& set) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : set) {
    if (!first) out += ',';
    out += to_string(p);
    first = false;
  }
  return out + "}";
}

/// Adds every prefix of every member.
inline PositionSet prefix_closure(const PositionSet& set) {
  PositionSet out;
  for (const auto& p : set)
    for (auto& q : p.prefixes()) out.insert(std::move(q));
  return out;
}

// ---------------------------------------------------------------------------
// Navigation

namespace detail {

template <typename Fn>
void visit_preorder(const Term& t, Position& at, Fn&& fn) {
  fn(t, static_cast<const Position&>(at));
  for (std::size_t i = 0; i < t.arity(); ++i) {
    at = at.child(i + 1);
    visit_preorder(t.arg(i), at, fn);
    at = at.parent();
  }
}

template <typename Fn>
void visit_postorder(const Term& t, Position& at, Fn&& fn) {
  for (std::size_t i = 0; i < t.arity(); ++i) {
    at = at.child(i + 1);
    visit_postorder(t.arg(i), at, fn);
    at = at.parent();
  }
  fn(t, static_cast<const Position&>(at));
}

}  // namespace detail

/// Calls `fn(subterm, position)` in pre-order, which is increasing
/// lexicographic order of positions.
template <typename Fn>
void for_each_subterm(const Term& t, Fn&& fn) {
  Position at;
  detail::visit_preorder(t, at, fn);
}

/// Children before parents, leftmost first.
template <typename Fn>
void for_each_subterm_postorder(const Term& t, Fn&& fn) {
  Position at;
  detail::visit_postorder(t, at, fn);
}

/// Positions of every non-hole node, in lexicographic order.
inline std::vector<Position> position_list(const Term& t) {
  std::vector<Position> out;
  out.reserve(t.size());
  for_each_subterm(t, [&](const Term& s, const Position& p) {
    if (!s.is_hole()) out.push_back(p);
  });
  return out;
}

inline PositionSet positions(const Term& t) {
  auto list = position_list(t);
  return PositionSet(list.begin(), list.end());
}

/// Like subterm_at but returns nullptr when the path does not exist.
inline const Term* find_subterm(const Term& t, const Position& u) {
  const Term* cur = &t;
  for (std::size_t i : u.path()) {
    if (i == 0 || i > cur->arity()) return nullptr;
    cur = &cur->arg(i - 1);
  }
  return cur;
}

inline bool is_position_of(const Term& t, const Position& u) {
  const Term* s = find_subterm(t, u);
  return s && !s->is_hole();
}

inline const Term& subterm_at(const Term& t, const Position& u) {
  const Term* s = find_subterm(t, u);
  if (!s || s->is_hole()) throw PositionOutOfRange("position " + to_string(u) + " is not a position of the term");
  return *s;
}

namespace detail {
inline Term replace_rec(const Term& t, const std::vector<std::size_t>& path, std::size_t depth, const Term& r) {
  if (depth == path.size()) return r;
  std::vector<Term> args(t.args().begin(), t.args().end());
  std::size_t i = path[depth] - 1;
  args[i] = replace_rec(args[i], path, depth + 1, r);
  return t.with_args(std::move(args));
}
}  // namespace detail

inline Term replace_at(const Term& t, const Position& u, const Term& r) {
  (void)subterm_at(t, u);
  return detail::replace_rec(t, u.path(), 0, r);
}

// ---------------------------------------------------------------------------
// Substitutions

class Substitution {
 public:
  using Map = std::map<std::string, Term>;

  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> init) : bindings_(init) {}

  /// Binds `var` unless it is already bound to a different term.
  bool bind(const std::string& var, const Term& value) {
    auto [it, inserted] = bindings_.emplace(var, value);
    return inserted || it->second == value;
  }
  const Term* find(const std::string& var) const {
    auto it = bindings_.find(var);
    return it == bindings_.end() ? nullptr : &it->second;
  }
  bool contains(const std::string& var) const { return bindings_.count(var) != 0; }
  bool empty() const noexcept { return bindings_.empty(); }
  std::size_t size() const noexcept { return bindings_.size(); }
  const Map& bindings() const noexcept { return bindings_; }
  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

  friend bool operator==(const Substitution&, const Substitution&) = default;
  friend bool operator<(const Substitution& a, const Substitution& b) { return a.bindings_ < b.bindings_; }

 private:
  Map bindings_;
};

inline Term apply(const Term& t, const Substitution& sigma) {
  if (t.is_variable()) {
    const Term* v = sigma.find(t.name());
    return v ? *v : t;
  }
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(apply(a, sigma));
  return t.with_args(std::move(args));
}

/// Variables in order of first occurrence (lexicographic position order).
inline std::vector<std::string> variables_in_order(const Term& t) {
  std::vector<std::string> out;
  for_each_subterm(t, [&](const Term& s, const Position&) {
    if (s.is_variable() && std::find(out.begin(), out.end(), s.name()) == out.end()) out.push_back(s.name());
  });
  return out;
}

inline std::set<std::string> variables(const Term& t) {
  auto v = variables_in_order(t);
  return std::set<std::string>(v.begin(), v.end());
}

/// Positions at which variable `var` occurs in `t`.
inline std::vector<Position> occurrences(const Term& t, const std::string& var) {
  std::vector<Position> out;
  for_each_subterm(t, [&](const Term& s, const Position& p) {
    if (s.is_variable() && s.name() == var) out.push_back(p);
  });
  return out;
}

/// The context t^□: every variable replaced by a hole.
inline Term holed(const Term& t) {
  if (t.is_variable()) return Term::hole();
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(holed(a));
  return t.with_args(std::move(args));
}

inline bool contains_kind(const Term& t, TermKind kind) {
  if (t.kind() == kind) return true;
  return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return contains_kind(a, kind); });
}

// ---------------------------------------------------------------------------
// Printing

inline void print_term(std::string& out, const Term& t, BulletStyle style = BulletStyle::Unicode) {
  if (t.is_bullet()) {
    out += style == BulletStyle::Unicode ? "•" : "_";
    return;
  }
  out += t.name();
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    print_term(out, t.arg(i), style);
  }
  out += ')';
}

inline std::string to_string(const Term& t, BulletStyle style = BulletStyle::Unicode) {
  std::string out;
  print_term(out, t, style);
  return out;
}

/// Length in characters of the canonical printing (• counts as one).
inline std::ostream& operator<<(std::ostream& os, const Term& t) { return os << to_string(t); }
inline std::ostream& operator<<(std::ostream& os, const Position& p) { return os << to_string(p); }

inline std::size_t printed_length(const Term& t) { return to_string(t, BulletStyle::Ascii).size(); }

inline std::string to_string(const Substitution& sigma) {
  std::string out = "{";
  bool first = true;
  for (const auto& [var, value] : sigma) {
    if (!first) out += ", ";
    out += var + "/" + to_string(value);
    first = false;
  }
  return out + "}";
}

}  // namespace rwslice

template <>
struct std::hash<rwslice::Term> {
  std::size_t operator()(const rwslice::Term& t) const noexcept { return t.hash(); }
};
