#pragma once

#include <rwslice/term.hpp>

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rwslice {

/// An operator declaration. Sorts are carried for display only.
struct OpDecl {
  std::string name;
  std::size_t arity = 0;
  bool assoc_comm = false;
  bool builtin = false;
  std::optional<std::string> sort;

  friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

inline bool is_variable_name(std::string_view name) {
  return !name.empty() && std::isupper(static_cast<unsigned char>(name.front()));
}

/// Integer literals, optionally negative.
inline bool is_numeral(std::string_view name) {
  std::size_t i = (name.size() > 1 && name.front() == '-') ? 1 : 0;
  if (i == name.size()) return false;
  for (; i < name.size(); ++i)
    if (name[i] < '0' || name[i] > '9') return false;
  return true;
}

inline bool is_boolean(std::string_view name) { return name == "true" || name == "false"; }

/// Value constants are always part of a signature.
inline bool is_value_name(std::string_view name) { return is_numeral(name) || is_boolean(name); }

class Signature {
 public:
  /// Declarations are kept in insertion order.
  void add(OpDecl decl) {
    auto it = index_.find(decl.name);
    if (it != index_.end()) {
      decls_[it->second] = std::move(decl);
      return;
    }
    index_.emplace(decl.name, decls_.size());
    decls_.push_back(std::move(decl));
  }

  const OpDecl* find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &decls_[it->second];
  }
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  bool is_ac(const std::string& name) const {
    const OpDecl* d = find(name);
    return d && d->assoc_comm;
  }
  bool is_builtin(const std::string& name) const {
    const OpDecl* d = find(name);
    return d && d->builtin;
  }
  bool is_ac_term(const Term& t) const { return t.is_operator() && is_ac(t.name()); }

  const std::vector<OpDecl>& decls() const noexcept { return decls_; }
  bool empty() const noexcept { return decls_.empty(); }

  friend bool operator==(const Signature& a, const Signature& b) { return a.decls_ == b.decls_; }

 private:
  std::vector<OpDecl> decls_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace rwslice
