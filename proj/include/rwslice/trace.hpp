#pragma once

#include <rwslice/term.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rwslice {

enum class StepKind { Rule, Equation, Flat, Unflat, Builtin };

inline std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Rule: return "rule";
    case StepKind::Equation: return "equation";
    case StepKind::Flat: return "flat";
    case StepKind::Unflat: return "unflat";
    case StepKind::Builtin: return "builtin";
  }
  return "?";
}

inline std::optional<StepKind> parse_step_kind(std::string_view s) {
  if (s == "rule") return StepKind::Rule;
  if (s == "equation") return StepKind::Equation;
  if (s == "flat") return StepKind::Flat;
  if (s == "unflat") return StepKind::Unflat;
  if (s == "builtin") return StepKind::Builtin;
  return std::nullopt;
}

/// One arrow of a fully expanded rewrite sequence. For rule and equation
/// steps `rule_name` names the applied rule; for builtin steps it names the
/// operator; flat and unflat steps carry no name.
struct TraceStep {
  StepKind kind = StepKind::Rule;
  std::optional<std::string> rule_name;
  Position position;
  Substitution matcher;
  Term before;
  Term after;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

/// Display name used in reports: the rule or equation name, `builtin:<op>`,
/// or the kind for AC transformations.
inline std::string step_label(const TraceStep& step) {
  switch (step.kind) {
    case StepKind::Rule:
    case StepKind::Equation: return step.rule_name.value_or("?");
    case StepKind::Builtin: return "builtin:" + step.rule_name.value_or("?");
    default: return std::string(to_string(step.kind));
  }
}

struct InstrumentedTrace {
  /// Name or path of the theory the trace was produced in.
  std::string theory;
  Term initial;
  std::vector<TraceStep> steps;

  /// t_0 ... t_n.
  std::vector<Term> terms() const {
    std::vector<Term> out{initial};
    for (const auto& s : steps) out.push_back(s.after);
    return out;
  }
  const Term& final_term() const { return steps.empty() ? initial : steps.back().after; }
  std::size_t rule_step_count() const {
    std::size_t n = 0;
    for (const auto& s : steps) n += s.kind == StepKind::Rule;
    return n;
  }
  bool is_chained() const {
    const Term* prev = &initial;
    for (const auto& s : steps) {
      if (!(s.before == *prev)) return false;
      prev = &s.after;
    }
    return true;
  }

  friend bool operator==(const InstrumentedTrace&, const InstrumentedTrace&) = default;
};

}  // namespace rwslice
