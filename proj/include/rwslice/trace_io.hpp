#pragma once

// Line-oriented trace files:
//
//   rwslice-trace 1
//   theory <name>
//   init <term>
//   step <kind> <name|-> <position>
//   bind <Var> <term>
//   before <term>
//   after <term>
//   ...
//   end
//
// Terms are written in canonical printed syntax. `bind` lines are optional
// and repeat once per binding of the step's matcher.

#include <rwslice/errors.hpp>
#include <rwslice/label.hpp>
#include <rwslice/syntax.hpp>
#include <rwslice/theory.hpp>
#include <rwslice/trace.hpp>

#include <istream>
#include <sstream>
#include <string>

namespace rwslice {

inline constexpr std::string_view kTraceHeader = "rwslice-trace 1";

inline std::string save_trace(const InstrumentedTrace& trace) {
  std::string out;
  out += kTraceHeader;
  out += "\ntheory " + trace.theory + "\ninit " + to_string(trace.initial) + "\n";
  for (const auto& s : trace.steps) {
    out += "step " + std::string(to_string(s.kind)) + " " + s.rule_name.value_or("-") + " " + to_string(s.position) + "\n";
    for (const auto& [var, value] : s.matcher) out += "bind " + var + " " + to_string(value) + "\n";
    out += "before " + to_string(s.before) + "\nafter " + to_string(s.after) + "\n";
  }
  out += "end\n";
  return out;
}

namespace detail {

class TraceReader {
 public:
  explicit TraceReader(std::string_view text) : in_(std::string(text)) {}

  InstrumentedTrace read() {
    InstrumentedTrace tr;
    if (!next() || line_ != kTraceHeader) fail("expected '" + std::string(kTraceHeader) + "'");
    expect_line("theory");
    tr.theory = rest_;
    expect_line("init");
    tr.initial = term(rest_);
    while (true) {
      if (!next()) fail("missing 'end'");
      if (line_ == "end") break;
      if (key_ != "step") fail("expected 'step' or 'end'");
      tr.steps.push_back(step());
    }
    while (next())
      if (!line_.empty()) fail("text after 'end'");
    return tr;
  }

 private:
  bool next() {
    while (std::getline(in_, line_)) {
      ++number_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      if (line_.empty()) continue;
      auto sp = line_.find(' ');
      key_ = line_.substr(0, sp);
      rest_ = sp == std::string::npos ? "" : line_.substr(sp + 1);
      return true;
    }
    line_.clear();
    return false;
  }

  void expect_line(const std::string& key) {
    if (!next() || key_ != key) fail("expected '" + key + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError("trace file: " + what, number_, 1);
  }

  Term term(const std::string& text) const {
    try {
      return parse_term(text);
    } catch (const ParseError& e) {
      throw SyntaxError("trace file: bad term '" + text + "': " + e.what(), number_, 1);
    }
  }

  TraceStep step() {
    TraceStep s;
    std::istringstream fields(rest_);
    std::string kind, name, pos, extra;
    if (!(fields >> kind >> name >> pos) || (fields >> extra)) fail("expected 'step <kind> <name|-> <position>'");
    auto k = parse_step_kind(kind);
    if (!k) fail("unknown step kind '" + kind + "'");
    s.kind = *k;
    if (name != "-") s.rule_name = name;
    auto p = parse_position(pos);
    if (!p) fail("malformed position '" + pos + "'");
    s.position = *p;
    while (next() && key_ == "bind") {
      auto sp = rest_.find(' ');
      if (sp == std::string::npos) fail("expected 'bind <Var> <term>'");
      std::string var = rest_.substr(0, sp);
      if (!is_variable_name(var)) fail("'" + var + "' is not a variable");
      if (!s.matcher.bind(var, term(rest_.substr(sp + 1)))) fail("variable " + var + " bound twice");
    }
    if (key_ != "before") fail("expected 'before'");
    s.before = term(rest_);
    expect_line("after");
    s.after = term(rest_);
    return s;
  }

  std::istringstream in_;
  std::string line_, key_, rest_;
  std::size_t number_ = 0;
};

}  // namespace detail

/// Parses a trace file and checks that its steps are chained.
inline InstrumentedTrace load_trace(std::string_view text) {
  InstrumentedTrace tr = detail::TraceReader(text).read();
  if (!tr.steps.empty() && !(tr.steps.front().before == tr.initial))
    throw MalformedStep("trace file: first step does not start at the initial term");
  if (!tr.is_chained()) throw MalformedStep("trace file: steps are not chained");
  return tr;
}

/// Checks every step of `trace` against `theory`; throws MalformedStep.
inline void validate_trace(const InstrumentedTrace& trace, const RewriteTheory& theory) {
  if (!trace.is_chained()) throw MalformedStep("trace is not chained");
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    try {
      validate_step(trace.steps[i], theory);
    } catch (const MalformedStep& e) {
      throw MalformedStep("step " + std::to_string(i + 1) + ": " + e.what());
    }
  }
}

}  // namespace rwslice
