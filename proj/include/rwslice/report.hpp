#pragma once

// Slice reports: a human-readable rendering and a line-oriented structured
// document (see docs/formats.md).

#include <rwslice/slicer.hpp>
#include <rwslice/trace.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace rwslice {

/// A displayed step of the report: either one elementary step or a whole
/// rewrite step modulo E (rule view).
struct ReportStep {
  /// Trace-term indices: the step goes from t_from to t_to.
  std::size_t from = 0;
  std::size_t to = 0;
  std::string label;
  std::string kind;
  Position position;
  Term before;
  Term after;
};

struct SoundnessCheck {
  std::uint64_t seed = 0;
  Term concretization;
  bool passed = false;
  std::string detail;
};

struct SliceReport {
  std::string theory;
  Term initial;
  Term final_term;
  TraceSlice slice;
  bool full_expansion = false;
  std::vector<ReportStep> steps;
  std::optional<SoundnessCheck> soundness;
};

namespace detail {

inline ReportStep elementary_report_step(const SlicedStep& s) {
  return {s.index - 1, s.index, step_label(s.step), std::string(to_string(s.step.kind)), s.step.position, s.before, s.after};
}

// Trace-term indices that end a rewrite step modulo E: after each rule step
// and the simplification that follows it, before the unflat steps that
// prepare the next rule.
inline std::vector<std::size_t> rule_boundaries(const InstrumentedTrace& trace) {
  std::vector<std::size_t> rules;
  for (std::size_t i = 0; i < trace.steps.size(); ++i)
    if (trace.steps[i].kind == StepKind::Rule) rules.push_back(i);
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    std::size_t end = r + 1 < rules.size() ? rules[r + 1] : trace.steps.size();
    if (r + 1 < rules.size())
      while (end > rules[r] + 1 && trace.steps[end - 1].kind == StepKind::Unflat) --end;
    out.push_back(end);
  }
  if (out.empty() || out.back() != trace.steps.size()) out.push_back(trace.steps.size());
  return out;
}

}  // namespace detail

/// The steps shown by a report. In rule view each displayed step spans one
/// rewrite step modulo E and is labeled by its rule; segments whose slices
/// coincide are omitted.
inline std::vector<ReportStep> report_steps(const InstrumentedTrace& trace, const TraceSlice& ts, bool full_expansion) {
  std::vector<ReportStep> out;
  if (full_expansion) {
    for (const auto& s : ts.steps) out.push_back(detail::elementary_report_step(s));
    return out;
  }
  std::size_t from = 0;
  for (std::size_t to : detail::rule_boundaries(trace)) {
    if (to == from) continue;
    ReportStep rs;
    rs.from = from;
    rs.to = to;
    rs.kind = "simplification";
    rs.label = "simplification";
    for (std::size_t i = from; i < to; ++i)
      if (trace.steps[i].kind == StepKind::Rule) {
        rs.kind = "rule";
        rs.label = *trace.steps[i].rule_name;
        rs.position = trace.steps[i].position;
      }
    rs.before = ts.term_slices[from];
    rs.after = ts.term_slices[to];
    from = to;
    if (!(rs.before == rs.after)) out.push_back(std::move(rs));
  }
  return out;
}

inline SliceReport make_report(const InstrumentedTrace& trace, const TraceSlice& ts, bool full_expansion) {
  SliceReport r;
  r.theory = trace.theory;
  r.initial = trace.initial;
  r.final_term = trace.final_term();
  r.slice = ts;
  r.full_expansion = full_expansion;
  r.steps = report_steps(trace, ts, full_expansion);
  return r;
}

inline std::string format_percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string render_pretty(const SliceReport& r, BulletStyle style = BulletStyle::Unicode) {
  const TraceSlice& ts = r.slice;
  std::string out;
  out += "theory: " + r.theory + "\n";
  out += "initial term: " + to_string(r.initial) + "\n";
  out += "final term: " + to_string(r.final_term) + "\n";
  out += "criterion: " + to_string(ts.criterion) + "\n";
  out += "\ntrace slice (" + std::string(r.full_expansion ? "full expansion" : "rule steps") + "):\n";
  out += "  " + to_string(ts.initial_slice(), style) + "\n";
  for (const auto& s : r.steps)
    out += "  " + to_string(s.before, style) + " --[" + s.label + "]--> " + to_string(s.after, style) + "\n";
  out += "\noriginal trace size: " + std::to_string(ts.original_size) + "\n";
  out += "sliced trace size: " + std::to_string(ts.sliced_size) + "\n";
  out += "reduction: " + format_percent(ts.reduction_percent) + "%\n";
  if (r.soundness) {
    const auto& c = *r.soundness;
    out += "soundness check (seed " + std::to_string(c.seed) + "): " + (c.passed ? "passed" : "FAILED: " + c.detail) + "\n";
  }
  return out;
}

inline constexpr std::string_view kReportHeader = "rwslice-report 1";

inline std::string render_structured(const SliceReport& r, BulletStyle style = BulletStyle::Unicode) {
  const TraceSlice& ts = r.slice;
  std::string out;
  out += kReportHeader;
  out += "\ntheory " + r.theory;
  out += "\ninit " + to_string(r.initial);
  out += "\nfinal " + to_string(r.final_term);
  out += "\ncriterion " + to_string(ts.criterion);
  out += "\nterms " + std::to_string(ts.term_slices.size());
  out += "\noriginal_size " + std::to_string(ts.original_size);
  out += "\nsliced_size " + std::to_string(ts.sliced_size);
  out += "\nreduction_percent " + format_percent(ts.reduction_percent) + "\n";
  for (std::size_t j = 0; j < ts.relevant.size(); ++j) out += "relevant " + std::to_string(j) + " " + to_string(ts.relevant[j]) + "\n";
  for (std::size_t j = 0; j < ts.term_slices.size(); ++j)
    out += "slice " + std::to_string(j) + " " + to_string(ts.term_slices[j], style) + "\n";
  out += "view " + std::string(r.full_expansion ? "full" : "rules") + "\n";
  for (const auto& s : r.steps) {
    out += "step " + std::to_string(s.from) + " " + std::to_string(s.to) + " " + s.kind + " " + s.label + " " +
           (s.kind == "simplification" ? "-" : to_string(s.position)) + "\n";
    out += "before " + to_string(s.before, style) + "\nafter " + to_string(s.after, style) + "\n";
  }
  if (r.soundness) {
    const auto& c = *r.soundness;
    out += "concretization " + to_string(c.concretization) + "\n";
    out += "soundness " + std::string(c.passed ? "passed" : "failed") + " " + std::to_string(c.seed) + "\n";
  }
  out += "end\n";
  return out;
}

}  // namespace rwslice
