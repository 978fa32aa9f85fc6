#pragma once

// The slice command: build or load an instrumented trace, slice it, report.

#include <rwslice/concretize.hpp>
#include <rwslice/engine.hpp>
#include <rwslice/report.hpp>
#include <rwslice/slicer.hpp>
#include <rwslice/syntax.hpp>
#include <rwslice/trace_io.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace rwslice {

struct CliOptions {
  std::string theory_path;
  std::string init;
  std::optional<std::string> end;
  std::optional<std::size_t> steps;
  std::optional<std::string> trace_path;
  std::string criterion;
  std::string format = "pretty";
  bool full_expansion = false;
  std::optional<std::size_t> max_steps;
  std::uint64_t seed = 1;
  bool ascii = false;
  std::optional<std::string> output;
  std::optional<std::string> save_trace;
};

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitUnsound = 3 };

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error("cannot write '" + path + "'");
}

/// Step budget: the flag, else RWSLICE_MAX_STEPS, else the default.
inline std::size_t effective_budget(const std::optional<std::size_t>& flag, const char* env) {
  if (flag) return *flag;
  if (env && *env) {
    try {
      std::size_t used = 0;
      unsigned long long v = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw Error(std::string("RWSLICE_MAX_STEPS must be a natural number, got '") + env + "'");
  }
  return kDefaultStepBudget;
}

/// Runs the deterministic strategy from `t0` until the canonical form of
/// `end` is reached.
inline InstrumentedTrace search_end(const Term& t0, const Term& end, const RewriteTheory& th, std::size_t budget) {
  Term target = normalize(end, th, {budget}).term;
  Engine engine(th, {budget});
  InstrumentedTrace trace;
  trace.theory = th.name();
  trace.initial = t0;
  StepResult start = engine.normalize(t0);
  trace.steps = std::move(start.steps);
  Term cur = start.term;
  try {
    while (!(cur == target)) {
      if (!engine.first_application(cur))
        throw Error("end term " + to_string(target) + " not reached: execution stops at " + to_string(cur));
      StepResult r = engine.rewrite_step(cur);
      for (auto& s : r.steps) trace.steps.push_back(std::move(s));
      cur = r.term;
    }
  } catch (const StepBudgetExceeded& e) {
    throw Error("end term " + to_string(target) + " not reached: " + e.what());
  }
  return trace;
}

inline SoundnessCheck self_check(const TraceSlice& ts, const RewriteTheory& th, std::uint64_t seed) {
  SoundnessCheck c;
  c.seed = seed;
  GroundTermGenerator gen(th.signature(), seed);
  c.concretization = concretize(ts.initial_slice(), gen);
  try {
    replay(ts, th, c.concretization);
    c.passed = true;
  } catch (const ReplayFailure& e) {
    c.detail = e.what();
  }
  return c;
}

inline int run_cli(const CliOptions& o, std::ostream& out, std::ostream& err,
                   const char* env_max_steps = std::getenv("RWSLICE_MAX_STEPS")) {
  try {
    if (o.format != "pretty" && o.format != "structured") throw Error("--format must be 'pretty' or 'structured'");
    const int sources = o.end.has_value() + o.steps.has_value() + o.trace_path.has_value();
    if (sources != 1) throw Error("exactly one of --end, --steps, --trace is required");
    const std::size_t budget = effective_budget(o.max_steps, env_max_steps);

    RewriteTheory th = parse_theory(read_file(o.theory_path));
    if (th.name().empty()) th.set_name(o.theory_path);
    Term init = parse_term(o.init, th);

    InstrumentedTrace trace;
    if (o.steps) {
      trace = run(init, th, *o.steps, {budget});
    } else if (o.end) {
      trace = search_end(init, parse_term(*o.end, th), th, budget);
    } else {
      trace = load_trace(read_file(*o.trace_path));
      if (!(trace.initial == init))
        throw Error("trace starts at " + to_string(trace.initial) + ", not at the --init term " + to_string(init));
      validate_trace(trace, th);
      if (!normalize(trace.final_term(), th, {budget}).steps.empty())
        err << "rwslice: warning: final term of the trace is not in canonical form\n";
    }
    if (o.save_trace) write_file(*o.save_trace, save_trace(trace));

    SlicingCriterion criterion = parse_criterion(o.criterion);
    TraceSlice ts = trace_slice(trace, th, criterion);
    SliceReport report = make_report(trace, ts, o.full_expansion);
    report.soundness = self_check(ts, th, o.seed);

    const BulletStyle style = o.ascii ? BulletStyle::Ascii : BulletStyle::Unicode;
    std::string text = o.format == "structured" ? render_structured(report, style) : render_pretty(report, style);
    if (o.output) write_file(*o.output, text);
    else out << text;
    if (!report.soundness->passed) {
      err << "rwslice: soundness self-check failed: " << report.soundness->detail << "\n";
      return kExitUnsound;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "rwslice: error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace rwslice
