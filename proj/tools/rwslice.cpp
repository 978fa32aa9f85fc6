#include <rwslice/cli.hpp>

#include <CLI11.hpp>

int main(int argc, char** argv) {
  rwslice::CliOptions o;
  CLI::App app{"Backward trace slicing for rewrite theories"};
  app.add_option("--theory", o.theory_path, "Theory file")->required();
  app.add_option("--init", o.init, "Initial term")->required();
  auto* end = app.add_option("--end", o.end, "End term reached by the deterministic strategy");
  auto* steps = app.add_option("--steps", o.steps, "Number of rule steps to run");
  auto* trace = app.add_option("--trace", o.trace_path, "Recorded trace file");
  end->excludes(steps, trace);
  steps->excludes(trace);
  app.add_option("--criterion", o.criterion, "Observed positions of the final term, e.g. \"1.2,2\"")->required();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"pretty", "structured"}));
  app.add_flag("--full-expansion", o.full_expansion, "Show every elementary step of the slice");
  app.add_option("--max-steps", o.max_steps, "Elementary step budget (default 10000, or RWSLICE_MAX_STEPS)");
  app.add_option("--seed", o.seed, "Seed of the random concretization used by the soundness self-check");
  app.add_flag("--ascii", o.ascii, "Print the irrelevance symbol as _");
  app.add_option("--output", o.output, "Write the report to a file instead of stdout");
  app.add_option("--save-trace", o.save_trace, "Write the instrumented trace to a file");
  CLI11_PARSE(app, argc, argv);
  return rwslice::run_cli(o, std::cout, std::cerr);
}
