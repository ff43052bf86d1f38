#include <iostream>

#include <CLI11.hpp>

#include "dada/harness.hpp"

namespace h = dada::harness;

int main(int argc, char** argv) {
  CLI::App app{"Parameter-free dual averaging: experiments, verification and plot data"};
  app.require_subcommand(1);

  h::RunOptions run_opts;
  std::string run_out;
  auto* run = app.add_subcommand("run", "Run every solver of an experiment config");
  run->add_option("--config", run_opts.config, "Experiment config (or a previous summary.json)")->required();
  run->add_option("--out", run_out, "Output directory (overrides the config)");
  run->add_flag("--retain-full", run_opts.retain_full, "Keep iterates and subgradients for lemma checks");

  h::VerifyOptions verify_opts;
  std::string check;
  std::string report;
  double inject_c = 0.0;
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--check", check, "Single check name, or 'all'");
  verify->add_option("--seed", verify_opts.seed, "Seed for sampled instances");
  verify->add_option("--report", report, "Report path (default verify_report.json)");
  // Negative-control hook: runs the distance check with an invalid c.
  verify->add_option("--inject-c", inject_c)->group("");

  h::PlotOptions plot_opts;
  auto* plot = app.add_subcommand("plotdata", "Merge traces into plot data CSV and SVG");
  plot->add_option("traces", plot_opts.traces, "Trace CSV files")->required();
  plot->add_option("--out", plot_opts.out, "Output CSV path; the SVG is written next to it")->required();

  h::GenOptions gen_opts;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a problem instance as JSON");
  gen->add_option("--problem", gen_opts.problem, "kind:key=value,... e.g. softmax:n=100,d=200,mu=0.1")
      ->required();
  gen->add_option("--seed", gen_opts.seed, "Generator seed")->required();
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return h::kExitUsage;
  }

  try {
    if (*run) {
      if (!run_out.empty()) run_opts.out = run_out;
      return h::cmd_run(run_opts, std::cout, std::cerr);
    }
    if (*verify) {
      if (!check.empty()) verify_opts.check = check;
      if (!report.empty()) verify_opts.report = report;
      if (verify->count("--inject-c")) verify_opts.inject_c = inject_c;
      return h::cmd_verify(verify_opts, std::cout, std::cerr);
    }
    if (*plot) return h::cmd_plotdata(plot_opts, std::cout, std::cerr);
    if (!gen_out.empty()) gen_opts.out = gen_out;
    return h::cmd_gen(gen_opts, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::kExitFailure;
  }
}
