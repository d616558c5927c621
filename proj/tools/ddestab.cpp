// ddestab: delay-system stability analysis from the fundamental matrix.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ddestab/cli_io.hpp"

namespace cli = ddestab::cli;

int main(int argc, char** argv) {
  CLI::App app{"Stability analysis of linear delay differential systems"};
  app.require_subcommand(1);

  cli::AnalyzeConfig analyze;
  std::string format = "human";
  auto* an = app.add_subcommand("analyze", "integrate X(t) and report a stability verdict");
  an->add_option("--system", analyze.system_path, "system description (JSON)")->required();
  an->add_option("--horizon", analyze.horizon, "integration horizon T")->required();
  an->add_option("--step", analyze.step, "step size h")->required();
  an->add_option("--residual-tol", analyze.criteria.residual_tol, "relative residual tolerance");
  an->add_option("--tail-tol", analyze.criteria.tail_rel_tol, "last-half growth tolerance");
  an->add_option("--norm-cap", analyze.criteria.divergence_norm_cap, "divergence threshold on ||X||_F");
  an->add_flag("--oracle", analyze.oracle_enabled, "count characteristic roots with Re s >= 0");
  an->add_option("--oracle-margin", analyze.oracle_margin, "shift the contour to Re s = -margin");
  an->add_flag("--compensated", analyze.compensated, "use compensated summation");
  an->add_option("--format", format, "human or json")
      ->check(CLI::IsMember({"human", "json"}));

  cli::TraceConfig trace;
  std::int64_t stride = 0;
  auto* tr = app.add_subcommand("trace", "write ||X(t)||_F as CSV");
  tr->add_option("--system", trace.system_path, "system description (JSON)")->required();
  tr->add_option("--horizon", trace.horizon, "integration horizon T")->required();
  tr->add_option("--step", trace.step, "step size h")->required();
  auto* stride_opt = tr->add_option("--stride", stride, "emit every k-th step");
  tr->add_option("--out", trace.output_path, "CSV output path")->required();

  cli::SweepConfig sweep;
  auto* sw = app.add_subcommand("sweep", "scale all delays and tabulate verdicts");
  sw->add_option("--system", sweep.system_path, "system description (JSON)")->required();
  sw->add_option("--horizon", sweep.horizon, "integration horizon T")->required();
  sw->add_option("--step", sweep.step, "step size h")->required();
  sw->add_option("--scale-min", sweep.scale_min, "smallest delay multiplier")->required();
  sw->add_option("--scale-max", sweep.scale_max, "largest delay multiplier")->required();
  sw->add_option("--steps", sweep.scale_steps, "number of multipliers")->required();
  sw->add_option("--residual-tol", sweep.criteria.residual_tol, "relative residual tolerance");
  sw->add_option("--tail-tol", sweep.criteria.tail_rel_tol, "last-half growth tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitConfigError;
  }

  if (an->parsed()) {
    analyze.format = format == "json" ? cli::OutputFormat::Json : cli::OutputFormat::Human;
    return cli::cmd_analyze(analyze, std::cout, std::cerr);
  }
  if (tr->parsed()) {
    if (stride_opt->count() > 0) {
      trace.stride = stride;
    }
    return cli::cmd_trace(trace, std::cerr);
  }
  return cli::cmd_sweep(sweep, std::cout, std::cerr);
}
