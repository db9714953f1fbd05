// ddlab: theory sweeps, finite-size simulation, and plots for the
// double-descent test-error curves of a two-layer ReLU binary classifier
// trained on Gaussian teacher data.

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "ddlab/errors.hpp"
#include "ddlab/svg.hpp"
#include "ddlab/sweep.hpp"

namespace {

std::string config_dummy;

void add_common_flags(CLI::App* cmd, ddlab::SweepSpec* spec) {
  // the file itself is applied before parsing (see main), so flags override
  cmd->add_option("--config", config_dummy,
                  "flat key = value config file; flags override it");
  cmd->add_option("--alpha-start", spec->alpha_start, "first alpha on the grid");
  cmd->add_option("--alpha-stop", spec->alpha_stop, "last alpha on the grid");
  cmd->add_option("--alpha-step", spec->alpha_step, "alpha grid spacing");
  cmd->add_option("--lambda", spec->lambdas, "explicit lambda value(s)")
      ->delimiter(',');
  cmd->add_option("--rho1", spec->rho1, "probability of label +1");
  cmd->add_option("--loss", spec->loss, "square | hinge | logistic");
  cmd->add_option("--quad-nodes", spec->quad_nodes,
                  "Gauss-Hermite nodes for the mixture expectations");
  cmd->add_option("--solver-tol", spec->solver_tolerance,
                  "fixed-point residual tolerance");
  cmd->add_option("--solver-max-iter", spec->solver_max_iterations,
                  "fixed-point iteration budget");
  cmd->add_option("--solver-damping", spec->solver_damping,
                  "fixed-point damping factor in (0,1]");
  cmd->add_option("--out", spec->output_path,
                  "output CSV path (here or in the config file)");
  cmd->add_flag("--svg", spec->emit_svg, "also render <out>.svg");
}

void add_sim_flags(CLI::App* cmd, ddlab::SweepSpec* spec) {
  cmd->add_option("--dim", spec->d, "feature dimension d");
  cmd->add_option("--seeds", spec->seeds, "dataset seed(s)")->delimiter(',');
  cmd->add_option("--n-test", spec->n_test, "fresh samples per test-error estimate");
  cmd->add_option("--max-epochs", spec->max_epochs, "gradient-descent epoch cap");
}

int report(const ddlab::SweepResult& result) {
  std::printf("wrote %s: %d points, %d failed\n", result.csv_path.c_str(),
              result.points, result.failures);
  if (!result.svg_path.empty())
    std::printf("wrote %s\n", result.svg_path.c_str());
  return result.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "double-descent curves for a two-layer ReLU classifier on Gaussian "
      "teacher data"};
  app.require_subcommand(1);

  ddlab::SweepSpec spec;

  // Apply the config file first so that explicit flags override it.
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc)
        ddlab::load_spec_config(argv[i + 1], &spec);
      else if (arg.rfind("--config=", 0) == 0)
        ddlab::load_spec_config(arg.substr(9), &spec);
    }
  } catch (const ddlab::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
    return 2;
  }

  CLI::App* theory = app.add_subcommand(
      "theory-sweep", "asymptotic test error over an alpha grid");
  add_common_flags(theory, &spec);

  CLI::App* lambda_sweep = app.add_subcommand(
      "lambda-sweep",
      "asymptotic test error over the lambda list at fixed alpha "
      "(--alpha-start)");
  add_common_flags(lambda_sweep, &spec);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "train finite-size students and measure them");
  add_common_flags(simulate, &spec);
  add_sim_flags(simulate, &spec);

  CLI::App* verify = app.add_subcommand(
      "verify", "finite-size students joined with the asymptotic prediction");
  add_common_flags(verify, &spec);
  add_sim_flags(verify, &spec);

  std::string csv_path, x_col, y_col, group_col, svg_out;
  CLI::App* plot = app.add_subcommand("plot", "render a sweep CSV as SVG");
  plot->add_option("csv", csv_path, "input CSV")->required();
  plot->add_option("--x", x_col, "x column")->required();
  plot->add_option("--y", y_col, "y column")->required();
  plot->add_option("--group", group_col, "one polyline per value")->required();
  plot->add_option("--out", svg_out, "output SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (theory->parsed()) {
      spec.mode = ddlab::SweepSpec::Mode::AlphaSweep;
      return report(ddlab::run_alpha_sweep(spec));
    }
    if (lambda_sweep->parsed()) {
      spec.mode = ddlab::SweepSpec::Mode::LambdaSweep;
      return report(ddlab::run_lambda_sweep(spec));
    }
    if (simulate->parsed()) {
      spec.mode = ddlab::SweepSpec::Mode::Simulate;
      return report(ddlab::run_simulate(spec));
    }
    if (verify->parsed()) {
      spec.mode = ddlab::SweepSpec::Mode::Verify;
      return report(ddlab::run_verify(spec));
    }
    if (plot->parsed()) {
      ddlab::emit_svg_plot(csv_path, x_col, y_col, group_col, svg_out);
      std::printf("wrote %s\n", svg_out.c_str());
      return 0;
    }
  } catch (const ddlab::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
    return 2;
  }
  return 0;
}
