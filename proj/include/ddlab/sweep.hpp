#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddlab/asymptotics.hpp"
#include "ddlab/simulator.hpp"

namespace ddlab {

/// One sweep invocation, assembled from a config file and/or CLI flags.
struct SweepSpec {
  enum class Mode { AlphaSweep, LambdaSweep, Simulate, Verify };
  Mode mode = Mode::AlphaSweep;

  // Alpha grid (AlphaSweep, Simulate, Verify). LambdaSweep runs at the
  // single fixed alpha = alpha_start.
  double alpha_start = 0.05;
  double alpha_stop = 10.0;
  double alpha_step = 0.05;

  // Always explicit values, never a range.
  std::vector<double> lambdas{1e-5};

  double rho1 = 0.5;
  std::string loss = "square";

  // Simulate / Verify only.
  int d = 100;
  int n_test = 100000;
  std::vector<std::uint64_t> seeds;
  int max_epochs = 2000;

  int quad_nodes = 61;
  double solver_tolerance = 1e-8;
  int solver_max_iterations = 500;
  double solver_damping = 0.5;

  std::string output_path;
  bool emit_svg = false;

  std::vector<double> alpha_grid() const;  // validates the grid
};

struct SweepResult {
  int points = 0;
  int failures = 0;  // rows whose status != "ok"
  std::string csv_path;
  std::string svg_path;  // empty unless emit_svg
};

/// Loads a flat key = value config file into the spec. Keys mirror the
/// SweepSpec fields (alpha_start, alpha_stop, alpha_step, lambda, rho1,
/// loss, dim, n_test, seeds, max_epochs, quad_nodes, solver_tolerance,
/// solver_max_iterations, solver_damping, out, svg); dashes and underscores
/// are interchangeable, '#' starts a comment, lists are comma-separated.
/// Values given later on the command line override the file.
void load_spec_config(const std::string& path, SweepSpec* spec);

/// Theory curve over the alpha grid, one row per (lambda, alpha) pair in
/// grid order. Columns:
///   alpha,lambda,rho1,loss,r_star,s_star,b_star,gamma_star,test_error,status
/// Failed points keep their row with empty numeric fields and a status code.
SweepResult run_alpha_sweep(const SweepSpec& spec);

/// Theory curve over the lambda list at fixed alpha; same schema.
SweepResult run_lambda_sweep(const SweepSpec& spec);

/// Finite-size runs, one row per (alpha, seed):
///   alpha,seed,d,n,r_hat,s_hat,b_hat,final_risk,emp_test_error,status
SweepResult run_simulate(const SweepSpec& spec);

/// Finite-size runs joined with the asymptotic prediction, one row per
/// (alpha, seed):
///   alpha,seed,d,n,r_hat,s_hat,b_hat,emp_test_error,theory_test_error,abs_gap,status
SweepResult run_verify(const SweepSpec& spec);

}  // namespace ddlab
