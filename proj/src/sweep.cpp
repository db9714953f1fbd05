#include "ddlab/sweep.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "ddlab/csv.hpp"
#include "ddlab/generalization.hpp"
#include "ddlab/parallel.hpp"
#include "ddlab/svg.hpp"

namespace ddlab {

namespace {

constexpr const char* kTheoryHeader[] = {
    "alpha",  "lambda", "rho1",       "loss",       "r_star",
    "s_star", "b_star", "gamma_star", "test_error", "status"};

constexpr const char* kSimulateHeader[] = {
    "alpha", "seed",       "d",          "n",      "r_hat", "s_hat",
    "b_hat", "final_risk", "emp_test_error", "status"};

constexpr const char* kVerifyHeader[] = {
    "alpha", "seed",           "d",
    "n",     "r_hat",          "s_hat",
    "b_hat", "emp_test_error", "theory_test_error",
    "abs_gap", "status"};

template <std::size_t N>
std::vector<std::string> header_row(const char* const (&names)[N]) {
  return std::vector<std::string>(names, names + N);
}

std::vector<std::string> theory_row(double alpha, double lambda,
                                    const SweepSpec& spec,
                                    const CurvePoint& pt) {
  std::vector<std::string> row(10);
  row[0] = format_double(alpha);
  row[1] = format_double(lambda);
  row[2] = format_double(spec.rho1);
  row[3] = spec.loss;
  if (pt.ok()) {
    row[4] = format_double(pt.solution.r_star);
    row[5] = format_double(pt.solution.s_star);
    row[6] = format_double(pt.solution.b_star);
    row[7] = format_double(pt.solution.gamma_star);
    row[8] = format_double(pt.test_error);
  }
  row[9] = pt.status;
  return row;
}

SolverOptions solver_options(const SweepSpec& spec) {
  SolverOptions opts;
  opts.tolerance = spec.solver_tolerance;
  opts.max_iterations = spec.solver_max_iterations;
  opts.damping = spec.solver_damping;
  opts.quad_nodes = spec.quad_nodes;
  return opts;
}

SweepResult finish(const SweepSpec& spec, CsvTable table, int failures,
                   const std::string& x_col, const std::string& y_col,
                   const std::string& group_col) {
  SweepResult result;
  result.points = static_cast<int>(table.rows.size());
  result.failures = failures;
  result.csv_path = spec.output_path;
  if (spec.output_path.empty()) throw ConfigError("output path is empty");
  write_csv(spec.output_path, table);
  if (spec.emit_svg) {
    result.svg_path = spec.output_path + ".svg";
    emit_svg_plot(spec.output_path, x_col, y_col, group_col, result.svg_path);
  }
  return result;
}

struct SimPoint {
  double alpha = 0.0;
  std::uint64_t seed = 0;
  int n = 0;
  TrainedStudent student;
  double emp_error = std::numeric_limits<double>::quiet_NaN();
  double theory_error = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

// Shared by simulate and verify: train on a fresh dataset, measure the
// student, and (for verify) solve the matching theory point.
std::vector<SimPoint> run_students(const SweepSpec& spec, bool with_theory,
                                   MarginLoss loss) {
  const std::vector<double> alphas = spec.alpha_grid();
  if (spec.d < 1) throw ConfigError("dimension d must be >= 1");
  const double lambda = spec.lambdas.empty() ? 0.0 : spec.lambdas.front();

  std::vector<SimPoint> points(alphas.size() * spec.seeds.size());
  parallel_for(points.size(), [&](std::size_t idx) {
    SimPoint& pt = points[idx];
    const double alpha = alphas[idx / spec.seeds.size()];
    const std::uint64_t seed = spec.seeds[idx % spec.seeds.size()];
    pt.alpha = alpha;
    pt.seed = seed;
    pt.n = static_cast<int>(std::lround(alpha * spec.d));
    try {
      if (pt.n < 1) throw ConfigError("alpha*d rounds to zero samples");
      const Dataset ds = generate_dataset(spec.d, pt.n, spec.rho1, seed);
      TrainOptions topts;
      topts.max_epochs = spec.max_epochs;
      topts.seed = seed;
      pt.student = train_erm(ds, lambda, loss, topts);
      pt.emp_error = empirical_test_error(pt.student.beta, pt.student.bias,
                                          ds.eta, spec.rho1, spec.n_test, seed);
      if (with_theory) {
        const ProblemConfig cfg{alpha, lambda, spec.rho1};
        const AsymptoticSolution sol =
            loss == MarginLoss::Square
                ? solve_square_closed_form(cfg)
                : solve_fixed_point(cfg, loss, solver_options(spec));
        pt.theory_error =
            test_error({sol.r_star, sol.s_star, sol.b_star, spec.rho1});
      }
    } catch (const Error& e) {
      pt.status = e.code();
    }
  });
  return points;
}

}  // namespace

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size())
    throw ConfigError("config key " + key + ": bad number \"" + value + "\"");
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const std::size_t comma = value.find(',', pos);
    const std::string item =
        trim(value.substr(pos, comma == std::string::npos ? std::string::npos
                                                          : comma - pos));
    out.push_back(static_cast<T>(parse_number(key, item)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key " + key + ": bad boolean \"" + value + "\"");
}

}  // namespace

void load_spec_config(const std::string& path, SweepSpec* spec) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file \"" + path + "\"");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    for (char& c : key)
      if (c == '-') c = '_';

    if (key == "alpha_start")
      spec->alpha_start = parse_number(key, value);
    else if (key == "alpha_stop")
      spec->alpha_stop = parse_number(key, value);
    else if (key == "alpha_step")
      spec->alpha_step = parse_number(key, value);
    else if (key == "lambda")
      spec->lambdas = parse_list<double>(key, value);
    else if (key == "rho1")
      spec->rho1 = parse_number(key, value);
    else if (key == "loss")
      spec->loss = value;
    else if (key == "dim")
      spec->d = static_cast<int>(parse_number(key, value));
    else if (key == "n_test")
      spec->n_test = static_cast<int>(parse_number(key, value));
    else if (key == "seeds")
      spec->seeds = parse_list<std::uint64_t>(key, value);
    else if (key == "max_epochs")
      spec->max_epochs = static_cast<int>(parse_number(key, value));
    else if (key == "quad_nodes")
      spec->quad_nodes = static_cast<int>(parse_number(key, value));
    else if (key == "solver_tolerance")
      spec->solver_tolerance = parse_number(key, value);
    else if (key == "solver_max_iterations")
      spec->solver_max_iterations = static_cast<int>(parse_number(key, value));
    else if (key == "solver_damping")
      spec->solver_damping = parse_number(key, value);
    else if (key == "out")
      spec->output_path = value;
    else if (key == "svg")
      spec->emit_svg = parse_bool(key, value);
    else
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": unknown key \"" + key + "\"");
  }
}

std::vector<double> SweepSpec::alpha_grid() const {
  if (!(alpha_step > 0.0)) throw ConfigError("alpha_step must be > 0");
  if (!(alpha_start > 0.0)) throw ConfigError("alpha_start must be > 0");
  if (alpha_stop < alpha_start)
    throw ConfigError("alpha_stop must be >= alpha_start");
  const auto count = static_cast<std::size_t>(
      std::floor((alpha_stop - alpha_start) / alpha_step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = alpha_start + static_cast<double>(i) * alpha_step;
  return grid;
}

SweepResult run_alpha_sweep(const SweepSpec& spec) {
  if (spec.lambdas.empty()) throw ConfigError("lambda list is empty");
  const MarginLoss loss = loss_from_name(spec.loss);
  const std::vector<double> alphas = spec.alpha_grid();

  CsvTable table;
  table.header = header_row(kTheoryHeader);
  int failures = 0;
  for (const double lambda : spec.lambdas) {
    const ProblemConfig cfg{1.0, lambda, spec.rho1};
    const std::vector<CurvePoint> curve =
        error_curve(cfg, alphas, loss, solver_options(spec));
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (!curve[i].ok()) ++failures;
      table.rows.push_back(theory_row(alphas[i], lambda, spec, curve[i]));
    }
  }
  return finish(spec, std::move(table), failures, "alpha", "test_error",
                "lambda");
}

SweepResult run_lambda_sweep(const SweepSpec& spec) {
  if (spec.lambdas.empty()) throw ConfigError("lambda list is empty");
  const MarginLoss loss = loss_from_name(spec.loss);
  const double alpha = spec.alpha_start;
  if (!(alpha > 0.0)) throw ConfigError("alpha_start must be > 0");

  CsvTable table;
  table.header = header_row(kTheoryHeader);
  std::vector<CurvePoint> points(spec.lambdas.size());
  parallel_for(points.size(), [&](std::size_t i) {
    CurvePoint& pt = points[i];
    pt.alpha = alpha;
    try {
      const ProblemConfig cfg{alpha, spec.lambdas[i], spec.rho1};
      pt.solution = loss == MarginLoss::Square
                        ? solve_square_closed_form(cfg)
                        : solve_fixed_point(cfg, loss, solver_options(spec));
      pt.test_error = test_error({pt.solution.r_star, pt.solution.s_star,
                                  pt.solution.b_star, spec.rho1});
    } catch (const Error& e) {
      pt.status = e.code();
    }
  });
  int failures = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].ok()) ++failures;
    table.rows.push_back(theory_row(alpha, spec.lambdas[i], spec, points[i]));
  }
  return finish(spec, std::move(table), failures, "lambda", "test_error",
                "rho1");
}

SweepResult run_simulate(const SweepSpec& spec) {
  const MarginLoss loss = loss_from_name(spec.loss);
  const std::vector<SimPoint> points = run_students(spec, false, loss);

  CsvTable table;
  table.header = header_row(kSimulateHeader);
  int failures = 0;
  for (const SimPoint& pt : points) {
    std::vector<std::string> row(10);
    row[0] = format_double(pt.alpha);
    row[1] = std::to_string(pt.seed);
    row[2] = std::to_string(spec.d);
    row[3] = std::to_string(pt.n);
    if (pt.status == "ok") {
      row[4] = format_double(pt.student.r_hat);
      row[5] = format_double(pt.student.s_hat);
      row[6] = format_double(pt.student.bias);
      row[7] = format_double(pt.student.final_risk);
      row[8] = format_double(pt.emp_error);
    } else {
      ++failures;
    }
    row[9] = pt.status;
    table.rows.push_back(std::move(row));
  }
  return finish(spec, std::move(table), failures, "alpha", "emp_test_error",
                "seed");
}

SweepResult run_verify(const SweepSpec& spec) {
  const MarginLoss loss = loss_from_name(spec.loss);
  const std::vector<SimPoint> points = run_students(spec, true, loss);

  CsvTable table;
  table.header = header_row(kVerifyHeader);
  int failures = 0;
  for (const SimPoint& pt : points) {
    std::vector<std::string> row(11);
    row[0] = format_double(pt.alpha);
    row[1] = std::to_string(pt.seed);
    row[2] = std::to_string(spec.d);
    row[3] = std::to_string(pt.n);
    if (pt.status == "ok") {
      row[4] = format_double(pt.student.r_hat);
      row[5] = format_double(pt.student.s_hat);
      row[6] = format_double(pt.student.bias);
      row[7] = format_double(pt.emp_error);
      row[8] = format_double(pt.theory_error);
      row[9] = format_double(std::abs(pt.emp_error - pt.theory_error));
    } else {
      ++failures;
    }
    row[10] = pt.status;
    table.rows.push_back(std::move(row));
  }
  return finish(spec, std::move(table), failures, "alpha", "abs_gap", "seed");
}

}  // namespace ddlab
