// Command-line driver: single runs and the four reference experiments.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "splitpar/splitpar.hpp"

namespace {

void finish(const splitpar::ExperimentResult& r, const std::string& out, const std::string& svg, bool verbose) {
  splitpar::print_table(std::cout, r, verbose);
  if (!out.empty()) {
    splitpar::write_csv(out, r.cells);
    std::cout << "wrote " << out << '\n';
  }
  if (!svg.empty()) {
    splitpar::write_svg(svg, r);
    std::cout << "wrote " << svg << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-splitting solvers for 2D parabolic reaction-diffusion problems"};
  app.require_subcommand(1);

  std::string out, svg, solver = "direct";
  double cg_tol = 1e-12;
  bool verbose = false;

  auto* run = app.add_subcommand("run", "Run one method on the manufactured problem");
  std::string method, coeff = "a1", xi_text = "1/8";
  int M = 0, q = 4;
  std::optional<double> theta;
  run->add_option("--method", method, "cn|be|dr|douglas|dg-adi|dk-adi|dg-dd|dk-dd")->required();
  run->add_option("--M", M, "Grid subdivisions (h = tau = 1/M)")->required();
  run->add_option("--coeff", coeff, "Diffusion coefficient a1..a5");
  run->add_option("--xi", xi_text, "Overlap size, e.g. 1/16 or 0.0625");
  run->add_option("--q", q, "Components per subdomain");
  run->add_option("--theta", theta, "Theta for dg/dk methods");

  auto* table = app.add_subcommand("table", "Reproduce one of the reference experiments");
  int table_id = 1;
  table->add_option("id", table_id, "Experiment 1..4")->required()->check(CLI::Range(1, 4));

  for (auto* sub : {run, table}) {
    sub->add_option("--solver", solver, "direct|cg");
    sub->add_option("--cg-tol", cg_tol, "Relative residual bound for cg");
    sub->add_option("--out", out, "CSV output path");
    sub->add_option("--svg", svg, "Error-vs-M log-log plot (SVG)");
    sub->add_flag("-v,--verbose", verbose, "Also print least-squares rates");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    splitpar::SolverSettings settings;
    settings.kind = splitpar::parse_solver(solver);
    settings.cg_tolerance = cg_tol;

    if (*run) {
      splitpar::ExperimentConfig cfg;
      cfg.methods = {splitpar::parse_method(method)};
      cfg.Ms = {M};
      cfg.coefficients = {splitpar::parse_coefficient(coeff)};
      cfg.xis = {splitpar::parse_fraction(xi_text)};
      cfg.qs = {q};
      cfg.theta = theta;
      cfg.solver = settings;
      splitpar::Grid{M};  // validates M up front
      if (theta) {
        if (*theta != 1.0 && *theta != 0.5) throw splitpar::InvalidInput("--theta must be 1 or 1/2");
        const auto m = cfg.methods.front();
        if (!splitpar::uses_dd(m) && m != splitpar::Method::dg_adi && m != splitpar::Method::dk_adi &&
            *theta != splitpar::default_theta(m))
          throw splitpar::InvalidInput("method " + method + " has a fixed theta");
      }
      if (splitpar::uses_dd(cfg.methods.front())) splitpar::make_strip_decomposition(q, cfg.xis.front());
      if (splitpar::uses_adi(cfg.methods.front()) && splitpar::make_coefficient(cfg.coefficients.front()).has_mixed)
        throw splitpar::UnsupportedSplitting("coefficient " + coeff +
                                             " has mixed derivative terms; alternating direction methods cannot be"
                                             " applied (use dg-dd or dk-dd)");
      const auto r = splitpar::run_experiment(cfg);
      finish(r, out, svg, verbose);
      const auto& cell = r.cells.front();
      if (!cell.error) {
        std::cerr << "error: " << cell.note << '\n';
        return 1;
      }
      if (verbose && cell.report)
        std::cout << "steps " << cell.report->steps << ", max over all steps "
                  << splitpar::scientific(cell.report->error_all_steps) << ", " << cell.seconds << " s\n";
    } else {
      auto cfg = splitpar::preset(table_id);
      cfg.solver = settings;
      const auto r = splitpar::run_experiment(cfg, verbose ? &std::cerr : nullptr);
      finish(r, out, svg, verbose);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
