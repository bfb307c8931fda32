// Command-line front end: run, verify and sweep JSON scenarios.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dshock/scenario.hpp"

namespace {

int report(const dshock::RunResult& r, bool quiet) {
  if (r.exit_code == 0 || r.exit_code == 5) {
    if (!quiet) {
      if (!r.report_text.empty()) std::cout << r.report_text;
      std::cout << r.message << '\n';
      for (const auto& a : r.artifacts) std::cout << "  wrote " << a << '\n';
    }
  } else {
    std::cerr << "error: " << r.message << '\n';
  }
  return r.exit_code;
}

int load_and(const std::string& path, const std::function<int(dshock::Scenario)>& then) {
  try {
    return then(dshock::load_scenario(path));
  } catch (const dshock::Error& e) {
    std::cerr << "error: " << dshock::to_string(e.kind()) << ": " << e.what() << '\n';
    return dshock::exit_code_for(e.kind());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delta-shock solutions, front ODEs, sticky particles and balance checks"};
  app.require_subcommand(1);

  std::string out_dir;
  double tol = 0.0;
  bool quiet = false;
  app.add_option("--out", out_dir, "output directory (overrides the scenario)");
  app.add_option("--tol", tol, "main check tolerance (overrides the scenario)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "print nothing on success");

  std::string path;
  auto* run = app.add_subcommand("run", "run a scenario and write CSV/JSON/SVG output");
  run->add_option("scenario", path, "scenario JSON file")->required();
  auto* verify = app.add_subcommand("verify", "check the weak identities for a scenario's data");
  verify->add_option("scenario", path, "scenario JSON file")->required();
  auto* sweep = app.add_subcommand("sweep", "repeat a scenario over parameter values");
  sweep->add_option("scenario", path, "scenario JSON file")->required();
  std::string param;
  std::vector<double> values;
  sweep->add_option("--param", param, "N (particles) or dt (front_ode)")->required();
  sweep->add_option("--values", values, "parameter values")->required()->expected(2, -1);

  // Global flags are also accepted after the subcommand.
  for (auto* sub : {run, verify, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  dshock::RunOptions opts;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (tol > 0.0) opts.tol = tol;
  opts.quiet = quiet;

  return load_and(path, [&](dshock::Scenario s) {
    if (*run) return report(dshock::run_scenario(s, opts), quiet);
    if (*verify) {
      s.kind = dshock::ScenarioKind::Verify;
      return report(dshock::run_scenario(s, opts), quiet);
    }
    return report(dshock::run_sweep(s, param, values, opts), quiet);
  });
}
