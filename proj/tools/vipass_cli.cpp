// Command-line front end: run scenarios, evaluate traces, list built-ins.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vipass/catalogue.hpp"
#include "vipass/harness.hpp"
#include "vipass/scenario.hpp"
#include "vipass/trace.hpp"

namespace {

vipass::Scenario resolve_scenario(const std::string& arg, std::uint64_t seed) {
  if (arg == "random") return vipass::random_scenario(seed);
  for (const auto& name : vipass::catalogue_names()) {
    if (name == arg) return vipass::catalogue_scenario(name);
  }
  if (!std::filesystem::exists(arg)) {
    throw std::runtime_error("'" + arg + "' is neither a built-in scenario nor an existing file");
  }
  return vipass::load_scenario_file(arg);
}

void print_metrics(const vipass::ViolationMetrics& m, double threshold) {
  std::cout << "threshold_W=" << threshold << " steps=" << m.steps << " violating_steps=" << m.violating_steps
            << " pct_steps=" << m.pct_steps << " total_energy_J=" << m.total_energy << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Passivated variable-impedance control simulator"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "run a scenario and write its trace as CSV");
  std::string scenario_arg;
  std::string out_path;
  std::optional<std::string> method;
  std::optional<double> dt;
  std::uint64_t seed = 0;
  std::size_t decimate = 1;
  simulate->add_option("--scenario", scenario_arg, "scenario file, built-in name, or 'random'")->required();
  simulate->add_option("--out", out_path, "output CSV path")->required();
  simulate->add_option("--method", method,
                       "override: none, deflection_continuous, deflection_discrete, stiffness_change, tank_baseline");
  simulate->add_option("--dt", dt, "override the control period [s]")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "seed for --scenario random");
  simulate->add_option("--decimate", decimate, "write every n-th row")->check(CLI::PositiveNumber);

  auto* metrics = app.add_subcommand("metrics", "passivity-violation metrics of a trace");
  std::string trace_path;
  double threshold = 0.0;
  metrics->add_option("--trace", trace_path, "trace CSV")->required();
  metrics->add_option("--threshold", threshold, "violation threshold [W]")->check(CLI::NonNegativeNumber);

  auto* catalogue = app.add_subcommand("catalogue", "list built-in scenarios");
  std::optional<std::string> dump;
  catalogue->add_option("--dump", dump, "print a built-in scenario as a scenario file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      vipass::Scenario s = resolve_scenario(scenario_arg, seed);
      if (method) s.method = vipass::parse_method(*method);
      if (dt) {
        s.dt = *dt;
        s.plant.dt = *dt;
      }
      const auto trace = vipass::run_scenario(s);
      vipass::write_trace(trace, out_path, decimate);
      std::cout << "scenario=" << (s.name.empty() ? scenario_arg : s.name)
                << " method=" << vipass::to_string(s.method) << " rows=" << trace.rows.size()
                << " ledger_excess_J=" << vipass::ledger_excess(trace) << '\n';
      print_metrics(vipass::violation_metrics(trace, 0.0), 0.0);
    } else if (*metrics) {
      const auto trace = vipass::read_trace(trace_path);
      print_metrics(vipass::violation_metrics(trace, threshold), threshold);
    } else if (*catalogue) {
      if (dump) {
        std::cout << vipass::scenario_to_json(vipass::catalogue_scenario(*dump)) << '\n';
      } else {
        for (const auto& name : vipass::catalogue_names()) {
          std::cout << name << "\t" << vipass::catalogue_description(name) << '\n';
        }
      }
    }
  } catch (const vipass::SimulationAborted& e) {
    std::cerr << "error: simulation aborted at step " << e.step() << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
