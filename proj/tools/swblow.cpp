// swblow: command-line front end.
//
//   swblow simulate --config run.cfg
//   swblow reduce   --config jets.cfg
//   swblow scenario theorem2 --config t2.cfg
//   swblow sweep    --config grid.cfg --set sweep.workers=4
//
// Exit codes: 0 completed, 2 config error, 10 blow-up detected, 20 solver error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "swblow/config.hpp"
#include "swblow/errors.hpp"
#include "swblow/harness.hpp"

namespace {

swblow::RunConfig assemble(const std::string& path, const std::vector<std::string>& sets, const std::string& output) {
  swblow::KeyValues kv;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw swblow::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    kv = swblow::parse_key_values(buf.str());
  }
  swblow::apply_process_env_overrides(kv);
  for (const auto& s : sets) {
    const auto overrides = swblow::parse_key_values(s);
    for (const auto& [k, v] : overrides) kv[k] = v;
  }
  if (!output.empty()) kv["output.dir"] = output;
  return swblow::RunConfig::from_key_values(kv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral shallow-water solver with blow-up diagnostics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", swblow::kArtifactVersion);

  std::string config_path;
  std::vector<std::string> sets;
  std::string output;
  std::string scenario_name;
  bool print_config = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Flat 'section.key = value' config file");
    sub->add_option("--set", sets, "Override one key, e.g. --set integrator.t_end=2");
    sub->add_option("-o,--output", output, "Output directory (overrides output.dir)");
    sub->add_flag("--print-config", print_config, "Print the resolved configuration and exit");
  };
  auto* simulate = app.add_subcommand("simulate", "Integrate one model run");
  auto* reduce = app.add_subcommand("reduce", "Integrate the jet ODE only");
  auto* scenario = app.add_subcommand("scenario", "Run a named experiment");
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid in parallel");
  for (auto* sub : {simulate, reduce, scenario, sweep}) add_common(sub);
  scenario->add_option("name", scenario_name, "theorem2, theorem3 or dryspot (overrides scenario.name)");

  CLI11_PARSE(app, argc, argv);

  swblow::RunConfig cfg;
  try {
    if (!scenario_name.empty()) sets.push_back("scenario.name = " + scenario_name);
    cfg = assemble(config_path, sets, output);
    cfg.validate();
  } catch (const swblow::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return swblow::kExitConfigError;
  }
  if (print_config) {
    std::cout << swblow::serialize_key_values(cfg.to_key_values());
    return 0;
  }

  swblow::RunOutcome out;
  if (simulate->parsed()) {
    out = swblow::run_simulate(cfg);
  } else if (reduce->parsed()) {
    out = swblow::run_reduce(cfg);
  } else if (scenario->parsed()) {
    out = swblow::run_scenario(cfg);
  } else {
    out = swblow::run_sweep(cfg);
  }
  std::cout << out.status;
  if (!out.message.empty()) std::cout << ": " << out.message;
  std::cout << "\n";
  for (const auto& f : out.files) std::cout << "  " << f << "\n";
  return out.exit_code;
}
