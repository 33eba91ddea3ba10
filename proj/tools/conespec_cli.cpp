#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "conespec/errors.hpp"
#include "conespec/global_surface.hpp"
#include "conespec/run_config.hpp"
#include "conespec/runner.hpp"

namespace {

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  // pin numerics to one thread so identical configs give bit-identical CSVs
  setenv("OPENBLAS_NUM_THREADS", "1", 1);
  setenv("OMP_NUM_THREADS", "1", 1);

  CLI::App app{"conespec: Witten deformation on even-dimensional cones"};
  app.require_subcommand(1);

  const std::map<std::string, std::string> descriptions = {
      {"link-validate", "check a link model's structural invariants"},
      {"model-spectrum", "low spectrum of the model operator per degree"},
      {"model-gap", "first nonzero eigenvalue vs t with a power-law fit"},
      {"model-kernel", "kernel dimensions vs the combinatorial oracle"},
      {"ih", "intersection-cohomology contribution of a cone point"},
      {"morse-check", "Morse inequalities from counts or a run artifact"},
      {"global-demo", "surface-of-revolution counting and gap scan"},
  };

  std::string config_path, preset;
  int m = 0;
  double t = 0.0;
  CLI::Option *opt_preset = nullptr, *opt_m = nullptr, *opt_t = nullptr;
  for (const std::string& name : conespec::known_commands()) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    CLI::Option* cfg_opt = sub->add_option("--config", config_path, "configuration file");
    if (name == "global-demo") {
      opt_preset = sub->add_option("--preset", preset, "spindle_min | spindle_max | suspension");
      opt_m = sub->add_option("--m", m, "cone-angle multiplicity");
      opt_t = sub->add_option("--t", t, "deformation parameter");
    } else {
      cfg_opt->required();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad usage is a configuration error
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    conespec::RunConfig cfg = config_path.empty()
                                  ? conespec::parse_config("", command)
                                  : conespec::load_config_file(config_path, command);
    if (command == "global-demo") {
      auto set_resolved = [&cfg](const std::string& key, const std::string& value) {
        for (auto& kv : cfg.resolved)
          if (kv.first == key) {
            kv.second = value;
            return;
          }
        cfg.resolved.emplace_back(key, value);
      };
      std::vector<std::string> errors;
      if (opt_preset->count()) {
        conespec::preset_from_name(preset);  // throws InvalidParameter on bad names
        cfg.g_preset = preset;
        set_resolved("global.preset", preset);
      }
      if (opt_m->count()) {
        if (m < 1) errors.push_back("global m must be >= 1");
        cfg.g_m = m;
        set_resolved("global.m", std::to_string(m));
      }
      if (opt_t->count()) {
        if (!(t > 0)) errors.push_back("t must be positive");
        if (t < cfg.g_t0)
          errors.push_back("global t must be >= t0 = " + fmt17(cfg.g_t0) +
                           " (the scan threshold)");
        cfg.g_t = t;
        set_resolved("global.t", fmt17(t));
      }
      if (!errors.empty()) throw conespec::ConfigError(errors);
    }
    return conespec::run_cli(cfg, std::cout, std::cerr);
  } catch (const conespec::ConfigError& e) {
    for (const auto& msg : e.errors) std::cerr << "config error: " << msg << "\n";
    return 2;
  } catch (const conespec::InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
