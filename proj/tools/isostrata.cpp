// Batch driver: isostrata COMMAND (--builtin NAME | --config PATH) [options]

#include <iostream>

#include <CLI11.hpp>

#include "isostrata/builtins.hpp"
#include "isostrata/commands.hpp"
#include "isostrata/errors.hpp"

using namespace isostrata;

int main(int argc, char** argv) {
  CLI::App app{"Isotropy strata, slices and the restriction map for real reductive group actions"};
  std::string command;
  std::string config_path;
  std::string builtin;
  std::string at;
  std::string out_dir;
  std::vector<std::string> tols;
  std::uint64_t seed = 42;
  CommandParams params;
  int stratum = -1;

  app.add_option("command", command, "validate | flow | classify | stratify | split | restrict")
      ->required()
      ->check(CLI::IsMember(command_names()));
  auto* cfg_opt = app.add_option("--config", config_path, "JSON group config")->check(CLI::ExistingFile);
  app.add_option("--builtin", builtin, "Built-in group")->check(CLI::IsMember(builtin_names()))->excludes(cfg_opt);
  app.add_option("--samples", params.samples, "Number of samples")->capture_default_str();
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--tol", tols, "Override a threshold, NAME=VALUE (repeatable)");
  app.add_option("--at", at, "Point as comma-separated coordinates, or 'origin'");
  app.add_option("--out", out_dir, "Directory for report.json and samples.csv");
  app.add_option("--stratum", stratum, "Open stratum id to restrict to when none is dense");
  app.add_option("--fibers", params.fibers, "Interior fiber points checked by restrict")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    else if (!builtin.empty()) cfg = builtin_config(builtin);
    else throw Error("one of --config or --builtin is required");

    cfg.options.seed = seed;
    for (const std::string& t : tols) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw ParseError("tol", "expected NAME=VALUE, got '" + t + "'");
      double value = 0.0;
      try {
        value = std::stod(t.substr(eq + 1));
      } catch (const std::logic_error&) {
        throw ParseError("tol", "not a number in '" + t + "'");
      }
      if (!cfg.options.set(t.substr(0, eq), value)) throw ParseError("tol", "unknown name '" + t.substr(0, eq) + "'");
    }
    params.command = command;
    if (!at.empty()) params.at = parse_point(at, cfg.description.dim_v);
    if (stratum >= 0) params.stratum = stratum;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const CommandResult result = run_command(cfg, params);
  if (out_dir.empty()) {
    std::cout << result.report.dump(2) << "\n";
  } else {
    write_outputs(result, out_dir);
    std::cout << command << ": exit " << result.exit_code << ", report in " << out_dir << "\n";
  }
  if (result.report.contains("error")) std::cerr << "error: " << result.report["error"].get<std::string>() << "\n";
  return result.exit_code;
}
