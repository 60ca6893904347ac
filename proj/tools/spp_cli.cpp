#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace spp::cli;
  CLI::App app{"Sequential posted pricing experiments"};
  app.require_subcommand(1);

  Options options;
  std::string format = "csv";
  std::uint64_t seed = 0;
  const std::map<std::string, std::string> help{
      {"generate", "write a canonical instance file and its support statistics"},
      {"evaluate", "evaluate policies on an instance and check assertions"},
      {"audit", "run the incentive audits on a mechanism table"},
      {"report", "tabulate revenue ratios over a parameter sweep"},
  };
  for (const auto& name : known_commands()) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", options.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", options.out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_flag("--verbose", options.verbose, "log progress");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigInvalid;
  }
  for (const auto* sub : app.get_subcommands()) {
    if (sub->count("--seed")) options.seed = seed;
    options.format = format == "json" ? Format::kJson : Format::kCsv;
    return run_command(sub->get_name(), options, std::cerr);
  }
  return kConfigInvalid;
}
