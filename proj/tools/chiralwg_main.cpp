#include <CLI11.hpp>

#include "chiralwg/cli.hpp"
#include "chiralwg/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"chiralwg - directional single-photon emitter/receiver simulator"};
  app.set_version_flag("--version", chiralwg::kVersion);
  app.require_subcommand(1);

  chiralwg::CliOptions opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "config file (INI-style)")->required();
    cmd->add_option("--set", opt.sets, "key=value override, repeatable");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--workers", opt.workers, "worker thread count");
  };

  CLI::App* run = app.add_subcommand("run", "run one protocol and write the output bundle");
  add_common(run);
  run->add_option("--protocol", opt.protocol, "emit|absorb|transmit")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep);
  sweep->add_option("--name", opt.sweep_name, "eta|detuning_distance|bandwidth");

  CLI::App* oracle =
      app.add_subcommand("oracle", "check the master equation against the amplitude oracle");
  add_common(oracle);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) opt.command = "run";
  if (sweep->parsed()) opt.command = "sweep";
  if (oracle->parsed()) opt.command = "oracle";
  return chiralwg::run_cli(opt);
}
