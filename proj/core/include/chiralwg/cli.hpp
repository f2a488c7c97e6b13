#pragma once

#include <string>
#include <vector>

namespace chiralwg {

/// Exit codes: 0 success, 1 config error, 2 tolerance violation (bundle still
/// written), 3 I/O failure.
struct CliOptions {
  std::string command;      // run | sweep | oracle
  std::string config_path;
  std::string protocol;     // emit | absorb | transmit (run)
  std::string sweep_name;   // optional override of [sweep] name
  std::vector<std::string> sets;
  std::string out_dir;      // overrides [output] dir when nonempty
  int workers = 0;          // 0 = from config
};

int cmd_run(const CliOptions& opt);
int cmd_sweep(const CliOptions& opt);
int cmd_oracle(const CliOptions& opt);
int run_cli(const CliOptions& opt);

}  // namespace chiralwg
