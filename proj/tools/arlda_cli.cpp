// Command-line harness: single solves, epsilon sweeps and bound audits over
// the built-in problem suite.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "arlda/experiment.hpp"
#include "arlda/problems.hpp"

namespace {

void add_common_options(CLI::App* cmd, arlda::ExperimentConfig& cfg, std::string& h_kind) {
  cmd->add_option("--problem", cfg.problem, "problem id (see --list-problems)");
  cmd->add_option("--h", h_kind, "outer function override: zero|l1|l2|linf|weighted-l1");
  cmd->add_option("--h-weight", cfg.h_weight, "outer function weight");
  cmd->add_option("--oracle", cfg.oracle, "oracle kind: exact|noise|series|partial");
  cmd->add_option("--seed", cfg.seed, "noise oracle seed");
  cmd->add_option("--noise-mode", cfg.noise_mode, "noise mode: adversarial|uniform");
  cmd->add_option("--floor-f", cfg.floors.f, "accuracy floor for f");
  cmd->add_option("--floor-g", cfg.floors.g, "accuracy floor for g");
  cmd->add_option("--floor-c", cfg.floors.c, "accuracy floor for c");
  cmd->add_option("--floor-J", cfg.floors.J, "accuracy floor for J");
  cmd->add_option("--epsilon", cfg.epsilons, "target accuracy (repeat for sweeps)");
  cmd->add_flag("--monotonic", cfg.monotonic, "monotonic accuracy variant");
  cmd->add_option("--max-iters", cfg.max_iters, "outer iteration cap");
  cmd->add_option("--sigma0", cfg.sigma0, "initial regularization parameter");
  cmd->add_option("--summands", cfg.summands, "partial-sum oracle term count");
  cmd->add_option("--amplitude", cfg.amplitude, "series/partial-sum deviation amplitude");
  cmd->add_option("--gap-tol", cfg.gap_tol, "subproblem relative duality-gap tolerance");
  cmd->add_option("--sub-max-iter", cfg.sub_max_iter, "subproblem iteration cap");
  cmd->add_option("--out", cfg.out, "output path");
  cmd->add_option("--format", cfg.format, "output format: csv|json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive-regularization composite solver harness"};
  app.require_subcommand(0, 1);

  // A config file provides defaults; explicit flags override it.
  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    std::string arg(argv[i]);
    if (arg == "--config" && i + 1 < argc)
      config_path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0)
      config_path = arg.substr(9);
  }

  arlda::ExperimentConfig cfg;
  if (!config_path.empty()) {
    try {
      cfg = arlda::load_config_file(config_path);
    } catch (const std::exception& e) {
      std::cerr << "arlda: " << e.what() << "\n";
      return 1;
    }
  }
  std::string h_kind = cfg.h_kind.value_or("");

  bool list_problems = false;
  app.add_flag("--list-problems", list_problems, "print the problem catalogue and exit");

  std::string config_dummy;
  std::string run_file;
  std::string findings_out = "findings.json";

  CLI::App* solve = app.add_subcommand("solve", "run one solve, write CSV and summary JSON");
  add_common_options(solve, cfg, h_kind);
  solve->add_option("--config", config_dummy, "JSON config file (flags override)");

  CLI::App* sweep = app.add_subcommand("sweep", "one solve per epsilon, write a sweep report");
  add_common_options(sweep, cfg, h_kind);
  sweep->add_option("--config", config_dummy, "JSON config file (flags override)");

  CLI::App* audit = app.add_subcommand("audit", "re-run and audit an existing run file");
  add_common_options(audit, cfg, h_kind);
  audit->add_option("--config", config_dummy, "JSON config file (flags override)");
  audit->add_option("--run", run_file, "run CSV produced by solve")->required();
  audit->add_option("--findings", findings_out, "findings output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (list_problems) {
    for (const auto& id : arlda::problem_ids())
      std::cout << id << ": " << arlda::make_problem(id).description << "\n";
    return 0;
  }

  if (!h_kind.empty()) cfg.h_kind = h_kind;

  if (solve->parsed()) return arlda::solve_command(cfg);
  if (sweep->parsed()) return arlda::sweep_command(cfg);
  if (audit->parsed()) return arlda::audit_command(cfg, run_file, findings_out);

  std::cerr << app.help();
  return 1;
}
