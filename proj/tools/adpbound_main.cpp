// Command-line harness for the three experiment pipelines. Exit code 0 only
// when every asserted property of the selected experiment holds.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "adpbound/config.hpp"
#include "adpbound/discrete_mdp.hpp"
#include "adpbound/experiments.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string scale = "desk";
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "configuration file (key = value sections)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "master seed override");
  cmd->add_option("--out", opts.out_dir, "output directory override");
  cmd->add_option("--scale", opts.scale, "preset scale when no config is given")
      ->check(CLI::IsMember({"ci", "desk", "paper"}));
}

adpbound::ExperimentConfig resolve(const CommonOpts& opts, adpbound::ExperimentKind kind) {
  adpbound::Config cfg = opts.config_path.empty()
                             ? adpbound::default_config(kind, opts.scale)
                             : adpbound::parse_config_file(opts.config_path);
  adpbound::ExperimentConfig ec = adpbound::load_experiment_config(cfg);
  ec.kind = kind;  // the subcommand wins over the config's kind field
  if (opts.seed >= 0) ec.seed = static_cast<std::uint64_t>(opts.seed);
  if (!opts.out_dir.empty()) ec.out_dir = opts.out_dir;
  return ec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-horizon decision-making experiments with certified ratio bounds"};
  app.require_subcommand(1);

  CommonOpts oracle_opts, lqg_opts, coverage_opts;
  std::string mdp_path;

  CLI::App* oracle = app.add_subcommand(
      "oracle-validate", "check certified bounds against exact solutions of random table MDPs");
  add_common(oracle, oracle_opts);
  oracle->add_option("--mdp", mdp_path, "also validate one instance loaded from a text file")
      ->check(CLI::ExistingFile);
  bool dump = false;
  oracle->add_flag("--dump-mdps", dump, "write every generated instance as a text file");

  CLI::App* lqg = app.add_subcommand(
      "lqg-bounds", "imitation-learned planner with certified cost lower bounds");
  add_common(lqg, lqg_opts);

  CLI::App* coverage = app.add_subcommand(
      "coverage-sweep", "greedy sensor placement bound comparison over decay rates");
  add_common(coverage, coverage_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle->parsed()) {
      auto ec = resolve(oracle_opts, adpbound::ExperimentKind::OracleValidate);
      ec.oracle.dump_instances = dump || ec.oracle.dump_instances;
      if (!mdp_path.empty()) {
        const adpbound::DiscreteMdp mdp = adpbound::load_mdp_file(mdp_path);
        const adpbound::ExactSolution sol = adpbound::solve_exact(mdp);
        std::cout << "loaded instance: " << mdp.n_states << " states, " << mdp.n_actions
                  << " actions, H=" << mdp.horizon << ", optimal value " << sol.v_star_total
                  << "\n";
      }
      return adpbound::run_experiment(ec, &std::cout) ? 0 : 1;
    }
    if (lqg->parsed()) {
      return adpbound::run_experiment(resolve(lqg_opts, adpbound::ExperimentKind::LqgBounds),
                                      &std::cout)
                 ? 0
                 : 1;
    }
    return adpbound::run_experiment(
               resolve(coverage_opts, adpbound::ExperimentKind::CoverageSweep), &std::cout)
               ? 0
               : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
