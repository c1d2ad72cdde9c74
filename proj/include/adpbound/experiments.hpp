#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adpbound/config.hpp"
#include "adpbound/coverage.hpp"
#include "adpbound/lqg.hpp"
#include "adpbound/types.hpp"

namespace adpbound {

enum class ExperimentKind { OracleValidate, LqgBounds, CoverageSweep };

struct OracleParams {
  int n_instances = 100;
  int max_states = 6;
  int max_actions = 4;
  int max_horizon = 5;
  int n_rollouts = 200;
  std::vector<Real> noise_scales = {0.01, 0.1, 1.0};
  bool dump_instances = false;
};

struct PipelineParams {
  int n_traj = 10000;
  int n_rollouts = 500;
  int n_test_states = 100;
  int multistart = 32;
  Real ridge = 1e-8;
  Real box_margin = 1.25;
  Real action_jitter = 10.0;  // exploration noise on demonstrated actions
  bool sampled_deltas = true;  // inner expectation of error labels by sampling
  int delta_samples = 1000;
  bool exact_scheme = false;  // analytic tail coefficients, zero error models
};

struct CoverageParams {
  int width = 50;
  int height = 40;
  int horizon = 5;
  Real lambda0_min = 0.1;
  Real lambda0_max = 1.5;
  int lambda0_points = 15;
  Real zeta = 0.1;
  int stride = 1;
  bool brute_force = false;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::OracleValidate;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  OracleParams oracle;
  LqgModel lqg = default_lqg_model();
  PipelineParams pipeline;
  CoverageParams coverage;
};

/// Interpret a parsed config. Unknown kinds and out-of-range parameters
/// fail with the offending line. Sections: [experiment] (kind, seed, out),
/// [oracle], [lqg], [pipeline], [coverage]; absent keys keep defaults.
ExperimentConfig load_experiment_config(const Config& config);

/// The config of an experiment kind at a scale preset (ci | desk | paper).
Config default_config(ExperimentKind kind, const std::string& scale);

/// Results carry everything the asserted properties need, so callers (CLI,
/// acceptance suite) can gate exit codes without re-parsing the CSVs.

struct OracleCase {
  int instance = 0;
  Direction direction = Direction::Maximize;
  int n_states = 0, n_actions = 0, horizon = 0;
  std::string scheme;
  Real v_star = 0, q_hat_0 = 0, bound = 0;
  Real slack = 0;  // validity margin, >= 0 when the bound certifies v_star
  bool valid = false;
};

struct OracleValidationResult {
  std::vector<OracleCase> cases;
  int n_valid = 0;
  Real worst_slack = 0;
  Real max_exact_gap = 0;  // worst |bound - v_star| among exact schemes
  bool all_valid = false;
};

OracleValidationResult run_oracle_validate(const ExperimentConfig& config, std::ostream* log);

struct LqgBoundsRow {
  int test_id = 0;
  Real v_star = 0;
  Real v_hat = 0;
  Real v_hat_stderr = 0;
  Real v_lower = 0;
  Real true_ratio = 0;  // v_hat / v_star
  Real est_ratio = 0;   // v_hat / v_lower
};

struct LqgBoundsResult {
  std::vector<LqgBoundsRow> rows;
  std::vector<Real> epsilons;
  Real mean_true_ratio = 0;
  Real mean_est_ratio = 0;
  int lower_bound_violations = 0;  // rows with v_lower > v_star
  int value_order_violations = 0;  // rows with v_star > v_hat + 3 stderr
  std::vector<int> fallback_stages;
};

LqgBoundsResult run_lqg_bounds(const ExperimentConfig& config, std::ostream* log);

struct CoverageSweepResult {
  std::vector<SweepRow> set_rows;
  std::vector<SweepRow> string_rows;
  bool dominance_ok = false;   // beta2 >= beta1 on every row
  bool beta2_in_range = false; // beta2 in (0, 1] on every row
};

CoverageSweepResult run_coverage_sweep(const ExperimentConfig& config, std::ostream* log);

/// Run the configured experiment, write its report files under
/// config.out_dir, and return whether every asserted property held.
bool run_experiment(const ExperimentConfig& config, std::ostream* log);

}  // namespace adpbound
