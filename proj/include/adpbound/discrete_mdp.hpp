#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "adpbound/horizon.hpp"
#include "adpbound/types.hpp"

namespace adpbound {

/// Finite tabular instantiation of a horizon problem, small enough to solve
/// exactly. Kernel rows are indexed by (state, action) flattened as
/// x * n_actions + a; every row over feasible pairs must sum to 1 within
/// 1e-12 and every (stage, state) must keep at least one feasible action.
struct DiscreteMdp {
  int n_states = 0;
  int n_actions = 0;
  int horizon = 0;
  Direction direction = Direction::Maximize;
  int initial_state = 0;

  std::vector<Matrix> kernel;     // per stage, (n_states*n_actions) x n_states
  std::vector<Matrix> reward;     // per stage, n_states x n_actions
  Vector terminal;                // n_states
  std::vector<BoolArray> feasible;  // per stage, n_states x n_actions

  int row(int x, int a) const { return x * n_actions + a; }

  /// Throws std::invalid_argument on any structural violation.
  void validate() const;

  /// Lowest-index feasible action at (k, x); -1 if none.
  int first_feasible(int k, int x) const;
};

/// Exact value/Q/EVTG tables from backward induction.
///
/// Index conventions: v_star[k] for k = 0..H (v_star[H] = terminal reward);
/// q_star[k] for k = 0..H-1; w_star[k] for k = 1..H holds the expected
/// value-to-go conditioned on the previous stage's (state, action), i.e.
/// w_star[k](x, a) averages v_star[k] over the stage-(k-1) kernel row.
/// Entries at infeasible (x, a) pairs are NaN.
struct ExactSolution {
  std::vector<Vector> v_star;           // H+1 tables
  std::vector<Matrix> q_star;           // H tables
  std::vector<Matrix> w_star;           // H+1 tables, index 0 unused
  std::vector<Eigen::VectorXi> policy;  // H tables, ties -> lowest action index
  Real v_star_total = 0;                // v_star[0](initial_state)
};

/// Backward induction over k = H-1..0. Ties in the per-stage opt break to
/// the lowest action index. Throws FeasibilityError naming (k, x) if a
/// reachable state has an empty feasible set.
ExactSolution solve_exact(const DiscreteMdp& mdp);

/// View the table MDP as a generic horizon problem. States and actions are
/// indices; the transition draws the successor by inverse CDF over the
/// kernel row, so a single uniform noise variate drives each step.
HorizonProblem<int, int, Real> to_horizon_problem(const DiscreteMdp& mdp);

/// Greedy-in-exact-Q policy induced by an ExactSolution.
Policy<int, int> exact_policy(const ExactSolution& sol);

/// Random instance generator used by oracle validation: rewards and
/// terminal values Uniform(0,1), kernel rows normalized Uniform(0,1) draws,
/// and per-stage feasible action sets that are random, non-empty and
/// state-independent (so optimal actions stay feasible along any path).
DiscreteMdp random_mdp(int n_states, int n_actions, int horizon,
                       Direction direction, std::uint64_t seed);

/// Plain-text tabular serialization.
///
/// Layout (whitespace separated): a header line
///   `n_states n_actions horizon max|min initial_state`
/// followed by the kernel (one row of n_states probabilities per (k, x, a)),
/// the stage rewards (one row of n_actions per (k, x)), the terminal rewards
/// (one row of n_states) and the feasibility tables (one 0/1 row of
/// n_actions per (k, x)). Doubles are written with enough digits to
/// round-trip exactly.
void save_mdp(std::ostream& os, const DiscreteMdp& mdp);
DiscreteMdp load_mdp(std::istream& is);
void save_mdp_file(const std::string& path, const DiscreteMdp& mdp);
DiscreteMdp load_mdp_file(const std::string& path);

}  // namespace adpbound
