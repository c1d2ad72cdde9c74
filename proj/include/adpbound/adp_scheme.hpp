#pragma once

#include <memory>
#include <vector>

#include "adpbound/discrete_mdp.hpp"
#include "adpbound/types.hpp"

namespace adpbound {

/// A stage-indexed approximate expected-value-to-go family and what it
/// induces. `w_hat(k, x, a)` approximates the optimal value of the tail
/// starting after taking action a in state x at stage k (the exact object
/// it stands in for is the k+1 expected-value-to-go); q_hat adds the stage
/// reward, and the policy is greedy in q_hat over the feasible set.
///
/// Identity by construction: q_hat(k, x, a) - w_hat(k, x, a) equals the
/// stage reward exactly.
template <class State, class Action>
struct AdpScheme {
  int horizon = 0;
  std::function<Real(int, const State&, const Action&)> w_hat;
  std::function<Real(int, const State&, const Action&)> q_hat;
  Policy<State, Action> policy;
};

/// Per-stage tables for a discrete scheme: tables[k](x, a) holds the
/// approximate tail value after (x, a) at stage k, for k = 0..H-1.
using StageTables = std::vector<Matrix>;

/// Build the scheme induced by per-stage tail-value tables on a table MDP.
/// The policy enumerates feasible actions, breaking ties toward the lowest
/// index. The MDP is copied into the returned closures.
AdpScheme<int, int> make_discrete_scheme(const DiscreteMdp& mdp, StageTables tables);

/// Tables reproducing the exact solution (w_hat = exact tail values).
StageTables exact_tables(const ExactSolution& sol);

/// Greedy tables: zero at every interior stage, so the policy is myopic in
/// the stage reward. The stage H-1 table carries the exact one-step
/// terminal expectation, which the bound framework pins (the telescoping
/// decomposition needs the last tail value to be exact).
StageTables zero_tables(const DiscreteMdp& mdp);

/// Exact tables corrupted by centered Gaussian noise of scale sigma at the
/// interior stages; the stage H-1 table stays exact, as above.
StageTables noisy_tables(const ExactSolution& sol, Real sigma, std::uint64_t seed);

}  // namespace adpbound
