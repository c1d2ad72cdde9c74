#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <utility>
#include <vector>

#include "adpbound/types.hpp"

namespace adpbound {

/// A finite-horizon stochastic control problem with H decision stages
/// (k = 0..H-1), stage rewards, a terminal reward and i.i.d. transition
/// noise. State, action and noise types are template parameters so the
/// same engine drives tabular problems, linear-Gaussian dynamics and
/// sequence-building problems.
///
/// Contract: stage indices handed to the callbacks lie in [0, H-1];
/// `terminal_reward` sees stage-H states only; `feasible(k, x, a)` must
/// accept every action a policy may emit at (k, x).
template <class State, class Action, class Noise>
struct HorizonProblem {
  int horizon = 0;
  Direction direction = Direction::Maximize;
  State initial_state{};

  std::function<State(int, const State&, const Action&, const Noise&)> transition;
  std::function<Noise(int, std::mt19937_64&)> noise_sampler;
  std::function<Real(int, const State&, const Action&)> stage_reward;
  std::function<Real(const State&)> terminal_reward;
  std::function<bool(int, const State&, const Action&)> feasible;  // optional, default all

  void validate() const {
    if (horizon < 1) throw std::invalid_argument("HorizonProblem: horizon must be >= 1");
    if (!transition || !noise_sampler || !stage_reward || !terminal_reward)
      throw std::invalid_argument("HorizonProblem: missing callback");
  }
};

/// One realized state/action/reward path under a policy.
template <class State, class Action>
struct Trajectory {
  std::vector<State> states;   // H+1 entries
  std::vector<Action> actions; // H entries
  std::vector<Real> stage_rewards;
  Real terminal_reward = 0;
  Real total = 0;
};

/// Deterministic stage-indexed action rule.
template <class State, class Action>
using Policy = std::function<Action(int, const State&)>;

/// Simulate one path under `policy`. Identical seeds give identical
/// trajectories. Throws FeasibilityError if the policy emits an action
/// rejected by the problem's feasibility predicate.
template <class State, class Action, class Noise>
Trajectory<State, Action> rollout(const HorizonProblem<State, Action, Noise>& problem,
                                  const Policy<State, Action>& policy,
                                  std::uint64_t seed) {
  problem.validate();
  auto rng = make_engine(seed);

  Trajectory<State, Action> traj;
  const int h = problem.horizon;
  traj.states.reserve(h + 1);
  traj.actions.reserve(h);
  traj.stage_rewards.reserve(h);

  State x = problem.initial_state;
  traj.states.push_back(x);
  Real running = 0;
  for (int k = 0; k < h; ++k) {
    Action a = policy(k, x);
    if (problem.feasible && !problem.feasible(k, x, a)) {
      std::ostringstream msg;
      msg << "rollout: policy returned infeasible action at stage " << k;
      throw FeasibilityError(msg.str());
    }
    const Real r = problem.stage_reward(k, x, a);
    const Noise w = problem.noise_sampler(k, rng);
    x = problem.transition(k, x, a, w);
    traj.actions.push_back(std::move(a));
    traj.stage_rewards.push_back(r);
    traj.states.push_back(x);
    running += r;
  }
  traj.terminal_reward = problem.terminal_reward(x);
  traj.total = running + traj.terminal_reward;
  return traj;
}

struct ValueEstimate {
  Real mean = 0;
  Real std_error = 0;
  int n = 0;
};

/// Empirical average of rollout totals over `n_rollouts` independent paths.
/// Per-rollout seeds are derived from `seed`, so estimates are reproducible
/// and independent of evaluation order.
template <class State, class Action, class Noise>
ValueEstimate estimate_value(const HorizonProblem<State, Action, Noise>& problem,
                             const Policy<State, Action>& policy,
                             int n_rollouts, std::uint64_t seed) {
  if (n_rollouts < 2) throw std::invalid_argument("estimate_value: n_rollouts must be >= 2");
  Real sum = 0, sumsq = 0;
  for (int i = 0; i < n_rollouts; ++i) {
    const Real total = rollout(problem, policy, derive_seed(seed, i)).total;
    sum += total;
    sumsq += total * total;
  }
  const Real mean = sum / n_rollouts;
  Real var = (sumsq - n_rollouts * mean * mean) / (n_rollouts - 1);
  if (var < 0) var = 0;  // rounding on zero-variance problems
  return ValueEstimate{mean, std::sqrt(var / n_rollouts), n_rollouts};
}

}  // namespace adpbound
