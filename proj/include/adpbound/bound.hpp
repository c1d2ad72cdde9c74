#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "adpbound/adp_scheme.hpp"
#include "adpbound/discrete_mdp.hpp"
#include "adpbound/horizon.hpp"
#include "adpbound/quadratic.hpp"
#include "adpbound/types.hpp"

namespace adpbound {

/// Axis-aligned compact search region.
struct Box {
  Vector lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  void validate() const;
  Vector clamp(const Vector& v) const;
  Vector center() const { return 0.5 * (lo + hi); }
};

struct BoxOptimum {
  Real value = 0;
  Vector arg;
};

/// Multi-start pattern search over a box. Launches `starts` searches from a
/// deterministic candidate pool (box center, corners, seeded interior
/// points, caller-supplied extras) ranked by objective, then refines each
/// with Hooke-Jeeves coordinate moves until the step shrinks below 1e-12 of
/// the box width. Deterministic given (starts, seed).
BoxOptimum optimize_over_box(const std::function<Real(const Vector&)>& f, const Box& box,
                             Direction dir, int starts, std::uint64_t seed,
                             const std::vector<Vector>& extra_candidates = {});

/// Stepwise-error surrogates for a continuous-state scheme: one quadratic
/// per interior stage together with the compact region the error search is
/// restricted to. deltas[k-1] and boxes[k-1] belong to stage k for
/// k = 1..H-1; q0 is the trained stage-0 Q surrogate over (state, action).
struct StepwiseErrorModel {
  Direction direction = Direction::Minimize;
  int horizon = 0;
  QuadraticModel q0;
  std::vector<QuadraticModel> deltas;
  std::vector<Box> boxes;

  void validate() const;
};

/// Worst-case stepwise error at stage k over the stage's box (max for
/// maximize problems, min for minimize). The quadratic's stationary point
/// joins the candidate pool, so interior optima are found exactly.
Real epsilon_continuous(const StepwiseErrorModel& model, int k, int starts, std::uint64_t seed);

/// Exact stepwise error bound on a table MDP: enumerates every feasible
/// previous-stage pair, computes the expected best next-stage approximate
/// Q-value from the kernel, and takes the worst case. Valid for k = 1..H-1.
Real epsilon_discrete(const DiscreteMdp& mdp, const StageTables& w_hat, int k);

/// All interior-stage epsilons of a table MDP scheme.
std::vector<Real> epsilons_discrete(const DiscreteMdp& mdp, const StageTables& w_hat);

/// The certified side of the ratio bound. For maximize problems `bound` is
/// an upper bound on the optimal value and beta = v_hat / bound is a lower
/// bound on the achieved fraction; for minimize problems `bound` is a lower
/// bound on the optimal cost and beta = v_hat / bound >= v_hat / optimum.
struct BoundReport {
  Direction direction = Direction::Maximize;
  Real v_hat = 0;
  Real v_hat_stderr = 0;
  Real q_hat_0 = 0;
  std::vector<Real> epsilons;  // stages 1..H-1
  Real bound = 0;              // q_hat_0 + sum(epsilons), exact identity
  Real beta = 0;

  /// Flat CSV row: v_hat, v_hat_stderr, q_hat_0, eps_1..eps_{H-1}, bound, beta.
  std::string csv_header() const;
  std::string csv_row() const;
  std::string pretty() const;
};

/// Assemble the certified bound: evaluate the scheme's stage-0 value at its
/// own first action, add the per-stage error bounds, and estimate the
/// scheme's achieved value by Monte Carlo rollouts.
template <class State, class Action, class Noise>
BoundReport assemble_bound(const HorizonProblem<State, Action, Noise>& problem,
                           const AdpScheme<State, Action>& scheme,
                           const std::vector<Real>& epsilons, int n_rollouts,
                           std::uint64_t seed) {
  if (static_cast<int>(epsilons.size()) != problem.horizon - 1)
    throw std::invalid_argument("assemble_bound: need one epsilon per stage 1..H-1");
  if (!scheme.q_hat || !scheme.policy)
    throw std::invalid_argument("assemble_bound: scheme must define q_hat and policy");

  BoundReport rep;
  rep.direction = problem.direction;
  rep.epsilons = epsilons;

  const Action mu0 = scheme.policy(0, problem.initial_state);
  rep.q_hat_0 = scheme.q_hat(0, problem.initial_state, mu0);
  rep.bound = rep.q_hat_0;
  for (Real e : epsilons) rep.bound += e;

  const ValueEstimate est = estimate_value(problem, scheme.policy, n_rollouts, seed);
  rep.v_hat = est.mean;
  rep.v_hat_stderr = est.std_error;
  rep.beta = rep.v_hat / rep.bound;
  return rep;
}

/// Pathwise telescoping residual on a deterministic problem:
/// | sum_k [r_k + w_hat(k, x_k, a_k) - w_hat(k-1, x_{k-1}, a_{k-1})] - total |
/// with the k=0 back-term taken as zero. Vanishes whenever the stage-(H-1)
/// table equals the exact terminal expectation.
template <class State, class Action>
Real telescoping_check(const AdpScheme<State, Action>& scheme,
                       const Trajectory<State, Action>& traj) {
  const int h = static_cast<int>(traj.actions.size());
  Real acc = 0;
  for (int k = 0; k < h; ++k) {
    acc += traj.stage_rewards[k] + scheme.w_hat(k, traj.states[k], traj.actions[k]);
    if (k > 0) acc -= scheme.w_hat(k - 1, traj.states[k - 1], traj.actions[k - 1]);
  }
  return std::abs(acc - traj.total);
}

}  // namespace adpbound
