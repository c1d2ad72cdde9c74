#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adpbound/adp_scheme.hpp"
#include "adpbound/horizon.hpp"
#include "adpbound/types.hpp"

namespace adpbound {

/// Set mode: element order is irrelevant and repeats are forbidden.
/// String mode: order matters and elements may repeat.
enum class SubmodMode { Set, String };

inline const char* to_string(SubmodMode m) { return m == SubmodMode::Set ? "set" : "string"; }

/// A monotone (string) submodular maximization instance: pick up to
/// `horizon` elements of a ground set to maximize a non-negative function of
/// the chosen prefix. `evaluate` sees the prefix in selection order and must
/// return 0 on the empty prefix.
struct SubmodObjective {
  SubmodMode mode = SubmodMode::Set;
  int ground_size = 0;
  int horizon = 0;
  std::function<Real(const std::vector<int>&)> evaluate;

  void validate() const;
  bool element_allowed(const std::vector<int>& prefix, int s) const;
};

/// Trace of one greedy run: the chosen sequence, the objective after each
/// step, the per-step gains, and the value of every singleton as evaluated
/// at the first step.
struct GreedyRun {
  std::vector<int> sequence;
  std::vector<Real> values;
  std::vector<Real> marginals;
  Vector singleton_values;
};

/// Pick the element with the largest marginal gain at each step; ties break
/// to the lowest element index. Set mode removes chosen elements from later
/// steps.
GreedyRun greedy(const SubmodObjective& obj);

struct BruteForceResult {
  std::vector<int> sequence;
  Real value = 0;
};

/// Exact optimum by enumeration (subsets in set mode, all strings in string
/// mode); ties resolve to the lexicographically smallest sequence. Refuses
/// with the enumeration count when it exceeds `max_evaluations`.
BruteForceResult brute_force_opt(const SubmodObjective& obj,
                                 std::uint64_t max_evaluations = 2000000);

/// The classical greedy guarantee 1 - e^{-1}.
Real bound_classic();

/// Greedy-curvature bound: worst ratio of a singleton's value to its
/// marginal gain along the greedy run (over steps 1..H-1 and elements with
/// strictly positive gain), mapped through beta = 1/H + (H-1)/(gamma H).
/// Steps with no positive-gain element are skipped; all-skipped is an error.
Real bound_greedy_curvature(const GreedyRun& run, const SubmodObjective& obj);

/// Certified cap on the optimal value from first-step singleton values: the
/// sum of the H largest over distinct elements in set mode, H times the
/// largest in string mode.
Real top_h_value(const GreedyRun& run, const SubmodObjective& obj);

/// Ratio bound f(greedy) / top_h_value. Errors when every singleton is zero.
Real bound_top_h(const GreedyRun& run, const SubmodObjective& obj);

/// Per-stage error bounds (stages 1..H-1) that assemble, together with the
/// first greedy singleton, to exactly top_h_value: the k+1-th largest
/// singleton in set mode, the largest singleton in string mode. These are
/// valid stepwise bounds by submodularity (a gain never exceeds the
/// element's singleton value).
std::vector<Real> submodular_epsilons(const GreedyRun& run, const SubmodObjective& obj);

struct SubmodularCheck {
  bool passed = true;
  int n_checked = 0;
  std::string counterexample;  // empty when passed
};

/// Spot-check null-on-null, monotonicity and diminishing marginal gains on
/// sampled prefix chains; exhaustive over all chains when the instance is
/// tiny (ground size <= 8, horizon <= 3).
SubmodularCheck verify_submodular(const SubmodObjective& obj, int n_samples, std::uint64_t seed);

/// The instance as a deterministic maximize-direction horizon problem whose
/// state is the chosen prefix and whose stage reward is the marginal gain.
HorizonProblem<std::vector<int>, int, int> as_horizon_problem(const SubmodObjective& obj);

/// The greedy algorithm as a scheme on the prefix problem: zero tail
/// approximation, so the policy maximizes the immediate gain. Tie-breaking
/// matches greedy().
AdpScheme<std::vector<int>, int> zero_tail_scheme(const SubmodObjective& obj);

}  // namespace adpbound
