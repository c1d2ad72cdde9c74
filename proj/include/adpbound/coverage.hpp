#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "adpbound/submodular.hpp"
#include "adpbound/types.hpp"

namespace adpbound {

/// Unit-spaced lattice mission space with a per-point event density, a
/// feasible placement set, and an exponential-decay detection model whose
/// rate grows linearly with the placement step: lambda_k = lambda0 +
/// zeta * t_k with t_k = time_step * k. Homogeneous scenarios (zeta = 0)
/// reduce to a set problem; nonhomogeneous ones are order-sensitive strings.
struct MissionScenario {
  int width = 50;
  int height = 40;
  Matrix density;                    // height x width, row y / column x
  std::vector<int> feasible_points;  // flattened indices y * width + x
  int horizon = 5;
  Real lambda0 = 0.1;
  Real zeta = 0.1;
  Real time_step = 0.1;

  SubmodMode mode() const { return zeta == 0 ? SubmodMode::Set : SubmodMode::String; }
  Real lambda_at(int k) const { return lambda0 + zeta * time_step * k; }
  Vec2 point(int flat) const {
    return Vec2(static_cast<Real>(flat % width), static_cast<Real>(flat / width));
  }

  void validate() const;
};

/// Probability that an event at `x` is detected by the given placements,
/// each a (location, placement step) pair: one minus the product of the
/// per-sensor miss probabilities.
Real detection_prob(const MissionScenario& scenario, const Vec2& x,
                    const std::vector<std::pair<Vec2, int>>& placements);

/// Density-weighted total detection probability over the lattice, exposed
/// as a submodular objective whose ground set indexes `feasible_points`.
/// Distances are precomputed once; evaluation cost is one vectorized
/// exponential pass per placed sensor.
SubmodObjective coverage_objective(const MissionScenario& scenario);

/// The 50 x 40 four-quadrant benchmark scenario: high event densities
/// Unif(0.5, 0.8) in the top-right and bottom-left quadrants, low densities
/// Unif(0.1, 0.3) elsewhere, every lattice point feasible, five sensors,
/// zeta = 0.1 and t_k = 0.1 k. Deterministic in the seed. Callers adjust
/// lambda0 / zeta for sweeps.
MissionScenario build_benchmark_scenario(std::uint64_t seed);

/// Keep only lattice points whose coordinates are multiples of `stride`.
void subsample_feasible(MissionScenario& scenario, int stride);

struct SweepRow {
  SubmodMode mode = SubmodMode::Set;
  Real lambda0 = 0;
  Real zeta = 0;
  int horizon = 0;
  Real f_greedy = 0;
  Real v_bar = 0;
  Real beta0 = 0;
  Real beta1 = 0;
  Real beta2 = 0;
  std::optional<Real> f_opt;  // present when brute force ran
};

/// One greedy run and bound triple per grid value of the initial decay
/// rate. Homogeneous sweeps force zeta = 0; nonhomogeneous sweeps keep the
/// scenario's zeta. With `with_brute_force` the exact optimum is added
/// (subject to the enumeration budget of brute_force_opt).
std::vector<SweepRow> sweep_bounds(const MissionScenario& scenario,
                                   const std::vector<Real>& lambda0_grid, SubmodMode mode,
                                   bool with_brute_force = false);

/// CSV: mode,lambda0,zeta,H,f_greedy,v_bar,beta0,beta1,beta2,f_opt.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Plain-text grid file: header `width height H lambda0 zeta`, then
/// `height` density rows of `width` values (row y = 0 first).
void save_scenario(std::ostream& os, const MissionScenario& scenario);
MissionScenario load_scenario(std::istream& is);

}  // namespace adpbound
