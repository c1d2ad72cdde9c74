#pragma once

#include <vector>

#include "adpbound/horizon.hpp"
#include "adpbound/quadratic.hpp"
#include "adpbound/types.hpp"

namespace adpbound {

/// Planar double-integrator steered toward a target state under quadratic
/// costs and additive Gaussian noise. State (x, xdot, y, ydot), control
/// (Fx, Fy); the dynamics matrices follow from the mass and the step
/// duration. All cost weights are diagonal; work happens in the shifted
/// coordinate z = x - x_target, whose drift vanishes when the target has
/// zero velocity.
struct LqgModel {
  Real mass = 1.0;
  Real dt = 0.1;
  int horizon = 10;

  Mat4 a_matrix;
  Mat42 b_matrix;
  Mat4 q_state;
  Mat2 r_control;
  Mat4 q_final;
  Mat4 noise_cov;
  Vec4 x_initial;
  Vec4 x_target;

  Vec4 z_initial() const { return x_initial - x_target; }
  Vec4 drift() const { return a_matrix * x_target - x_target; }

  Real stage_cost(const Vec4& z, const Vec2& u) const {
    return z.dot(q_state * z) + u.dot(r_control * u);
  }
  Real terminal_cost(const Vec4& z) const { return z.dot(q_final * z); }

  void validate() const;
};

/// Model with the given diagonals; A and B are filled from mass and dt.
LqgModel make_lqg_model(Real mass, Real dt, int horizon, const Vec4& x0, const Vec4& xf,
                        const Vec4& diag_q, const Vec2& diag_r, const Vec4& diag_qf,
                        const Vec4& diag_sigma);

/// The experiment configuration used throughout: unit mass, dt = 0.1,
/// H = 10, start at rest at the origin, park at (100, 100).
LqgModel default_lqg_model();

/// Backward Riccati pass: cost matrices, gains, and the accumulated noise
/// offsets. p_seq[k] and c_seq[k] are defined for k = 0..H, k_seq[k] for
/// k = 0..H-1, and s_seq[k] stores the control-space system matrix of the
/// k -> k+1 update.
struct RiccatiSolution {
  std::vector<Mat4> p_seq;
  std::vector<Mat24> k_seq;
  std::vector<Real> c_seq;
  std::vector<Mat2> s_seq;

  int horizon() const { return static_cast<int>(k_seq.size()); }
};

/// Solve the finite-horizon recursion. Each cost matrix is re-symmetrized
/// after its update so positive semidefiniteness checks stay meaningful
/// over long horizons. Throws if a control-space system matrix becomes
/// numerically singular (cannot happen with positive definite R).
RiccatiSolution riccati_solve(const LqgModel& model);

/// Optimal remaining cost from stage k at shifted state z:
/// z' P_k z + sum_{i>k} trace(noise_cov P_i).
Real value_to_go(const RiccatiSolution& sol, int k, const Vec4& z);

/// Exact expected tail cost conditioned on the previous stage's state and
/// action, evaluated in closed form for k = 1..H:
/// trace(P_k Sigma) + m' P_k m + c_k with m = A z + B u.
Real evtg_exact(const RiccatiSolution& sol, const LqgModel& model, int k, const Vec4& z_prev,
                const Vec2& u_prev);

/// Exact Q-value at stage k = 0..H-1: stage cost plus the k+1 tail.
Real q_exact(const RiccatiSolution& sol, const LqgModel& model, int k, const Vec4& z,
             const Vec2& u);

/// Gain-feedback optimal policy u = -K_k z.
Policy<Vec4, Vec2> riccati_policy(const RiccatiSolution& sol);

/// The model as a generic minimize-direction horizon problem over shifted
/// states. The action set is all of the control plane (state-independent).
HorizonProblem<Vec4, Vec2, Vec4> lqg_as_horizon_problem(const LqgModel& model);

/// The exact tail cost after (z, u) at stage k, as a quadratic over the
/// stacked vector (z, u): the coefficients a perfect regressor would
/// recover. Defined for k = 0..H-1 (tail starting at stage k+1).
QuadraticModel exact_evtg_quadratic(const RiccatiSolution& sol, const LqgModel& model, int k);

/// Draws from N(0, cov) for positive semidefinite cov, via the
/// eigendecomposition square root fixed at construction.
class GaussianSampler {
 public:
  explicit GaussianSampler(const Mat4& cov);
  Vec4 sample(std::mt19937_64& rng) const;

 private:
  Mat4 sqrt_cov_;
};

}  // namespace adpbound
