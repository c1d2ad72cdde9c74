#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "adpbound/bound.hpp"
#include "adpbound/lqg.hpp"
#include "adpbound/quadratic.hpp"

namespace adpbound {

/// What the per-record label measures.
///  - Evtg:  exact expected tail cost after the recorded (state, action).
///  - QZero: exact Q-value at the record's own stage.
///  - Delta: expected best next-stage Q minus the recorded pair's expected
///    tail — identically zero up to rounding when built from exact
///    quantities, and centered noise when the inner expectation is sampled.
enum class LabelKind { Evtg, QZero, Delta };

enum class DeltaLabelMode { ClosedForm, Sampled };

/// One per-stage block of training records. Row i of `inputs` stacks the
/// shifted state and the action (6 columns); labels align by row.
struct StageCluster {
  Matrix inputs;
  Vector labels;

  int size() const { return static_cast<int>(inputs.rows()); }
};

/// Expert rollouts partitioned by stage; all clusters have equal size.
/// With action_jitter = 0 every recorded action is exactly the gain
/// feedback action of the generating Riccati solution. A positive jitter
/// adds Gaussian exploration noise to the demonstrated actions (labels stay
/// exact at the perturbed pairs): expert-only pairs lie on a linear
/// state-action manifold that leaves the off-manifold coefficients of a
/// quadratic unidentifiable, so regressors meant to be minimized over the
/// action need jittered data. Evtg and QZero datasets carry one cluster per
/// stage; Delta datasets carry H-1 clusters, where cluster j holds stage-j
/// pairs labeled with the stage-(j+1) stepwise error.
struct DemoDataset {
  LabelKind kind = LabelKind::Evtg;
  std::vector<StageCluster> clusters;
  std::uint64_t seed = 0;
  int n_traj = 0;
  Mat4 init_spread = Mat4::Identity();
  Real action_jitter = 0;
};

/// Stepwise-error label at stage k (1..H-1) for the previous pair (z, u),
/// with the inner expectation in closed form. The expected next-stage
/// optimal Q is integrated as a quadratic of the successor state, a route
/// independent of the direct tail-cost formula it is compared against.
Real delta_label_closed(const RiccatiSolution& sol, const LqgModel& model, int k, const Vec4& z,
                        const Vec2& u);

struct SampledDelta {
  Real value = 0;
  Real std_error = 0;
};

/// Same label with the tail part of the inner expectation replaced by an
/// n_samples Monte Carlo average (the immediate-cost part stays exact).
SampledDelta delta_label_sampled(const RiccatiSolution& sol, const LqgModel& model, int k,
                                 const Vec4& z, const Vec2& u, int n_samples,
                                 std::uint64_t seed);

/// Roll n_traj expert trajectories (initial states drawn around the model's
/// shifted start with covariance init_spread, process noise on) and label
/// every record per `kind`. Trajectories follow the jittered actions when
/// action_jitter > 0. Deterministic given the seed.
DemoDataset generate_demos(const LqgModel& model, const RiccatiSolution& sol, int n_traj,
                           const Mat4& init_spread, LabelKind kind, std::uint64_t seed,
                           DeltaLabelMode delta_mode = DeltaLabelMode::ClosedForm,
                           int delta_samples = 1000, Real action_jitter = 0);

/// Fit one quadratic per cluster.
std::vector<QuadraticModel> fit_clusters(const DemoDataset& data, Real ridge);

/// Synthetic full-rank cluster: inputs drawn from the given box, labels from
/// the exact tail-cost quadratic of stage k. Identifies all 28 coefficients,
/// so it supports ridge-free fits (expert data does not: its actions are a
/// linear function of the state, which leaves the design rank-deficient).
StageCluster exact_label_cluster(const RiccatiSolution& sol, const LqgModel& model, int k,
                                 const Box& sample_box, int n, std::uint64_t seed);

/// Scheme whose tail models are the given per-stage quadratics. The policy
/// minimizes the induced stage Q in closed form when the control-space
/// curvature block is positive definite; otherwise it falls back to a
/// bounded pattern search over the stage's entry of `mu_boxes` (required in
/// that case; the stages forced onto the fallback are reported through
/// `fallback_stages`).
AdpScheme<Vec4, Vec2> build_scheme(std::vector<QuadraticModel> w_models, const LqgModel& model,
                                   std::optional<std::vector<Box>> mu_boxes = std::nullopt,
                                   std::vector<int>* fallback_stages = nullptr);

/// Package fitted stepwise-error surrogates with their per-stage search
/// boxes. Boxes span the empirical coordinate ranges of the dataset's
/// clusters, inflated about their centers by `margin`; a single-point range
/// in any coordinate is rejected.
StepwiseErrorModel build_error_model(const QuadraticModel& q0, std::vector<QuadraticModel> deltas,
                                     const DemoDataset& box_source, Real margin);

/// Per-stage search boxes alone (same construction as build_error_model).
std::vector<Box> empirical_boxes(const DemoDataset& data, Real margin);

/// CSV persistence: stage,z1,z2,z3,z4,mu1,mu2,label,label_kind.
void save_dataset_csv(std::ostream& os, const DemoDataset& data);
DemoDataset load_dataset_csv(std::istream& is);

}  // namespace adpbound
