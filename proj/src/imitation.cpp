#include "adpbound/imitation.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace adpbound {

namespace {

Vector stack(const Vec4& z, const Vec2& u) {
  Vector v(6);
  v << z, u;
  return v;
}

const char* kind_name(LabelKind k) {
  switch (k) {
    case LabelKind::Evtg: return "evtg";
    case LabelKind::QZero: return "qzero";
    case LabelKind::Delta: return "delta";
  }
  return "?";
}

LabelKind kind_from_name(const std::string& s) {
  if (s == "evtg") return LabelKind::Evtg;
  if (s == "qzero") return LabelKind::QZero;
  if (s == "delta") return LabelKind::Delta;
  throw std::runtime_error("load_dataset_csv: unknown label kind '" + s + "'");
}

/// E[Q at stage k along the gain-feedback action | previous (z, u)] as a
/// Gaussian expectation of a quadratic in the successor state.
Real expected_next_optimal_q(const RiccatiSolution& sol, const LqgModel& model, int k,
                             const Vec4& z, const Vec2& u) {
  const Mat24& gain = sol.k_seq[k];
  const Mat4 closed_loop = model.a_matrix - model.b_matrix * gain;
  QuadraticModel next_q = QuadraticModel::zero(4);
  next_q.quad = model.q_state + gain.transpose() * model.r_control * gain +
                closed_loop.transpose() * sol.p_seq[k + 1] * closed_loop;
  next_q.quad = 0.5 * (next_q.quad + next_q.quad.transpose());
  next_q.constant = (sol.p_seq[k + 1] * model.noise_cov).trace() + sol.c_seq[k + 1];

  const Vec4 mean = model.a_matrix * z + model.b_matrix * u;
  return gaussian_expectation(next_q, mean, model.noise_cov);
}

}  // namespace

Real delta_label_closed(const RiccatiSolution& sol, const LqgModel& model, int k, const Vec4& z,
                        const Vec2& u) {
  if (k < 1 || k > sol.horizon() - 1)
    throw std::out_of_range("delta_label_closed: stage must lie in 1..H-1");
  return expected_next_optimal_q(sol, model, k, z, u) - evtg_exact(sol, model, k, z, u);
}

SampledDelta delta_label_sampled(const RiccatiSolution& sol, const LqgModel& model, int k,
                                 const Vec4& z, const Vec2& u, int n_samples,
                                 std::uint64_t seed) {
  if (k < 1 || k > sol.horizon() - 1)
    throw std::out_of_range("delta_label_sampled: stage must lie in 1..H-1");
  if (n_samples < 2) throw std::invalid_argument("delta_label_sampled: need n_samples >= 2");

  const Mat24& gain = sol.k_seq[k];
  const Vec4 mean = model.a_matrix * z + model.b_matrix * u;

  // Immediate-cost part is exact.
  QuadraticModel stage_cost_q = QuadraticModel::zero(4);
  stage_cost_q.quad = model.q_state + gain.transpose() * model.r_control * gain;
  const Real exact_cost_part = gaussian_expectation(stage_cost_q, mean, model.noise_cov);

  // Tail part by Monte Carlo over successor states.
  GaussianSampler sampler(model.noise_cov);
  auto rng = make_engine(seed);
  Real sum = 0, sumsq = 0;
  for (int i = 0; i < n_samples; ++i) {
    const Vec4 next = mean + sampler.sample(rng);
    const Real w = evtg_exact(sol, model, k + 1, next, -(gain * next));
    sum += w;
    sumsq += w * w;
  }
  const Real mc_mean = sum / n_samples;
  Real var = (sumsq - n_samples * mc_mean * mc_mean) / (n_samples - 1);
  if (var < 0) var = 0;

  SampledDelta out;
  out.value = exact_cost_part + mc_mean - evtg_exact(sol, model, k, z, u);
  out.std_error = std::sqrt(var / n_samples);
  return out;
}

DemoDataset generate_demos(const LqgModel& model, const RiccatiSolution& sol, int n_traj,
                           const Mat4& init_spread, LabelKind kind, std::uint64_t seed,
                           DeltaLabelMode delta_mode, int delta_samples, Real action_jitter) {
  if (n_traj < 1) throw std::invalid_argument("generate_demos: n_traj must be >= 1");
  if (action_jitter < 0) throw std::invalid_argument("generate_demos: jitter must be >= 0");
  const int h = model.horizon;
  const int n_clusters = kind == LabelKind::Delta ? h - 1 : h;
  if (n_clusters < 1) throw std::invalid_argument("generate_demos: horizon too short for kind");

  DemoDataset data;
  data.kind = kind;
  data.seed = seed;
  data.n_traj = n_traj;
  data.init_spread = init_spread;
  data.action_jitter = action_jitter;
  data.clusters.assign(n_clusters, StageCluster{});
  for (auto& c : data.clusters) {
    c.inputs.resize(n_traj, 6);
    c.labels.resize(n_traj);
  }

  GaussianSampler init_sampler(init_spread);
  GaussianSampler noise_sampler(model.noise_cov);

  for (int t = 0; t < n_traj; ++t) {
    auto rng = make_engine(derive_seed(seed, t));
    std::normal_distribution<Real> jitter(0.0, 1.0);
    Vec4 z = model.z_initial() + init_sampler.sample(rng);
    for (int k = 0; k < h; ++k) {
      Vec2 u = -(sol.k_seq[k] * z);
      if (action_jitter > 0) u += action_jitter * Vec2(jitter(rng), jitter(rng));
      if (k < n_clusters) {
        data.clusters[k].inputs.row(t) = stack(z, u).transpose();
        switch (kind) {
          case LabelKind::Evtg:
            data.clusters[k].labels(t) = evtg_exact(sol, model, k + 1, z, u);
            break;
          case LabelKind::QZero:
            data.clusters[k].labels(t) = q_exact(sol, model, k, z, u);
            break;
          case LabelKind::Delta:
            data.clusters[k].labels(t) =
                delta_mode == DeltaLabelMode::ClosedForm
                    ? delta_label_closed(sol, model, k + 1, z, u)
                    : delta_label_sampled(sol, model, k + 1, z, u, delta_samples,
                                          derive_seed(derive_seed(seed, t), 1000 + k))
                          .value;
            break;
        }
      }
      z = model.a_matrix * z + model.b_matrix * u + noise_sampler.sample(rng);
    }
  }
  return data;
}

std::vector<QuadraticModel> fit_clusters(const DemoDataset& data, Real ridge) {
  std::vector<QuadraticModel> models;
  models.reserve(data.clusters.size());
  for (const auto& c : data.clusters) models.push_back(fit_quadratic(c.inputs, c.labels, ridge).model);
  return models;
}

StageCluster exact_label_cluster(const RiccatiSolution& sol, const LqgModel& model, int k,
                                 const Box& sample_box, int n, std::uint64_t seed) {
  if (sample_box.dim() != 6)
    throw std::invalid_argument("exact_label_cluster: box must cover (state, action)");
  sample_box.validate();
  auto rng = make_engine(seed);
  std::uniform_real_distribution<Real> unif(0.0, 1.0);

  StageCluster c;
  c.inputs.resize(n, 6);
  c.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    Vector v(6);
    for (int j = 0; j < 6; ++j)
      v(j) = sample_box.lo(j) + unif(rng) * (sample_box.hi(j) - sample_box.lo(j));
    c.inputs.row(i) = v.transpose();
    c.labels(i) = evtg_exact(sol, model, k + 1, v.head<4>(), v.tail<2>());
  }
  return c;
}

AdpScheme<Vec4, Vec2> build_scheme(std::vector<QuadraticModel> w_models, const LqgModel& model,
                                   std::optional<std::vector<Box>> mu_boxes,
                                   std::vector<int>* fallback_stages) {
  if (static_cast<int>(w_models.size()) != model.horizon)
    throw std::invalid_argument("build_scheme: need one tail model per stage");
  for (const auto& m : w_models)
    if (m.dim() != 6) throw std::invalid_argument("build_scheme: tail models must act on (state, action)");
  if (mu_boxes && static_cast<int>(mu_boxes->size()) != model.horizon)
    throw std::invalid_argument("build_scheme: need one search box per stage");

  struct StagePolicy {
    bool closed_form = false;
    Mat2 chol_l = Mat2::Zero();  // Cholesky factor of R + Muu when PD
    Eigen::Matrix<Real, 2, 4> cross = Eigen::Matrix<Real, 2, 4>::Zero();
    Vec2 lin = Vec2::Zero();
  };

  struct Data {
    LqgModel model;
    std::vector<QuadraticModel> w;
    std::vector<StagePolicy> stage;
    std::optional<std::vector<Box>> mu_boxes;
  };
  auto d = std::make_shared<Data>();
  d->model = model;
  d->w = std::move(w_models);
  d->mu_boxes = std::move(mu_boxes);
  d->stage.resize(model.horizon);

  if (fallback_stages) fallback_stages->clear();
  for (int k = 0; k < model.horizon; ++k) {
    const QuadraticModel& w = d->w[k];
    const Mat2 muu = model.r_control + w.quad.bottomRightCorner<2, 2>();
    Eigen::LLT<Mat2> llt(muu);
    StagePolicy sp;
    if (llt.info() == Eigen::Success) {
      sp.closed_form = true;
      sp.chol_l = llt.matrixL();
      sp.cross = w.quad.bottomLeftCorner<2, 4>();
      sp.lin = w.lin.tail<2>();
    } else {
      if (fallback_stages) fallback_stages->push_back(k);
      if (!d->mu_boxes)
        throw std::invalid_argument(
            "build_scheme: control curvature block not positive definite at stage " +
            std::to_string(k) + " and no fallback search box given");
    }
    d->stage[k] = sp;
  }

  AdpScheme<Vec4, Vec2> scheme;
  scheme.horizon = model.horizon;
  scheme.w_hat = [d](int k, const Vec4& z, const Vec2& u) { return d->w[k](stack(z, u)); };
  scheme.q_hat = [d](int k, const Vec4& z, const Vec2& u) {
    return d->model.stage_cost(z, u) + d->w[k](stack(z, u));
  };
  scheme.policy = [d](int k, const Vec4& z) -> Vec2 {
    const StagePolicy& sp = d->stage[k];
    if (sp.closed_form) {
      // Stationarity of u'(R+Muu)u + (2 Muz z + b_u)'u.
      const Vec2 rhs = -(sp.cross * z) - 0.5 * sp.lin;
      return sp.chol_l.triangularView<Eigen::Lower>()
          .transpose()
          .solve(sp.chol_l.triangularView<Eigen::Lower>().solve(rhs));
    }
    auto objective = [&](const Vector& u2) {
      const Vec2 u(u2(0), u2(1));
      return d->model.stage_cost(z, u) + d->w[k](stack(z, u));
    };
    return optimize_over_box(objective, (*d->mu_boxes)[k], Direction::Minimize, 8, 0x5EED).arg;
  };
  return scheme;
}

std::vector<Box> empirical_boxes(const DemoDataset& data, Real margin) {
  if (margin < 1.0) throw std::invalid_argument("empirical_boxes: margin must be >= 1");
  std::vector<Box> boxes;
  boxes.reserve(data.clusters.size());
  for (std::size_t j = 0; j < data.clusters.size(); ++j) {
    const Matrix& in = data.clusters[j].inputs;
    Box b;
    b.lo = in.colwise().minCoeff().transpose();
    b.hi = in.colwise().maxCoeff().transpose();
    for (int i = 0; i < b.lo.size(); ++i) {
      if (!(b.lo(i) < b.hi(i)))
        throw std::invalid_argument(
            "empirical_boxes: degenerate coordinate range in cluster " + std::to_string(j) +
            "; need more than one distinct trajectory");
      const Real center = 0.5 * (b.lo(i) + b.hi(i));
      const Real half = 0.5 * (b.hi(i) - b.lo(i)) * margin;
      b.lo(i) = center - half;
      b.hi(i) = center + half;
    }
    boxes.push_back(b);
  }
  return boxes;
}

StepwiseErrorModel build_error_model(const QuadraticModel& q0, std::vector<QuadraticModel> deltas,
                                     const DemoDataset& box_source, Real margin) {
  if (box_source.clusters.empty())
    throw std::invalid_argument("build_error_model: empty dataset");
  const std::size_t need = deltas.size();
  std::vector<Box> all = empirical_boxes(box_source, margin);
  if (all.size() < need)
    throw std::invalid_argument("build_error_model: dataset has fewer clusters than deltas");

  StepwiseErrorModel m;
  m.direction = Direction::Minimize;
  m.horizon = static_cast<int>(need) + 1;
  m.q0 = q0;
  m.deltas = std::move(deltas);
  m.boxes.assign(all.begin(), all.begin() + need);
  m.validate();
  return m;
}

void save_dataset_csv(std::ostream& os, const DemoDataset& data) {
  os << "stage,z1,z2,z3,z4,mu1,mu2,label,label_kind\n";
  char buf[40];
  auto put = [&](Real v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
  };
  for (std::size_t k = 0; k < data.clusters.size(); ++k) {
    const auto& c = data.clusters[k];
    for (int i = 0; i < c.size(); ++i) {
      os << k;
      for (int j = 0; j < 6; ++j) {
        os << ',';
        put(c.inputs(i, j));
      }
      os << ',';
      put(c.labels(i));
      os << ',' << kind_name(data.kind) << '\n';
    }
  }
}

DemoDataset load_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("load_dataset_csv: empty input");

  struct Row {
    int stage;
    Vector v;
    Real label;
    LabelKind kind;
  };
  std::vector<Row> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    Row r;
    r.v.resize(6);
    std::getline(ls, cell, ',');
    r.stage = std::stoi(cell);
    for (int j = 0; j < 6; ++j) {
      std::getline(ls, cell, ',');
      r.v(j) = std::stod(cell);
    }
    std::getline(ls, cell, ',');
    r.label = std::stod(cell);
    std::getline(ls, cell, ',');
    r.kind = kind_from_name(cell);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw std::runtime_error("load_dataset_csv: no records");

  int max_stage = 0;
  for (const Row& r : rows) max_stage = std::max(max_stage, r.stage);
  DemoDataset data;
  data.kind = rows.front().kind;
  data.clusters.assign(max_stage + 1, StageCluster{});
  std::vector<std::vector<int>> per_stage(max_stage + 1);
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) per_stage[rows[i].stage].push_back(i);
  for (int k = 0; k <= max_stage; ++k) {
    auto& c = data.clusters[k];
    c.inputs.resize(per_stage[k].size(), 6);
    c.labels.resize(per_stage[k].size());
    for (std::size_t i = 0; i < per_stage[k].size(); ++i) {
      c.inputs.row(i) = rows[per_stage[k][i]].v.transpose();
      c.labels(i) = rows[per_stage[k][i]].label;
    }
  }
  data.n_traj = data.clusters.front().size();
  return data;
}

}  // namespace adpbound
