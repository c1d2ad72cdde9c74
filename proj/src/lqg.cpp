#include "adpbound/lqg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <memory>
#include <stdexcept>

namespace adpbound {

void LqgModel::validate() const {
  if (horizon < 1) throw std::invalid_argument("LqgModel: horizon must be >= 1");
  if (mass <= 0 || dt <= 0) throw std::invalid_argument("LqgModel: mass and dt must be positive");
  auto psd_diag = [](const Mat4& m, const char* name) {
    if ((m.diagonal().array() < 0).any())
      throw std::invalid_argument(std::string("LqgModel: ") + name + " must have non-negative diagonal");
  };
  psd_diag(q_state, "q_state");
  psd_diag(q_final, "q_final");
  psd_diag(noise_cov, "noise_cov");
  if ((r_control.diagonal().array() <= 0).any())
    throw std::invalid_argument("LqgModel: r_control must have positive diagonal");
}

LqgModel make_lqg_model(Real mass, Real dt, int horizon, const Vec4& x0, const Vec4& xf,
                        const Vec4& diag_q, const Vec2& diag_r, const Vec4& diag_qf,
                        const Vec4& diag_sigma) {
  LqgModel m;
  m.mass = mass;
  m.dt = dt;
  m.horizon = horizon;
  m.a_matrix << 1, dt, 0, 0,
                0, 1, 0, 0,
                0, 0, 1, dt,
                0, 0, 0, 1;
  const Real half = dt * dt / (2 * mass);
  m.b_matrix << half, 0,
                dt / mass, 0,
                0, half,
                0, dt / mass;
  m.q_state = diag_q.asDiagonal();
  m.r_control = diag_r.asDiagonal();
  m.q_final = diag_qf.asDiagonal();
  m.noise_cov = diag_sigma.asDiagonal();
  m.x_initial = x0;
  m.x_target = xf;
  m.validate();
  return m;
}

LqgModel default_lqg_model() {
  return make_lqg_model(1.0, 0.1, 10,
                        Vec4(0, 0, 0, 0), Vec4(100, 0, 100, 0),
                        Vec4(10, 1, 10, 1), Vec2(0.5, 0.5),
                        Vec4(500, 1000, 500, 1000), Vec4(5, 2, 5, 2));
}

RiccatiSolution riccati_solve(const LqgModel& model) {
  model.validate();
  const int h = model.horizon;
  const Mat4& a = model.a_matrix;
  const Mat42& b = model.b_matrix;

  RiccatiSolution sol;
  sol.p_seq.assign(h + 1, Mat4::Zero());
  sol.k_seq.assign(h, Mat24::Zero());
  sol.c_seq.assign(h + 1, 0.0);
  sol.s_seq.assign(h, Mat2::Zero());

  sol.p_seq[h] = model.q_final;
  sol.c_seq[h] = 0.0;
  for (int k = h - 1; k >= 0; --k) {
    const Mat4& p_next = sol.p_seq[k + 1];
    const Mat2 s = model.r_control + b.transpose() * p_next * b;
    Eigen::LDLT<Mat2> ldlt(s);
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-14)
      throw std::runtime_error("riccati_solve: control-space system matrix is numerically singular");
    const Mat24 gain = ldlt.solve(b.transpose() * p_next * a);
    Mat4 p = model.q_state + a.transpose() * p_next * a -
             a.transpose() * p_next * b * gain;
    p = 0.5 * (p + p.transpose());  // suppress asymmetry drift
    sol.p_seq[k] = p;
    sol.k_seq[k] = gain;
    sol.s_seq[k] = s;
    sol.c_seq[k] = sol.c_seq[k + 1] + (model.noise_cov * p_next).trace();
  }
  return sol;
}

Real value_to_go(const RiccatiSolution& sol, int k, const Vec4& z) {
  if (k < 0 || k > sol.horizon()) throw std::out_of_range("value_to_go: stage out of range");
  return z.dot(sol.p_seq[k] * z) + sol.c_seq[k];
}

Real evtg_exact(const RiccatiSolution& sol, const LqgModel& model, int k, const Vec4& z_prev,
                const Vec2& u_prev) {
  if (k < 1 || k > sol.horizon()) throw std::out_of_range("evtg_exact: stage out of range");
  const Vec4 mean = model.a_matrix * z_prev + model.b_matrix * u_prev;
  return (sol.p_seq[k] * model.noise_cov).trace() + mean.dot(sol.p_seq[k] * mean) + sol.c_seq[k];
}

Real q_exact(const RiccatiSolution& sol, const LqgModel& model, int k, const Vec4& z,
             const Vec2& u) {
  if (k < 0 || k > sol.horizon() - 1) throw std::out_of_range("q_exact: stage out of range");
  return model.stage_cost(z, u) + evtg_exact(sol, model, k + 1, z, u);
}

Policy<Vec4, Vec2> riccati_policy(const RiccatiSolution& sol) {
  return [&sol](int k, const Vec4& z) -> Vec2 { return -(sol.k_seq[k] * z); };
}

HorizonProblem<Vec4, Vec2, Vec4> lqg_as_horizon_problem(const LqgModel& model) {
  model.validate();
  auto m = std::make_shared<LqgModel>(model);
  auto sampler = std::make_shared<GaussianSampler>(model.noise_cov);

  HorizonProblem<Vec4, Vec2, Vec4> p;
  p.horizon = model.horizon;
  p.direction = Direction::Minimize;
  p.initial_state = model.z_initial();
  p.transition = [m](int, const Vec4& z, const Vec2& u, const Vec4& w) -> Vec4 {
    return m->a_matrix * z + m->b_matrix * u + w;
  };
  p.noise_sampler = [sampler](int, std::mt19937_64& rng) { return sampler->sample(rng); };
  p.stage_reward = [m](int, const Vec4& z, const Vec2& u) { return m->stage_cost(z, u); };
  p.terminal_reward = [m](const Vec4& z) { return m->terminal_cost(z); };
  p.feasible = nullptr;  // all of the control plane
  return p;
}

QuadraticModel exact_evtg_quadratic(const RiccatiSolution& sol, const LqgModel& model, int k) {
  if (k < 0 || k > sol.horizon() - 1)
    throw std::out_of_range("exact_evtg_quadratic: stage out of range");
  Eigen::Matrix<Real, 4, 6> ab;
  ab << model.a_matrix, model.b_matrix;

  QuadraticModel q = QuadraticModel::zero(6);
  q.quad = ab.transpose() * sol.p_seq[k + 1] * ab;
  q.quad = 0.5 * (q.quad + q.quad.transpose());
  q.constant = (sol.p_seq[k + 1] * model.noise_cov).trace() + sol.c_seq[k + 1];
  return q;
}

GaussianSampler::GaussianSampler(const Mat4& cov) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(cov);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("GaussianSampler: eigendecomposition failed");
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("GaussianSampler: covariance is not positive semidefinite");
  sqrt_cov_ = es.eigenvectors() *
              es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
              es.eigenvectors().transpose();
}

Vec4 GaussianSampler::sample(std::mt19937_64& rng) const {
  std::normal_distribution<Real> normal(0.0, 1.0);
  Vec4 g;
  for (int i = 0; i < 4; ++i) g(i) = normal(rng);
  return sqrt_cov_ * g;
}

}  // namespace adpbound
