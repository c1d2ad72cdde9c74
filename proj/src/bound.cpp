#include "adpbound/bound.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace adpbound {

void Box::validate() const {
  if (lo.size() != hi.size() || lo.size() == 0)
    throw std::invalid_argument("Box: bound size mismatch");
  for (int i = 0; i < lo.size(); ++i)
    if (!(lo(i) < hi(i)))
      throw std::invalid_argument("Box: degenerate interval in coordinate " + std::to_string(i));
}

Vector Box::clamp(const Vector& v) const {
  return v.cwiseMax(lo).cwiseMin(hi);
}

namespace {

constexpr Real kStepFloor = 1e-12;
constexpr int kMaxEvalsPerStart = 100000;

struct Search {
  const std::function<Real(const Vector&)>& f;
  const Box& box;
  Direction dir;
  int evals = 0;

  Real eval(const Vector& v) {
    ++evals;
    const Real y = f(v);
    if (!std::isfinite(y))
      throw std::runtime_error("optimize_over_box: objective returned a non-finite value");
    return y;
  }

  // Hooke-Jeeves coordinate descent/ascent with box clamping.
  BoxOptimum refine(Vector x) {
    x = box.clamp(x);
    Real fx = eval(x);
    const Vector range = box.hi - box.lo;
    Vector h = 0.25 * range;
    while (evals < kMaxEvalsPerStart) {
      bool improved = false;
      for (int i = 0; i < x.size(); ++i) {
        for (int s : {+1, -1}) {
          Vector y = x;
          y(i) = std::min(box.hi(i), std::max(box.lo(i), x(i) + s * h(i)));
          if (y(i) == x(i)) continue;
          const Real fy = eval(y);
          if (improves(dir, fy, fx)) {
            x = y;
            fx = fy;
            improved = true;
          }
        }
      }
      if (!improved) {
        h *= 0.5;
        if ((h.array() / range.array()).maxCoeff() < kStepFloor) break;
      }
    }
    return BoxOptimum{fx, x};
  }
};

}  // namespace

BoxOptimum optimize_over_box(const std::function<Real(const Vector&)>& f, const Box& box,
                             Direction dir, int starts, std::uint64_t seed,
                             const std::vector<Vector>& extra_candidates) {
  box.validate();
  if (starts < 1) throw std::invalid_argument("optimize_over_box: starts must be >= 1");
  const int d = box.dim();

  std::vector<Vector> pool;
  pool.push_back(box.center());
  for (const Vector& v : extra_candidates) pool.push_back(box.clamp(v));

  // All corners when affordable, else a seeded sample of them.
  const int corner_cap = 1 << std::min(d, 12);
  auto corner = [&](std::uint64_t bits) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = (bits >> i) & 1 ? box.hi(i) : box.lo(i);
    return v;
  };
  if (d <= 12) {
    for (int b = 0; b < corner_cap; ++b) pool.push_back(corner(b));
  } else {
    auto rng = make_engine(derive_seed(seed, 0xC0));
    for (int b = 0; b < corner_cap; ++b) pool.push_back(corner(rng()));
  }

  auto rng = make_engine(derive_seed(seed, 0x1D));
  std::uniform_real_distribution<Real> unif(0.0, 1.0);
  for (int s = 0; s < starts; ++s) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = box.lo(i) + unif(rng) * (box.hi(i) - box.lo(i));
    pool.push_back(v);
  }

  Search search{f, box, dir};
  std::vector<std::pair<Real, int>> ranked;
  ranked.reserve(pool.size());
  for (int i = 0; i < static_cast<int>(pool.size()); ++i)
    ranked.emplace_back(search.eval(pool[i]), i);
  std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    return improves(dir, a.first, b.first);
  });

  BoxOptimum best{ranked.front().first, pool[ranked.front().second]};
  const int launches = std::min<int>(starts, static_cast<int>(ranked.size()));
  for (int i = 0; i < launches; ++i) {
    search.evals = 0;
    const BoxOptimum refined = search.refine(pool[ranked[i].second]);
    if (improves(dir, refined.value, best.value)) best = refined;
  }
  return best;
}

void StepwiseErrorModel::validate() const {
  if (horizon < 2) throw std::invalid_argument("StepwiseErrorModel: horizon must be >= 2");
  if (deltas.size() != boxes.size() || static_cast<int>(deltas.size()) != horizon - 1)
    throw std::invalid_argument("StepwiseErrorModel: need one delta and box per stage 1..H-1");
  for (const Box& b : boxes) b.validate();
}

Real epsilon_continuous(const StepwiseErrorModel& model, int k, int starts, std::uint64_t seed) {
  model.validate();
  if (k < 1 || k > model.horizon - 1)
    throw std::out_of_range("epsilon_continuous: stage must lie in 1..H-1");
  const QuadraticModel& delta = model.deltas[k - 1];
  const Box& box = model.boxes[k - 1];

  // Stationary point of the quadratic as an extra candidate; skipped when
  // the Hessian is singular.
  std::vector<Vector> extras;
  Eigen::LDLT<Matrix> ldlt(2.0 * delta.quad);
  if (ldlt.info() == Eigen::Success) {
    const Vector stat = ldlt.solve(-delta.lin);
    if (((2.0 * delta.quad * stat + delta.lin).lpNorm<Eigen::Infinity>()) <
        1e-8 * (1.0 + delta.lin.lpNorm<Eigen::Infinity>()))
      extras.push_back(stat);
  }

  auto f = [&delta](const Vector& v) { return delta(v); };
  return optimize_over_box(f, box, model.direction, starts, derive_seed(seed, k), extras).value;
}

Real epsilon_discrete(const DiscreteMdp& mdp, const StageTables& w_hat, int k) {
  if (k < 1 || k > mdp.horizon - 1)
    throw std::out_of_range("epsilon_discrete: stage must lie in 1..H-1");
  if (static_cast<int>(w_hat.size()) != mdp.horizon)
    throw std::invalid_argument("epsilon_discrete: need one table per stage");

  const int nx = mdp.n_states, nu = mdp.n_actions;
  // Best approximate Q at stage k per successor state.
  Vector best_q(nx);
  for (int y = 0; y < nx; ++y) {
    Real best = worst_value(mdp.direction);
    bool any = false;
    for (int a = 0; a < nu; ++a) {
      if (!mdp.feasible[k](y, a)) continue;
      best = opt2(mdp.direction, best, mdp.reward[k](y, a) + w_hat[k](y, a));
      any = true;
    }
    if (!any) throw FeasibilityError("epsilon_discrete: no feasible action at successor state");
    best_q(y) = best;
  }

  Real eps = worst_value(mdp.direction);
  bool any_pair = false;
  for (int x = 0; x < nx; ++x)
    for (int a = 0; a < nu; ++a) {
      if (!mdp.feasible[k - 1](x, a)) continue;
      const Real expected = mdp.kernel[k - 1].row(mdp.row(x, a)).dot(best_q);
      eps = opt2(mdp.direction, eps, expected - w_hat[k - 1](x, a));
      any_pair = true;
    }
  if (!any_pair) throw FeasibilityError("epsilon_discrete: no feasible pair at stage k-1");
  return eps;
}

std::vector<Real> epsilons_discrete(const DiscreteMdp& mdp, const StageTables& w_hat) {
  std::vector<Real> eps;
  eps.reserve(mdp.horizon - 1);
  for (int k = 1; k <= mdp.horizon - 1; ++k) eps.push_back(epsilon_discrete(mdp, w_hat, k));
  return eps;
}

namespace {
std::string format_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string BoundReport::csv_header() const {
  std::ostringstream os;
  os << "v_hat,v_hat_stderr,q_hat_0";
  for (std::size_t i = 0; i < epsilons.size(); ++i) os << ",eps_" << (i + 1);
  os << ",bound,beta";
  return os.str();
}

std::string BoundReport::csv_row() const {
  std::ostringstream os;
  os << format_real(v_hat) << ',' << format_real(v_hat_stderr) << ',' << format_real(q_hat_0);
  for (Real e : epsilons) os << ',' << format_real(e);
  os << ',' << format_real(bound) << ',' << format_real(beta);
  return os.str();
}

std::string BoundReport::pretty() const {
  std::ostringstream os;
  const bool maximize = direction == Direction::Maximize;
  os << "achieved value (Monte Carlo): " << v_hat << " +/- " << v_hat_stderr << "\n"
     << "stage-0 scheme value:         " << q_hat_0 << "\n"
     << (maximize ? "upper bound on optimum:       " : "lower bound on optimum:       ") << bound
     << "\n"
     << "ratio beta:                   " << beta << "\n";
  os << "stepwise error bounds:";
  for (Real e : epsilons) os << ' ' << e;
  os << "\n";
  return os.str();
}

}  // namespace adpbound
