#include "adpbound/discrete_mdp.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <sstream>

namespace adpbound {

namespace {
constexpr Real kRowSumTol = 1e-12;
constexpr Real kNaN = std::numeric_limits<Real>::quiet_NaN();

std::string stage_state_msg(const char* what, int k, int x) {
  std::ostringstream os;
  os << what << " at stage k=" << k << ", state x=" << x;
  return os.str();
}
}  // namespace

void DiscreteMdp::validate() const {
  if (horizon < 1) throw std::invalid_argument("DiscreteMdp: horizon must be >= 1");
  if (n_states < 1 || n_actions < 1)
    throw std::invalid_argument("DiscreteMdp: empty state or action set");
  if (initial_state < 0 || initial_state >= n_states)
    throw std::invalid_argument("DiscreteMdp: initial state out of range");
  if ((int)kernel.size() != horizon || (int)reward.size() != horizon ||
      (int)feasible.size() != horizon)
    throw std::invalid_argument("DiscreteMdp: table count does not match horizon");
  if (terminal.size() != n_states)
    throw std::invalid_argument("DiscreteMdp: terminal table size mismatch");

  for (int k = 0; k < horizon; ++k) {
    if (kernel[k].rows() != n_states * n_actions || kernel[k].cols() != n_states)
      throw std::invalid_argument("DiscreteMdp: kernel shape mismatch");
    if (reward[k].rows() != n_states || reward[k].cols() != n_actions)
      throw std::invalid_argument("DiscreteMdp: reward shape mismatch");
    if (feasible[k].rows() != n_states || feasible[k].cols() != n_actions)
      throw std::invalid_argument("DiscreteMdp: feasibility shape mismatch");
    for (int x = 0; x < n_states; ++x) {
      if (!feasible[k].row(x).any())
        throw std::invalid_argument(stage_state_msg("DiscreteMdp: no feasible action", k, x));
      for (int a = 0; a < n_actions; ++a) {
        if (!feasible[k](x, a)) continue;
        const auto r = kernel[k].row(row(x, a));
        if (r.minCoeff() < 0 || r.maxCoeff() > 1)
          throw std::invalid_argument("DiscreteMdp: kernel probability outside [0,1]");
        if (std::abs(r.sum() - 1.0) > kRowSumTol)
          throw std::invalid_argument(stage_state_msg("DiscreteMdp: kernel row does not sum to 1", k, x));
      }
    }
  }
}

int DiscreteMdp::first_feasible(int k, int x) const {
  for (int a = 0; a < n_actions; ++a)
    if (feasible[k](x, a)) return a;
  return -1;
}

ExactSolution solve_exact(const DiscreteMdp& mdp) {
  const int h = mdp.horizon, nx = mdp.n_states, nu = mdp.n_actions;

  // Forward reachability, so an empty feasible set only faults if a policy
  // could actually hit it.
  std::vector<std::vector<bool>> reachable(h + 1, std::vector<bool>(nx, false));
  reachable[0][mdp.initial_state] = true;
  for (int k = 0; k < h; ++k) {
    for (int x = 0; x < nx; ++x) {
      if (!reachable[k][x]) continue;
      bool any = false;
      for (int a = 0; a < nu; ++a) {
        if (!mdp.feasible[k](x, a)) continue;
        any = true;
        for (int y = 0; y < nx; ++y)
          if (mdp.kernel[k](mdp.row(x, a), y) > 0) reachable[k + 1][y] = true;
      }
      if (!any) throw FeasibilityError(stage_state_msg("solve_exact: empty feasible set", k, x));
    }
  }

  ExactSolution sol;
  sol.v_star.assign(h + 1, Vector::Constant(nx, kNaN));
  sol.q_star.assign(h, Matrix::Constant(nx, nu, kNaN));
  sol.w_star.assign(h + 1, Matrix::Constant(nx, nu, kNaN));
  sol.policy.assign(h, Eigen::VectorXi::Constant(nx, -1));

  sol.v_star[h] = mdp.terminal;
  for (int k = h - 1; k >= 0; --k) {
    for (int x = 0; x < nx; ++x) {
      Real best = worst_value(mdp.direction);
      int best_a = -1;
      for (int a = 0; a < nu; ++a) {
        if (!mdp.feasible[k](x, a)) continue;
        // W_{k+1}(x, a): expectation of V_{k+1} over the kernel row, masking
        // zero-probability successors whose values may be undefined.
        Real w = 0;
        for (int y = 0; y < nx; ++y) {
          const Real p = mdp.kernel[k](mdp.row(x, a), y);
          if (p > 0) w += p * sol.v_star[k + 1](y);
        }
        sol.w_star[k + 1](x, a) = w;
        const Real q = mdp.reward[k](x, a) + w;
        sol.q_star[k](x, a) = q;
        if (best_a < 0 || improves(mdp.direction, q, best)) {
          best = q;
          best_a = a;
        }
      }
      if (best_a >= 0) {
        sol.v_star[k](x) = best;
        sol.policy[k](x) = best_a;
      }
    }
  }
  sol.v_star_total = sol.v_star[0](mdp.initial_state);
  return sol;
}

HorizonProblem<int, int, Real> to_horizon_problem(const DiscreteMdp& mdp) {
  auto m = std::make_shared<DiscreteMdp>(mdp);

  HorizonProblem<int, int, Real> p;
  p.horizon = m->horizon;
  p.direction = m->direction;
  p.initial_state = m->initial_state;
  p.stage_reward = [m](int k, const int& x, const int& a) { return m->reward[k](x, a); };
  p.terminal_reward = [m](const int& x) { return m->terminal(x); };
  p.feasible = [m](int k, const int& x, const int& a) {
    return a >= 0 && a < m->n_actions && m->feasible[k](x, a);
  };
  p.noise_sampler = [](int, std::mt19937_64& rng) {
    return std::uniform_real_distribution<Real>(0.0, 1.0)(rng);
  };
  p.transition = [m](int k, const int& x, const int& a, const Real& u) {
    const auto r = m->kernel[k].row(m->row(x, a));
    Real acc = 0;
    for (int y = 0; y < m->n_states; ++y) {
      acc += r(y);
      if (u <= acc) return y;
    }
    return m->n_states - 1;  // u landed in rounding slack past the last cdf step
  };
  return p;
}

Policy<int, int> exact_policy(const ExactSolution& sol) {
  return [&sol](int k, const int& x) { return sol.policy[k](x); };
}

DiscreteMdp random_mdp(int n_states, int n_actions, int horizon,
                       Direction direction, std::uint64_t seed) {
  auto rng = make_engine(seed);
  std::uniform_real_distribution<Real> unif(0.0, 1.0);

  DiscreteMdp m;
  m.n_states = n_states;
  m.n_actions = n_actions;
  m.horizon = horizon;
  m.direction = direction;
  m.initial_state = 0;
  m.terminal = Vector::NullaryExpr(n_states, [&] { return unif(rng); });

  for (int k = 0; k < horizon; ++k) {
    // State-independent feasible set per stage: a random non-empty subset.
    BoolArray feas = BoolArray::Constant(n_states, n_actions, false);
    std::vector<int> active;
    for (int a = 0; a < n_actions; ++a)
      if (unif(rng) < 0.8) active.push_back(a);
    if (active.empty()) active.push_back((int)(rng() % n_actions));
    for (int a : active) feas.col(a) = true;
    m.feasible.push_back(feas);

    Matrix r = Matrix::NullaryExpr(n_states, n_actions, [&] { return unif(rng); });
    m.reward.push_back(r);

    Matrix ker = Matrix::Zero(n_states * n_actions, n_states);
    for (int x = 0; x < n_states; ++x)
      for (int a = 0; a < n_actions; ++a) {
        Vector w = Vector::NullaryExpr(n_states, [&] { return unif(rng) + 1e-3; });
        ker.row(m.row(x, a)) = (w / w.sum()).transpose();
      }
    m.kernel.push_back(ker);
  }
  m.validate();
  return m;
}

// --- text serialization ------------------------------------------------------

namespace {
void write_real(std::ostream& os, Real v) {
  os << std::setprecision(17) << v;
}

Real read_real(std::istream& is, const char* what) {
  Real v;
  if (!(is >> v)) throw std::runtime_error(std::string("load_mdp: truncated input reading ") + what);
  return v;
}

int read_int(std::istream& is, const char* what) {
  int v;
  if (!(is >> v)) throw std::runtime_error(std::string("load_mdp: truncated input reading ") + what);
  return v;
}
}  // namespace

void save_mdp(std::ostream& os, const DiscreteMdp& mdp) {
  os << mdp.n_states << ' ' << mdp.n_actions << ' ' << mdp.horizon << ' '
     << to_string(mdp.direction) << ' ' << mdp.initial_state << '\n';
  for (int k = 0; k < mdp.horizon; ++k)
    for (int x = 0; x < mdp.n_states; ++x)
      for (int a = 0; a < mdp.n_actions; ++a) {
        for (int y = 0; y < mdp.n_states; ++y) {
          if (y) os << ' ';
          write_real(os, mdp.kernel[k](mdp.row(x, a), y));
        }
        os << '\n';
      }
  for (int k = 0; k < mdp.horizon; ++k)
    for (int x = 0; x < mdp.n_states; ++x) {
      for (int a = 0; a < mdp.n_actions; ++a) {
        if (a) os << ' ';
        write_real(os, mdp.reward[k](x, a));
      }
      os << '\n';
    }
  for (int y = 0; y < mdp.n_states; ++y) {
    if (y) os << ' ';
    write_real(os, mdp.terminal(y));
  }
  os << '\n';
  for (int k = 0; k < mdp.horizon; ++k)
    for (int x = 0; x < mdp.n_states; ++x) {
      for (int a = 0; a < mdp.n_actions; ++a) {
        if (a) os << ' ';
        os << (mdp.feasible[k](x, a) ? 1 : 0);
      }
      os << '\n';
    }
}

DiscreteMdp load_mdp(std::istream& is) {
  DiscreteMdp m;
  m.n_states = read_int(is, "n_states");
  m.n_actions = read_int(is, "n_actions");
  m.horizon = read_int(is, "horizon");
  std::string dir;
  if (!(is >> dir)) throw std::runtime_error("load_mdp: truncated input reading direction");
  if (dir == "max")
    m.direction = Direction::Maximize;
  else if (dir == "min")
    m.direction = Direction::Minimize;
  else
    throw std::runtime_error("load_mdp: direction must be 'max' or 'min', got '" + dir + "'");
  m.initial_state = read_int(is, "initial_state");
  if (m.horizon < 1 || m.n_states < 1 || m.n_actions < 1)
    throw std::runtime_error("load_mdp: invalid header dimensions");

  m.kernel.assign(m.horizon, Matrix::Zero(m.n_states * m.n_actions, m.n_states));
  for (int k = 0; k < m.horizon; ++k)
    for (int x = 0; x < m.n_states; ++x)
      for (int a = 0; a < m.n_actions; ++a)
        for (int y = 0; y < m.n_states; ++y)
          m.kernel[k](m.row(x, a), y) = read_real(is, "kernel");
  m.reward.assign(m.horizon, Matrix::Zero(m.n_states, m.n_actions));
  for (int k = 0; k < m.horizon; ++k)
    for (int x = 0; x < m.n_states; ++x)
      for (int a = 0; a < m.n_actions; ++a) m.reward[k](x, a) = read_real(is, "reward");
  m.terminal = Vector::Zero(m.n_states);
  for (int y = 0; y < m.n_states; ++y) m.terminal(y) = read_real(is, "terminal");
  m.feasible.assign(m.horizon, BoolArray::Constant(m.n_states, m.n_actions, true));
  for (int k = 0; k < m.horizon; ++k)
    for (int x = 0; x < m.n_states; ++x)
      for (int a = 0; a < m.n_actions; ++a) m.feasible[k](x, a) = read_int(is, "feasibility") != 0;
  m.validate();
  return m;
}

void save_mdp_file(const std::string& path, const DiscreteMdp& mdp) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_mdp_file: cannot open " + path);
  save_mdp(os, mdp);
}

DiscreteMdp load_mdp_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_mdp_file: cannot open " + path);
  return load_mdp(is);
}

}  // namespace adpbound
