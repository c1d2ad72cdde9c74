#include "adpbound/adp_scheme.hpp"

#include <sstream>

namespace adpbound {

AdpScheme<int, int> make_discrete_scheme(const DiscreteMdp& mdp, StageTables tables) {
  if (static_cast<int>(tables.size()) != mdp.horizon)
    throw std::invalid_argument("make_discrete_scheme: need one table per stage");
  for (const Matrix& t : tables)
    if (t.rows() != mdp.n_states || t.cols() != mdp.n_actions)
      throw std::invalid_argument("make_discrete_scheme: table shape mismatch");

  auto m = std::make_shared<DiscreteMdp>(mdp);
  auto w = std::make_shared<StageTables>(std::move(tables));

  AdpScheme<int, int> scheme;
  scheme.horizon = m->horizon;
  scheme.w_hat = [w](int k, const int& x, const int& a) { return (*w)[k](x, a); };
  scheme.q_hat = [m, w](int k, const int& x, const int& a) {
    return m->reward[k](x, a) + (*w)[k](x, a);
  };
  scheme.policy = [m, w](int k, const int& x) {
    Real best = worst_value(m->direction);
    int best_a = -1;
    for (int a = 0; a < m->n_actions; ++a) {
      if (!m->feasible[k](x, a)) continue;
      const Real q = m->reward[k](x, a) + (*w)[k](x, a);
      if (best_a < 0 || improves(m->direction, q, best)) {
        best = q;
        best_a = a;
      }
    }
    if (best_a < 0) {
      std::ostringstream msg;
      msg << "discrete scheme policy: no feasible action at stage " << k << ", state " << x;
      throw FeasibilityError(msg.str());
    }
    return best_a;
  };
  return scheme;
}

StageTables exact_tables(const ExactSolution& sol) {
  StageTables tables;
  const int h = static_cast<int>(sol.q_star.size());
  tables.reserve(h);
  for (int k = 0; k < h; ++k) tables.push_back(sol.w_star[k + 1]);
  return tables;
}

StageTables zero_tables(const DiscreteMdp& mdp) {
  StageTables tables(mdp.horizon, Matrix::Zero(mdp.n_states, mdp.n_actions));
  Matrix& last = tables[mdp.horizon - 1];
  for (int x = 0; x < mdp.n_states; ++x)
    for (int a = 0; a < mdp.n_actions; ++a)
      last(x, a) = mdp.kernel[mdp.horizon - 1].row(mdp.row(x, a)).dot(mdp.terminal);
  return tables;
}

StageTables noisy_tables(const ExactSolution& sol, Real sigma, std::uint64_t seed) {
  auto rng = make_engine(seed);
  std::normal_distribution<Real> normal(0.0, sigma);
  StageTables tables = exact_tables(sol);
  for (std::size_t k = 0; k + 1 < tables.size(); ++k)
    tables[k] = tables[k].unaryExpr([&](Real v) { return std::isnan(v) ? v : v + normal(rng); });
  return tables;
}

}  // namespace adpbound
