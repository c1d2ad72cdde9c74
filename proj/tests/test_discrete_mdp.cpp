#include <doctest.h>

#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "adpbound/discrete_mdp.hpp"

using namespace adpbound;

namespace {

DiscreteMdp single_state_two_actions() {
  DiscreteMdp m;
  m.n_states = 1;
  m.n_actions = 2;
  m.horizon = 1;
  m.direction = Direction::Maximize;
  m.initial_state = 0;
  m.kernel = {Matrix::Ones(2, 1)};
  Matrix r(1, 2);
  r << 3, 5;
  m.reward = {r};
  m.terminal = Vector::Zero(1);
  m.feasible = {BoolArray::Constant(1, 2, true)};
  m.validate();
  return m;
}

// Two states {a=0, b=1}, actions {stay=0, go=1}; "go" moves a -> b,
// everything else stays put. Reward 1 whenever the current state is b.
DiscreteMdp chain_mdp() {
  DiscreteMdp m;
  m.n_states = 2;
  m.n_actions = 2;
  m.horizon = 2;
  m.direction = Direction::Maximize;
  m.initial_state = 0;
  Matrix ker = Matrix::Zero(4, 2);
  ker(m.row(0, 0), 0) = 1;  // a, stay -> a
  ker(m.row(0, 1), 1) = 1;  // a, go   -> b
  ker(m.row(1, 0), 1) = 1;  // b, stay -> b
  ker(m.row(1, 1), 1) = 1;  // b, go   -> b
  m.kernel = {ker, ker};
  Matrix r(2, 2);
  r << 0, 0, 1, 1;
  m.reward = {r, r};
  m.terminal = Vector::Zero(2);
  m.feasible = std::vector<BoolArray>(2, BoolArray::Constant(2, 2, true));
  m.validate();
  return m;
}

// Independent oracle 1: value of one fixed stagewise state-feedback policy,
// computed by forward propagation of the state distribution.
Real policy_value_forward(const DiscreteMdp& m, const std::vector<std::vector<int>>& pol) {
  Vector dist = Vector::Zero(m.n_states);
  dist(m.initial_state) = 1;
  Real total = 0;
  for (int k = 0; k < m.horizon; ++k) {
    Vector next = Vector::Zero(m.n_states);
    for (int x = 0; x < m.n_states; ++x) {
      if (dist(x) == 0) continue;
      const int a = pol[k][x];
      total += dist(x) * m.reward[k](x, a);
      next += dist(x) * m.kernel[k].row(m.row(x, a)).transpose();
    }
    dist = next;
  }
  return total + dist.dot(m.terminal);
}

// Enumerate every stagewise state-feedback policy and keep the best value.
Real best_policy_by_enumeration(const DiscreteMdp& m) {
  std::vector<std::vector<std::vector<int>>> per_stage_choices(m.horizon);
  for (int k = 0; k < m.horizon; ++k) {
    std::vector<std::vector<int>> maps{{}};
    for (int x = 0; x < m.n_states; ++x) {
      std::vector<std::vector<int>> grown;
      for (const auto& partial : maps)
        for (int a = 0; a < m.n_actions; ++a) {
          if (!m.feasible[k](x, a)) continue;
          auto next = partial;
          next.push_back(a);
          grown.push_back(next);
        }
      maps = std::move(grown);
    }
    per_stage_choices[k] = std::move(maps);
  }

  bool any = false;
  Real best = 0;
  std::vector<std::vector<int>> pol(m.horizon);
  std::function<void(int)> rec = [&](int k) {
    if (k == m.horizon) {
      const Real v = policy_value_forward(m, pol);
      if (!any || improves(m.direction, v, best)) best = v;
      any = true;
      return;
    }
    for (const auto& choice : per_stage_choices[k]) {
      pol[k] = choice;
      rec(k + 1);
    }
  };
  rec(0);
  return best;
}

// Independent oracle 2: recursive expectimax without memoization.
Real expectimax(const DiscreteMdp& m, int k, int x) {
  if (k == m.horizon) return m.terminal(x);
  Real best = 0;
  bool any = false;
  for (int a = 0; a < m.n_actions; ++a) {
    if (!m.feasible[k](x, a)) continue;
    Real value = m.reward[k](x, a);
    for (int y = 0; y < m.n_states; ++y) {
      const Real p = m.kernel[k](m.row(x, a), y);
      if (p > 0) value += p * expectimax(m, k + 1, y);
    }
    best = any ? opt2(m.direction, best, value) : value;
    any = true;
  }
  return best;
}

}  // namespace

TEST_CASE("single-stage argmax picks the larger reward") {
  const auto m = single_state_two_actions();
  const auto sol = solve_exact(m);
  CHECK(sol.v_star_total == doctest::Approx(5.0));
  CHECK(sol.policy[0](0) == 1);
}

TEST_CASE("two-state chain collects the reward once") {
  const auto m = chain_mdp();
  const auto sol = solve_exact(m);
  // Hand enumeration of all four action sequences gives 1 (go, then sit on b).
  CHECK(sol.v_star_total == doctest::Approx(1.0));
  CHECK(sol.policy[0](0) == 1);
  CHECK(best_policy_by_enumeration(m) == doctest::Approx(1.0));
}

TEST_CASE("backward induction agrees with full policy enumeration on a small instance") {
  const DiscreteMdp m = random_mdp(3, 2, 3, Direction::Maximize, 314);
  const auto sol = solve_exact(m);
  CHECK(sol.v_star_total == doctest::Approx(best_policy_by_enumeration(m)).epsilon(1e-12));
}

TEST_CASE("backward induction agrees with recursive expectimax on a 4x3 horizon-4 instance") {
  for (const Direction dir : {Direction::Maximize, Direction::Minimize}) {
    const DiscreteMdp m = random_mdp(4, 3, 4, dir, 2718);
    const auto sol = solve_exact(m);
    const Real oracle = expectimax(m, 0, m.initial_state);
    CHECK(std::abs(sol.v_star_total - oracle) <= 1e-12 * (1.0 + std::abs(oracle)));
  }
}

TEST_CASE("solution tables satisfy the recursion identities") {
  const DiscreteMdp m = random_mdp(5, 4, 4, Direction::Maximize, 777);
  const auto sol = solve_exact(m);
  for (int k = 0; k < m.horizon; ++k)
    for (int x = 0; x < m.n_states; ++x) {
      bool any = false;
      Real best = 0;
      for (int a = 0; a < m.n_actions; ++a) {
        if (!m.feasible[k](x, a)) continue;
        // q = r + w identity
        CHECK(sol.q_star[k](x, a) ==
              doctest::Approx(m.reward[k](x, a) + sol.w_star[k + 1](x, a)).epsilon(1e-14));
        // w is the kernel average of the next value table
        const Real w = m.kernel[k].row(m.row(x, a)).dot(sol.v_star[k + 1]);
        CHECK(std::abs(sol.w_star[k + 1](x, a) - w) <= 1e-10);
        best = any ? opt2(m.direction, best, sol.q_star[k](x, a)) : sol.q_star[k](x, a);
        any = true;
      }
      CHECK(std::abs(sol.v_star[k](x) - best) <= 1e-10);
    }
}

TEST_CASE("ties break to the lowest action index") {
  DiscreteMdp m = single_state_two_actions();
  m.reward[0](0, 0) = 5;  // equal rewards
  const auto sol = solve_exact(m);
  CHECK(sol.policy[0](0) == 0);
}

TEST_CASE("constant reward shift moves the value by (H+1) c and keeps the policy") {
  const DiscreteMdp base = random_mdp(4, 3, 3, Direction::Maximize, 55);
  const auto sol = solve_exact(base);
  DiscreteMdp shifted = base;
  const Real c = 2.5;
  for (auto& r : shifted.reward) r.array() += c;
  shifted.terminal.array() += c;
  const auto sol2 = solve_exact(shifted);
  CHECK(sol2.v_star_total ==
        doctest::Approx(sol.v_star_total + (base.horizon + 1) * c).epsilon(1e-12));
  for (int k = 0; k < base.horizon; ++k)
    CHECK((sol.policy[k].array() == sol2.policy[k].array()).all());
}

TEST_CASE("negated rewards mirror the direction") {
  const DiscreteMdp maxm = random_mdp(4, 3, 4, Direction::Maximize, 808);
  DiscreteMdp minm = maxm;
  minm.direction = Direction::Minimize;
  for (auto& r : minm.reward) r = -r;
  minm.terminal = -minm.terminal;
  const auto a = solve_exact(maxm);
  const auto b = solve_exact(minm);
  CHECK(b.v_star_total == doctest::Approx(-a.v_star_total).epsilon(1e-12));
  for (int k = 0; k < maxm.horizon; ++k)
    CHECK((a.policy[k].array() == b.policy[k].array()).all());
}

TEST_CASE("structural validation rejects broken tables") {
  DiscreteMdp m = single_state_two_actions();
  m.kernel[0](0, 0) = 0.5;
  CHECK_THROWS_WITH_AS(m.validate(), doctest::Contains("does not sum to 1"),
                       std::invalid_argument);

  DiscreteMdp m2 = chain_mdp();
  m2.feasible[1].row(1) = false;
  CHECK_THROWS_WITH_AS(m2.validate(), doctest::Contains("no feasible action"),
                       std::invalid_argument);
}

TEST_CASE("empty feasible set at a reachable state names the stage and state") {
  DiscreteMdp m = chain_mdp();
  m.feasible[1].row(1) = false;  // reachable through 'go' at stage 0
  CHECK_THROWS_WITH_AS(solve_exact(m), doctest::Contains("k=1"), FeasibilityError);
}

TEST_CASE("unreachable states with empty feasible sets are tolerated") {
  DiscreteMdp m = chain_mdp();
  // Remove the transition into b and make b infeasible everywhere.
  m.kernel[0](m.row(0, 1), 0) = 1;
  m.kernel[0](m.row(0, 1), 1) = 0;
  m.kernel[1](m.row(0, 1), 0) = 1;
  m.kernel[1](m.row(0, 1), 1) = 0;
  m.feasible[0].row(1) = false;
  m.feasible[1].row(1) = false;
  const auto sol = solve_exact(m);
  CHECK(sol.v_star_total == doctest::Approx(0.0));
}

TEST_CASE("text serialization round-trips bit-exactly") {
  const DiscreteMdp m = random_mdp(4, 3, 3, Direction::Minimize, 4242);
  std::stringstream ss;
  save_mdp(ss, m);
  const DiscreteMdp back = load_mdp(ss);
  CHECK(back.n_states == m.n_states);
  CHECK(back.direction == m.direction);
  for (int k = 0; k < m.horizon; ++k) {
    CHECK(back.kernel[k] == m.kernel[k]);
    CHECK(back.reward[k] == m.reward[k]);
    CHECK((back.feasible[k] == m.feasible[k]).all());
  }
  CHECK(back.terminal == m.terminal);

  // Same text out again.
  std::stringstream ss2, ss3;
  save_mdp(ss2, back);
  save_mdp(ss3, m);
  CHECK(ss2.str() == ss3.str());
}

TEST_CASE("loader rejects malformed headers") {
  std::stringstream ss("2 2 1 sideways 0\n");
  CHECK_THROWS_WITH_AS(load_mdp(ss), doctest::Contains("direction"), std::runtime_error);
}
