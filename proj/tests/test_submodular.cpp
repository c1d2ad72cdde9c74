#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "adpbound/bound.hpp"
#include "adpbound/submodular.hpp"

using namespace adpbound;

namespace {

SubmodObjective modular_weights(std::vector<Real> weights, int horizon, SubmodMode mode) {
  SubmodObjective obj;
  obj.mode = mode;
  obj.ground_size = static_cast<int>(weights.size());
  obj.horizon = horizon;
  obj.evaluate = [w = std::move(weights)](const std::vector<int>& prefix) {
    Real sum = 0;
    for (int s : prefix) sum += w[s];
    return sum;
  };
  return obj;
}

// Weighted coverage function: element s covers a fixed set of items.
SubmodObjective weighted_cover(std::vector<std::vector<int>> covers, std::vector<Real> item_weights,
                               int horizon, SubmodMode mode = SubmodMode::Set) {
  SubmodObjective obj;
  obj.mode = mode;
  obj.ground_size = static_cast<int>(covers.size());
  obj.horizon = horizon;
  obj.evaluate = [c = std::move(covers), w = std::move(item_weights)](const std::vector<int>& prefix) {
    std::set<int> covered;
    for (int s : prefix) covered.insert(c[s].begin(), c[s].end());
    Real sum = 0;
    for (int item : covered) sum += w[item];
    return sum;
  };
  return obj;
}

// Probabilistic coverage with per-stage decaying strength: a string
// submodular family used as a synthetic order-sensitive instance.
SubmodObjective decaying_cover(int n_elements, int n_items, int horizon, std::uint64_t seed) {
  auto rng = make_engine(seed);
  std::uniform_real_distribution<Real> unif(0.0, 1.0);
  Matrix hit(n_items, n_elements);
  for (int i = 0; i < n_items; ++i)
    for (int s = 0; s < n_elements; ++s) hit(i, s) = 0.9 * unif(rng);
  Vector weight = Vector::NullaryExpr(n_items, [&] { return unif(rng); });

  SubmodObjective obj;
  obj.mode = SubmodMode::String;
  obj.ground_size = n_elements;
  obj.horizon = horizon;
  obj.evaluate = [hit, weight](const std::vector<int>& prefix) {
    Vector miss = Vector::Ones(weight.size());
    for (std::size_t k = 0; k < prefix.size(); ++k) {
      const Real strength = 1.0 / (1.0 + 0.35 * static_cast<Real>(k));
      miss = miss.cwiseProduct(Vector::Ones(weight.size()) - strength * hit.col(prefix[k]));
    }
    return weight.dot(Vector::Ones(weight.size()) - miss);
  };
  return obj;
}

}  // namespace

TEST_CASE("greedy on modular weights picks the heaviest elements") {
  const auto obj = modular_weights({3, 2, 1}, 2, SubmodMode::Set);
  const auto run = greedy(obj);
  CHECK(run.sequence == std::vector<int>{0, 1});
  CHECK(run.values.back() == doctest::Approx(5.0));
  CHECK(run.singleton_values(0) == doctest::Approx(3.0));
  CHECK(run.marginals[1] == doctest::Approx(2.0));
}

TEST_CASE("greedy solves the small cover toy optimally") {
  // Elements A={1,2}, B={2,3}, C={3}; unit item weights; pick two.
  const auto obj = weighted_cover({{1, 2}, {2, 3}, {3}}, {0, 1, 1, 1}, 2);
  const auto run = greedy(obj);
  CHECK(run.sequence == std::vector<int>{0, 1});
  CHECK(run.values.back() == doctest::Approx(3.0));

  // Oracle: all three pairs.
  const auto best = brute_force_opt(obj);
  CHECK(best.value == doctest::Approx(3.0));
  CHECK(run.values.back() == doctest::Approx(best.value));
}

TEST_CASE("suboptimal greedy still clears the classical fraction") {
  // Greedy takes the overlap element first and lands strictly below the
  // optimum formed by the two disjoint sets.
  const auto obj =
      weighted_cover({{0, 1}, {2, 3}, {0, 2}}, {1.0, 1.0, 1.0, 1.0}, 2);
  SubmodObjective tweaked = obj;
  const auto base_eval = obj.evaluate;
  tweaked.evaluate = [base_eval](const std::vector<int>& prefix) {
    Real bonus = 0;
    for (int s : prefix)
      if (s == 2) bonus += 0.1;
    return base_eval(prefix) + bonus;
  };
  const auto run = greedy(tweaked);
  const auto best = brute_force_opt(tweaked);
  CHECK(run.values.back() < best.value);
  CHECK(run.values.back() / best.value >= bound_classic());
}

TEST_CASE("brute force enumerations match hand counts") {
  const auto modular = modular_weights({3, 2, 1}, 2, SubmodMode::Set);
  CHECK(brute_force_opt(modular).value == doctest::Approx(5.0));

  // String instance with stage-decaying gains: 9 strings enumerated by hand
  // in this loop and compared.
  const auto obj = decaying_cover(3, 6, 2, 77);
  Real expect = -1;
  std::vector<int> arg;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const Real v = obj.evaluate({a, b});
      if (v > expect) {
        expect = v;
        arg = {a, b};
      }
    }
  const auto best = brute_force_opt(obj);
  CHECK(best.value == doctest::Approx(expect).epsilon(1e-15));
  CHECK(best.sequence == arg);

  // |U| = 12, H = 3 set case: C(12,3) = 220 subsets is comfortably in budget.
  const auto obj12 = modular_weights(std::vector<Real>(12, 1.0), 3, SubmodMode::Set);
  CHECK(brute_force_opt(obj12, 220).value == doctest::Approx(3.0));
  CHECK_THROWS_WITH_AS(brute_force_opt(obj12, 219), doctest::Contains("220"),
                       std::runtime_error);
}

TEST_CASE("lexicographic tie-breaking in brute force") {
  const auto obj = modular_weights({1, 1, 1}, 2, SubmodMode::Set);
  const auto best = brute_force_opt(obj);
  CHECK(best.sequence == std::vector<int>{0, 1});
}

TEST_CASE("classical fraction constant") {
  CHECK(bound_classic() == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("greedy curvature of a modular objective is one") {
  const auto obj = modular_weights({3, 2, 1}, 2, SubmodMode::Set);
  const auto run = greedy(obj);
  CHECK(bound_greedy_curvature(run, obj) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("greedy curvature matches a hand computation on the cover toy") {
  const auto obj = weighted_cover({{1, 2}, {2, 3}, {3}}, {0, 1, 1, 1}, 2);
  const auto run = greedy(obj);
  // Greedy picks A first. At step 1: B has f(B) = 2 and gain 1, C has
  // f(C) = 1 and gain 1, so gamma = 2 and beta = 1/2 + (1/2)(1/2).
  CHECK(bound_greedy_curvature(run, obj) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("top-H cap on modular instances is tight") {
  const auto set_obj = modular_weights({3, 2, 1}, 2, SubmodMode::Set);
  const auto set_run = greedy(set_obj);
  CHECK(top_h_value(set_run, set_obj) == doctest::Approx(5.0));
  CHECK(bound_top_h(set_run, set_obj) == doctest::Approx(1.0));

  // Same weights as a string: repeats allowed, the best singleton twice.
  const auto str_obj = modular_weights({3, 2, 1}, 2, SubmodMode::String);
  const auto str_run = greedy(str_obj);
  CHECK(str_run.sequence == std::vector<int>{0, 0});
  CHECK(str_run.values.back() == doctest::Approx(6.0));
  CHECK(top_h_value(str_run, str_obj) == doctest::Approx(6.0));
  CHECK(bound_top_h(str_run, str_obj) == doctest::Approx(1.0));

  // Oracle: all 9 strings.
  const auto best = brute_force_opt(str_obj);
  CHECK(best.value == doctest::Approx(6.0));
}

TEST_CASE("degenerate all-zero objective is rejected by the top-H bound") {
  const auto obj = modular_weights({0, 0, 0}, 2, SubmodMode::Set);
  const auto run = greedy(obj);
  CHECK_THROWS_AS(bound_top_h(run, obj), std::runtime_error);
  // No positive gain at any step: the curvature is undefined too.
  CHECK_THROWS_AS(bound_greedy_curvature(run, obj), std::runtime_error);
}

TEST_CASE("telescoping of prefix gains reproduces the full value") {
  const auto obj = decaying_cover(5, 8, 4, 11);
  auto rng = make_engine(12);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<int> seq;
    for (int k = 0; k < 4; ++k) seq.push_back(static_cast<int>(rng() % 5));
    Real acc = 0, prev = 0;
    std::vector<int> prefix;
    for (int s : seq) {
      prefix.push_back(s);
      const Real v = obj.evaluate(prefix);
      acc += v - prev;
      prev = v;
    }
    const Real direct = obj.evaluate(seq);
    CHECK(std::abs(acc - direct) <= 1e-12 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("submodularity verifier accepts the synthetic families") {
  CHECK(verify_submodular(modular_weights({2, 1, 0.5}, 3, SubmodMode::Set), 200, 1).passed);
  CHECK(verify_submodular(decaying_cover(5, 8, 4, 13), 3000, 2).passed);
  const auto cover = weighted_cover({{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {1, 2, 3, 4}, 3);
  CHECK(verify_submodular(cover, 3000, 3).passed);
}

TEST_CASE("submodularity verifier catches a supermodular toy") {
  SubmodObjective bad;
  bad.mode = SubmodMode::Set;
  bad.ground_size = 4;
  bad.horizon = 3;
  bad.evaluate = [](const std::vector<int>& prefix) {
    const Real n = static_cast<Real>(prefix.size());
    return n * n;
  };
  const auto report = verify_submodular(bad, 500, 4);
  CHECK_FALSE(report.passed);
  CHECK(report.counterexample.find("diminishing returns") != std::string::npos);
}

TEST_CASE("set-mode constraints are honored by greedy and enumeration") {
  const auto obj = modular_weights({5, 4, 3, 2}, 3, SubmodMode::Set);
  const auto run = greedy(obj);
  std::set<int> unique(run.sequence.begin(), run.sequence.end());
  CHECK(unique.size() == run.sequence.size());
  CHECK_THROWS_AS(modular_weights({1, 2}, 3, SubmodMode::Set).validate(), std::invalid_argument);
}

TEST_CASE("prefix-state embedding replays the greedy run") {
  const auto obj = decaying_cover(4, 6, 3, 21);
  const auto run = greedy(obj);
  const auto problem = as_horizon_problem(obj);
  const auto scheme = zero_tail_scheme(obj);
  const auto traj = rollout(problem, scheme.policy, 1);
  CHECK(traj.actions == run.sequence);
  CHECK(traj.total == doctest::Approx(run.values.back()).epsilon(1e-12));
}

TEST_CASE("stepwise singleton caps assemble to the top-H value") {
  for (std::uint64_t seed : {31u, 32u, 33u}) {
    const auto obj = decaying_cover(5, 7, 4, seed);
    const auto run = greedy(obj);
    const auto eps = submodular_epsilons(run, obj);
    const auto rep =
        assemble_bound(as_horizon_problem(obj), zero_tail_scheme(obj), eps, 2, 1);
    CHECK(rep.bound == doctest::Approx(top_h_value(run, obj)).epsilon(1e-12));
    CHECK(rep.v_hat == doctest::Approx(run.values.back()).epsilon(1e-12));
    CHECK(rep.beta == doctest::Approx(bound_top_h(run, obj)).epsilon(1e-12));
  }

  // Set case: the caps are the sorted singleton values after the first.
  const auto set_obj = weighted_cover({{0, 1}, {1, 2}, {3}, {0, 3}}, {1, 2, 3, 4}, 3);
  const auto set_run = greedy(set_obj);
  const auto eps = submodular_epsilons(set_run, set_obj);
  const auto rep = assemble_bound(as_horizon_problem(set_obj), zero_tail_scheme(set_obj), eps, 2, 1);
  CHECK(rep.bound == doctest::Approx(top_h_value(set_run, set_obj)).epsilon(1e-12));
}

TEST_CASE("both bounds understate the true greedy ratio on brute-forceable instances") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto obj = decaying_cover(5, 9, 3, 100 + seed);
    const auto run = greedy(obj);
    const Real ratio = run.values.back() / brute_force_opt(obj).value;
    const Real b1 = bound_greedy_curvature(run, obj);
    const Real b2 = bound_top_h(run, obj);
    CHECK(b1 <= ratio + 1e-12);
    CHECK(b2 <= ratio + 1e-12);
    CHECK(b2 >= b1 - 1e-12);
    CHECK(ratio <= 1.0 + 1e-12);
  }
}
