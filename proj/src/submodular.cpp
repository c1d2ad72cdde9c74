#include "adpbound/submodular.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace adpbound {

void SubmodObjective::validate() const {
  if (ground_size < 1) throw std::invalid_argument("SubmodObjective: empty ground set");
  if (horizon < 1) throw std::invalid_argument("SubmodObjective: horizon must be >= 1");
  if (!evaluate) throw std::invalid_argument("SubmodObjective: missing evaluate");
  if (mode == SubmodMode::Set && ground_size < horizon)
    throw std::invalid_argument("SubmodObjective: set mode needs ground size >= horizon");
}

bool SubmodObjective::element_allowed(const std::vector<int>& prefix, int s) const {
  if (s < 0 || s >= ground_size) return false;
  if (mode == SubmodMode::String) return true;
  return std::find(prefix.begin(), prefix.end(), s) == prefix.end();
}

GreedyRun greedy(const SubmodObjective& obj) {
  obj.validate();
  GreedyRun run;
  run.singleton_values = Vector::Zero(obj.ground_size);

  std::vector<int> prefix;
  Real current = 0;  // f(empty) = 0 by contract
  for (int k = 0; k < obj.horizon; ++k) {
    int best_s = -1;
    Real best_gain = 0, best_value = 0;
    for (int s = 0; s < obj.ground_size; ++s) {
      if (!obj.element_allowed(prefix, s)) continue;
      prefix.push_back(s);
      const Real value = obj.evaluate(prefix);
      prefix.pop_back();
      if (k == 0) run.singleton_values(s) = value;
      const Real gain = value - current;
      if (best_s < 0 || gain > best_gain) {
        best_s = s;
        best_gain = gain;
        best_value = value;
      }
    }
    if (best_s < 0) throw std::runtime_error("greedy: no admissible element left");
    prefix.push_back(best_s);
    run.sequence.push_back(best_s);
    run.values.push_back(best_value);
    run.marginals.push_back(best_gain);
    current = best_value;
  }
  return run;
}

namespace {

std::uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

BruteForceResult brute_force_opt(const SubmodObjective& obj, std::uint64_t max_evaluations) {
  obj.validate();
  const int n = obj.ground_size, h = obj.horizon;

  std::uint64_t count;
  if (obj.mode == SubmodMode::Set) {
    count = choose(n, h);
  } else {
    count = 1;
    for (int i = 0; i < h; ++i) {
      count *= static_cast<std::uint64_t>(n);
      if (count > max_evaluations) break;
    }
  }
  if (count > max_evaluations) {
    std::ostringstream os;
    os << "brute_force_opt: enumeration would need " << count << " evaluations, budget is "
       << max_evaluations;
    throw std::runtime_error(os.str());
  }

  BruteForceResult best;
  best.value = -std::numeric_limits<Real>::infinity();
  std::vector<int> seq(h);

  if (obj.mode == SubmodMode::Set) {
    // Combinations in lexicographic order; the first strict maximum is kept,
    // which yields the lexicographically smallest optimizer.
    for (int i = 0; i < h; ++i) seq[i] = i;
    while (true) {
      const Real v = obj.evaluate(seq);
      if (v > best.value) {
        best.value = v;
        best.sequence = seq;
      }
      int i = h - 1;
      while (i >= 0 && seq[i] == n - h + i) --i;
      if (i < 0) break;
      ++seq[i];
      for (int j = i + 1; j < h; ++j) seq[j] = seq[j - 1] + 1;
    }
  } else {
    std::fill(seq.begin(), seq.end(), 0);
    while (true) {
      const Real v = obj.evaluate(seq);
      if (v > best.value) {
        best.value = v;
        best.sequence = seq;
      }
      int i = h - 1;
      while (i >= 0 && seq[i] == n - 1) seq[i--] = 0;
      if (i < 0) break;
      ++seq[i];
    }
  }
  return best;
}

Real bound_classic() { return 1.0 - std::exp(-1.0); }

Real bound_greedy_curvature(const GreedyRun& run, const SubmodObjective& obj) {
  obj.validate();
  const int h = obj.horizon;
  if (static_cast<int>(run.sequence.size()) != h)
    throw std::invalid_argument("bound_greedy_curvature: incomplete greedy run");
  if (h == 1) return 1.0;  // one step, greedy is optimal

  Real gamma = 0;
  bool any_step = false;
  std::vector<int> prefix;
  for (int k = 1; k <= h - 1; ++k) {
    prefix.push_back(run.sequence[k - 1]);
    const Real base = run.values[k - 1];
    for (int s = 0; s < obj.ground_size; ++s) {
      if (!obj.element_allowed(prefix, s)) continue;
      prefix.push_back(s);
      const Real gain = obj.evaluate(prefix) - base;
      prefix.pop_back();
      if (gain > 0) {
        gamma = std::max(gamma, run.singleton_values(s) / gain);
        any_step = true;
      }
    }
  }
  if (!any_step)
    throw std::runtime_error("bound_greedy_curvature: no positive-gain element at any step");
  return 1.0 / h + (1.0 / gamma) * (h - 1.0) / h;
}

Real top_h_value(const GreedyRun& run, const SubmodObjective& obj) {
  obj.validate();
  const Real first = run.singleton_values.maxCoeff();
  Real v_bar = first;
  const std::vector<Real> eps = submodular_epsilons(run, obj);
  for (Real e : eps) v_bar += e;
  return v_bar;
}

Real bound_top_h(const GreedyRun& run, const SubmodObjective& obj) {
  const Real v_bar = top_h_value(run, obj);
  if (v_bar <= 0)
    throw std::runtime_error("bound_top_h: degenerate objective, every singleton is zero");
  return run.values.back() / v_bar;
}

std::vector<Real> submodular_epsilons(const GreedyRun& run, const SubmodObjective& obj) {
  obj.validate();
  const int h = obj.horizon;
  std::vector<Real> eps;
  eps.reserve(h - 1);
  if (obj.mode == SubmodMode::String) {
    const Real top = run.singleton_values.maxCoeff();
    eps.assign(h - 1, top);
  } else {
    std::vector<Real> sorted(run.singleton_values.data(),
                             run.singleton_values.data() + run.singleton_values.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<Real>());
    for (int k = 1; k <= h - 1; ++k) eps.push_back(sorted[k]);
  }
  return eps;
}

SubmodularCheck verify_submodular(const SubmodObjective& obj, int n_samples, std::uint64_t seed) {
  obj.validate();
  SubmodularCheck report;
  const Real tol = 1e-9;

  auto fail = [&](const std::string& what) {
    report.passed = false;
    if (report.counterexample.empty()) report.counterexample = what;
  };

  auto describe = [](const std::vector<int>& prefix, int s) {
    std::ostringstream os;
    os << "prefix [";
    for (std::size_t i = 0; i < prefix.size(); ++i) os << (i ? " " : "") << prefix[i];
    os << "], element " << s;
    return os.str();
  };

  // Scale-aware slack so near-ties from float accumulation do not fail.
  auto check_chain = [&](const std::vector<int>& chain) {
    // Monotone values along the chain, and non-increasing gains of each
    // element as the prefix grows.
    std::vector<Real> values(chain.size() + 1);
    std::vector<int> prefix;
    values[0] = 0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      prefix.push_back(chain[i]);
      values[i + 1] = obj.evaluate(prefix);
    }
    const Real scale = 1.0 + std::abs(values.back());
    for (std::size_t i = 0; i + 1 <= chain.size(); ++i)
      if (values[i + 1] < values[i] - tol * scale)
        fail("monotonicity violated: " + describe({chain.begin(), chain.begin() + i}, chain[i]));

    for (int s = 0; s < obj.ground_size; ++s) {
      Real prev_gain = std::numeric_limits<Real>::infinity();
      std::vector<int> p;
      for (std::size_t i = 0; i <= chain.size(); ++i) {
        if (obj.element_allowed(p, s)) {
          p.push_back(s);
          const Real gain = obj.evaluate(p) - (i == 0 ? 0.0 : values[i]);
          p.pop_back();
          if (gain > prev_gain + tol * scale)
            fail("diminishing returns violated: " + describe(p, s));
          prev_gain = std::min(prev_gain, gain);
        }
        if (i < chain.size()) p.push_back(chain[i]);
      }
      ++report.n_checked;
    }
  };

  if (std::abs(obj.evaluate({})) > tol) fail("null on null violated: f(empty) != 0");

  const bool exhaustive = obj.ground_size <= 8 && obj.horizon <= 3;
  if (exhaustive) {
    // All chains of length <= horizon - 1.
    std::vector<std::vector<int>> chains{{}};
    for (std::size_t i = 0; i < chains.size(); ++i) {
      std::vector<int> chain = chains[i];
      check_chain(chain);
      if (static_cast<int>(chain.size()) < obj.horizon - 1)
        for (int s = 0; s < obj.ground_size; ++s)
          if (obj.element_allowed(chain, s)) {
            chain.push_back(s);
            chains.push_back(chain);
            chain.pop_back();
          }
    }
  } else {
    auto rng = make_engine(seed);
    for (int it = 0; it < n_samples && report.n_checked < n_samples; ++it) {
      const int len = static_cast<int>(rng() % static_cast<std::uint64_t>(obj.horizon));
      std::vector<int> chain;
      for (int i = 0; i < len; ++i) {
        const int s = static_cast<int>(rng() % static_cast<std::uint64_t>(obj.ground_size));
        if (obj.element_allowed(chain, s)) chain.push_back(s);
      }
      check_chain(chain);
    }
  }
  return report;
}

HorizonProblem<std::vector<int>, int, int> as_horizon_problem(const SubmodObjective& obj) {
  obj.validate();
  auto o = std::make_shared<SubmodObjective>(obj);

  HorizonProblem<std::vector<int>, int, int> p;
  p.horizon = obj.horizon;
  p.direction = Direction::Maximize;
  p.initial_state = {};
  p.transition = [](int, const std::vector<int>& prefix, const int& s, const int&) {
    std::vector<int> next = prefix;
    next.push_back(s);
    return next;
  };
  p.noise_sampler = [](int, std::mt19937_64&) { return 0; };
  p.stage_reward = [o](int, const std::vector<int>& prefix, const int& s) {
    const Real base = prefix.empty() ? 0.0 : o->evaluate(prefix);
    std::vector<int> next = prefix;
    next.push_back(s);
    return o->evaluate(next) - base;
  };
  p.terminal_reward = [](const std::vector<int>&) { return 0.0; };
  p.feasible = [o](int, const std::vector<int>& prefix, const int& s) {
    return o->element_allowed(prefix, s);
  };
  return p;
}

AdpScheme<std::vector<int>, int> zero_tail_scheme(const SubmodObjective& obj) {
  obj.validate();
  auto o = std::make_shared<SubmodObjective>(obj);

  auto marginal = [o](const std::vector<int>& prefix, int s) {
    const Real base = prefix.empty() ? 0.0 : o->evaluate(prefix);
    std::vector<int> next = prefix;
    next.push_back(s);
    return o->evaluate(next) - base;
  };

  AdpScheme<std::vector<int>, int> scheme;
  scheme.horizon = obj.horizon;
  scheme.w_hat = [](int, const std::vector<int>&, const int&) { return 0.0; };
  scheme.q_hat = [marginal](int, const std::vector<int>& prefix, const int& s) {
    return marginal(prefix, s);
  };
  scheme.policy = [o, marginal](int, const std::vector<int>& prefix) {
    int best_s = -1;
    Real best = 0;
    for (int s = 0; s < o->ground_size; ++s) {
      if (!o->element_allowed(prefix, s)) continue;
      const Real gain = marginal(prefix, s);
      if (best_s < 0 || gain > best) {
        best_s = s;
        best = gain;
      }
    }
    if (best_s < 0) throw std::runtime_error("zero_tail_scheme: no admissible element");
    return best_s;
  };
  return scheme;
}

}  // namespace adpbound
