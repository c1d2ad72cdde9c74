#include "adpbound/coverage.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <memory>
#include <ostream>
#include <stdexcept>

namespace adpbound {

void MissionScenario::validate() const {
  if (width < 1 || height < 1) throw std::invalid_argument("MissionScenario: empty lattice");
  if (horizon < 1) throw std::invalid_argument("MissionScenario: horizon must be >= 1");
  if (density.rows() != height || density.cols() != width)
    throw std::invalid_argument("MissionScenario: density shape mismatch");
  if (!density.allFinite() || density.minCoeff() < 0)
    throw std::invalid_argument("MissionScenario: densities must be finite and non-negative");
  if (feasible_points.empty())
    throw std::invalid_argument("MissionScenario: empty feasible set");
  for (int p : feasible_points)
    if (p < 0 || p >= width * height)
      throw std::invalid_argument("MissionScenario: feasible point out of range");
  if (zeta < 0) throw std::invalid_argument("MissionScenario: zeta must be non-negative");
  for (int k = 0; k < horizon; ++k)
    if (lambda_at(k) <= 0)
      throw std::invalid_argument("MissionScenario: decay rate must stay positive");
}

Real detection_prob(const MissionScenario& scenario, const Vec2& x,
                    const std::vector<std::pair<Vec2, int>>& placements) {
  if (static_cast<int>(placements.size()) > scenario.horizon)
    throw std::invalid_argument("detection_prob: more placements than the horizon");
  std::uint64_t seen = 0;
  Real miss = 1.0;
  for (const auto& [s, k] : placements) {
    if (k < 0 || k >= scenario.horizon)
      throw std::invalid_argument("detection_prob: placement step out of range");
    if (seen & (1ULL << k))
      throw std::invalid_argument("detection_prob: duplicate placement step");
    seen |= 1ULL << k;
    miss *= 1.0 - std::exp(-scenario.lambda_at(k) * (x - s).norm());
  }
  return 1.0 - miss;
}

SubmodObjective coverage_objective(const MissionScenario& scenario) {
  scenario.validate();

  struct Data {
    MissionScenario scenario;
    Vector density;    // flattened lattice, same order as point indices
    Matrix distances;  // lattice point x candidate
  };
  auto d = std::make_shared<Data>();
  d->scenario = scenario;

  const int n_points = scenario.width * scenario.height;
  const int n_cand = static_cast<int>(scenario.feasible_points.size());
  d->density.resize(n_points);
  for (int p = 0; p < n_points; ++p)
    d->density(p) = scenario.density(p / scenario.width, p % scenario.width);
  d->distances.resize(n_points, n_cand);
  for (int c = 0; c < n_cand; ++c) {
    const Vec2 s = scenario.point(scenario.feasible_points[c]);
    for (int p = 0; p < n_points; ++p) d->distances(p, c) = (scenario.point(p) - s).norm();
  }

  SubmodObjective obj;
  obj.mode = scenario.mode();
  obj.ground_size = n_cand;
  obj.horizon = scenario.horizon;
  obj.evaluate = [d](const std::vector<int>& prefix) -> Real {
    if (prefix.empty()) return 0.0;
    Eigen::ArrayXd miss = Eigen::ArrayXd::Ones(d->density.size());
    for (std::size_t k = 0; k < prefix.size(); ++k) {
      const Real lambda = d->scenario.lambda_at(static_cast<int>(k));
      miss *= 1.0 - (-lambda * d->distances.col(prefix[k]).array()).exp();
    }
    return (d->density.array() * (1.0 - miss)).sum();
  };
  return obj;
}

MissionScenario build_benchmark_scenario(std::uint64_t seed) {
  MissionScenario sc;
  sc.width = 50;
  sc.height = 40;
  sc.horizon = 5;
  sc.lambda0 = 0.1;
  sc.zeta = 0.1;
  sc.time_step = 0.1;

  auto rng = make_engine(seed);
  std::uniform_real_distribution<Real> high(0.5, 0.8), low(0.1, 0.3);
  sc.density.resize(sc.height, sc.width);
  for (int y = 0; y < sc.height; ++y)
    for (int x = 0; x < sc.width; ++x) {
      const bool right = x >= sc.width / 2;
      const bool top = y >= sc.height / 2;
      const bool dense = (top && right) || (!top && !right);
      sc.density(y, x) = dense ? high(rng) : low(rng);
    }
  sc.feasible_points.resize(sc.width * sc.height);
  for (int p = 0; p < sc.width * sc.height; ++p) sc.feasible_points[p] = p;
  sc.validate();
  return sc;
}

void subsample_feasible(MissionScenario& scenario, int stride) {
  if (stride < 1) throw std::invalid_argument("subsample_feasible: stride must be >= 1");
  std::vector<int> kept;
  for (int p : scenario.feasible_points) {
    const int x = p % scenario.width, y = p / scenario.width;
    if (x % stride == 0 && y % stride == 0) kept.push_back(p);
  }
  scenario.feasible_points = std::move(kept);
  scenario.validate();
}

std::vector<SweepRow> sweep_bounds(const MissionScenario& scenario,
                                   const std::vector<Real>& lambda0_grid, SubmodMode mode,
                                   bool with_brute_force) {
  if (lambda0_grid.empty()) throw std::invalid_argument("sweep_bounds: empty grid");

  std::vector<SweepRow> rows;
  rows.reserve(lambda0_grid.size());
  for (Real lambda0 : lambda0_grid) {
    MissionScenario sc = scenario;
    sc.lambda0 = lambda0;
    sc.zeta = mode == SubmodMode::Set ? 0.0 : scenario.zeta;
    sc.validate();

    const SubmodObjective obj = coverage_objective(sc);
    const GreedyRun run = greedy(obj);

    SweepRow row;
    row.mode = mode;
    row.lambda0 = lambda0;
    row.zeta = sc.zeta;
    row.horizon = sc.horizon;
    row.f_greedy = run.values.back();
    row.v_bar = top_h_value(run, obj);
    row.beta0 = bound_classic();
    row.beta1 = bound_greedy_curvature(run, obj);
    row.beta2 = bound_top_h(run, obj);
    if (with_brute_force) row.f_opt = brute_force_opt(obj).value;
    rows.push_back(row);
  }
  return rows;
}

namespace {
std::string fmt(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "mode,lambda0,zeta,H,f_greedy,v_bar,beta0,beta1,beta2,f_opt\n";
  for (const SweepRow& r : rows) {
    os << to_string(r.mode) << ',' << fmt(r.lambda0) << ',' << fmt(r.zeta) << ',' << r.horizon
       << ',' << fmt(r.f_greedy) << ',' << fmt(r.v_bar) << ',' << fmt(r.beta0) << ','
       << fmt(r.beta1) << ',' << fmt(r.beta2) << ',';
    if (r.f_opt) os << fmt(*r.f_opt);
    os << '\n';
  }
}

void save_scenario(std::ostream& os, const MissionScenario& scenario) {
  os << scenario.width << ' ' << scenario.height << ' ' << scenario.horizon << ' '
     << fmt(scenario.lambda0) << ' ' << fmt(scenario.zeta) << '\n';
  for (int y = 0; y < scenario.height; ++y) {
    for (int x = 0; x < scenario.width; ++x) {
      if (x) os << ' ';
      os << fmt(scenario.density(y, x));
    }
    os << '\n';
  }
}

MissionScenario load_scenario(std::istream& is) {
  MissionScenario sc;
  if (!(is >> sc.width >> sc.height >> sc.horizon >> sc.lambda0 >> sc.zeta))
    throw std::runtime_error("load_scenario: bad header");
  sc.density.resize(sc.height, sc.width);
  for (int y = 0; y < sc.height; ++y)
    for (int x = 0; x < sc.width; ++x)
      if (!(is >> sc.density(y, x))) throw std::runtime_error("load_scenario: truncated density grid");
  sc.feasible_points.resize(sc.width * sc.height);
  for (int p = 0; p < sc.width * sc.height; ++p) sc.feasible_points[p] = p;
  sc.validate();
  return sc;
}

}  // namespace adpbound
