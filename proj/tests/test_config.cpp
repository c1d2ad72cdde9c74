#include <doctest.h>

#include <fstream>
#include <sstream>

#include "adpbound/config.hpp"
#include "adpbound/experiments.hpp"

using namespace adpbound;

namespace {

Config parse_text(const std::string& text, const std::string& name = "test.cfg") {
  std::istringstream is(text);
  return parse_config(is, name);
}

}  // namespace

TEST_CASE("parse, serialize, parse is the identity") {
  const std::string text =
      "[experiment]\n"
      "kind = lqg-bounds\n"
      "seed = 7\n"
      "\n"
      "[lqg]\n"
      "H = 10\n"
      "x0 = 0 0 0 0\n"
      "diagQ = 10 1 10 1\n";
  const Config a = parse_text(text);
  std::ostringstream out;
  serialize_config(out, a);
  const Config b = parse_text(out.str());

  REQUIRE(a.sections.size() == b.sections.size());
  for (std::size_t i = 0; i < a.sections.size(); ++i) {
    CHECK(a.sections[i].name == b.sections[i].name);
    REQUIRE(a.sections[i].entries.size() == b.sections[i].entries.size());
    for (std::size_t j = 0; j < a.sections[i].entries.size(); ++j) {
      CHECK(a.sections[i].entries[j].key == b.sections[i].entries[j].key);
      CHECK(a.sections[i].entries[j].value == b.sections[i].entries[j].value);
    }
  }
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_text("[a]\nx 3\n"), doctest::Contains("test.cfg:2"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_text("x = 3\n"), doctest::Contains(":1"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_text("[a]\nx = 1\nx = 2\n"), doctest::Contains("duplicate"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_text("[broken\n"), doctest::Contains("unterminated"),
                       std::runtime_error);
}

TEST_CASE("typed getters validate values with their source line") {
  const Config cfg = parse_text("[pipeline]\nn_traj = banana\nridge = 1e-3\n");
  CHECK_THROWS_WITH_AS(cfg.get_int("pipeline", "n_traj"), doctest::Contains("test.cfg:2"),
                       std::runtime_error);
  CHECK(cfg.get_real("pipeline", "ridge") == doctest::Approx(1e-3));
  CHECK(cfg.get_real_or("pipeline", "absent", 2.5) == 2.5);
  CHECK_THROWS_WITH_AS(cfg.get_real("pipeline", "absent"), doctest::Contains("missing"),
                       std::runtime_error);
}

TEST_CASE("comments and blank lines are ignored") {
  const Config cfg = parse_text("# top comment\n[s]\n; note\nkey = 1\n\n");
  CHECK(cfg.get_int("s", "key") == 1);
}

TEST_CASE("experiment configs load for every kind and scale") {
  for (const auto kind : {ExperimentKind::OracleValidate, ExperimentKind::LqgBounds,
                          ExperimentKind::CoverageSweep}) {
    for (const std::string scale : {"ci", "desk", "paper"}) {
      const Config cfg = default_config(kind, scale);
      const ExperimentConfig ec = load_experiment_config(cfg);
      CHECK(ec.kind == kind);
      CHECK(ec.pipeline.n_rollouts >= 2);
      CHECK(ec.coverage.lambda0_points >= 1);
    }
  }
  CHECK_THROWS_AS(default_config(ExperimentKind::LqgBounds, "huge"), std::invalid_argument);
}

TEST_CASE("model parameters map from the config sections") {
  Config cfg = default_config(ExperimentKind::LqgBounds, "ci");
  cfg.set("lqg", "m", "2.5");
  cfg.set("lqg", "T", "0.2");
  cfg.set("lqg", "H", "6");
  cfg.set("lqg", "x0", "1 0 2 0");
  cfg.set("lqg", "diagR", "0.25 4");
  const ExperimentConfig ec = load_experiment_config(cfg);
  CHECK(ec.lqg.mass == 2.5);
  CHECK(ec.lqg.dt == 0.2);
  CHECK(ec.lqg.horizon == 6);
  CHECK(ec.lqg.x_initial == Vec4(1, 0, 2, 0));
  CHECK(ec.lqg.r_control(1, 1) == 4.0);
  CHECK(ec.lqg.a_matrix(0, 1) == 0.2);

  cfg.set("lqg", "diagQ", "1 2 3");  // wrong arity
  CHECK_THROWS_WITH_AS(load_experiment_config(cfg), doctest::Contains("4 values"),
                       std::runtime_error);

  cfg.set("lqg", "diagQ", "1 1 1 1");
  cfg.set("lqg", "diagR", "0.5 -2");  // violates positive definiteness
  CHECK_THROWS_WITH_AS(load_experiment_config(cfg), doctest::Contains("lqg"),
                       std::runtime_error);
}

TEST_CASE("micro-scale experiment runs write their reports and pass their gates") {
  Config cfg = default_config(ExperimentKind::OracleValidate, "ci");
  cfg.set("oracle", "n_instances", "4");
  cfg.set("oracle", "n_rollouts", "20");
  cfg.set("experiment", "out", "test_out/oracle_micro");
  const auto r = run_oracle_validate(load_experiment_config(cfg), nullptr);
  CHECK(r.all_valid);
  CHECK(static_cast<int>(r.cases.size()) == 20);
  CHECK(std::ifstream("test_out/oracle_micro/oracle_validation.csv").good());
  CHECK(std::ifstream("test_out/oracle_micro/oracle_validation_summary.txt").good());
}

TEST_CASE("module invariants are enforced at load time with config context") {
  Config cfg = default_config(ExperimentKind::LqgBounds, "ci");
  cfg.set("lqg", "H", "0");
  CHECK_THROWS_WITH_AS(load_experiment_config(cfg), doctest::Contains("H"), std::runtime_error);

  Config cfg2 = default_config(ExperimentKind::CoverageSweep, "ci");
  cfg2.set("coverage", "lambda0_min", "-1");
  CHECK_THROWS_WITH_AS(load_experiment_config(cfg2), doctest::Contains("lambda0_min"),
                       std::runtime_error);

  Config cfg3 = default_config(ExperimentKind::OracleValidate, "ci");
  cfg3.set("experiment", "kind", "unknown-thing");
  CHECK_THROWS_WITH_AS(load_experiment_config(cfg3), doctest::Contains("unknown"),
                       std::runtime_error);

  Config cfg4 = default_config(ExperimentKind::LqgBounds, "ci");
  cfg4.set("pipeline", "delta_labels", "dnn");
  CHECK_THROWS_WITH_AS(load_experiment_config(cfg4), doctest::Contains("delta_labels"),
                       std::runtime_error);
}
