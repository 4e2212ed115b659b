#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "htgame/analysis.hpp"
#include "htgame/errors.hpp"
#include "htgame/experiments.hpp"

using namespace htgame;

namespace {

const std::filesystem::path kDir = HTGAME_SCENARIO_DIR;

ScenarioFile scenario(const char* file) { return load_scenario(kDir / file); }

ResultTable round_trip(const ResultTable& t) {
  std::stringstream ss;
  t.write_csv(ss);
  return ResultTable::read_csv(ss);
}

void expect_same_table(const ResultTable& a, const ResultTable& b) {
  ASSERT_EQ(a.columns().size(), b.columns().size());
  for (std::size_t c = 0; c < a.columns().size(); ++c) {
    EXPECT_EQ(a.columns()[c].name, b.columns()[c].name);
    EXPECT_EQ(a.columns()[c].unit, b.columns()[c].unit);
  }
  ASSERT_EQ(a.rows().size(), b.rows().size());
  for (std::size_t r = 0; r < a.rows().size(); ++r)
    for (std::size_t c = 0; c < a.columns().size(); ++c) {
      const Cell& x = a.rows()[r][c];
      const Cell& y = b.rows()[r][c];
      ASSERT_EQ(x.index(), y.index()) << r << "," << c;
      if (const double* d = std::get_if<double>(&x)) {
        const double e = std::get<double>(y);
        if (std::isnan(*d))
          EXPECT_TRUE(std::isnan(e));
        else
          EXPECT_EQ(*d, e) << r << "," << c;  // bit-exact
      } else {
        EXPECT_EQ(std::get<std::string>(x), std::get<std::string>(y));
      }
    }
  EXPECT_EQ(a.metadata(), b.metadata());
}

std::string format_cell(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}

}  // namespace

TEST(ResultTable, RoundTripIsExact) {
  ResultTable t({{"x", "utility"}, {"label", ""}, {"y", "prob"}});
  t.set_metadata("scenario_hash", "0123456789abcdef");
  t.set_metadata("note", "commas, colons: fine");
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) t.add_row({u(rng), std::string("row ") + std::to_string(i), u(rng) * 1e-9});
  t.add_row({0.1, std::string("has, comma"), 1.0 / 3.0});
  t.add_row({-0.0, std::string("has \"quotes\"\nand newline"), 5e-324});
  t.add_row({std::numeric_limits<double>::quiet_NaN(), std::string(""), std::numeric_limits<double>::infinity()});
  t.add_row({std::numeric_limits<double>::max(), std::string("x"), -std::numeric_limits<double>::infinity()});
  expect_same_table(t, round_trip(t));
}

TEST(ResultTable, SeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(-0.0), "0");
}

TEST(ResultTable, RectangularAndLookup) {
  ResultTable t({{"a", ""}, {"b", ""}});
  EXPECT_THROW(t.add_row({1.0}), ValidationError);
  t.add_row({1.0, std::string("x")});
  EXPECT_EQ(t.number(0, "a"), 1.0);
  EXPECT_EQ(t.text(0, "b"), "x");
  EXPECT_THROW(t.number(0, "b"), ValidationError);
  EXPECT_THROW(t.column_index("c"), ValidationError);
}

TEST(RunSolve, ReferenceCaseRoutesAgree) {
  const ResultTable t = run_solve(scenario("reference_case.json"));
  ASSERT_EQ(t.rows().size(), 3u);
  EXPECT_EQ(t.text(0, "route"), "fictitious_play");
  EXPECT_EQ(t.text(1, "route"), "indifference");
  EXPECT_EQ(t.text(2, "route"), "support_enumeration");
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(t.text(r, "status"), "ok");
    EXPECT_NEAR(t.number(r, "value"), 2.1930, 0.02);
    EXPECT_LT(t.number(r, "p_a_discrepancy"), 0.01);
  }
  EXPECT_EQ(t.number(0, "converged"), 1.0);
  EXPECT_EQ(t.metadata_value("mode"), "solve");
  EXPECT_EQ(t.metadata_value("scenario_hash"), scenario_hash(scenario("reference_case.json")));
  expect_same_table(t, round_trip(t));
}

TEST(RunSolve, MatchingPenniesValueZero) {
  const ResultTable t = run_solve(scenario("matching_pennies.json"));
  for (std::size_t r = 0; r < t.rows().size(); ++r) EXPECT_NEAR(t.number(r, "value"), 0.0, 1e-2);
}

TEST(RunSolve, StrategyColumnsSumToOne) {
  const ResultTable t = run_solve(scenario("reference_case_pt.json"));
  ASSERT_EQ(t.rows().size(), 2u);
  for (std::size_t r = 0; r < 2; ++r) {
    double sa = 0, sd = 0;
    for (const char* id : {"A", "B", "C", "D"}) sa += t.number(r, std::string("p_a_") + id);
    for (const char* l : {"AB", "AC", "AD", "BC", "BD", "CD"}) sd += t.number(r, std::string("p_d_") + l);
    EXPECT_NEAR(sa, 1.0, 1e-12);
    EXPECT_NEAR(sd, 1.0, 1e-12);
  }
}

TEST(RunSweepFine, EutCrossingBetweenThreeAndFour) {
  ScenarioFile s = scenario("reference_case.json");
  const ResultTable t = run_sweep_fine(s);
  ASSERT_EQ(t.rows().size(), 12u);
  for (std::size_t r = 0; r < 12; ++r) {
    EXPECT_EQ(t.number(r, "fine"), static_cast<double>(r + 1));
    EXPECT_EQ(t.number(r, "value_attacker"), -t.number(r, "value_defender"));
    EXPECT_EQ(t.number(r, "sign_change"), r == 3 ? 1.0 : 0.0) << "row " << r;
  }
  EXPECT_LT(t.number(2, "value_defender"), 0.0);
  EXPECT_GT(t.number(3, "value_defender"), 0.0);
}

TEST(RunSweepFine, RowsInGridOrderAndDeterministic) {
  ScenarioFile s = scenario("sweep_fine.json");
  s.experiment.fine_grid = {2, 5, 8};
  const ResultTable a = run_sweep_fine(s);
  const ResultTable b = run_sweep_fine(s);
  ASSERT_EQ(a.rows().size(), 6u);
  for (std::size_t r = 0; r < 6; ++r) {
    EXPECT_EQ(a.number(r, "fine"), s.experiment.fine_grid[r / 2]);
    EXPECT_EQ(a.text(r, "model"), r % 2 == 0 ? "eut" : "pt(alpha_a=0.5,alpha_d=0.5)");
  }
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < a.columns().size(); ++c)
      EXPECT_EQ(format_cell(a.rows()[r][c]), format_cell(b.rows()[r][c]));  // NaN-safe
  // F=8: defender is better off under EUT.
  EXPECT_GT(a.number(4, "value_defender"), a.number(5, "value_defender"));
}

TEST(RunSweepAlpha, ModesFixTheOtherAlpha) {
  ScenarioFile s = scenario("sweep_alpha_attacker.json");
  s.experiment.alpha_grid = {0.6, 1.0};
  const ResultTable t = run_sweep_alpha(s);
  ASSERT_EQ(t.rows().size(), 2u);
  EXPECT_EQ(t.number(0, "alpha_d"), 1.0);
  EXPECT_EQ(t.number(0, "alpha_a"), 0.6);
  EXPECT_EQ(t.metadata_value("alpha_mode"), "attacker_only");
  s.experiment.alpha_mode = AlphaMode::defender_only;
  const ResultTable d = run_sweep_alpha(s);
  EXPECT_EQ(d.number(0, "alpha_a"), 1.0);
  EXPECT_EQ(d.number(0, "alpha_d"), 0.6);
  // alpha = 1 is EUT in every mode.
  EXPECT_NEAR(t.number(1, "value"), 2.1930, 0.02);
}

TEST(RunScenarioPair, ReportsDropAgainstExactEut) {
  const ResultTable t = run_scenario_pair(scenario("scenario2.json"));
  ASSERT_EQ(t.rows().size(), 1u);
  EXPECT_EQ(t.number(0, "alpha_a"), 0.1);
  EXPECT_EQ(t.number(0, "alpha_d"), 0.5);
  EXPECT_NEAR(t.number(0, "eut_value"), 68.0 / 31.0, 1e-12);
  EXPECT_NEAR(t.number(0, "value_drop"), 1.0 - t.number(0, "value") / t.number(0, "eut_value"), 1e-12);
}

TEST(RunTrace, RowCountAndFinalRowMatchSolve) {
  const ScenarioFile s = scenario("trace_eut.json");
  const ResultTable trace = run_trace(s);
  const ResultTable solve = run_solve(s);
  const double iterations = solve.number(0, "iterations");
  EXPECT_EQ(trace.rows().size(), static_cast<std::size_t>(std::ceil(iterations / 1000.0)));
  const std::size_t last = trace.rows().size() - 1;
  EXPECT_EQ(trace.number(last, "iteration"), iterations);
  for (const char* id : {"A", "B", "C", "D"}) {
    const std::string col = std::string("p_a_") + id;
    EXPECT_NEAR(trace.number(last, col), solve.number(0, col), 1e-3);
  }
  EXPECT_LT(trace.number(last, "delta_p_a"), 1e-3);
  EXPECT_LT(trace.number(last, "delta_p_d"), 1e-3);
}

TEST(RunThreshold, EutRowAndPtRow) {
  ScenarioFile s = scenario("threshold.json");
  s.model.kind = ModelKind::eut;
  const ResultTable t = run_threshold(s);
  ASSERT_EQ(t.rows().size(), 1u);
  EXPECT_EQ(t.text(0, "status"), "ok");
  EXPECT_NEAR(t.number(0, "value_at_threshold"), 0.0, 1e-6);
  EXPECT_NEAR(t.number(0, "closed_form_f"), t.number(0, "f_threshold"), 1e-6);
}

TEST(RunThreshold, BadBracketBecomesStatus) {
  ScenarioFile s = scenario("threshold.json");
  s.model.kind = ModelKind::eut;
  s.experiment.bracket = {10.0, 20.0};
  const ResultTable t = run_threshold(s);
  EXPECT_EQ(t.text(0, "status"), "no_root_in_bracket");
  EXPECT_FALSE(t.metadata_value("error_eut").empty());
}

TEST(RunExperiment, Dispatch) {
  const ScenarioFile s = scenario("matching_pennies.json");
  EXPECT_EQ(run_experiment(s, ExperimentMode::solve).metadata_value("mode"), "solve");
  EXPECT_EQ(run_experiment(s, ExperimentMode::trace).metadata_value("mode"), "trace");
}
