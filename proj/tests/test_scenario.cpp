#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "htgame/errors.hpp"
#include "htgame/scenario.hpp"

using namespace htgame;

namespace {

const std::filesystem::path kDir = HTGAME_SCENARIO_DIR;

const char* kMinimal = R"({
  "trojans": [{"id": "A", "damage": 1}, {"id": "B", "damage": 2},
              {"id": "C", "damage": 4}, {"id": "D", "damage": 12}],
  "uniform_fine": 8,
  "test_budget": 2
})";

std::string message_of(const std::string& json) {
  try {
    parse_scenario(json);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

std::string with(const std::string& extra) {
  std::string s = kMinimal;
  s.insert(s.rfind('}'), "," + extra);
  return s;
}

}  // namespace

TEST(Scenario, BundledReferenceCase) {
  const ScenarioFile s = load_scenario(kDir / "reference_case.json");
  EXPECT_EQ(s.game.damages, (std::vector<double>{1, 2, 4, 12}));
  EXPECT_EQ(s.game.fines, (std::vector<double>{8, 8, 8, 8}));
  EXPECT_EQ(s.game.test_budget, 2);
  EXPECT_EQ(s.model.kind, ModelKind::eut);
  EXPECT_EQ(s.experiment.mode, ExperimentMode::solve);
  EXPECT_TRUE(s.sigma0_given);
}

TEST(Scenario, EveryBundledFileLoads) {
  int n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kDir)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_scenario(entry.path())) << entry.path();
    ++n;
  }
  EXPECT_GE(n, 10);
}

TEST(Scenario, DefaultsWhenBlocksOmitted) {
  const ScenarioFile s = parse_scenario(kMinimal);
  EXPECT_EQ(s.fp.convergence_m, 1000u);
  EXPECT_EQ(s.fp.checkpoint_gap, 1000u);
  EXPECT_EQ(s.fp.max_iterations, 10'000'000u);
  EXPECT_FALSE(s.sigma0_given);
  EXPECT_EQ(s.experiment.fine_grid, default_fine_grid());
  EXPECT_EQ(s.experiment.alpha_grid.size(), 10u);
  EXPECT_EQ(s.experiment.bracket, std::make_pair(0.1, 50.0));
  EXPECT_EQ(s.model.kind, ModelKind::eut);
}

TEST(Scenario, BudgetMustBeBelowTypeCount) {
  EXPECT_NE(message_of(R"({"trojans": [{"id": "A", "damage": 1, "fine": 1},
                                       {"id": "B", "damage": 1, "fine": 1}],
                          "test_budget": 2})")
                .find("K < T required"),
            std::string::npos);
}

TEST(Scenario, UnknownFieldsRejectedAtEveryLevel) {
  EXPECT_NE(message_of(with(R"("colour": 1)")).find("colour: unknown field"), std::string::npos);
  EXPECT_NE(message_of(with(R"("model": {"kind": "pt", "beta": 1})")).find("model.beta"),
            std::string::npos);
  EXPECT_NE(message_of(with(R"("fp": {"tolerance": 1})")).find("fp.tolerance"), std::string::npos);
  EXPECT_NE(message_of(R"({"trojans": [{"id": "A", "damage": 1, "fine": 1, "x": 0},
                                       {"id": "B", "damage": 1, "fine": 1}], "test_budget": 1})")
                .find("trojans[0].x"),
            std::string::npos);
}

TEST(Scenario, FieldErrorsNameTheField) {
  EXPECT_NE(message_of(R"({"trojans": [{"id": "A", "damage": "big", "fine": 1},
                                       {"id": "B", "damage": 1, "fine": 1}], "test_budget": 1})")
                .find("trojans[0].damage"),
            std::string::npos);
  EXPECT_NE(message_of(with(R"("experiment": {"fine_grid": [3, 2]})")).find("strictly increasing"),
            std::string::npos);
  EXPECT_NE(message_of(with(R"("experiment": {"alpha_grid": [0.5, 1.5]})")).find("(0, 1]"),
            std::string::npos);
  EXPECT_NE(message_of(with(R"("experiment": {"fine_grid": []})")).find("non-empty"), std::string::npos);
  EXPECT_NE(message_of(with(R"("fp": {"sigma0_d": [0.5, 0.5]})")).find("together"), std::string::npos);
  EXPECT_NE(message_of(with(R"("fp": {"sigma0_d": [0.5, 0.5], "sigma0_a": [1, 0, 0, 0, 0, 0]})"))
                .find("needs 4 entries"),
            std::string::npos);
  EXPECT_NE(message_of(with(R"("model": {"kind": "pt", "alpha_a": 0})")).find("alpha"),
            std::string::npos);
  EXPECT_NE(message_of(with(R"("experiment": {"mode": "dance"})")).find("dance"), std::string::npos);
}

TEST(Scenario, UniformFineConflictsWithPerTrojanFine) {
  EXPECT_NE(message_of(R"({"trojans": [{"id": "A", "damage": 1, "fine": 1},
                                       {"id": "B", "damage": 1}],
                          "uniform_fine": 3, "test_budget": 1})")
                .find("conflicts"),
            std::string::npos);
}

TEST(Scenario, SyntaxErrorReportsLine) {
  const std::string msg = message_of("{\n  \"trojans\": [\n    {\"id\": \"A\",,}\n  ]\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Scenario, MissingFileIsValidationError) {
  EXPECT_THROW(load_scenario(kDir / "does_not_exist.json"), ValidationError);
}

TEST(ScenarioHash, ChangesWithSemanticFieldsOnly) {
  const ScenarioFile base = parse_scenario(kMinimal);
  const std::string h = scenario_hash(base);
  EXPECT_EQ(h.size(), 16u);

  // Same content spelled differently: explicit defaults, a name, reordered keys.
  const ScenarioFile same = parse_scenario(R"({
    "test_budget": 2, "name": "whatever",
    "trojans": [{"damage": 1, "id": "A", "fine": 8}, {"id": "B", "damage": 2, "fine": 8},
                {"id": "C", "damage": 4, "fine": 8}, {"id": "D", "damage": 12, "fine": 8}],
    "model": {"kind": "eut"},
    "fp": {"convergence_m": 1000, "checkpoint_gap": 1000, "max_iterations": 10000000}
  })");
  EXPECT_EQ(scenario_hash(same), h);

  ScenarioFile s = base;
  s.game.fines[2] = 8.5;
  EXPECT_NE(scenario_hash(s), h);
  s = base;
  s.game.damages[0] = 1.5;
  EXPECT_NE(scenario_hash(s), h);
  s = base;
  s.fp.convergence_m = 10000;
  EXPECT_NE(scenario_hash(s), h);
  s = base;
  s.model = {.kind = ModelKind::pt, .alpha_d = 0.5, .alpha_a = 0.5};
  EXPECT_NE(scenario_hash(s), h);
  const std::string pt_hash = scenario_hash(s);
  s.model.alpha_a = 0.6;
  EXPECT_NE(scenario_hash(s), pt_hash);
  s = base;
  s.experiment.fine_grid = {1, 2};
  EXPECT_NE(scenario_hash(s), h);
  s = base;
  s.name = "renamed";
  EXPECT_EQ(scenario_hash(s), h);
}

TEST(Scenario, PairAlphas) {
  EXPECT_EQ(pair_alphas(1), std::make_pair(0.5, 0.1));
  EXPECT_EQ(pair_alphas(2), std::make_pair(0.1, 0.5));
  EXPECT_THROW(pair_alphas(3), ValidationError);
}
