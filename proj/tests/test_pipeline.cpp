#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vforge/pipeline.hpp"

using namespace vforge;
namespace fs = std::filesystem;

namespace {

const char* kSpecText =
    "# 0.3 m survey boat\n"
    "require.thrust_N = 5\n"
    "require.cruise_speed_mps = 0.5\n"
    "require.payload_mass_kg = 0.5\n"
    "constraint.max_dimensions_m = 0.36\n"
    "constraint.max_stress_Pa = 2e8\n"
    "constraint.water_density = 1000\n";

std::string spec_with(const std::string& extra_lines) {
  return std::string(kSpecText) + extra_lines;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("vforge_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(static_cast<bool>(in), "missing file ", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string strip_timestamp(const std::string& report) {
  std::istringstream in(report);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("timestamp:", 0) == 0) continue;
    out << line << "\n";
  }
  return out.str();
}

}  // namespace

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("design specs parse with unit suffixes and overrides") {
  DesignSpec spec = parse_design_spec(spec_with(
      "override = initial_params.n_blades = 4\n"
      "override = optimizer.budget = 32\n"));
  CHECK(spec.required_thrust_N == 5.0);
  CHECK(spec.cruise_speed_mps == 0.5);
  CHECK(spec.payload_mass_kg == 0.5);
  CHECK(spec.max_dimensions_m == 0.36);
  CHECK(spec.max_stress_pa == 2e8);
  CHECK(spec.water_density_kg_m3 == 1000.0);
  REQUIRE(spec.overrides.size() == 2);
  CHECK(spec.overrides[0].path == "initial_params.n_blades");
  CHECK(spec.overrides[0].value == "4");

  DesignSpec mm = parse_design_spec(
      "require.thrust_N = 5\n"
      "require.cruise_speed_mps = 0.5\n"
      "require.payload_mass_kg = 0.5\n"
      "constraint.max_dimensions_m = 360\n"
      "constraint.max_stress_Pa = 2e8\n"
      "constraint.water_density = 1000\n",
      /*bare_lengths_are_mm=*/true);
  CHECK(mm.max_dimensions_m == doctest::Approx(0.36));
}

TEST_CASE("missing and unknown spec keys are named in the error") {
  CHECK_THROWS_WITH_AS(
      parse_design_spec("require.thrust_N = 5\n"),
      doctest::Contains("require.cruise_speed_mps"), PlanningError);
  CHECK_THROWS_WITH_AS(parse_design_spec(spec_with("mystery.key = 1\n")),
                       doctest::Contains("mystery.key"), PlanningError);
}

TEST_CASE("planning is a pure function of the spec") {
  std::string first = plan_to_text(plan(parse_design_spec(kSpecText)));
  std::string second = plan_to_text(plan(parse_design_spec(kSpecText)));
  CHECK(first == second);
  CHECK(first.find("stage = GenerateGeometry\n") != std::string::npos);
  CHECK(first.find("stage = ControlSim\n") != std::string::npos);
  CHECK(first.find("rule = ") != std::string::npos);
}

TEST_CASE("plans round-trip through their text form") {
  PipelinePlan p = plan(parse_design_spec(
      spec_with("override = checkpoint.Optimize = human_review\n")));
  std::string text = plan_to_text(p);
  PipelinePlan reparsed = parse_plan(text);
  CHECK(plan_to_text(reparsed) == text);
  CHECK(reparsed.human_review_checkpoints.count(Stage::Optimize) == 1);
}

TEST_CASE("the planner derives sizing from the constraints") {
  PipelinePlan p = plan(parse_design_spec(kSpecText));
  CHECK(p.stages.size() == 6);
  CHECK(p.human_review_checkpoints.empty());
  CHECK(p.operating_point.advance_speed_mps == 0.5);
  CHECK(p.objective.min_thrust_N == 5.0);
  CHECK(p.objective.max_root_stress_Pa == 2e8);
  CHECK(p.payload_mass_kg == 0.5);
  CHECK(p.hull.length_m == doctest::Approx(0.30));  // capped at stock size
  CHECK(p.initial_params.span_m == doctest::Approx(0.026));
  CHECK(p.rule_log.size() >= 6);
  CHECK(p.override_log.empty());

  // A tighter envelope scales the hull down and caps the blade span.
  DesignSpec tight = parse_design_spec(kSpecText);
  tight.max_dimensions_m = 0.060;
  PipelinePlan small = plan(tight);
  CHECK(small.hull.length_m == doctest::Approx(0.060));
  CHECK(small.initial_params.span_m == doctest::Approx(0.020));
}

TEST_CASE("overrides are applied in order and logged one-for-one") {
  PipelinePlan p = plan(parse_design_spec(spec_with(
      "override = initial_params.n_blades = 4\n"
      "override = initial_params.span = 22 mm\n"
      "override = optimizer.budget = 48\n")));
  CHECK(p.initial_params.blade_count == 4);
  CHECK(p.initial_params.span_m == doctest::Approx(0.022));
  CHECK(p.optimizer_budget == 48);
  CHECK(p.override_log.size() == 3);
  CHECK(p.override_log[0] == "initial_params.n_blades = 4");
  // Initial-parameter overrides re-center the search bounds.
  CHECK(p.bounds.contains(p.initial_params));
}

TEST_CASE("unknown override paths and bad values are override errors") {
  CHECK_THROWS_AS(
      plan(parse_design_spec(spec_with("override = warp.factor = 9\n"))),
      OverrideError);
  CHECK_THROWS_AS(plan(parse_design_spec(
                      spec_with("override = initial_params.span = soon\n"))),
                  OverrideError);
  CHECK_THROWS_AS(plan(parse_design_spec(spec_with(
                      "override = checkpoint.Nonsense = human_review\n"))),
                  OverrideError);
}

TEST_CASE("an envelope smaller than the hub is a planning error naming the "
          "constraint") {
  DesignSpec spec = parse_design_spec(kSpecText);
  spec.max_dimensions_m = 0.015;  // below the 20 mm hub diameter
  CHECK_THROWS_WITH_AS(plan(spec), doctest::Contains("max_dimensions"),
                       PlanningError);
}

TEST_CASE("plan text parsing rejects malformed stage lists") {
  PipelinePlan p = plan(parse_design_spec(kSpecText));
  std::string text = plan_to_text(p);

  std::string bad_stage = text;
  bad_stage.replace(bad_stage.find("stage = AssembleMesh"),
                    std::string("stage = AssembleMesh").size(),
                    "stage = BuildEverything");
  CHECK_THROWS_AS(parse_plan(bad_stage), PlanningError);

  // Duplicated stage violates the subsequence rule.
  std::string duplicated = text;
  duplicated.insert(duplicated.find("stage = AssembleMesh"),
                    "stage = GenerateGeometry\n");
  CHECK_THROWS_AS(parse_plan(duplicated), PlanningError);

  // Checkpoint on a stage that is not planned.
  PipelinePlan skinny = p;
  skinny.stages = {Stage::GenerateGeometry};
  skinny.human_review_checkpoints = {Stage::Evaluate};
  CHECK_THROWS_AS(skinny.validate_or_throw(), PlanningError);
}

TEST_CASE("autonomy classification follows the rule table") {
  PipelinePlan p = plan(parse_design_spec(kSpecText));

  CHECK(classify_amd_level(p).level == 4);  // zero checkpoints

  PipelinePlan manual = p;
  manual.stages.clear();
  manual.human_review_checkpoints.clear();
  CHECK(classify_amd_level(manual).level == 0);

  PipelinePlan assisted = p;
  assisted.stages = {Stage::GenerateGeometry, Stage::AssembleMesh};
  assisted.human_review_checkpoints = {Stage::GenerateGeometry,
                                       Stage::AssembleMesh};
  CHECK(classify_amd_level(assisted).level == 1);

  PipelinePlan reviewed = p;
  reviewed.human_review_checkpoints = {
      Stage::GenerateGeometry, Stage::AssembleMesh, Stage::Evaluate,
      Stage::Optimize,         Stage::BuoyancyCheck, Stage::ControlSim};
  CHECK(classify_amd_level(reviewed).level <= 2);

  PipelinePlan final_only = p;
  final_only.human_review_checkpoints = {Stage::ControlSim};
  CHECK(classify_amd_level(final_only).level == 3);

  for (const PipelinePlan* variant :
       {&p, &manual, &assisted, &reviewed, &final_only}) {
    AmdLevel amd = classify_amd_level(*variant);
    CHECK(amd.level >= 0);
    CHECK(amd.level <= 4);
    CHECK_FALSE(amd.rationale.empty());
  }
}

TEST_CASE("removing a checkpoint never lowers the autonomy level") {
  PipelinePlan base = plan(parse_design_spec(kSpecText));
  const std::vector<Stage> all = base.stages;
  for (unsigned mask = 0; mask < 64; ++mask) {
    PipelinePlan variant = base;
    variant.human_review_checkpoints.clear();
    for (unsigned bit = 0; bit < all.size(); ++bit) {
      if (mask & (1u << bit)) {
        variant.human_review_checkpoints.insert(all[bit]);
      }
    }
    int level = classify_amd_level(variant).level;
    for (Stage s : variant.human_review_checkpoints) {
      PipelinePlan fewer = variant;
      fewer.human_review_checkpoints.erase(s);
      CHECK(classify_amd_level(fewer).level >= level);
    }
  }
}

TEST_CASE("a full pipeline run succeeds and persists every artifact") {
  PipelinePlan p = plan(
      parse_design_spec(spec_with("override = optimizer.budget = 24\n")));
  fs::path dir = fresh_dir("full_run");
  RunReport report = run_pipeline(p, dir);
  CHECK(report.success);
  CHECK_FALSE(report.paused);
  REQUIRE(report.stages.size() == 6);
  for (const StageReport& stage : report.stages) {
    CHECK(stage.status == StageStatus::Ok);
  }
  for (const char* artifact :
       {"sections.txt", "propeller.stl", "hull.stl", "hydro_report.txt",
        "history.csv", "optimized_params.txt", "buoyancy.txt",
        "trace_0_forward.csv", "trace_4_stop.csv", "report.txt"}) {
    CHECK_MESSAGE(fs::exists(dir / artifact), "missing ", artifact);
  }
  std::string text = read_text(dir / "report.txt");
  CHECK(text.find("result = success") != std::string::npos);
  CHECK(text.find("amd_level = 4") != std::string::npos);
}

TEST_CASE("re-running a plan reproduces the report modulo the timestamp") {
  PipelinePlan p = plan(
      parse_design_spec(spec_with("override = optimizer.budget = 16\n")));
  fs::path dir1 = fresh_dir("repeat_a");
  fs::path dir2 = fresh_dir("repeat_b");
  run_pipeline(p, dir1);
  run_pipeline(p, dir2);
  CHECK(strip_timestamp(read_text(dir1 / "report.txt")) ==
        strip_timestamp(read_text(dir2 / "report.txt")));
  CHECK(read_text(dir1 / "hydro_report.txt") ==
        read_text(dir2 / "hydro_report.txt"));
  CHECK(read_text(dir1 / "history.csv") == read_text(dir2 / "history.csv"));
  CHECK(read_text(dir1 / "propeller.stl") ==
        read_text(dir2 / "propeller.stl"));
}

TEST_CASE("a single-stage plan produces exactly its artifact plus the "
          "report") {
  PipelinePlan p = plan(parse_design_spec(
      spec_with("override = stages = GenerateGeometry\n")));
  fs::path dir = fresh_dir("single_stage");
  RunReport report = run_pipeline(p, dir);
  CHECK(report.success);
  REQUIRE(report.stages.size() == 1);
  CHECK(report.stages[0].stage == Stage::GenerateGeometry);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    (void)entry;
    ++files;
  }
  CHECK(files == 2);  // sections.txt + report.txt
}

TEST_CASE("a failing evaluation skips all downstream stages") {
  // Low rpm into a fast current: the section inflow angle exceeds the
  // pitch everywhere, so the evaluation reports drag and fails.
  PipelinePlan p = plan(parse_design_spec(spec_with(
      "override = operating_point.rpm = 500\n"
      "override = operating_point.advance_speed = 3\n")));
  fs::path dir = fresh_dir("eval_fail");
  RunReport report = run_pipeline(p, dir);
  CHECK_FALSE(report.success);
  CHECK_FALSE(report.paused);
  REQUIRE(report.stages.size() == 6);
  CHECK(report.stages[2].stage == Stage::Evaluate);
  CHECK(report.stages[2].status == StageStatus::Failed);
  for (std::size_t i = 3; i < 6; ++i) {
    CHECK(report.stages[i].status == StageStatus::Skipped);
  }
  CHECK(read_text(dir / "report.txt").find("result = failed") !=
        std::string::npos);
}

TEST_CASE("an overloaded hull fails the buoyancy stage") {
  PipelinePlan p = plan(parse_design_spec(spec_with(
      "override = buoyancy.payload_mass_kg = 50\n"
      "override = optimizer.budget = 8\n")));
  fs::path dir = fresh_dir("buoyancy_fail");
  RunReport report = run_pipeline(p, dir);
  CHECK_FALSE(report.success);
  REQUIRE(report.stages.size() == 6);
  CHECK(report.stages[4].stage == Stage::BuoyancyCheck);
  CHECK(report.stages[4].status == StageStatus::Failed);
  CHECK(report.stages[5].status == StageStatus::Skipped);
}

TEST_CASE("a checkpoint pauses the run and an approval resumes it") {
  PipelinePlan p = plan(parse_design_spec(spec_with(
      "override = checkpoint.Evaluate = human_review\n"
      "override = optimizer.budget = 8\n")));
  fs::path dir = fresh_dir("checkpointed");
  RunReport paused = run_pipeline(p, dir);
  CHECK(paused.paused);
  CHECK_FALSE(paused.success);
  REQUIRE(paused.stages.size() == 6);
  CHECK(paused.stages[2].status == StageStatus::AwaitingReview);
  CHECK(paused.stages[3].status == StageStatus::Skipped);
  CHECK(fs::exists(dir / "review_Evaluate.txt"));
  std::string review = read_text(dir / "review_Evaluate.txt");
  CHECK(review.find("--approve Evaluate") != std::string::npos);
  CHECK(read_text(dir / "report.txt").find("result = awaiting_review") !=
        std::string::npos);

  RunReport resumed = run_pipeline(p, dir, {Stage::Evaluate});
  CHECK(resumed.success);
  CHECK_FALSE(resumed.paused);
  for (const StageReport& stage : resumed.stages) {
    CHECK(stage.status == StageStatus::Ok);
  }
}

TEST_CASE("classification matches the autonomy reported by the run") {
  PipelinePlan p = plan(parse_design_spec(spec_with(
      "override = checkpoint.ControlSim = human_review\n"
      "override = stages = GenerateGeometry AssembleMesh ControlSim\n")));
  CHECK(classify_amd_level(p).level == 3);
}

TEST_CASE("blade parameter files round-trip and accept aliases") {
  BladeDesignParams defaults;
  std::string text = blade_params_text(defaults);
  BladeDesignParams parsed = parse_blade_params(text);
  CHECK(blade_params_text(parsed) == text);

  BladeDesignParams aliased = parse_blade_params(
      "n_blades = 5\n"
      "span = 30 mm\n"
      "pitch_root = 30 deg\n");
  CHECK(aliased.blade_count == 5);
  CHECK(aliased.span_m == doctest::Approx(0.030));
  CHECK(aliased.pitch_root_rad == doctest::Approx(0.5235987755982988));

  BladeDesignParams mm = parse_blade_params("span = 30\n", true);
  CHECK(mm.span_m == doctest::Approx(0.030));

  CHECK_THROWS_WITH_AS(parse_blade_params("span = 0.02\nwat = 1\n"),
                       doctest::Contains("line 2"), ValidationError);
  CHECK_THROWS_AS(parse_blade_params("span = -1\n"), ValidationError);
}

TEST_CASE("section tables list every point of every station") {
  BladeDesignParams params;
  params.section_count = 3;
  params.chord_point_count = 8;
  auto sections = generate_blade_sections(params);
  std::string table = sections_table_text(sections);
  CHECK(table.find("sections = 3") != std::string::npos);
  CHECK(table.find("points_per_section = 14") != std::string::npos);
  std::size_t rows = 0;
  std::istringstream in(table);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' &&
        line.find('=') == std::string::npos) {
      ++rows;
    }
  }
  CHECK(rows == 3 * 14);
}

TEST_SUITE_END();
