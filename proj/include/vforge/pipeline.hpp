#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vforge/control.hpp"
#include "vforge/errors.hpp"
#include "vforge/geometry.hpp"
#include "vforge/hydro.hpp"
#include "vforge/mesh.hpp"
#include "vforge/optimizer.hpp"

namespace vforge {

// One human-feedback directive: assign `value` to the plan field at `path`
// after the planning rules have run.
struct OverrideDirective {
  std::string path;
  std::string value;
};

// Parsed design specification: functional requirements, constraints, and
// the ordered human-feedback overrides.
struct DesignSpec {
  double required_thrust_N = 0.0;
  double cruise_speed_mps = 0.0;
  double payload_mass_kg = 0.0;
  double max_dimensions_m = 0.0;
  double max_stress_pa = 0.0;
  double water_density_kg_m3 = 0.0;
  std::vector<OverrideDirective> overrides;
};

enum class Stage {
  GenerateGeometry,
  AssembleMesh,
  Evaluate,
  Optimize,
  BuoyancyCheck,
  ControlSim,
};

std::string_view stage_name(Stage stage);
std::optional<Stage> stage_from_name(std::string_view name);

// Everything the runner needs, produced deterministically from a spec.
struct PipelinePlan {
  std::vector<Stage> stages;
  std::set<Stage> human_review_checkpoints;
  BladeDesignParams initial_params;
  HullParams hull;
  ObjectiveConfig objective;
  OperatingPoint operating_point;
  ParameterBounds bounds;
  int optimizer_budget = 160;
  double payload_mass_kg = 0.0;
  double material_density_kg_m3 = 1100.0;
  double water_density_kg_m3 = 1000.0;
  double pwm_freq_hz = 490.0;
  double trace_duration_ms = 30.0;
  std::vector<ControlCommand> control_script;
  std::vector<std::string> rule_log;      // named planning rules, in order
  std::vector<std::string> override_log;  // applied overrides, in order

  // Checks stage ordering (a subsequence of the canonical chain), that
  // checkpoints reference planned stages, and all component invariants.
  void validate_or_throw() const;
};

struct AmdLevel {
  int level = 0;
  std::string rationale;
};

// Parses the key-value spec format (see docs/formats.md).  When
// `bare_lengths_are_mm` is set, unsuffixed length values are millimeters.
DesignSpec parse_design_spec(std::string_view text,
                             bool bare_lengths_are_mm = false);

// Deterministic rule-table planner.  Raises PlanningError when a
// constraint cannot be satisfied and OverrideError for unknown override
// paths or bad override values.
PipelinePlan plan(const DesignSpec& spec);

// Canonical plan serialization; byte-identical for identical plans.
std::string plan_to_text(const PipelinePlan& plan);
PipelinePlan parse_plan(std::string_view text);

// Applies one override directive to a plan (also used by the planner).
void apply_override(PipelinePlan& plan, const OverrideDirective& directive);

// Autonomy classification from the checkpoint structure.
AmdLevel classify_amd_level(const PipelinePlan& plan);

enum class StageStatus { Ok, Failed, Skipped, AwaitingReview };
std::string_view stage_status_name(StageStatus status);

struct StageReport {
  Stage stage = Stage::GenerateGeometry;
  StageStatus status = StageStatus::Skipped;
  std::vector<std::pair<std::string, std::string>> metrics;
  std::vector<std::string> artifacts;  // paths relative to the output dir
  std::string note;                    // failure reason / review hint
};

struct RunReport {
  AmdLevel amd;
  std::vector<StageReport> stages;
  bool success = false;
  bool paused = false;  // stopped at a human-review checkpoint
};

// Executes the planned stages in order, writing artifacts and report.txt
// into output_dir.  A stage whose checkpoint is not in `approved` runs,
// emits a review file, and pauses the pipeline (downstream stages are
// skipped and the report says awaiting_review).  A stage failure is
// recorded and downstream stages are skipped.
RunReport run_pipeline(const PipelinePlan& plan,
                       const std::filesystem::path& output_dir,
                       const std::set<Stage>& approved = {});

// Report serialization; `timestamp` is the only line that may differ
// between identical runs (prefixed "timestamp:").
std::string run_report_text(const RunReport& report, const PipelinePlan& plan,
                            std::string_view timestamp);
std::string current_timestamp_utc();

// Standalone design-parameter file format (key = value per field).
BladeDesignParams parse_blade_params(std::string_view text,
                                     bool bare_lengths_are_mm = false);
std::string blade_params_text(const BladeDesignParams& params);

// Geometry sections table (artifact of the first pipeline stage).
std::string sections_table_text(const std::vector<Section3D>& sections);

}  // namespace vforge
