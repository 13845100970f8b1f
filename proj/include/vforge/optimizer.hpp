#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vforge/errors.hpp"
#include "vforge/geometry.hpp"
#include "vforge/hydro.hpp"

namespace vforge {

// The continuous design fields the search may move, in fixed declaration
// order (the probe order of the pattern search).
enum class DesignField {
  Span,
  ChordRoot,
  ChordTip,
  ChordMid,
  PitchRoot,
  PitchTip,
  PitchMid,
  BulgeAmplitude,
  BulgeSharpness,
  BulgeCenter,
  Rake,
  Skew,
  ThicknessRatio,
  PitchAxis,
  HubDiameter,
  HubLength,
};
inline constexpr int kDesignFieldCount = 16;

double get_design_field(const BladeDesignParams& params, DesignField field);
void set_design_field(BladeDesignParams& params, DesignField field,
                      double value);
std::string_view design_field_name(DesignField field);
std::optional<DesignField> design_field_from_name(std::string_view name);

struct FieldBound {
  double lower = 0.0;
  double upper = 0.0;
  bool tunable = false;
};

// Box bounds over every continuous design field.  Only fields flagged
// tunable are searched; the rest stay at their start values.
struct ParameterBounds {
  std::array<FieldBound, kDesignFieldCount> fields{};

  // Default band around a nominal design: chord and pitch distributions
  // tunable, everything else held.
  static ParameterBounds around(const BladeDesignParams& nominal);

  // Raises ConfigError if any lower >= upper or a bound endpoint violates
  // the design-parameter invariants.
  void validate_or_throw() const;
  bool contains(const BladeDesignParams& params) const;
};

enum class ObjectiveTarget { MaxEfficiency, MaxThrust };

struct ObjectiveConfig {
  ObjectiveTarget target = ObjectiveTarget::MaxEfficiency;
  double min_thrust_N = 0.0;        // 0 disables the thrust constraint
  double max_root_stress_Pa = 0.0;  // 0 disables the stress constraint
  double penalty_weight = 10.0;

  void validate_or_throw() const;
};

// base (efficiency or thrust) minus penalty_weight times the normalized
// constraint violations; exact penalty, no smoothing.
double objective(const HydroResult& result, double root_stress_pa,
                 const ObjectiveConfig& cfg);

// One full evaluation of a candidate design.
struct Evaluation {
  HydroResult feedback;
  double root_stress_pa = 0.0;
  double objective = 0.0;
};

using DesignEvaluator = std::function<Evaluation(const BladeDesignParams&)>;

// Production evaluator: blade-element feedback, root bending stress
// (taken as 0 when thrust is non-positive, letting the thrust penalty
// dominate instead of erroring the search out), then the penalized
// objective.
DesignEvaluator make_design_evaluator(const ObjectiveConfig& cfg,
                                      const OperatingPoint& op,
                                      const BemOptions& options = {});

struct IterationRecord {
  int iteration = 0;  // evaluation index, 0 = start point
  BladeDesignParams params;
  HydroResult feedback;
  double objective = 0.0;
  bool accepted = false;
};

// Mutable pattern-search state threaded through refine calls.
struct SearchState {
  ParameterBounds bounds;
  DesignEvaluator evaluator;
  double step_ratio = 0.25;     // of each field's bound range
  double min_step_ratio = 1e-4;
  double current_objective = 0.0;
  int evaluations_used = 0;     // includes the start-point evaluation
  int max_evaluations = 1;      // budget + 1
  std::vector<IterationRecord>* history = nullptr;

  bool budget_exhausted() const {
    return evaluations_used >= max_evaluations;
  }
};

// One pattern-search step from `current` (whose feedback is `feedback`):
// probes +/- step along each tunable field in declaration order, moves to
// the first strict improvement, halves the step when a full sweep fails.
// Probes that violate design invariants are skipped.  Returns the next
// incumbent (== current when no probe improved).
BladeDesignParams refine(const BladeDesignParams& current,
                         const HydroResult& feedback, SearchState& state);

// Full search: evaluates P_0, then repeats refine until the step falls
// below min_step_ratio or the budget (number of additional evaluations)
// is spent.  Returns one record per evaluation.
std::vector<IterationRecord> optimize(const BladeDesignParams& p0,
                                      const ParameterBounds& bounds,
                                      const ObjectiveConfig& cfg,
                                      const OperatingPoint& op, int budget);

// Same loop against an arbitrary evaluator (used by surrogate tests).
std::vector<IterationRecord> optimize_with(const BladeDesignParams& p0,
                                           const ParameterBounds& bounds,
                                           const DesignEvaluator& evaluator,
                                           int budget);

// Delimited history table: iteration, every design field, thrust, torque,
// efficiency, objective, accepted.
std::string history_csv(const std::vector<IterationRecord>& history);

}  // namespace vforge
