#include "vforge/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "vforge/textio.hpp"

namespace vforge {

namespace {

struct FieldInfo {
  DesignField field;
  std::string_view name;
  double BladeDesignParams::* member;
};

constexpr std::array<FieldInfo, kDesignFieldCount> kFields = {{
    {DesignField::Span, "span", &BladeDesignParams::span_m},
    {DesignField::ChordRoot, "chord_root", &BladeDesignParams::chord_root_m},
    {DesignField::ChordTip, "chord_tip", &BladeDesignParams::chord_tip_m},
    {DesignField::ChordMid, "chord_mid", &BladeDesignParams::chord_mid_m},
    {DesignField::PitchRoot, "pitch_root", &BladeDesignParams::pitch_root_rad},
    {DesignField::PitchTip, "pitch_tip", &BladeDesignParams::pitch_tip_rad},
    {DesignField::PitchMid, "pitch_mid", &BladeDesignParams::pitch_mid_rad},
    {DesignField::BulgeAmplitude, "bulge_amplitude",
     &BladeDesignParams::bulge_amplitude},
    {DesignField::BulgeSharpness, "bulge_sharpness",
     &BladeDesignParams::bulge_sharpness},
    {DesignField::BulgeCenter, "bulge_center",
     &BladeDesignParams::bulge_center},
    {DesignField::Rake, "rake", &BladeDesignParams::rake_rad},
    {DesignField::Skew, "skew", &BladeDesignParams::skew_rad},
    {DesignField::ThicknessRatio, "thickness_ratio",
     &BladeDesignParams::thickness_ratio},
    {DesignField::PitchAxis, "pitch_axis", &BladeDesignParams::pitch_axis},
    {DesignField::HubDiameter, "hub_diameter",
     &BladeDesignParams::hub_diameter_m},
    {DesignField::HubLength, "hub_length", &BladeDesignParams::hub_length_m},
}};

const FieldInfo& info_of(DesignField field) {
  return kFields[static_cast<int>(field)];
}

}  // namespace

double get_design_field(const BladeDesignParams& params, DesignField field) {
  return params.*(info_of(field).member);
}

void set_design_field(BladeDesignParams& params, DesignField field,
                      double value) {
  params.*(info_of(field).member) = value;
}

std::string_view design_field_name(DesignField field) {
  return info_of(field).name;
}

std::optional<DesignField> design_field_from_name(std::string_view name) {
  for (const auto& info : kFields) {
    if (info.name == name) return info.field;
  }
  return std::nullopt;
}

ParameterBounds ParameterBounds::around(const BladeDesignParams& nominal) {
  nominal.validate_or_throw();
  ParameterBounds bounds;
  auto band = [&bounds, &nominal](DesignField f, double lo_factor,
                                  double hi_factor, bool tunable) {
    double v = get_design_field(nominal, f);
    bounds.fields[static_cast<int>(f)] = {v * lo_factor, v * hi_factor,
                                          tunable};
  };
  band(DesignField::Span, 0.5, 1.5, false);
  band(DesignField::ChordRoot, 0.5, 1.6, true);
  band(DesignField::ChordTip, 0.5, 1.6, true);
  band(DesignField::ChordMid, 0.5, 1.6, true);
  band(DesignField::PitchRoot, 0.35, 1.25, true);
  band(DesignField::PitchTip, 0.35, 1.25, true);
  band(DesignField::PitchMid, 0.35, 1.25, true);
  band(DesignField::HubDiameter, 0.5, 1.5, false);
  band(DesignField::HubLength, 0.5, 1.5, false);
  // Fields whose nominal may be zero get fixed windows.
  bounds.fields[static_cast<int>(DesignField::BulgeAmplitude)] = {0.0, 1.0,
                                                                  false};
  bounds.fields[static_cast<int>(DesignField::BulgeSharpness)] = {1.0, 100.0,
                                                                  false};
  bounds.fields[static_cast<int>(DesignField::BulgeCenter)] = {0.0, 1.0,
                                                               false};
  bounds.fields[static_cast<int>(DesignField::Rake)] = {-0.3, 0.3, false};
  bounds.fields[static_cast<int>(DesignField::Skew)] = {-0.3, 0.3, false};
  bounds.fields[static_cast<int>(DesignField::ThicknessRatio)] = {0.06, 0.20,
                                                                  false};
  bounds.fields[static_cast<int>(DesignField::PitchAxis)] = {0.1, 0.5, false};
  bounds.validate_or_throw();
  return bounds;
}

void ParameterBounds::validate_or_throw() const {
  BladeDesignParams probe;  // defaults are valid; fields checked one at a time
  for (int i = 0; i < kDesignFieldCount; ++i) {
    DesignField f = static_cast<DesignField>(i);
    const FieldBound& b = fields[i];
    if (!(b.lower < b.upper)) {
      throw ConfigError("bound for " + std::string(design_field_name(f)) +
                        " must have lower < upper");
    }
    for (double endpoint : {b.lower, b.upper}) {
      BladeDesignParams candidate = probe;
      set_design_field(candidate, f, endpoint);
      try {
        candidate.validate_or_throw();
      } catch (const ValidationError& e) {
        throw ConfigError("bound endpoint for " +
                          std::string(design_field_name(f)) +
                          " violates design invariants: " + e.what());
      }
    }
  }
}

bool ParameterBounds::contains(const BladeDesignParams& params) const {
  for (int i = 0; i < kDesignFieldCount; ++i) {
    double v = get_design_field(params, static_cast<DesignField>(i));
    if (v < fields[i].lower || v > fields[i].upper) return false;
  }
  return true;
}

void ObjectiveConfig::validate_or_throw() const {
  if (penalty_weight <= 0.0) throw ConfigError("penalty_weight must be > 0");
  if (min_thrust_N < 0.0 || max_root_stress_Pa < 0.0) {
    throw ConfigError("constraints must be >= 0");
  }
}

double objective(const HydroResult& result, double root_stress_pa,
                 const ObjectiveConfig& cfg) {
  double base = cfg.target == ObjectiveTarget::MaxEfficiency
                    ? result.efficiency
                    : result.thrust_N;
  double violation = 0.0;
  if (cfg.min_thrust_N > 0.0) {
    violation += std::max(0.0, cfg.min_thrust_N - result.thrust_N) /
                 cfg.min_thrust_N;
  }
  if (cfg.max_root_stress_Pa > 0.0) {
    violation += std::max(0.0, root_stress_pa - cfg.max_root_stress_Pa) /
                 cfg.max_root_stress_Pa;
  }
  return base - cfg.penalty_weight * violation;
}

DesignEvaluator make_design_evaluator(const ObjectiveConfig& cfg,
                                      const OperatingPoint& op,
                                      const BemOptions& options) {
  cfg.validate_or_throw();
  return [cfg, op, options](const BladeDesignParams& params) {
    Evaluation eval;
    eval.feedback = bem_evaluate(params, op, options);
    eval.root_stress_pa = eval.feedback.thrust_N > 0.0
                              ? root_bending_stress(eval.feedback, params)
                              : 0.0;
    eval.objective = objective(eval.feedback, eval.root_stress_pa, cfg);
    return eval;
  };
}

namespace {

// Evaluates one candidate, appends its record, and reports whether it
// strictly improves on the incumbent.
bool probe_improves(const BladeDesignParams& candidate, SearchState& state) {
  Evaluation eval = state.evaluator(candidate);
  bool improved = eval.objective > state.current_objective;
  if (state.history != nullptr) {
    IterationRecord record;
    record.iteration = state.evaluations_used;
    record.params = candidate;
    record.feedback = eval.feedback;
    record.objective = eval.objective;
    record.accepted = improved;
    state.history->push_back(std::move(record));
  }
  ++state.evaluations_used;
  if (improved) state.current_objective = eval.objective;
  return improved;
}

}  // namespace

BladeDesignParams refine(const BladeDesignParams& current,
                         const HydroResult& feedback, SearchState& state) {
  (void)feedback;  // R_n informs current_objective, already in the state
  if (state.step_ratio < state.min_step_ratio) return current;
  for (int i = 0; i < kDesignFieldCount; ++i) {
    DesignField field = static_cast<DesignField>(i);
    const FieldBound& bound = state.bounds.fields[i];
    if (!bound.tunable) continue;
    double value = get_design_field(current, field);
    double step = state.step_ratio * (bound.upper - bound.lower);
    for (double delta : {step, -step}) {
      if (state.budget_exhausted()) return current;
      double probe_value =
          std::clamp(value + delta, bound.lower, bound.upper);
      if (probe_value == value) continue;  // clamped onto the incumbent
      BladeDesignParams candidate = current;
      set_design_field(candidate, field, probe_value);
      try {
        candidate.validate_or_throw();
      } catch (const ValidationError&) {
        continue;  // invariant-violating probe: skipped, not an error
      }
      if (probe_improves(candidate, state)) return candidate;
    }
  }
  state.step_ratio /= 2.0;
  return current;
}

namespace {

std::vector<IterationRecord> run_search(const BladeDesignParams& p0,
                                        const ParameterBounds& bounds,
                                        const DesignEvaluator& evaluator,
                                        int budget) {
  bounds.validate_or_throw();
  p0.validate_or_throw();
  if (!bounds.contains(p0)) {
    throw ConfigError("start point lies outside the parameter bounds");
  }
  if (budget < 0) throw ConfigError("budget must be >= 0");

  std::vector<IterationRecord> history;
  SearchState state;
  state.bounds = bounds;
  state.evaluator = evaluator;
  state.max_evaluations = budget + 1;
  state.history = &history;

  Evaluation seed = evaluator(p0);
  state.current_objective = seed.objective;
  IterationRecord first;
  first.iteration = 0;
  first.params = p0;
  first.feedback = seed.feedback;
  first.objective = seed.objective;
  first.accepted = true;
  history.push_back(first);
  state.evaluations_used = 1;

  BladeDesignParams current = p0;
  HydroResult current_feedback = seed.feedback;
  while (!state.budget_exhausted() &&
         state.step_ratio >= state.min_step_ratio) {
    BladeDesignParams next = refine(current, current_feedback, state);
    if (!history.empty() && history.back().accepted &&
        history.back().iteration > 0) {
      current_feedback = history.back().feedback;
    }
    current = next;
  }
  return history;
}

}  // namespace

std::vector<IterationRecord> optimize(const BladeDesignParams& p0,
                                      const ParameterBounds& bounds,
                                      const ObjectiveConfig& cfg,
                                      const OperatingPoint& op, int budget) {
  return run_search(p0, bounds, make_design_evaluator(cfg, op), budget);
}

std::vector<IterationRecord> optimize_with(const BladeDesignParams& p0,
                                           const ParameterBounds& bounds,
                                           const DesignEvaluator& evaluator,
                                           int budget) {
  return run_search(p0, bounds, evaluator, budget);
}

std::string history_csv(const std::vector<IterationRecord>& history) {
  std::string out = "iteration";
  for (const auto f : {
           DesignField::Span, DesignField::ChordRoot, DesignField::ChordTip,
           DesignField::ChordMid, DesignField::PitchRoot,
           DesignField::PitchTip, DesignField::PitchMid,
           DesignField::BulgeAmplitude, DesignField::BulgeSharpness,
           DesignField::BulgeCenter, DesignField::Rake, DesignField::Skew,
           DesignField::ThicknessRatio, DesignField::PitchAxis,
           DesignField::HubDiameter, DesignField::HubLength,
       }) {
    out += ",";
    out += design_field_name(f);
  }
  out += ",thrust_N,torque_Nm,efficiency,objective,accepted\n";
  for (const auto& rec : history) {
    out += std::to_string(rec.iteration);
    for (int i = 0; i < kDesignFieldCount; ++i) {
      out += "," + format_double(get_design_field(
                       rec.params, static_cast<DesignField>(i)));
    }
    out += "," + format_double(rec.feedback.thrust_N);
    out += "," + format_double(rec.feedback.torque_Nm);
    out += "," + format_double(rec.feedback.efficiency);
    out += "," + format_double(rec.objective);
    out += rec.accepted ? ",1\n" : ",0\n";
  }
  return out;
}

}  // namespace vforge
