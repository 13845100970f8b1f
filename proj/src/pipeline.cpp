#include "vforge/pipeline.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <sstream>

#include "vforge/stl_io.hpp"
#include "vforge/textio.hpp"

namespace vforge {

namespace {

constexpr std::array<Stage, 6> kCanonicalStages = {
    Stage::GenerateGeometry, Stage::AssembleMesh, Stage::Evaluate,
    Stage::Optimize,         Stage::BuoyancyCheck, Stage::ControlSim,
};

}  // namespace

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::GenerateGeometry: return "GenerateGeometry";
    case Stage::AssembleMesh: return "AssembleMesh";
    case Stage::Evaluate: return "Evaluate";
    case Stage::Optimize: return "Optimize";
    case Stage::BuoyancyCheck: return "BuoyancyCheck";
    case Stage::ControlSim: return "ControlSim";
  }
  return "unknown";
}

std::optional<Stage> stage_from_name(std::string_view name) {
  for (Stage s : kCanonicalStages) {
    if (stage_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view stage_status_name(StageStatus status) {
  switch (status) {
    case StageStatus::Ok: return "ok";
    case StageStatus::Failed: return "failed";
    case StageStatus::Skipped: return "skipped";
    case StageStatus::AwaitingReview: return "awaiting_review";
  }
  return "unknown";
}

void PipelinePlan::validate_or_throw() const {
  // Stages must be a subsequence of the canonical chain: that is exactly
  // the data-dependency order (geometry -> mesh -> evaluate -> optimize ->
  // buoyancy -> control) with no duplicates.
  std::size_t cursor = 0;
  for (Stage s : stages) {
    while (cursor < kCanonicalStages.size() && kCanonicalStages[cursor] != s) {
      ++cursor;
    }
    if (cursor == kCanonicalStages.size()) {
      throw PlanningError(
          "stage list must follow the canonical order without duplicates");
    }
    ++cursor;
  }
  for (Stage s : human_review_checkpoints) {
    if (std::find(stages.begin(), stages.end(), s) == stages.end()) {
      throw PlanningError("checkpoint references unplanned stage " +
                          std::string(stage_name(s)));
    }
  }
  initial_params.validate_or_throw();
  hull.validate_or_throw();
  objective.validate_or_throw();
  operating_point.validate_or_throw();
  bounds.validate_or_throw();
  if (optimizer_budget < 0) throw PlanningError("optimizer budget must be >= 0");
  if (payload_mass_kg < 0.0) throw PlanningError("payload mass must be >= 0");
  if (material_density_kg_m3 <= 0.0 || water_density_kg_m3 <= 0.0) {
    throw PlanningError("densities must be > 0");
  }
  if (pwm_freq_hz <= 0.0 || trace_duration_ms <= 0.0) {
    throw PlanningError("control trace settings must be > 0");
  }
}

DesignSpec parse_design_spec(std::string_view text, bool bare_lengths_are_mm) {
  DesignSpec spec;
  bool seen[6] = {false, false, false, false, false, false};
  for (const KeyValueEntry& entry : parse_key_value_text(text)) {
    try {
      if (entry.key == "require.thrust_N") {
        spec.required_thrust_N = parse_quantity(entry.value, Quantity::Plain);
        seen[0] = true;
      } else if (entry.key == "require.cruise_speed_mps") {
        spec.cruise_speed_mps = parse_quantity(entry.value, Quantity::Plain);
        seen[1] = true;
      } else if (entry.key == "require.payload_mass_kg") {
        spec.payload_mass_kg = parse_quantity(entry.value, Quantity::Plain);
        seen[2] = true;
      } else if (entry.key == "constraint.max_dimensions_m") {
        spec.max_dimensions_m =
            parse_quantity(entry.value, Quantity::Length, bare_lengths_are_mm);
        seen[3] = true;
      } else if (entry.key == "constraint.max_stress_Pa") {
        spec.max_stress_pa = parse_quantity(entry.value, Quantity::Plain);
        seen[4] = true;
      } else if (entry.key == "constraint.water_density") {
        spec.water_density_kg_m3 =
            parse_quantity(entry.value, Quantity::Plain);
        seen[5] = true;
      } else if (entry.key == "override") {
        std::size_t eq = entry.value.find('=');
        if (eq == std::string::npos) {
          throw PlanningError("line " + std::to_string(entry.line) +
                              ": override needs `path = value`");
        }
        spec.overrides.push_back(
            {trim(std::string_view(entry.value).substr(0, eq)),
             trim(std::string_view(entry.value).substr(eq + 1))});
      } else {
        throw PlanningError("line " + std::to_string(entry.line) +
                            ": unknown spec key `" + entry.key + "`");
      }
    } catch (const DomainError& e) {
      throw PlanningError("line " + std::to_string(entry.line) + ": " +
                          e.what());
    }
  }
  static constexpr std::string_view kRequired[6] = {
      "require.thrust_N",          "require.cruise_speed_mps",
      "require.payload_mass_kg",   "constraint.max_dimensions_m",
      "constraint.max_stress_Pa",  "constraint.water_density"};
  for (int i = 0; i < 6; ++i) {
    if (!seen[i]) {
      throw PlanningError("spec is missing required key `" +
                          std::string(kRequired[i]) + "`");
    }
  }
  if (spec.required_thrust_N <= 0.0 || spec.cruise_speed_mps <= 0.0 ||
      spec.max_dimensions_m <= 0.0 || spec.max_stress_pa <= 0.0 ||
      spec.water_density_kg_m3 <= 0.0) {
    throw PlanningError("spec requirements and constraints must be > 0");
  }
  if (spec.payload_mass_kg < 0.0) {
    throw PlanningError("payload mass must be >= 0");
  }
  return spec;
}

namespace {

enum class ParamKind { Length, Angle, Plain };

ParamKind kind_of_design_field(DesignField f) {
  switch (f) {
    case DesignField::Span:
    case DesignField::ChordRoot:
    case DesignField::ChordTip:
    case DesignField::ChordMid:
    case DesignField::HubDiameter:
    case DesignField::HubLength:
      return ParamKind::Length;
    case DesignField::PitchRoot:
    case DesignField::PitchTip:
    case DesignField::PitchMid:
    case DesignField::Rake:
    case DesignField::Skew:
      return ParamKind::Angle;
    default:
      return ParamKind::Plain;
  }
}

ChordMode chord_mode_from_name(std::string_view name) {
  if (name == "linear") return ChordMode::Linear;
  if (name == "gaussian_bulge") return ChordMode::GaussianBulge;
  if (name == "piecewise_midspan") return ChordMode::PiecewiseMidspan;
  throw DomainError("unknown chord mode `" + std::string(name) + "`");
}

std::string_view chord_mode_name(ChordMode mode) {
  switch (mode) {
    case ChordMode::Linear: return "linear";
    case ChordMode::GaussianBulge: return "gaussian_bulge";
    case ChordMode::PiecewiseMidspan: return "piecewise_midspan";
  }
  return "unknown";
}

PitchMode pitch_mode_from_name(std::string_view name) {
  if (name == "linear") return PitchMode::Linear;
  if (name == "piecewise_midspan") return PitchMode::PiecewiseMidspan;
  throw DomainError("unknown pitch mode `" + std::string(name) + "`");
}

std::string_view pitch_mode_name(PitchMode mode) {
  switch (mode) {
    case PitchMode::Linear: return "linear";
    case PitchMode::PiecewiseMidspan: return "piecewise_midspan";
  }
  return "unknown";
}

// Assigns one design-parameter file key.  Accepts the canonical field
// names plus common aliases.  Raises DomainError for unknown keys/values.
void set_param_field(BladeDesignParams& params, std::string_view key,
                     std::string_view value, bool bare_lengths_are_mm) {
  std::string k(key);
  if (k == "n_blades" || k == "blade_count") k = "blades";
  if (k == "n_sections" || k == "section_count") k = "sections";
  if (k == "chord_point_count") k = "chord_points";

  if (auto field = design_field_from_name(k)) {
    Quantity q = Quantity::Plain;
    bool mm = false;
    switch (kind_of_design_field(*field)) {
      case ParamKind::Length:
        q = Quantity::Length;
        mm = bare_lengths_are_mm;
        break;
      case ParamKind::Angle:
        q = Quantity::Angle;
        break;
      case ParamKind::Plain:
        break;
    }
    set_design_field(params, *field, parse_quantity(value, q, mm));
    return;
  }
  if (k == "blades") {
    params.blade_count = parse_int(value);
  } else if (k == "sections") {
    params.section_count = parse_int(value);
  } else if (k == "chord_points") {
    params.chord_point_count = parse_int(value);
  } else if (k == "cosine_spacing") {
    params.cosine_spacing = parse_bool(value);
  } else if (k == "chord_mode") {
    params.chord_mode = chord_mode_from_name(to_lower(value));
  } else if (k == "pitch_mode") {
    params.pitch_mode = pitch_mode_from_name(to_lower(value));
  } else {
    throw DomainError("unknown design parameter `" + std::string(key) + "`");
  }
}

void emit_params(std::ostringstream& out, const BladeDesignParams& params,
                 const std::string& prefix) {
  for (int i = 0; i < kDesignFieldCount; ++i) {
    DesignField f = static_cast<DesignField>(i);
    out << prefix << design_field_name(f) << " = "
        << format_double(get_design_field(params, f)) << "\n";
  }
  out << prefix << "chord_mode = " << chord_mode_name(params.chord_mode)
      << "\n";
  out << prefix << "pitch_mode = " << pitch_mode_name(params.pitch_mode)
      << "\n";
  out << prefix << "sections = " << params.section_count << "\n";
  out << prefix << "chord_points = " << params.chord_point_count << "\n";
  out << prefix << "blades = " << params.blade_count << "\n";
  out << prefix << "cosine_spacing = " << format_bool(params.cosine_spacing)
      << "\n";
}

std::vector<ControlCommand> parse_script_value(std::string_view value) {
  std::vector<ControlCommand> script;
  std::istringstream in{std::string(value)};
  std::string token;
  while (in >> token) {
    auto cmd = parse_command(token);
    if (cmd) script.push_back(*cmd);
  }
  return script;
}

FieldBound parse_bound_value(std::string_view value) {
  std::istringstream in{std::string(value)};
  std::string lo, hi, flag;
  if (!(in >> lo >> hi >> flag) || !(in >> std::ws).eof()) {
    throw DomainError("bound needs `<lower> <upper> tunable|fixed`");
  }
  FieldBound bound;
  bound.lower = parse_quantity(lo, Quantity::Plain);
  bound.upper = parse_quantity(hi, Quantity::Plain);
  if (flag == "tunable") {
    bound.tunable = true;
  } else if (flag == "fixed") {
    bound.tunable = false;
  } else {
    throw DomainError("bound flag must be `tunable` or `fixed`");
  }
  return bound;
}

}  // namespace

BladeDesignParams parse_blade_params(std::string_view text,
                                     bool bare_lengths_are_mm) {
  BladeDesignParams params;
  for (const KeyValueEntry& entry : parse_key_value_text(text)) {
    try {
      set_param_field(params, entry.key, entry.value, bare_lengths_are_mm);
    } catch (const DomainError& e) {
      throw ValidationError("line " + std::to_string(entry.line) + ": " +
                            e.what());
    }
  }
  params.validate_or_throw();
  return params;
}

std::string blade_params_text(const BladeDesignParams& params) {
  std::ostringstream out;
  emit_params(out, params, "");
  return out.str();
}

void apply_override(PipelinePlan& plan, const OverrideDirective& directive) {
  const std::string& path = directive.path;
  const std::string& value = directive.value;
  auto fail = [&path](const std::string& why) -> void {
    throw OverrideError("override `" + path + "`: " + why);
  };
  try {
    if (path == "stages") {
      std::vector<Stage> stages;
      std::istringstream in{value};
      std::string token;
      while (in >> token) {
        auto s = stage_from_name(token);
        if (!s) fail("unknown stage `" + token + "`");
        stages.push_back(*s);
      }
      plan.stages = stages;
      return;
    }
    if (path.rfind("checkpoint.", 0) == 0) {
      auto s = stage_from_name(path.substr(11));
      if (!s) fail("unknown stage");
      std::string v = to_lower(value);
      if (v == "human_review") {
        plan.human_review_checkpoints.insert(*s);
      } else if (v == "none") {
        plan.human_review_checkpoints.erase(*s);
      } else {
        fail("checkpoint value must be `human_review` or `none`");
      }
      return;
    }
    if (path.rfind("initial_params.", 0) == 0) {
      set_param_field(plan.initial_params, path.substr(15), value, false);
      return;
    }
    if (path.rfind("hull.", 0) == 0) {
      std::string k = path.substr(5);
      if (k == "length") {
        plan.hull.length_m = parse_quantity(value, Quantity::Length);
      } else if (k == "beam") {
        plan.hull.beam_m = parse_quantity(value, Quantity::Length);
      } else if (k == "depth") {
        plan.hull.depth_m = parse_quantity(value, Quantity::Length);
      } else if (k == "wall_thickness") {
        plan.hull.wall_thickness_m = parse_quantity(value, Quantity::Length);
      } else if (k == "bow_exponent") {
        plan.hull.bow_exponent = parse_quantity(value, Quantity::Plain);
      } else if (k == "deck_open") {
        plan.hull.deck_open = parse_bool(value);
      } else {
        fail("unknown hull field");
      }
      return;
    }
    if (path.rfind("objective.", 0) == 0) {
      std::string k = path.substr(10);
      if (k == "target") {
        std::string v = to_lower(value);
        if (v == "max_efficiency") {
          plan.objective.target = ObjectiveTarget::MaxEfficiency;
        } else if (v == "max_thrust") {
          plan.objective.target = ObjectiveTarget::MaxThrust;
        } else {
          fail("target must be `max_efficiency` or `max_thrust`");
        }
      } else if (k == "min_thrust_N") {
        plan.objective.min_thrust_N = parse_quantity(value, Quantity::Plain);
      } else if (k == "max_root_stress_Pa") {
        plan.objective.max_root_stress_Pa =
            parse_quantity(value, Quantity::Plain);
      } else if (k == "penalty_weight") {
        plan.objective.penalty_weight = parse_quantity(value, Quantity::Plain);
      } else {
        fail("unknown objective field");
      }
      return;
    }
    if (path.rfind("operating_point.", 0) == 0) {
      std::string k = path.substr(16);
      if (k == "rpm") {
        plan.operating_point.rpm = parse_quantity(value, Quantity::Plain);
      } else if (k == "advance_speed") {
        plan.operating_point.advance_speed_mps =
            parse_quantity(value, Quantity::Plain);
      } else if (k == "fluid_density") {
        plan.operating_point.fluid_density_kg_m3 =
            parse_quantity(value, Quantity::Plain);
      } else if (k == "kinematic_viscosity") {
        plan.operating_point.kinematic_viscosity_m2_s =
            parse_quantity(value, Quantity::Plain);
      } else {
        fail("unknown operating point field");
      }
      return;
    }
    if (path == "optimizer.budget") {
      plan.optimizer_budget = parse_int(value);
      return;
    }
    if (path.rfind("bound.", 0) == 0) {
      auto field = design_field_from_name(path.substr(6));
      if (!field) fail("unknown design field");
      plan.bounds.fields[static_cast<int>(*field)] = parse_bound_value(value);
      return;
    }
    if (path == "buoyancy.payload_mass_kg") {
      plan.payload_mass_kg = parse_quantity(value, Quantity::Plain);
      return;
    }
    if (path == "buoyancy.material_density_kg_m3") {
      plan.material_density_kg_m3 = parse_quantity(value, Quantity::Plain);
      return;
    }
    if (path == "buoyancy.water_density_kg_m3") {
      plan.water_density_kg_m3 = parse_quantity(value, Quantity::Plain);
      return;
    }
    if (path == "control.pwm_freq_hz") {
      plan.pwm_freq_hz = parse_quantity(value, Quantity::Plain);
      return;
    }
    if (path == "control.trace_duration_ms") {
      plan.trace_duration_ms = parse_quantity(value, Quantity::Plain);
      return;
    }
    if (path == "control.script") {
      plan.control_script = parse_script_value(value);
      return;
    }
  } catch (const OverrideError&) {
    throw;
  } catch (const Error& e) {
    fail(e.what());
  }
  fail("unknown override path");
}

PipelinePlan plan(const DesignSpec& spec) {
  PipelinePlan p;
  auto rule = [&p](const std::string& text) { p.rule_log.push_back(text); };

  // Each named rule below is one deterministic row of the planning table.
  p.stages.assign(kCanonicalStages.begin(), kCanonicalStages.end());
  rule("stages: full chain GenerateGeometry AssembleMesh Evaluate Optimize "
       "BuoyancyCheck ControlSim, no checkpoints");

  p.operating_point.rpm = 3000.0;
  p.operating_point.advance_speed_mps = spec.cruise_speed_mps;
  p.operating_point.fluid_density_kg_m3 = spec.water_density_kg_m3;
  p.operating_point.kinematic_viscosity_m2_s = 1e-6;
  rule("operating_point: cruise " + format_double(spec.cruise_speed_mps) +
       " m/s at 3000 rpm in density " +
       format_double(spec.water_density_kg_m3));

  p.objective.target = ObjectiveTarget::MaxEfficiency;
  p.objective.min_thrust_N = spec.required_thrust_N;
  p.objective.max_root_stress_Pa = spec.max_stress_pa;
  p.objective.penalty_weight = 10.0;
  rule("objective: maximize efficiency, thrust >= " +
       format_double(spec.required_thrust_N) + " N, root stress <= " +
       format_double(spec.max_stress_pa) + " Pa, penalty weight 10");

  // Propeller sizing: keep the stock blade unless the envelope forces a
  // shorter one; overall diameter (hub + both blades) must fit.
  BladeDesignParams defaults;
  double span_cap =
      (spec.max_dimensions_m - defaults.hub_diameter_m) / 2.0;
  if (span_cap <= 0.0) {
    throw PlanningError(
        "constraint max_dimensions_m = " +
        format_double(spec.max_dimensions_m) +
        " cannot fit the hub diameter " +
        format_double(defaults.hub_diameter_m) + "; no feasible blade span");
  }
  p.initial_params = defaults;
  p.initial_params.span_m = std::min(defaults.span_m, span_cap);
  rule("propeller: span " + format_double(p.initial_params.span_m) +
       " m (cap " + format_double(span_cap) + " m from max_dimensions), hub " +
       format_double(defaults.hub_diameter_m) + " m, " +
       std::to_string(defaults.blade_count) + " blades");

  // Hull sizing: stock 0.30 m hull scaled down to the envelope, with the
  // stock 15:8:4 length:beam:depth proportions and 4 mm walls.
  double hull_length = std::min(0.30, spec.max_dimensions_m);
  p.hull.length_m = hull_length;
  p.hull.beam_m = hull_length * 8.0 / 15.0;
  p.hull.depth_m = hull_length * 4.0 / 15.0;
  p.hull.wall_thickness_m = 0.004;
  p.hull.bow_exponent = 2.5;
  p.hull.deck_open = true;
  try {
    p.hull.validate_or_throw();
  } catch (const ValidationError& e) {
    throw PlanningError(
        "constraint max_dimensions_m leaves no feasible hull: " +
        std::string(e.what()));
  }
  rule("hull: length " + format_double(p.hull.length_m) + " m, beam " +
       format_double(p.hull.beam_m) + " m, depth " +
       format_double(p.hull.depth_m) + " m, wall 0.004 m, bow exponent 2.5");

  p.bounds = ParameterBounds::around(p.initial_params);
  p.optimizer_budget = 160;
  rule("optimizer: chord/pitch distributions tunable around the initial "
       "design, budget 160 evaluations");

  p.payload_mass_kg = spec.payload_mass_kg;
  p.material_density_kg_m3 = 1100.0;
  p.water_density_kg_m3 = spec.water_density_kg_m3;
  rule("buoyancy: payload " + format_double(spec.payload_mass_kg) +
       " kg plus shell mass at material density 1100 kg/m3");

  p.pwm_freq_hz = 490.0;
  p.trace_duration_ms = 30.0;
  p.control_script = {ControlCommand::Forward, ControlCommand::Backward,
                      ControlCommand::Left, ControlCommand::Right,
                      ControlCommand::Stop};
  rule("control: exercise forward backward left right stop at 490 Hz for "
       "30 ms each");

  // Human feedback is applied last, in order, each directive logged.
  bool params_overridden = false;
  bool bounds_overridden = false;
  for (const OverrideDirective& directive : spec.overrides) {
    apply_override(p, directive);
    p.override_log.push_back(directive.path + " = " + directive.value);
    if (directive.path.rfind("initial_params.", 0) == 0) {
      params_overridden = true;
    }
    if (directive.path.rfind("bound.", 0) == 0) bounds_overridden = true;
  }
  if (params_overridden && !bounds_overridden) {
    p.bounds = ParameterBounds::around(p.initial_params);
    rule("bounds: refreshed around the overridden initial parameters");
  }

  try {
    p.validate_or_throw();
  } catch (const PlanningError&) {
    throw;
  } catch (const Error& e) {
    throw PlanningError("plan invalid after overrides: " +
                        std::string(e.what()));
  }
  return p;
}

std::string plan_to_text(const PipelinePlan& plan) {
  std::ostringstream out;
  out << "plan_version = 1\n";
  for (Stage s : plan.stages) out << "stage = " << stage_name(s) << "\n";
  for (Stage s : kCanonicalStages) {
    if (plan.human_review_checkpoints.count(s)) {
      out << "checkpoint." << stage_name(s) << " = human_review\n";
    }
  }
  emit_params(out, plan.initial_params, "initial_params.");
  out << "hull.length = " << format_double(plan.hull.length_m) << "\n";
  out << "hull.beam = " << format_double(plan.hull.beam_m) << "\n";
  out << "hull.depth = " << format_double(plan.hull.depth_m) << "\n";
  out << "hull.wall_thickness = " << format_double(plan.hull.wall_thickness_m)
      << "\n";
  out << "hull.bow_exponent = " << format_double(plan.hull.bow_exponent)
      << "\n";
  out << "hull.deck_open = " << format_bool(plan.hull.deck_open) << "\n";
  out << "objective.target = "
      << (plan.objective.target == ObjectiveTarget::MaxEfficiency
              ? "max_efficiency"
              : "max_thrust")
      << "\n";
  out << "objective.min_thrust_N = "
      << format_double(plan.objective.min_thrust_N) << "\n";
  out << "objective.max_root_stress_Pa = "
      << format_double(plan.objective.max_root_stress_Pa) << "\n";
  out << "objective.penalty_weight = "
      << format_double(plan.objective.penalty_weight) << "\n";
  out << "operating_point.rpm = " << format_double(plan.operating_point.rpm)
      << "\n";
  out << "operating_point.advance_speed = "
      << format_double(plan.operating_point.advance_speed_mps) << "\n";
  out << "operating_point.fluid_density = "
      << format_double(plan.operating_point.fluid_density_kg_m3) << "\n";
  out << "operating_point.kinematic_viscosity = "
      << format_double(plan.operating_point.kinematic_viscosity_m2_s) << "\n";
  out << "optimizer.budget = " << plan.optimizer_budget << "\n";
  for (int i = 0; i < kDesignFieldCount; ++i) {
    const FieldBound& b = plan.bounds.fields[i];
    out << "bound." << design_field_name(static_cast<DesignField>(i)) << " = "
        << format_double(b.lower) << " " << format_double(b.upper) << " "
        << (b.tunable ? "tunable" : "fixed") << "\n";
  }
  out << "buoyancy.payload_mass_kg = " << format_double(plan.payload_mass_kg)
      << "\n";
  out << "buoyancy.material_density_kg_m3 = "
      << format_double(plan.material_density_kg_m3) << "\n";
  out << "buoyancy.water_density_kg_m3 = "
      << format_double(plan.water_density_kg_m3) << "\n";
  out << "control.pwm_freq_hz = " << format_double(plan.pwm_freq_hz) << "\n";
  out << "control.trace_duration_ms = "
      << format_double(plan.trace_duration_ms) << "\n";
  out << "control.script =";
  for (ControlCommand cmd : plan.control_script) {
    out << " " << command_name(cmd);
  }
  out << "\n";
  for (const std::string& r : plan.rule_log) out << "rule = " << r << "\n";
  for (const std::string& o : plan.override_log) {
    out << "override = " << o << "\n";
  }
  return out.str();
}

PipelinePlan parse_plan(std::string_view text) {
  PipelinePlan plan;
  plan.stages.clear();
  bool explicit_script = false;
  for (const KeyValueEntry& entry : parse_key_value_text(text)) {
    try {
      if (entry.key == "plan_version") {
        if (parse_int(entry.value) != 1) {
          throw PlanningError("unsupported plan_version");
        }
      } else if (entry.key == "stage") {
        auto s = stage_from_name(entry.value);
        if (!s) throw PlanningError("unknown stage `" + entry.value + "`");
        plan.stages.push_back(*s);
      } else if (entry.key == "rule") {
        plan.rule_log.push_back(entry.value);
      } else if (entry.key == "override") {
        plan.override_log.push_back(entry.value);
      } else if (entry.key == "control.script") {
        plan.control_script = parse_script_value(entry.value);
        explicit_script = true;
      } else {
        // Every remaining plan key shares its grammar with overrides.
        apply_override(plan, {entry.key, entry.value});
      }
    } catch (const Error& e) {
      throw PlanningError("plan line " + std::to_string(entry.line) + ": " +
                          e.what());
    }
  }
  if (!explicit_script) plan.control_script.clear();
  plan.validate_or_throw();
  return plan;
}

AmdLevel classify_amd_level(const PipelinePlan& plan) {
  if (plan.stages.empty()) {
    return {0, "no automated stages planned: fully manual process"};
  }
  std::set<Stage> planned(plan.stages.begin(), plan.stages.end());
  std::set<Stage> reviewed;
  for (Stage s : plan.human_review_checkpoints) {
    if (planned.count(s)) reviewed.insert(s);
  }
  if (reviewed.empty()) {
    return {4, "zero checkpoints: end-to-end automation with no human "
               "review"};
  }
  bool generation_only = true;
  for (Stage s : plan.stages) {
    if (s != Stage::GenerateGeometry && s != Stage::AssembleMesh) {
      generation_only = false;
    }
  }
  if (generation_only && reviewed == planned) {
    return {1, "generation stages only, every decision checkpointed: "
               "assistive automation"};
  }
  bool all_handoffs_reviewed = true;
  for (std::size_t i = 1; i < plan.stages.size(); ++i) {
    if (!reviewed.count(plan.stages[i])) all_handoffs_reviewed = false;
  }
  if (all_handoffs_reviewed) {
    return {2, "every integration boundary checkpointed: semi-autonomous "
               "design"};
  }
  if (reviewed.size() == 1 && reviewed.count(plan.stages.back())) {
    return {3, "only the final stage is checkpointed: high-level human "
               "supervision"};
  }
  return {3, "cross-stage handoffs partially automated under human "
             "supervision"};
}

namespace {

struct StageContext {
  const PipelinePlan& plan;
  const std::filesystem::path& out_dir;
};

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw PlanningError("cannot write file " + path.string());
  }
  out << data;
}

std::string metric(double v) { return format_double(v); }

StageReport run_generate_geometry(const StageContext& ctx) {
  StageReport report;
  report.stage = Stage::GenerateGeometry;
  auto sections = generate_blade_sections(ctx.plan.initial_params);
  write_file(ctx.out_dir / "sections.txt", sections_table_text(sections));
  report.status = StageStatus::Ok;
  report.metrics = {
      {"sections", std::to_string(sections.size())},
      {"points_per_section", std::to_string(sections.front().points.size())},
      {"span_m", metric(ctx.plan.initial_params.span_m)},
  };
  report.artifacts = {"sections.txt"};
  return report;
}

StageReport run_assemble_mesh(const StageContext& ctx) {
  StageReport report;
  report.stage = Stage::AssembleMesh;
  TriMesh propeller = assemble_propeller(ctx.plan.initial_params);
  for (const TriMesh& solid : split_components(propeller)) {
    if (!is_watertight(solid).watertight) {
      throw MeshError("assembled propeller has a non-watertight solid");
    }
  }
  TriMesh hull = generate_hull(ctx.plan.hull);
  write_file(ctx.out_dir / "propeller.stl",
             export_stl(propeller, StlMode::Binary, "propeller"));
  write_file(ctx.out_dir / "hull.stl",
             export_stl(hull, StlMode::Binary, "hull"));
  report.status = StageStatus::Ok;
  report.metrics = {
      {"propeller_triangles", std::to_string(propeller.triangles.size())},
      {"propeller_volume_m3", metric(mesh_volume(propeller))},
      {"hull_triangles", std::to_string(hull.triangles.size())},
      {"hull_shell_volume_m3", metric(mesh_volume(hull))},
  };
  report.artifacts = {"propeller.stl", "hull.stl"};
  return report;
}

StageReport run_evaluate(const StageContext& ctx) {
  StageReport report;
  report.stage = Stage::Evaluate;
  HydroResult result =
      bem_evaluate(ctx.plan.initial_params, ctx.plan.operating_point);
  write_file(ctx.out_dir / "hydro_report.txt", hydro_report_text(result));
  report.artifacts = {"hydro_report.txt"};
  if (result.thrust_N <= 0.0) {
    report.status = StageStatus::Failed;
    report.note = "thrust " + metric(result.thrust_N) +
                  " N is not positive; design produces drag at the "
                  "operating point";
    report.metrics = {
        {"thrust_N", metric(result.thrust_N)},
        {"torque_Nm", metric(result.torque_Nm)},
    };
    return report;
  }
  double stress = root_bending_stress(result, ctx.plan.initial_params);
  double equivalent = von_mises({stress, 0.0, 0.0});
  report.status = StageStatus::Ok;
  report.metrics = {
      {"thrust_N", metric(result.thrust_N)},
      {"torque_Nm", metric(result.torque_Nm)},
      {"efficiency", metric(result.efficiency)},
      {"root_stress_Pa", metric(stress)},
      {"von_mises_Pa", metric(equivalent)},
  };
  return report;
}

StageReport run_optimize(const StageContext& ctx) {
  StageReport report;
  report.stage = Stage::Optimize;
  auto history =
      optimize(ctx.plan.initial_params, ctx.plan.bounds, ctx.plan.objective,
               ctx.plan.operating_point, ctx.plan.optimizer_budget);
  write_file(ctx.out_dir / "history.csv", history_csv(history));
  const IterationRecord* best = &history.front();
  int accepted_moves = 0;
  for (const auto& rec : history) {
    if (rec.accepted) {
      best = &rec;
      if (rec.iteration > 0) ++accepted_moves;
    }
  }
  write_file(ctx.out_dir / "optimized_params.txt",
             blade_params_text(best->params));
  report.status = StageStatus::Ok;
  report.metrics = {
      {"evaluations", std::to_string(history.size())},
      {"accepted_moves", std::to_string(accepted_moves)},
      {"best_objective", metric(best->objective)},
      {"best_thrust_N", metric(best->feedback.thrust_N)},
      {"best_efficiency", metric(best->feedback.efficiency)},
  };
  report.artifacts = {"history.csv", "optimized_params.txt"};
  return report;
}

StageReport run_buoyancy_check(const StageContext& ctx) {
  StageReport report;
  report.stage = Stage::BuoyancyCheck;
  // Displacement comes from the closed outer form; structural mass from
  // the shell as configured.
  HullParams solid = ctx.plan.hull;
  solid.deck_open = false;
  TriMesh solid_hull = generate_hull(solid);
  double shell_volume = mesh_volume(generate_hull(ctx.plan.hull));
  double hull_mass = shell_volume * ctx.plan.material_density_kg_m3;
  double total_mass = hull_mass + ctx.plan.payload_mass_kg;
  BuoyancyResult result =
      buoyancy_check(solid_hull, total_mass, ctx.plan.water_density_kg_m3);
  std::ostringstream text;
  text << "hull_shell_volume_m3 = " << metric(shell_volume) << "\n";
  text << "hull_mass_kg = " << metric(hull_mass) << "\n";
  text << "payload_mass_kg = " << metric(ctx.plan.payload_mass_kg) << "\n";
  text << "total_mass_kg = " << metric(total_mass) << "\n";
  text << "draft_m = " << metric(result.draft_m) << "\n";
  text << "freeboard_m = " << metric(result.freeboard_m) << "\n";
  text << "displaced_mass_kg = " << metric(result.displaced_mass_kg) << "\n";
  text << "floats = " << format_bool(result.floats) << "\n";
  write_file(ctx.out_dir / "buoyancy.txt", text.str());
  report.artifacts = {"buoyancy.txt"};
  report.metrics = {
      {"total_mass_kg", metric(total_mass)},
      {"draft_m", metric(result.draft_m)},
      {"freeboard_m", metric(result.freeboard_m)},
      {"floats", std::string(format_bool(result.floats))},
  };
  if (!result.floats) {
    report.status = StageStatus::Failed;
    report.note = "hull cannot displace " + metric(total_mass) + " kg";
    return report;
  }
  report.status = StageStatus::Ok;
  return report;
}

StageReport run_control_sim(const StageContext& ctx) {
  StageReport report;
  report.stage = Stage::ControlSim;
  report.status = StageStatus::Ok;
  int index = 0;
  for (ControlCommand cmd : ctx.plan.control_script) {
    auto states = command_to_motor_states(cmd);
    auto trace = generate_pwm_trace(states, ctx.plan.trace_duration_ms,
                                    ctx.plan.pwm_freq_hz);
    std::string file_name = "trace_" + std::to_string(index) + "_" +
                            std::string(command_name(cmd)) + ".csv";
    write_file(ctx.out_dir / file_name, export_trace_csv(trace));
    report.artifacts.push_back(file_name);
    report.metrics.emplace_back(
        std::string(command_name(cmd)) + "_duty_a",
        metric(measure_duty(trace, TraceChannel::A_PWM)));
    report.metrics.emplace_back(
        std::string(command_name(cmd)) + "_duty_b",
        metric(measure_duty(trace, TraceChannel::B_PWM)));
    ++index;
  }
  report.metrics.emplace_back("traces",
                              std::to_string(report.artifacts.size()));
  return report;
}

StageReport run_stage(Stage stage, const StageContext& ctx) {
  try {
    switch (stage) {
      case Stage::GenerateGeometry: return run_generate_geometry(ctx);
      case Stage::AssembleMesh: return run_assemble_mesh(ctx);
      case Stage::Evaluate: return run_evaluate(ctx);
      case Stage::Optimize: return run_optimize(ctx);
      case Stage::BuoyancyCheck: return run_buoyancy_check(ctx);
      case Stage::ControlSim: return run_control_sim(ctx);
    }
    throw PlanningError("unknown stage");
  } catch (const Error& e) {
    StageReport report;
    report.stage = stage;
    report.status = StageStatus::Failed;
    report.note = e.what();
    return report;
  }
}

std::string review_file_text(const StageReport& report) {
  std::ostringstream out;
  out << "human review requested for stage " << stage_name(report.stage)
      << "\n";
  for (const auto& [k, v] : report.metrics) {
    out << k << " = " << v << "\n";
  }
  for (const std::string& a : report.artifacts) {
    out << "artifact = " << a << "\n";
  }
  out << "approve by re-running with --approve " << stage_name(report.stage)
      << "\n";
  return out.str();
}

}  // namespace

std::string current_timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

RunReport run_pipeline(const PipelinePlan& plan,
                       const std::filesystem::path& output_dir,
                       const std::set<Stage>& approved) {
  plan.validate_or_throw();
  std::filesystem::create_directories(output_dir);

  RunReport run;
  run.amd = classify_amd_level(plan);
  StageContext ctx{plan, output_dir};

  bool stop_downstream = false;
  std::string stop_reason;
  for (Stage stage : plan.stages) {
    if (stop_downstream) {
      StageReport skipped;
      skipped.stage = stage;
      skipped.status = StageStatus::Skipped;
      skipped.note = stop_reason;
      run.stages.push_back(skipped);
      continue;
    }
    StageReport report = run_stage(stage, ctx);
    if (report.status == StageStatus::Failed) {
      stop_downstream = true;
      stop_reason = "upstream stage " + std::string(stage_name(stage)) +
                    " failed";
    } else if (plan.human_review_checkpoints.count(stage) &&
               !approved.count(stage)) {
      report.status = StageStatus::AwaitingReview;
      std::string review_name =
          "review_" + std::string(stage_name(stage)) + ".txt";
      write_file(output_dir / review_name, review_file_text(report));
      report.artifacts.push_back(review_name);
      run.paused = true;
      stop_downstream = true;
      stop_reason = "awaiting review of stage " +
                    std::string(stage_name(stage));
    }
    run.stages.push_back(report);
  }

  run.success = true;
  for (const StageReport& r : run.stages) {
    if (r.status != StageStatus::Ok) run.success = false;
  }

  write_file(output_dir / "report.txt",
             run_report_text(run, plan, current_timestamp_utc()));
  return run;
}

std::string run_report_text(const RunReport& report, const PipelinePlan& plan,
                            std::string_view timestamp) {
  std::ostringstream out;
  out << "pipeline run report\n";
  out << "timestamp: " << timestamp << "\n";
  std::string result = "success";
  if (report.paused) {
    result = "awaiting_review";
  } else if (!report.success) {
    result = "failed";
  }
  out << "result = " << result << "\n";
  out << "amd_level = " << report.amd.level << "\n";
  out << "amd_rationale = " << report.amd.rationale << "\n";
  out << "stages_planned = " << plan.stages.size() << "\n";
  out << "overrides_applied = " << plan.override_log.size() << "\n";
  for (const std::string& r : plan.rule_log) out << "rule = " << r << "\n";
  for (const std::string& o : plan.override_log) {
    out << "override = " << o << "\n";
  }
  for (const StageReport& stage : report.stages) {
    out << "stage " << stage_name(stage.stage)
        << ": status=" << stage_status_name(stage.status);
    for (const auto& [k, v] : stage.metrics) {
      out << " " << k << "=" << v;
    }
    if (!stage.artifacts.empty()) {
      out << " artifacts=";
      for (std::size_t i = 0; i < stage.artifacts.size(); ++i) {
        if (i > 0) out << ";";
        out << stage.artifacts[i];
      }
    }
    if (!stage.note.empty()) out << " note=" << stage.note;
    out << "\n";
  }
  return out.str();
}

std::string sections_table_text(const std::vector<Section3D>& sections) {
  std::ostringstream out;
  out << "sections = " << sections.size() << "\n";
  out << "points_per_section = "
      << (sections.empty() ? 0 : sections.front().points.size()) << "\n";
  out << "# section point x_m y_m z_m\n";
  for (std::size_t i = 0; i < sections.size(); ++i) {
    for (std::size_t j = 0; j < sections[i].points.size(); ++j) {
      const auto& p = sections[i].points[j];
      out << i << " " << j << " " << format_double(p[0]) << " "
          << format_double(p[1]) << " " << format_double(p[2]) << "\n";
    }
  }
  return out.str();
}

}  // namespace vforge
