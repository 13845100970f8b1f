// Python bindings for the vforge core: design parameters, geometry/mesh
// generation, STL I/O, hydrodynamic evaluation, design search, control
// simulation, and the planning pipeline.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "vforge/control.hpp"
#include "vforge/errors.hpp"
#include "vforge/geometry.hpp"
#include "vforge/hydro.hpp"
#include "vforge/mesh.hpp"
#include "vforge/optimizer.hpp"
#include "vforge/pipeline.hpp"
#include "vforge/stl_io.hpp"
#include "vforge/textio.hpp"

namespace py = pybind11;
using namespace vforge;

namespace {

StlMode stl_mode_from_string(const std::string& mode) {
  if (mode == "binary") return StlMode::Binary;
  if (mode == "ascii") return StlMode::Ascii;
  throw ConfigError("stl mode must be 'binary' or 'ascii'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "vforge core: propeller geometry, meshing, hydrodynamics, "
            "design search, drive control, and pipeline planning";

  py::register_exception<Error>(m, "VforgeError");

  py::class_<BladeDesignParams>(m, "BladeDesignParams")
      .def(py::init<>())
      .def_readwrite("span_m", &BladeDesignParams::span_m)
      .def_readwrite("chord_root_m", &BladeDesignParams::chord_root_m)
      .def_readwrite("chord_tip_m", &BladeDesignParams::chord_tip_m)
      .def_readwrite("chord_mid_m", &BladeDesignParams::chord_mid_m)
      .def_readwrite("pitch_root_rad", &BladeDesignParams::pitch_root_rad)
      .def_readwrite("pitch_tip_rad", &BladeDesignParams::pitch_tip_rad)
      .def_readwrite("pitch_mid_rad", &BladeDesignParams::pitch_mid_rad)
      .def_readwrite("bulge_amplitude", &BladeDesignParams::bulge_amplitude)
      .def_readwrite("bulge_sharpness", &BladeDesignParams::bulge_sharpness)
      .def_readwrite("bulge_center", &BladeDesignParams::bulge_center)
      .def_readwrite("rake_rad", &BladeDesignParams::rake_rad)
      .def_readwrite("skew_rad", &BladeDesignParams::skew_rad)
      .def_readwrite("thickness_ratio", &BladeDesignParams::thickness_ratio)
      .def_readwrite("pitch_axis", &BladeDesignParams::pitch_axis)
      .def_readwrite("section_count", &BladeDesignParams::section_count)
      .def_readwrite("chord_point_count",
                     &BladeDesignParams::chord_point_count)
      .def_readwrite("blade_count", &BladeDesignParams::blade_count)
      .def_readwrite("hub_diameter_m", &BladeDesignParams::hub_diameter_m)
      .def_readwrite("hub_length_m", &BladeDesignParams::hub_length_m)
      .def_readwrite("cosine_spacing", &BladeDesignParams::cosine_spacing)
      .def("validate", &BladeDesignParams::validate_or_throw);

  py::class_<HullParams>(m, "HullParams")
      .def(py::init<>())
      .def_readwrite("length_m", &HullParams::length_m)
      .def_readwrite("beam_m", &HullParams::beam_m)
      .def_readwrite("depth_m", &HullParams::depth_m)
      .def_readwrite("wall_thickness_m", &HullParams::wall_thickness_m)
      .def_readwrite("bow_exponent", &HullParams::bow_exponent)
      .def_readwrite("deck_open", &HullParams::deck_open)
      .def("validate", &HullParams::validate_or_throw);

  py::class_<OperatingPoint>(m, "OperatingPoint")
      .def(py::init<>())
      .def_readwrite("rpm", &OperatingPoint::rpm)
      .def_readwrite("advance_speed_mps", &OperatingPoint::advance_speed_mps)
      .def_readwrite("fluid_density_kg_m3",
                     &OperatingPoint::fluid_density_kg_m3)
      .def_readwrite("kinematic_viscosity_m2_s",
                     &OperatingPoint::kinematic_viscosity_m2_s);

  py::class_<HydroResult>(m, "HydroResult")
      .def_readonly("thrust_N", &HydroResult::thrust_N)
      .def_readonly("torque_Nm", &HydroResult::torque_Nm)
      .def_readonly("efficiency", &HydroResult::efficiency);

  py::class_<TriMesh>(m, "TriMesh")
      .def(py::init<>())
      .def_property_readonly(
          "vertex_count",
          [](const TriMesh& mesh) { return mesh.vertices.size(); })
      .def_property_readonly("triangle_count", [](const TriMesh& mesh) {
        return mesh.triangles.size();
      });

  py::class_<BuoyancyResult>(m, "BuoyancyResult")
      .def_readonly("draft_m", &BuoyancyResult::draft_m)
      .def_readonly("freeboard_m", &BuoyancyResult::freeboard_m)
      .def_readonly("displaced_mass_kg", &BuoyancyResult::displaced_mass_kg)
      .def_readonly("floats", &BuoyancyResult::floats);

  m.def("chord_at", &chord_at, py::arg("r"), py::arg("params"),
        "chord length at normalized span r");
  m.def("pitch_at", &pitch_at, py::arg("r"), py::arg("params"),
        "pitch angle at normalized span r");
  m.def("assemble_propeller", &assemble_propeller, py::arg("params"),
        "hub plus rotated blades as a multi-shell triangle mesh");
  m.def("generate_hull", &generate_hull, py::arg("params"),
        "parametric displacement hull mesh");
  m.def("mesh_volume", &mesh_volume, py::arg("mesh"),
        "enclosed volume of a watertight mesh");
  m.def(
      "is_watertight",
      [](const TriMesh& mesh) { return is_watertight(mesh).watertight; },
      py::arg("mesh"));
  m.def(
      "export_stl",
      [](const TriMesh& mesh, const std::string& mode,
         const std::string& name) {
        return py::bytes(export_stl(mesh, stl_mode_from_string(mode), name));
      },
      py::arg("mesh"), py::arg("mode") = "binary",
      py::arg("name") = "vforge");
  m.def(
      "import_stl",
      [](const py::bytes& data) {
        return import_stl(std::string_view(std::string(data)));
      },
      py::arg("data"));
  m.def("buoyancy_check", &buoyancy_check, py::arg("hull"),
        py::arg("total_mass_kg"), py::arg("water_density_kg_m3") = 1000.0);

  m.def(
      "bem_evaluate",
      [](const BladeDesignParams& params, const OperatingPoint& op) {
        return bem_evaluate(params, op);
      },
      py::arg("params"), py::arg("op"));
  m.def(
      "von_mises",
      [](double s1, double s2, double s3) {
        return von_mises({s1, s2, s3});
      },
      py::arg("sigma1_pa"), py::arg("sigma2_pa"), py::arg("sigma3_pa"));
  m.def("root_bending_stress", &root_bending_stress, py::arg("result"),
        py::arg("params"));

  m.def(
      "optimize",
      [](const BladeDesignParams& start, const OperatingPoint& op,
         int budget, double min_thrust_N, double max_root_stress_Pa) {
        ObjectiveConfig cfg;
        cfg.min_thrust_N = min_thrust_N;
        cfg.max_root_stress_Pa = max_root_stress_Pa;
        auto history =
            optimize(start, ParameterBounds::around(start), cfg, op, budget);
        const IterationRecord* best = &history.front();
        for (const auto& rec : history) {
          if (rec.accepted) best = &rec;
        }
        return py::make_tuple(best->params, best->objective,
                              static_cast<int>(history.size()));
      },
      py::arg("start"), py::arg("op"), py::arg("budget") = 160,
      py::arg("min_thrust_N") = 0.0, py::arg("max_root_stress_Pa") = 0.0,
      "pattern search within the default bounds; returns (best_params, "
      "best_objective, evaluations)");

  m.def(
      "simulate_command",
      [](const std::string& command, double duration_ms, double freq_hz) {
        auto cmd = parse_command(command);
        if (!cmd) throw CommandParseError("empty command");
        auto trace = generate_pwm_trace(command_to_motor_states(*cmd),
                                        duration_ms, freq_hz);
        return py::make_tuple(measure_duty(trace, TraceChannel::A_PWM),
                              measure_duty(trace, TraceChannel::B_PWM));
      },
      py::arg("command"), py::arg("duration_ms") = 30.0,
      py::arg("freq_hz") = 490.0,
      "measured (duty_A, duty_B) of the synthesized trace for a command");

  m.def(
      "plan_from_spec",
      [](const std::string& spec_text, bool bare_lengths_are_mm) {
        return plan_to_text(
            plan(parse_design_spec(spec_text, bare_lengths_are_mm)));
      },
      py::arg("spec_text"), py::arg("bare_lengths_are_mm") = false,
      "derive the pipeline plan for a design spec, as plan text");
  m.def(
      "classify_amd_level",
      [](const std::string& plan_text) {
        AmdLevel amd = classify_amd_level(parse_plan(plan_text));
        return py::make_tuple(amd.level, amd.rationale);
      },
      py::arg("plan_text"), "(level, rationale) for a plan's autonomy");
  m.def(
      "run_pipeline",
      [](const std::string& plan_text, const std::filesystem::path& out_dir,
         const std::vector<std::string>& approve) {
        std::set<Stage> approved;
        for (const std::string& name : approve) {
          auto stage = stage_from_name(name);
          if (!stage) throw ConfigError("unknown stage `" + name + "`");
          approved.insert(*stage);
        }
        RunReport report =
            run_pipeline(parse_plan(plan_text), out_dir, approved);
        return py::make_tuple(report.success, report.paused,
                              report.amd.level);
      },
      py::arg("plan_text"), py::arg("output_dir"),
      py::arg("approve") = std::vector<std::string>{},
      "execute a plan, writing artifacts; returns (success, paused, level)");
}
