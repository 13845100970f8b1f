// vforge command-line tool: plan/run the design pipeline and drive the
// individual stages (geometry, meshing, evaluation, optimization, control
// simulation) directly.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vforge/control.hpp"
#include "vforge/errors.hpp"
#include "vforge/geometry.hpp"
#include "vforge/hydro.hpp"
#include "vforge/mesh.hpp"
#include "vforge/optimizer.hpp"
#include "vforge/pipeline.hpp"
#include "vforge/stl_io.hpp"
#include "vforge/textio.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitStageFailure = 3;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw vforge::ConfigError("cannot open file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw vforge::ConfigError("cannot write file " + path.string());
  }
  out << data;
}

// Writes to the given path, or stdout when the path is empty.
void emit(const std::string& out_path, const std::string& data) {
  if (out_path.empty()) {
    std::cout << data;
  } else {
    write_file(out_path, data);
  }
}

vforge::BladeDesignParams load_params(const std::string& path, bool mm) {
  if (path.empty()) return vforge::BladeDesignParams{};
  return vforge::parse_blade_params(read_file(path), mm);
}

vforge::StlMode stl_mode_from_flag(const std::string& flag) {
  if (flag == "ascii") return vforge::StlMode::Ascii;
  if (flag == "binary") return vforge::StlMode::Binary;
  throw vforge::ConfigError("--stl must be ascii or binary");
}

struct CommonOptions {
  std::string units = "m";

  bool lengths_are_mm() const {
    if (units == "mm") return true;
    if (units == "m") return false;
    throw vforge::ConfigError("--units must be mm or m");
  }
};

int cmd_plan(const std::string& spec_path, const std::string& out_path,
             const CommonOptions& common) {
  vforge::DesignSpec spec =
      vforge::parse_design_spec(read_file(spec_path), common.lengths_are_mm());
  vforge::PipelinePlan plan = vforge::plan(spec);
  emit(out_path, vforge::plan_to_text(plan));
  return kExitOk;
}

int cmd_run(const std::string& plan_path, const std::string& out_dir,
            const std::vector<std::string>& approve_names) {
  vforge::PipelinePlan plan = vforge::parse_plan(read_file(plan_path));
  std::set<vforge::Stage> approved;
  for (const std::string& name : approve_names) {
    auto stage = vforge::stage_from_name(name);
    if (!stage) {
      throw vforge::ConfigError("--approve: unknown stage `" + name + "`");
    }
    approved.insert(*stage);
  }
  vforge::RunReport report = vforge::run_pipeline(plan, out_dir, approved);
  for (const vforge::StageReport& stage : report.stages) {
    std::cout << vforge::stage_name(stage.stage) << ": "
              << vforge::stage_status_name(stage.status) << "\n";
  }
  if (report.paused) {
    std::cout << "paused for human review; re-run with --approve\n";
    return kExitOk;
  }
  if (!report.success) {
    std::cerr << "error: a pipeline stage failed; see report.txt\n";
    return kExitStageFailure;
  }
  return kExitOk;
}

int cmd_generate(const std::string& params_path, const std::string& out_path,
                 const CommonOptions& common) {
  vforge::BladeDesignParams params =
      load_params(params_path, common.lengths_are_mm());
  auto sections = vforge::generate_blade_sections(params);
  emit(out_path, vforge::sections_table_text(sections));
  return kExitOk;
}

struct MeshOptions {
  bool hull = false;
  vforge::HullParams hull_params;
  std::string stl_flag = "binary";
  std::string solid_name = "vforge";
};

int cmd_mesh(const std::string& params_path, const std::string& out_path,
             const MeshOptions& mesh_opts, const CommonOptions& common) {
  vforge::TriMesh mesh;
  if (mesh_opts.hull) {
    mesh_opts.hull_params.validate_or_throw();
    mesh = vforge::generate_hull(mesh_opts.hull_params);
  } else {
    vforge::BladeDesignParams params =
        load_params(params_path, common.lengths_are_mm());
    mesh = vforge::assemble_propeller(params);
  }
  vforge::MeshStats stats = vforge::mesh_stats(mesh);
  emit(out_path, vforge::export_stl(mesh, stl_mode_from_flag(
                                              mesh_opts.stl_flag),
                                    mesh_opts.solid_name));
  if (!out_path.empty()) {
    std::cout << vforge::mesh_stats_text(stats);
  }
  return kExitOk;
}

struct EvalOptions {
  double rpm = 3000.0;
  double speed = 0.5;
  double density = 1000.0;
};

int cmd_eval(const std::string& params_path, const std::string& out_path,
             const EvalOptions& eval_opts, const CommonOptions& common) {
  vforge::BladeDesignParams params =
      load_params(params_path, common.lengths_are_mm());
  vforge::OperatingPoint op;
  op.rpm = eval_opts.rpm;
  op.advance_speed_mps = eval_opts.speed;
  op.fluid_density_kg_m3 = eval_opts.density;
  vforge::HydroResult result = vforge::bem_evaluate(params, op);
  emit(out_path, vforge::hydro_report_text(result));
  return kExitOk;
}

struct OptimizeOptions {
  EvalOptions operating;
  int budget = 160;
  double min_thrust = 0.0;
  double max_stress = 0.0;
  std::string target = "max_efficiency";
  std::string params_out;
};

int cmd_optimize(const std::string& params_path, const std::string& out_path,
                 const OptimizeOptions& opt, const CommonOptions& common) {
  vforge::BladeDesignParams params =
      load_params(params_path, common.lengths_are_mm());
  vforge::OperatingPoint op;
  op.rpm = opt.operating.rpm;
  op.advance_speed_mps = opt.operating.speed;
  op.fluid_density_kg_m3 = opt.operating.density;
  vforge::ObjectiveConfig cfg;
  if (opt.target == "max_efficiency") {
    cfg.target = vforge::ObjectiveTarget::MaxEfficiency;
  } else if (opt.target == "max_thrust") {
    cfg.target = vforge::ObjectiveTarget::MaxThrust;
  } else {
    throw vforge::ConfigError("--target must be max_efficiency or max_thrust");
  }
  cfg.min_thrust_N = opt.min_thrust;
  cfg.max_root_stress_Pa = opt.max_stress;
  auto bounds = vforge::ParameterBounds::around(params);
  auto history = vforge::optimize(params, bounds, cfg, op, opt.budget);
  emit(out_path, vforge::history_csv(history));
  const vforge::IterationRecord* best = &history.front();
  for (const auto& rec : history) {
    if (rec.accepted) best = &rec;
  }
  if (!opt.params_out.empty()) {
    write_file(opt.params_out, vforge::blade_params_text(best->params));
  }
  std::cerr << "evaluations: " << history.size()
            << " best objective: " << vforge::format_double(best->objective)
            << "\n";
  return kExitOk;
}

struct SimctlOptions {
  double freq_hz = 490.0;
  double duration_ms = 30.0;
};

int cmd_simctl(const std::string& script_path, const std::string& out_dir,
               const SimctlOptions& sim) {
  std::istringstream script(read_file(script_path));
  std::filesystem::create_directories(out_dir);
  std::string line;
  int index = 0;
  while (std::getline(script, line)) {
    std::string body = line.substr(0, line.find('#'));
    auto cmd = vforge::parse_command(body);
    if (!cmd) continue;  // blank line
    auto states = vforge::command_to_motor_states(*cmd);
    auto trace =
        vforge::generate_pwm_trace(states, sim.duration_ms, sim.freq_hz);
    std::string name = "trace_" + std::to_string(index) + "_" +
                       std::string(vforge::command_name(*cmd)) + ".csv";
    write_file(std::filesystem::path(out_dir) / name,
               vforge::export_trace_csv(trace));
    std::cout << name << " duty_a="
              << vforge::format_double(
                     vforge::measure_duty(trace, vforge::TraceChannel::A_PWM))
              << " duty_b="
              << vforge::format_double(
                     vforge::measure_duty(trace, vforge::TraceChannel::B_PWM))
              << "\n";
    ++index;
  }
  return kExitOk;
}

int cmd_classify(const std::string& plan_path) {
  vforge::PipelinePlan plan = vforge::parse_plan(read_file(plan_path));
  vforge::AmdLevel amd = vforge::classify_amd_level(plan);
  std::cout << "amd_level = " << amd.level << "\n"
            << "rationale = " << amd.rationale << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vforge: deterministic design toolkit for small watercraft "
               "(propeller geometry, meshing, hydrodynamic evaluation, "
               "design search, drive-control simulation)"};
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--units", common.units,
                 "unit for bare lengths in input files (mm or m)")
      ->check(CLI::IsMember({"mm", "m"}));

  std::string spec_path, plan_path, params_path, script_path;
  std::string out_path, out_dir;
  std::vector<std::string> approve_names;
  MeshOptions mesh_opts;
  EvalOptions eval_opts;
  OptimizeOptions opt_opts;
  SimctlOptions sim_opts;

  CLI::App* plan_cmd =
      app.add_subcommand("plan", "derive a pipeline plan from a design spec");
  plan_cmd->add_option("spec", spec_path, "design spec file")->required();
  plan_cmd->add_option("-o,--output", out_path, "plan file (default stdout)");

  CLI::App* run_cmd =
      app.add_subcommand("run", "execute a pipeline plan, writing artifacts");
  run_cmd->add_option("plan", plan_path, "plan file")->required();
  run_cmd->add_option("-o,--output", out_dir, "artifact directory")
      ->required();
  run_cmd->add_option("--approve", approve_names,
                      "checkpointed stage(s) approved for this run");

  CLI::App* generate_cmd = app.add_subcommand(
      "generate", "emit the blade section table for a design");
  generate_cmd->add_option("params", params_path,
                           "design parameter file (defaults when omitted)");
  generate_cmd->add_option("-o,--output", out_path,
                           "section table file (default stdout)");

  CLI::App* mesh_cmd =
      app.add_subcommand("mesh", "assemble a propeller (or hull) STL");
  mesh_cmd->add_option("params", params_path,
                       "design parameter file (defaults when omitted)");
  mesh_cmd->add_option("-o,--output", out_path, "STL file (default stdout)");
  mesh_cmd->add_option("--stl", mesh_opts.stl_flag, "STL flavor")
      ->check(CLI::IsMember({"ascii", "binary"}));
  mesh_cmd->add_flag("--hull", mesh_opts.hull,
                     "emit the hull instead of the propeller");
  mesh_cmd->add_option("--hull-length", mesh_opts.hull_params.length_m,
                       "hull length in meters");
  mesh_cmd->add_option("--hull-beam", mesh_opts.hull_params.beam_m,
                       "hull beam in meters");
  mesh_cmd->add_option("--hull-depth", mesh_opts.hull_params.depth_m,
                       "hull depth in meters");
  mesh_cmd->add_option("--hull-wall", mesh_opts.hull_params.wall_thickness_m,
                       "hull wall thickness in meters");
  mesh_cmd->add_option("--hull-bow", mesh_opts.hull_params.bow_exponent,
                       "bow superellipse exponent");
  mesh_cmd->add_option("--name", mesh_opts.solid_name, "STL solid name");

  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "blade-element evaluation at an operating point");
  eval_cmd->add_option("params", params_path,
                       "design parameter file (defaults when omitted)");
  eval_cmd->add_option("-o,--output", out_path,
                       "report file (default stdout)");
  eval_cmd->add_option("--rpm", eval_opts.rpm, "shaft speed in rpm");
  eval_cmd->add_option("--speed", eval_opts.speed, "advance speed in m/s");
  eval_cmd->add_option("--density", eval_opts.density,
                       "fluid density in kg/m^3");

  CLI::App* optimize_cmd = app.add_subcommand(
      "optimize", "bounded pattern search from a starting design");
  optimize_cmd->add_option("params", params_path,
                           "starting design (defaults when omitted)");
  optimize_cmd->add_option("-o,--output", out_path,
                           "history table file (default stdout)");
  optimize_cmd->add_option("--budget", opt_opts.budget,
                           "additional evaluations after the start point");
  optimize_cmd->add_option("--rpm", opt_opts.operating.rpm,
                           "shaft speed in rpm");
  optimize_cmd->add_option("--speed", opt_opts.operating.speed,
                           "advance speed in m/s");
  optimize_cmd->add_option("--density", opt_opts.operating.density,
                           "fluid density in kg/m^3");
  optimize_cmd->add_option("--target", opt_opts.target,
                           "max_efficiency or max_thrust")
      ->check(CLI::IsMember({"max_efficiency", "max_thrust"}));
  optimize_cmd->add_option("--min-thrust", opt_opts.min_thrust,
                           "thrust constraint in N (0 disables)");
  optimize_cmd->add_option("--max-stress", opt_opts.max_stress,
                           "root stress constraint in Pa (0 disables)");
  optimize_cmd->add_option("--params-out", opt_opts.params_out,
                           "write the best design parameters here");

  CLI::App* simctl_cmd = app.add_subcommand(
      "simctl", "simulate a drive-command script into PWM traces");
  simctl_cmd->add_option("script", script_path,
                         "command script, one command per line")
      ->required();
  simctl_cmd->add_option("-o,--output", out_dir, "trace directory")
      ->required();
  simctl_cmd->add_option("--freq", sim_opts.freq_hz, "PWM frequency in Hz");
  simctl_cmd->add_option("--duration", sim_opts.duration_ms,
                         "trace length per command in ms");

  CLI::App* classify_cmd = app.add_subcommand(
      "classify", "report the autonomy level of a pipeline plan");
  classify_cmd->add_option("plan", plan_path, "plan file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Keep --help/--version at their conventional status; everything else
    // is a command-line validation failure.
    int status = app.exit(e);
    return status == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (plan_cmd->parsed()) return cmd_plan(spec_path, out_path, common);
    if (run_cmd->parsed()) return cmd_run(plan_path, out_dir, approve_names);
    if (generate_cmd->parsed()) {
      return cmd_generate(params_path, out_path, common);
    }
    if (mesh_cmd->parsed()) {
      return cmd_mesh(params_path, out_path, mesh_opts, common);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(params_path, out_path, eval_opts, common);
    }
    if (optimize_cmd->parsed()) {
      return cmd_optimize(params_path, out_path, opt_opts, common);
    }
    if (simctl_cmd->parsed()) {
      return cmd_simctl(script_path, out_dir, sim_opts);
    }
    if (classify_cmd->parsed()) return cmd_classify(plan_path);
  } catch (const vforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
