// Acceptance suite: one check per release criterion, each printed as a
// single PASS/FAIL line.  Criterion 8 drives the installed command-line
// binary end to end; pass its path and the samples directory as arguments:
//
//   vforge_acceptance <path-to-vforge-cli> <samples-dir>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "vforge/control.hpp"
#include "vforge/geometry.hpp"
#include "vforge/hydro.hpp"
#include "vforge/mesh.hpp"
#include "vforge/optimizer.hpp"
#include "vforge/pipeline.hpp"
#include "vforge/stl_io.hpp"

using namespace vforge;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  std::string name;
  std::function<void()> body;  // throws std::runtime_error on failure
};

void expect(bool condition, const std::string& what) {
  if (!condition) throw std::runtime_error(what);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  expect(static_cast<bool>(in), "cannot read " + path.string());
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

std::string g_cli_path;
std::string g_samples_dir;

void check_duty_reproduction() {
  // 30 ms at 490 Hz spans ~14.7 periods; the window keeps well over 10.
  const std::vector<std::pair<ControlCommand, double>> expected = {
      {ControlCommand::Forward, 0.392},
      {ControlCommand::Backward, 0.314},
      {ControlCommand::Left, 0.157},   // motor A during a left turn
      {ControlCommand::Right, 0.588},  // motor A during a right turn
  };
  for (const auto& [cmd, target] : expected) {
    auto trace = generate_pwm_trace(command_to_motor_states(cmd), 30.0,
                                    490.0);
    double duty = measure_duty(trace, TraceChannel::A_PWM);
    expect(std::abs(duty - target) <= 0.001,
           std::string(command_name(cmd)) + " duty " + std::to_string(duty) +
               " deviates more than 0.1 pp from " + std::to_string(target));
  }
  // The fast side of each turn carries 58.8%.
  auto left = generate_pwm_trace(
      command_to_motor_states(ControlCommand::Left), 30.0, 490.0);
  expect(std::abs(measure_duty(left, TraceChannel::B_PWM) - 0.588) <= 0.001,
         "left-turn fast motor deviates from 58.8%");
}

void check_geometry_invariants() {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    BladeDesignParams p;
    p.chord_root_m = 0.006 + 0.010 * unit(rng);
    p.chord_tip_m = 0.004 + 0.006 * unit(rng);
    p.chord_mid_m = 0.006 + 0.010 * unit(rng);
    p.pitch_root_rad = 0.2 + 0.8 * unit(rng);
    p.pitch_tip_rad = 0.1 + 0.5 * unit(rng);
    p.pitch_mid_rad = 0.15 + 0.6 * unit(rng);
    p.bulge_amplitude = unit(rng);
    p.bulge_sharpness = 1.0 + 80.0 * unit(rng);
    p.bulge_center = unit(rng);

    // Rotation isometry at unit chord.
    BladeDesignParams iso = p;
    iso.chord_mode = ChordMode::Linear;
    iso.chord_root_m = 1.0;
    iso.chord_tip_m = 1.0;
    iso.span_m = 1.0;
    AirfoilSection foil = make_airfoil(12, iso.thickness_ratio,
                                       iso.pitch_axis, iso.cosine_spacing);
    double z = unit(rng);
    Section3D placed = transform_section(foil, z, iso);
    for (std::size_t i = 0; i < foil.points.size(); ++i) {
      double before = std::hypot(foil.points[i][0], foil.points[i][1]);
      double after = std::hypot(placed.points[i][0], placed.points[i][1]);
      expect(std::abs(before - after) <= 1e-12,
             "pitch rotation changed a point norm");
    }

    // Piecewise continuity at the knee.
    p.chord_mode = ChordMode::PiecewiseMidspan;
    p.pitch_mode = PitchMode::PiecewiseMidspan;
    double below = chord_at(std::nextafter(0.5, 0.0), p);
    double above = chord_at(std::nextafter(0.5, 1.0), p);
    expect(std::abs(below - above) <= 1e-12, "chord knee discontinuity");
    below = pitch_at(std::nextafter(0.5, 0.0), p);
    above = pitch_at(std::nextafter(0.5, 1.0), p);
    expect(std::abs(below - above) <= 1e-12, "pitch knee discontinuity");

    // Endpoint interpolation in every mode (bulge at beta = 0).
    expect(chord_at(0.0, p) == p.chord_root_m, "piecewise C(0) != C_r");
    expect(chord_at(1.0, p) == p.chord_tip_m, "piecewise C(1) != C_t");
    p.chord_mode = ChordMode::Linear;
    expect(chord_at(0.0, p) == p.chord_root_m, "linear C(0) != C_r");
    expect(chord_at(1.0, p) == p.chord_tip_m, "linear C(1) != C_t");
    BladeDesignParams flat = p;
    flat.chord_mode = ChordMode::GaussianBulge;
    flat.bulge_amplitude = 0.0;
    expect(chord_at(0.0, flat) == flat.chord_root_m, "bulge C(0) != C_r");
    expect(chord_at(1.0, flat) == flat.chord_tip_m, "bulge C(1) != C_t");

    // Zero-amplitude bulge is the linear law pointwise.
    double r = unit(rng);
    expect(chord_at(r, flat) == chord_at(r, p),
           "bulge(beta=0) differs from linear");
  }
}

void check_reference_build() {
  BladeDesignParams params;  // 26 mm span, 20 mm hub, 3 blades
  expect(params.span_m == 0.026 && params.hub_diameter_m == 0.020 &&
             params.blade_count == 3,
         "reference configuration drifted");
  TriMesh prop = assemble_propeller(params);
  auto solids = split_components(prop);
  expect(solids.size() == 4, "expected hub + 3 blade solids");
  for (const TriMesh& solid : solids) {
    expect(is_watertight(solid).watertight, "solid not watertight");
    expect(mesh_volume(solid) > 0.0, "solid volume not positive");
  }
  std::string once = export_stl(prop, StlMode::Binary);
  std::string twice = export_stl(import_stl(once), StlMode::Binary);
  expect(once == twice, "binary STL round-trip not lossless");
}

void check_mesh_oracles() {
  TriMesh cube = vforge_test::make_box(1.0, 1.0, 1.0);
  expect(std::abs(mesh_volume(cube) - 1.0) <= 1e-12,
         "unit cube volume oracle failed");
  TriMesh sphere = vforge_test::make_icosphere(0.7, 3);
  double exact = 4.0 / 3.0 * 3.141592653589793 * 0.7 * 0.7 * 0.7;
  expect(std::abs(mesh_volume(sphere) - exact) / exact < 0.01,
         "icosphere volume oracle failed");
  cube.triangles.pop_back();
  WatertightReport report = is_watertight(cube);
  expect(!report.watertight, "open cube reported watertight");
  expect(report.boundary_edges.size() == 3,
         "open cube boundary edge count != 3");
}

void check_von_mises() {
  expect(von_mises({5e4, 5e4, 5e4}) == 0.0, "hydrostatic state not zero");
  expect(von_mises({2e8, 0.0, 0.0}) == 2e8, "uniaxial state not exact");
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> stress(-5e8, 5e8);
  for (int trial = 0; trial < 1000; ++trial) {
    double a = stress(rng), b = stress(rng), c = stress(rng);
    double reference = von_mises({a, b, c});
    double scale = std::max(1.0, std::abs(reference));
    expect(std::abs(von_mises({b, c, a}) - reference) / scale <= 1e-9,
           "permutation invariance violated");
    double shift = stress(rng);
    expect(std::abs(von_mises({a + shift, b + shift, c + shift}) -
                    reference) / scale <= 1e-9,
           "pressure-shift invariance violated");
  }
}

void check_bem_properties() {
  BladeDesignParams params;
  // Propulsive sweep: 100 operating points with positive thrust demand.
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      OperatingPoint op;
      op.rpm = 2000.0 + 4500.0 * i / 9.0;
      op.advance_speed_mps = 0.1 + 1.1 * j / 9.0;
      HydroResult result = bem_evaluate(params, op);
      expect(result.thrust_N > 0.0, "sweep point lost thrust");
      expect(result.efficiency < 1.0, "efficiency reached 1");
      expect(result.efficiency > 0.0, "efficiency not positive");
    }
  }
  // Exact omega-squared scaling at bollard pull.
  OperatingPoint bollard;
  bollard.advance_speed_mps = 0.0;
  HydroResult slow = bem_evaluate(params, bollard);
  bollard.rpm *= 2.0;
  HydroResult fast = bem_evaluate(params, bollard);
  expect(std::abs(fast.thrust_N / slow.thrust_N - 4.0) <= 1e-9,
         "thrust does not scale with omega^2 at V=0");
  // Grid independence on the default design.
  BladeDesignParams fine = params;
  fine.section_count = params.section_count * 2;
  OperatingPoint cruise;
  double coarse_thrust = bem_evaluate(params, cruise).thrust_N;
  double fine_thrust = bem_evaluate(fine, cruise).thrust_N;
  expect(std::abs(fine_thrust - coarse_thrust) / std::abs(coarse_thrust) <
             0.01,
         "thrust changes more than 1% when doubling the station count");
}

void check_optimizer() {
  BladeDesignParams start;
  ParameterBounds bounds = ParameterBounds::around(start);
  const std::vector<DesignField> tunable = {
      DesignField::ChordRoot, DesignField::ChordTip, DesignField::PitchRoot,
      DesignField::PitchTip};
  for (int i = 0; i < kDesignFieldCount; ++i) bounds.fields[i].tunable = false;
  for (DesignField f : tunable) {
    bounds.fields[static_cast<int>(f)].tunable = true;
  }
  BladeDesignParams target = start;
  for (DesignField f : tunable) {
    const FieldBound& b = bounds.fields[static_cast<int>(f)];
    set_design_field(target, f, b.lower + 0.7 * (b.upper - b.lower));
  }
  auto evaluator = [&bounds, &tunable,
                    &target](const BladeDesignParams& candidate) {
    double sum = 0.0;
    for (DesignField f : tunable) {
      const FieldBound& b = bounds.fields[static_cast<int>(f)];
      double d = (get_design_field(candidate, f) -
                  get_design_field(target, f)) /
                 (b.upper - b.lower);
      sum += d * d;
    }
    Evaluation eval;
    eval.objective = -sum;
    return eval;
  };
  auto history = optimize_with(start, bounds, evaluator, 499);
  expect(history.size() <= 500, "evaluation budget exceeded");
  double best = history.front().objective;
  BladeDesignParams final_params = history.front().params;
  for (const auto& rec : history) {
    if (rec.accepted) {
      expect(rec.objective >= best, "best-so-far decreased");
      best = rec.objective;
      final_params = rec.params;
    }
  }
  for (DesignField f : tunable) {
    const FieldBound& b = bounds.fields[static_cast<int>(f)];
    double err = std::abs(get_design_field(final_params, f) -
                          get_design_field(target, f)) /
                 (b.upper - b.lower);
    expect(err <= 1e-3, "final point more than 1e-3 of range from optimum");
  }
  auto rerun = optimize_with(start, bounds, evaluator, 499);
  expect(history_csv(history) == history_csv(rerun),
         "histories differ between runs");
}

int run_cli(const std::string& args) {
  std::string command = "\"" + g_cli_path + "\" " + args;
  return std::system(command.c_str());
}

void check_end_to_end() {
  expect(!g_cli_path.empty() && !g_samples_dir.empty(),
         "usage: vforge_acceptance <cli> <samples-dir>");
  fs::path scratch = fs::temp_directory_path() / "vforge_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  fs::path spec = fs::path(g_samples_dir) / "boat_spec.txt";
  expect(fs::exists(spec), "sample spec missing: " + spec.string());

  fs::path plan_file = scratch / "plan.txt";
  expect(run_cli("plan \"" + spec.string() + "\" -o \"" +
                 plan_file.string() + "\"") == 0,
         "plan subcommand failed");
  expect(run_cli("run \"" + plan_file.string() + "\" -o \"" +
                 (scratch / "run1").string() + "\" > /dev/null") == 0,
         "first run failed");
  expect(run_cli("run \"" + plan_file.string() + "\" -o \"" +
                 (scratch / "run2").string() + "\" > /dev/null") == 0,
         "second run failed");

  std::string report = read_text(scratch / "run1" / "report.txt");
  for (const char* stage :
       {"GenerateGeometry", "AssembleMesh", "Evaluate", "Optimize",
        "BuoyancyCheck", "ControlSim"}) {
    expect(report.find("stage " + std::string(stage) + ": status=ok") !=
               std::string::npos,
           std::string(stage) + " did not complete");
  }
  expect(strip_timestamp(report) ==
             strip_timestamp(read_text(scratch / "run2" / "report.txt")),
         "reports differ beyond the timestamp");

  // Closed-form buoyancy fixture: 3 kg box of 0.3 x 0.2 x 0.1 m.
  TriMesh box = vforge_test::make_box(0.3, 0.2, 0.1);
  BuoyancyResult result = buoyancy_check(box, 3.0, 1000.0);
  expect(result.floats, "box fixture reported sinking");
  expect(std::abs(result.draft_m - 0.05) <= 1e-5,
         "box draft deviates from 0.05 m");
}

void check_amd_rules() {
  DesignSpec spec;
  spec.required_thrust_N = 5.0;
  spec.cruise_speed_mps = 0.5;
  spec.payload_mass_kg = 0.5;
  spec.max_dimensions_m = 0.36;
  spec.max_stress_pa = 2e8;
  spec.water_density_kg_m3 = 1000.0;
  PipelinePlan base = plan(spec);
  expect(classify_amd_level(base).level == 4, "zero checkpoints != level 4");

  PipelinePlan reviewed = base;
  reviewed.human_review_checkpoints.insert(base.stages.begin(),
                                           base.stages.end());
  expect(classify_amd_level(reviewed).level <= 2,
         "all-stage checkpoints gave level > 2");

  // Monotone under checkpoint removal, exhaustively over all subsets.
  for (unsigned mask = 0; mask < 64; ++mask) {
    PipelinePlan variant = base;
    variant.human_review_checkpoints.clear();
    for (unsigned bit = 0; bit < 6; ++bit) {
      if (mask & (1u << bit)) {
        variant.human_review_checkpoints.insert(base.stages[bit]);
      }
    }
    int level = classify_amd_level(variant).level;
    for (Stage s : variant.human_review_checkpoints) {
      PipelinePlan fewer = variant;
      fewer.human_review_checkpoints.erase(s);
      expect(classify_amd_level(fewer).level >= level,
             "removing a checkpoint lowered the level");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];
  if (argc > 2) g_samples_dir = argv[2];

  const std::vector<Criterion> criteria = {
      {"1 duty-cycle reproduction (39.2/31.4/58.8/15.7 within 0.1 pp)",
       check_duty_reproduction},
      {"2 geometry invariants (isometry, continuity, endpoints, bulge)",
       check_geometry_invariants},
      {"3 reference propeller build + lossless binary STL round-trip",
       check_reference_build},
      {"4 mesh volume oracles and boundary-edge diagnostics",
       check_mesh_oracles},
      {"5 von Mises exact values and invariances", check_von_mises},
      {"6 blade-element properties (eta < 1, omega^2 scaling, grid)",
       check_bem_properties},
      {"7 pattern search convergence, monotonicity, reproducibility",
       check_optimizer},
      {"8 end-to-end plan/run determinism + buoyancy fixture",
       check_end_to_end},
      {"9 autonomy classification rules and monotonicity", check_amd_rules},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      criterion.body();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    if (failure.empty()) {
      std::cout << "PASS criterion " << criterion.name << " [" << elapsed
                << " ms]\n";
    } else {
      ++failures;
      std::cout << "FAIL criterion " << criterion.name << ": " << failure
                << "\n";
    }
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all 9 criteria passed\n";
  return 0;
}
