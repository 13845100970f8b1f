#include <doctest.h>

#include <cmath>
#include <random>

#include "vforge/hydro.hpp"

using namespace vforge;

namespace {

constexpr double kPi = 3.141592653589793;

BladeDesignParams random_valid_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BladeDesignParams p;
  p.span_m = 0.015 + 0.03 * unit(rng);
  p.chord_root_m = 0.006 + 0.006 * unit(rng);
  p.chord_tip_m = 0.004 + 0.004 * unit(rng);
  p.chord_mid_m = 0.008 + 0.006 * unit(rng);
  p.pitch_root_rad = 0.4 + 0.4 * unit(rng);
  p.pitch_tip_rad = 0.15 + 0.2 * unit(rng);
  p.pitch_mid_rad = 0.3 + 0.3 * unit(rng);
  p.thickness_ratio = 0.08 + 0.08 * unit(rng);
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("hydro");

TEST_CASE("operating point validation") {
  OperatingPoint op;
  CHECK_NOTHROW(op.validate_or_throw());
  op.rpm = 0.0;
  CHECK_THROWS_AS(op.validate_or_throw(), ValidationError);
  op = OperatingPoint{};
  op.advance_speed_mps = -0.1;
  CHECK_THROWS_AS(op.validate_or_throw(), ValidationError);
  op = OperatingPoint{};
  op.fluid_density_kg_m3 = 0.0;
  CHECK_THROWS_AS(op.validate_or_throw(), ValidationError);
}

TEST_CASE("default design produces forward thrust at cruise") {
  BladeDesignParams params;
  OperatingPoint op;  // 3000 rpm, 0.5 m/s, fresh water
  HydroResult result = bem_evaluate(params, op);
  CHECK(result.thrust_N > 0.0);
  CHECK(result.torque_Nm > 0.0);
  CHECK(result.efficiency > 0.0);
  CHECK(result.efficiency < 1.0);
  REQUIRE(result.station_loads.size() ==
          static_cast<std::size_t>(params.section_count));
  // Efficiency definition: useful power over shaft power.
  double omega = op.rpm * 2.0 * kPi / 60.0;
  CHECK(result.efficiency ==
        doctest::Approx(result.thrust_N * op.advance_speed_mps /
                        (result.torque_Nm * omega))
            .epsilon(1e-12));
}

TEST_CASE("station loads integrate back to the totals") {
  BladeDesignParams params;
  OperatingPoint op;
  HydroResult result = bem_evaluate(params, op);
  double thrust = 0.0, torque = 0.0;
  const auto& loads = result.station_loads;
  for (std::size_t i = 1; i < loads.size(); ++i) {
    double dr = loads[i].r - loads[i - 1].r;
    thrust += 0.5 * dr * (loads[i].dthrust_dr_N + loads[i - 1].dthrust_dr_N);
    torque +=
        0.5 * dr * (loads[i].dtorque_dr_Nm + loads[i - 1].dtorque_dr_Nm);
  }
  CHECK(thrust == doctest::Approx(result.thrust_N).epsilon(1e-9));
  CHECK(torque == doctest::Approx(result.torque_Nm).epsilon(1e-9));
}

TEST_CASE("per-station power balance: drag always dissipates") {
  // V * dT/dr - omega * dQ/dr equals minus the profile-drag power density,
  // so it must be strictly negative at every station whenever V > 0.
  // This is the mechanism that keeps efficiency below one.
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> rpm_dist(500.0, 8000.0);
  std::uniform_real_distribution<double> v_dist(0.05, 2.5);
  for (int trial = 0; trial < 100; ++trial) {
    BladeDesignParams params = random_valid_params(rng);
    OperatingPoint op;
    op.rpm = rpm_dist(rng);
    op.advance_speed_mps = v_dist(rng);
    HydroResult result = bem_evaluate(params, op);
    for (const StationLoad& load : result.station_loads) {
      double omega = op.rpm * 2.0 * kPi / 60.0;
      CHECK(op.advance_speed_mps * load.dthrust_dr_N -
                omega * load.dtorque_dr_Nm <
            0.0);
    }
  }
}

TEST_CASE("efficiency is below one whenever the propeller pushes") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> rpm_dist(1000.0, 8000.0);
  std::uniform_real_distribution<double> v_dist(0.05, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    BladeDesignParams params = random_valid_params(rng);
    OperatingPoint op;
    op.rpm = rpm_dist(rng);
    op.advance_speed_mps = v_dist(rng);
    HydroResult result = bem_evaluate(params, op);
    if (result.thrust_N > 0.0 && result.torque_Nm > 0.0) {
      CHECK(result.efficiency < 1.0);
    }
  }
}

TEST_CASE("bollard pull: zero efficiency and exact omega-squared thrust "
          "scaling") {
  BladeDesignParams params;
  OperatingPoint op;
  op.advance_speed_mps = 0.0;
  HydroResult slow = bem_evaluate(params, op);
  CHECK(slow.efficiency == 0.0);
  CHECK(slow.thrust_N > 0.0);
  op.rpm *= 2.0;
  HydroResult fast = bem_evaluate(params, op);
  CHECK(fast.thrust_N / slow.thrust_N == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(fast.torque_Nm / slow.torque_Nm == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("thrust is grid-independent to within one percent") {
  BladeDesignParams coarse;
  BladeDesignParams fine = coarse;
  fine.section_count = coarse.section_count * 2;
  OperatingPoint op;
  double t_coarse = bem_evaluate(coarse, op).thrust_N;
  double t_fine = bem_evaluate(fine, op).thrust_N;
  CHECK(std::abs(t_fine - t_coarse) / std::abs(t_coarse) < 0.01);
}

TEST_CASE("zero rotational speed is an evaluation error, not a validation "
          "error") {
  BladeDesignParams params;
  OperatingPoint op;
  op.rpm = 0.0;
  CHECK_THROWS_AS(bem_evaluate(params, op), EvalError);
  op.rpm = -100.0;
  CHECK_THROWS_AS(bem_evaluate(params, op), EvalError);
}

TEST_CASE("drag options shift the result in the expected direction") {
  BladeDesignParams params;
  OperatingPoint op;
  BemOptions draggy;
  draggy.parasitic_drag_coeff = 0.05;
  HydroResult base = bem_evaluate(params, op);
  HydroResult worse = bem_evaluate(params, op, draggy);
  CHECK(worse.efficiency < base.efficiency);
  CHECK(worse.torque_Nm > base.torque_Nm);
}

TEST_CASE("von mises reference values") {
  CHECK(von_mises({200e6, 100e6, 0.0}) ==
        doctest::Approx(173205080.75688773).epsilon(1e-12));
  CHECK(von_mises({200e6, 0.0, 0.0}) == 200e6);   // uniaxial, exact
  CHECK(von_mises({5e4, 5e4, 5e4}) == 0.0);       // hydrostatic, exact
  CHECK(von_mises({-1e6, -1e6, -1e6}) == 0.0);
}

TEST_CASE("von mises symmetry and pressure-shift invariance") {
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> stress(-5e8, 5e8);
  for (int trial = 0; trial < 1000; ++trial) {
    double a = stress(rng), b = stress(rng), c = stress(rng);
    double reference = von_mises({a, b, c});
    double permuted = von_mises({c, a, b});
    double shifted = von_mises({a + 1e8, b + 1e8, c + 1e8});
    double scale = std::max(1.0, std::abs(reference));
    CHECK(std::abs(permuted - reference) / scale <= 1e-9);
    CHECK(std::abs(shifted - reference) / scale <= 1e-9);
  }
}

TEST_CASE("root bending stress matches the cantilever hand calculation") {
  // Per-blade load 1 N applied at mid-span of the default 26 mm blade
  // against the rectangular root section 10 mm x 1.2 mm:
  // M = 1 * 0.013, Z = 0.010 * 0.0012^2 / 6, sigma = M / Z.
  BladeDesignParams params;
  HydroResult result;
  result.thrust_N = 3.0;  // three blades -> 1 N per blade
  double sigma = root_bending_stress(result, params);
  CHECK(sigma == doctest::Approx(5416666.666666667).epsilon(1e-12));

  result.thrust_N = 0.0;
  CHECK_THROWS_AS(root_bending_stress(result, params), EvalError);
  result.thrust_N = -2.0;
  CHECK_THROWS_AS(root_bending_stress(result, params), EvalError);
}

TEST_CASE("hydro report carries totals and the station table") {
  BladeDesignParams params;
  OperatingPoint op;
  HydroResult result = bem_evaluate(params, op);
  std::string report = hydro_report_text(result);
  CHECK(report.find("thrust_N = ") != std::string::npos);
  CHECK(report.find("torque_Nm = ") != std::string::npos);
  CHECK(report.find("efficiency = ") != std::string::npos);
  CHECK(report.find("station") != std::string::npos);
  // One table row per station.
  std::size_t rows = 0;
  for (char ch : report) {
    if (ch == '\n') ++rows;
  }
  CHECK(rows >= result.station_loads.size());
}

TEST_SUITE_END();
