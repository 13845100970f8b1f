#pragma once

#include <string>
#include <vector>

#include "vforge/errors.hpp"
#include "vforge/geometry.hpp"

namespace vforge {

// Steady operating condition for one evaluation.
struct OperatingPoint {
  double rpm = 3000.0;
  double advance_speed_mps = 0.5;
  double fluid_density_kg_m3 = 1000.0;
  double kinematic_viscosity_m2_s = 1e-6;  // reserved for future polars

  void validate_or_throw() const;
};

// Spanwise load density at one station, in per-unit-normalized-span terms
// and summed over all blades, so trapezoidal integration over r in [0, 1]
// reproduces the totals.
struct StationLoad {
  double r = 0.0;
  double dthrust_dr_N = 0.0;
  double dtorque_dr_Nm = 0.0;
};

struct HydroResult {
  double thrust_N = 0.0;
  double torque_Nm = 0.0;
  double efficiency = 0.0;  // T*V/(Q*omega); 0 at bollard (V = 0)
  std::vector<StationLoad> station_loads;
};

// Principal stresses, any real triple.
struct StressState {
  double sigma1_pa = 0.0;
  double sigma2_pa = 0.0;
  double sigma3_pa = 0.0;
};

// Section force-coefficient model constants.  Exposed so sensitivity tests
// can vary the drag line; every production caller uses the defaults.
struct BemOptions {
  double parasitic_drag_coeff = 0.008;
  double induced_drag_factor = 0.01;  // quadratic lift-dependent term
  double stall_lift_limit = 1.2;      // |C_l| cap
};

// Blade-element evaluation on the uniform station grid of `params`:
// thin-foil lift (clamped at the stall cap), quadratic drag line, no
// induced-velocity iteration.  A ranking surrogate, not a flow solver.
// Raises EvalError when the rotational speed is zero or negative.
HydroResult bem_evaluate(const BladeDesignParams& params,
                         const OperatingPoint& op,
                         const BemOptions& options = {});

// Equivalent tensile stress from principal stresses.
double von_mises(const StressState& s);

// Cantilever estimate of the blade-root bending stress: per-blade thrust
// applied at mid-span against a rectangular root section modulus.
// Raises EvalError when thrust is not positive (model undefined).
double root_bending_stress(const HydroResult& result,
                           const BladeDesignParams& params);

// Structured-text report: totals plus the per-station load table.
std::string hydro_report_text(const HydroResult& result);

}  // namespace vforge
