#include "vforge/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vforge/textio.hpp"

namespace vforge {

void OperatingPoint::validate_or_throw() const {
  if (rpm <= 0.0) throw ValidationError("rpm must be > 0");
  if (advance_speed_mps < 0.0) {
    throw ValidationError("advance_speed must be >= 0");
  }
  if (fluid_density_kg_m3 <= 0.0) {
    throw ValidationError("fluid_density must be > 0");
  }
}

HydroResult bem_evaluate(const BladeDesignParams& params,
                         const OperatingPoint& op, const BemOptions& options) {
  params.validate_or_throw();
  if (op.rpm <= 0.0) {
    throw EvalError("operating point has non-positive rotational speed");
  }
  op.validate_or_throw();

  const double omega = op.rpm * 2.0 * std::numbers::pi / 60.0;
  const double v = op.advance_speed_mps;
  const double rho = op.fluid_density_kg_m3;
  const double hub_r = params.hub_diameter_m / 2.0;
  const double span = params.span_m;
  const int n = params.section_count;

  HydroResult result;
  result.station_loads.reserve(n);
  for (int i = 0; i < n; ++i) {
    double r = static_cast<double>(i) / (n - 1);
    double radius = hub_r + r * span;
    double chord = chord_at(r, params);
    double alpha = pitch_at(r, params);
    double tangential = omega * radius;
    double phi = std::atan2(v, tangential);
    double aoa = alpha - phi;
    double cl = std::clamp(2.0 * std::numbers::pi * aoa,
                           -options.stall_lift_limit,
                           options.stall_lift_limit);
    double cd = options.parasitic_drag_coeff +
                options.induced_drag_factor * cl * cl;
    double w2 = v * v + tangential * tangential;
    double q = 0.5 * rho * w2 * chord;
    double cphi = std::cos(phi);
    double sphi = std::sin(phi);
    double dthrust_dz = q * (cl * cphi - cd * sphi);
    double dtorque_dz = q * (cl * sphi + cd * cphi) * radius;
    StationLoad load;
    load.r = r;
    load.dthrust_dr_N = params.blade_count * span * dthrust_dz;
    load.dtorque_dr_Nm = params.blade_count * span * dtorque_dz;
    result.station_loads.push_back(load);
  }

  const double dr = 1.0 / (n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    result.thrust_N += 0.5 * dr *
                       (result.station_loads[i].dthrust_dr_N +
                        result.station_loads[i + 1].dthrust_dr_N);
    result.torque_Nm += 0.5 * dr *
                        (result.station_loads[i].dtorque_dr_Nm +
                         result.station_loads[i + 1].dtorque_dr_Nm);
  }

  double power_in = result.torque_Nm * omega;
  result.efficiency =
      (v == 0.0 || power_in == 0.0) ? 0.0
                                    : result.thrust_N * v / power_in;
  return result;
}

double von_mises(const StressState& s) {
  double d12 = s.sigma1_pa - s.sigma2_pa;
  double d23 = s.sigma2_pa - s.sigma3_pa;
  double d31 = s.sigma3_pa - s.sigma1_pa;
  return std::sqrt(0.5 * (d12 * d12 + d23 * d23 + d31 * d31));
}

double root_bending_stress(const HydroResult& result,
                           const BladeDesignParams& params) {
  params.validate_or_throw();
  double thrust_per_blade = result.thrust_N / params.blade_count;
  if (thrust_per_blade <= 0.0) {
    throw EvalError("root bending stress undefined for non-positive thrust");
  }
  double moment = thrust_per_blade * 0.5 * params.span_m;
  double half_depth = params.thickness_ratio * params.chord_root_m;
  double modulus = params.chord_root_m * half_depth * half_depth / 6.0;
  return moment / modulus;
}

std::string hydro_report_text(const HydroResult& result) {
  std::ostringstream out;
  out << "thrust_N = " << format_double(result.thrust_N) << "\n";
  out << "torque_Nm = " << format_double(result.torque_Nm) << "\n";
  out << "efficiency = " << format_double(result.efficiency) << "\n";
  out << "stations = " << result.station_loads.size() << "\n";
  out << "# station r dthrust_dr_N dtorque_dr_Nm\n";
  for (std::size_t i = 0; i < result.station_loads.size(); ++i) {
    const StationLoad& s = result.station_loads[i];
    out << i << " " << format_double(s.r) << " "
        << format_double(s.dthrust_dr_N) << " "
        << format_double(s.dtorque_dr_Nm) << "\n";
  }
  return out.str();
}

}  // namespace vforge
