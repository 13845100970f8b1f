#pragma once

#include <array>
#include <vector>

#include "vforge/errors.hpp"

namespace vforge {

// How chord length varies along the blade span.
enum class ChordMode {
  Linear,           // straight taper root -> tip
  GaussianBulge,    // linear taper times a localized gaussian widening
  PiecewiseMidspan  // two linear segments meeting at mid-span
};

// How the geometric pitch (section twist) varies along the span.
enum class PitchMode { Linear, PiecewiseMidspan };

// Full design-parameter vector for one propeller.  Lengths in meters,
// angles in radians.  Defaults describe a small three-blade pusher suitable
// for a ~0.3 m vessel.
struct BladeDesignParams {
  double span_m = 0.026;        // blade length from hub surface to tip
  double chord_root_m = 0.010;
  double chord_tip_m = 0.006;
  double chord_mid_m = 0.012;   // used by PiecewiseMidspan chord
  double pitch_root_rad = 0.6108652381980153;  // 35 deg
  double pitch_tip_rad = 0.2617993877991494;   // 15 deg
  double pitch_mid_rad = 0.4363323129985824;   // 25 deg, PiecewiseMidspan
  double bulge_amplitude = 0.2;   // gaussian widening strength (beta >= 0)
  double bulge_sharpness = 30.0;  // gaussian decay rate (gamma > 0)
  double bulge_center = 0.5;      // normalized span position of the bulge
  double rake_rad = 0.0;          // axial lean of the blade
  double skew_rad = 0.0;          // tangential sweep of the blade
  double thickness_ratio = 0.12;  // four-digit foil thickness parameter
  double pitch_axis = 0.25;       // chord fraction each section pivots about
  ChordMode chord_mode = ChordMode::PiecewiseMidspan;
  PitchMode pitch_mode = PitchMode::PiecewiseMidspan;
  int section_count = 16;       // spanwise stations (>= 2)
  int chord_point_count = 40;   // samples per foil surface (>= 8)
  int blade_count = 3;          // >= 1
  double hub_diameter_m = 0.020;
  double hub_length_m = 0.014;
  bool cosine_spacing = true;   // cluster chord samples at the edges

  // Raises ValidationError naming the first field that is out of range.
  void validate_or_throw() const;
};

// Closed cross-section polygon in normalized chord coordinates
// (unit chord, pitch axis at the origin).  Points wind counter-clockwise.
struct AirfoilSection {
  std::vector<std::array<double, 2>> points;
  bool closed = true;
};

// One blade cross-section placed in blade-local 3D space: x tangential,
// y axial, z spanwise from the root.
struct Section3D {
  double station_z_m = 0.0;
  std::vector<std::array<double, 3>> points;
};

// Maps a spanwise position z in [0, span] to the normalized coordinate
// r = z / span in [0, 1].  Raises DomainError outside that range.
double normalized_coord(double z_m, double span_m);

// Chord length / pitch angle at normalized span r in [0, 1].
double chord_at(double r, const BladeDesignParams& params);
double pitch_at(double r, const BladeDesignParams& params);

// Half-thickness of the symmetric four-digit foil at chord fraction
// x in [0, 1], for a unit chord.  Zero at both edges (closed trailing
// edge coefficient); peak near x = 0.3.
double foil_half_thickness(double x, double thickness_ratio);

// Builds the closed section polygon: `points_per_surface` samples on each
// of the upper and lower surfaces (shared leading/trailing edge points),
// so the polygon has 2 * points_per_surface - 2 vertices.  The polygon is
// mirror-symmetric about the chord line and winds counter-clockwise.
AirfoilSection make_airfoil(int points_per_surface, double thickness_ratio,
                            double pitch_axis, bool cosine_spacing = true);

// Scales a normalized section to the local chord, rotates it by the local
// pitch angle, and offsets it for skew and rake, producing the section
// at spanwise station z.
Section3D transform_section(const AirfoilSection& section, double z_m,
                            const BladeDesignParams& params);

// All spanwise stations of one blade, root (z = 0) to tip (z = span),
// ready for lofting.  Stations are uniformly spaced.
std::vector<Section3D> generate_blade_sections(const BladeDesignParams& params);

}  // namespace vforge
