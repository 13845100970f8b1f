#include "vforge/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace vforge {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void require_domain(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

void BladeDesignParams::validate_or_throw() const {
  require(span_m > 0.0, "span_m must be > 0");
  require(chord_root_m > 0.0, "chord_root_m must be > 0");
  require(chord_tip_m > 0.0, "chord_tip_m must be > 0");
  require(chord_mid_m > 0.0, "chord_mid_m must be > 0");
  require(bulge_amplitude >= 0.0, "bulge_amplitude must be >= 0");
  require(bulge_sharpness > 0.0, "bulge_sharpness must be > 0");
  require(bulge_center >= 0.0 && bulge_center <= 1.0,
          "bulge_center must be in [0, 1]");
  require(thickness_ratio > 0.0, "thickness_ratio must be > 0");
  require(pitch_axis >= 0.0 && pitch_axis <= 1.0,
          "pitch_axis must be in [0, 1]");
  require(section_count >= 2, "section_count must be >= 2");
  require(chord_point_count >= 8, "chord_point_count must be >= 8");
  require(blade_count >= 1, "blade_count must be >= 1");
  require(hub_diameter_m > 0.0, "hub_diameter_m must be > 0");
  require(hub_length_m > 0.0, "hub_length_m must be > 0");
  require(std::abs(pitch_root_rad) < std::numbers::pi / 2 &&
              std::abs(pitch_mid_rad) < std::numbers::pi / 2 &&
              std::abs(pitch_tip_rad) < std::numbers::pi / 2,
          "pitch angles must lie strictly inside (-pi/2, pi/2)");
  require(std::abs(rake_rad) < std::numbers::pi / 2,
          "rake_rad must lie strictly inside (-pi/2, pi/2)");
  require(std::abs(skew_rad) < std::numbers::pi / 2,
          "skew_rad must lie strictly inside (-pi/2, pi/2)");
}

double normalized_coord(double z_m, double span_m) {
  require_domain(span_m > 0.0, "span must be > 0");
  require_domain(z_m >= 0.0 && z_m <= span_m,
                 "station z must lie in [0, span]");
  return z_m / span_m;
}

namespace {

// std::lerp is exact at both endpoints, which the laws below rely on.
double linear_blend(double a, double b, double r) { return std::lerp(a, b, r); }

// Two straight segments meeting at r = 0.5 with the mid value.
double piecewise_midspan(double root, double mid, double tip, double r) {
  if (r <= 0.5) return std::lerp(root, mid, 2.0 * r);
  return std::lerp(mid, tip, 2.0 * r - 1.0);
}

}  // namespace

double chord_at(double r, const BladeDesignParams& params) {
  require_domain(r >= 0.0 && r <= 1.0, "normalized span must lie in [0, 1]");
  switch (params.chord_mode) {
    case ChordMode::Linear:
      return linear_blend(params.chord_root_m, params.chord_tip_m, r);
    case ChordMode::GaussianBulge: {
      double d = r - params.bulge_center;
      double bump =
          params.bulge_amplitude * std::exp(-params.bulge_sharpness * d * d);
      return linear_blend(params.chord_root_m, params.chord_tip_m, r) *
             (1.0 + bump);
    }
    case ChordMode::PiecewiseMidspan:
      return piecewise_midspan(params.chord_root_m, params.chord_mid_m,
                               params.chord_tip_m, r);
  }
  throw DomainError("unknown chord mode");
}

double pitch_at(double r, const BladeDesignParams& params) {
  require_domain(r >= 0.0 && r <= 1.0, "normalized span must lie in [0, 1]");
  switch (params.pitch_mode) {
    case PitchMode::Linear:
      return linear_blend(params.pitch_root_rad, params.pitch_tip_rad, r);
    case PitchMode::PiecewiseMidspan:
      return piecewise_midspan(params.pitch_root_rad, params.pitch_mid_rad,
                               params.pitch_tip_rad, r);
  }
  throw DomainError("unknown pitch mode");
}

double foil_half_thickness(double x, double thickness_ratio) {
  require_domain(x >= 0.0 && x <= 1.0, "chord fraction must lie in [0, 1]");
  require_domain(thickness_ratio > 0.0, "thickness_ratio must be > 0");
  double sx = std::sqrt(x);
  return 5.0 * thickness_ratio *
         (0.2969 * sx - 0.1260 * x - 0.3516 * x * x + 0.2843 * x * x * x -
          0.1036 * x * x * x * x);
}

AirfoilSection make_airfoil(int points_per_surface, double thickness_ratio,
                            double pitch_axis, bool cosine_spacing) {
  // These are construction parameters, so misuse is a validation failure
  // rather than an out-of-domain evaluation.
  require(points_per_surface >= 8, "points_per_surface must be >= 8");
  require(thickness_ratio > 0.0, "thickness_ratio must be > 0");
  require(pitch_axis >= 0.0 && pitch_axis <= 1.0,
          "pitch_axis must be in [0, 1]");

  const int n = points_per_surface;
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (int j = 0; j < n; ++j) {
    double u = static_cast<double>(j) / (n - 1);
    xs[j] = cosine_spacing
                ? 0.5 * (1.0 - std::cos(std::numbers::pi * u))
                : u;
    ys[j] = foil_half_thickness(xs[j], thickness_ratio);
  }
  // The closed-trailing-edge coefficient leaves a ~1e-17 residual at x = 1;
  // snap both edges so the polygon closes exactly.
  ys.front() = 0.0;
  ys.back() = 0.0;

  AirfoilSection section;
  section.closed = true;
  section.points.reserve(2 * n - 2);
  // Counter-clockwise: trailing edge -> upper surface -> leading edge ->
  // lower surface -> (implicitly back to the trailing edge).
  for (int j = n - 1; j >= 0; --j) {
    section.points.push_back({xs[j] - pitch_axis, ys[j]});
  }
  for (int j = 1; j <= n - 2; ++j) {
    section.points.push_back({xs[j] - pitch_axis, -ys[j]});
  }
  return section;
}

Section3D transform_section(const AirfoilSection& section, double z_m,
                            const BladeDesignParams& params) {
  params.validate_or_throw();
  require_domain(!section.points.empty(), "section has no points");
  double r = normalized_coord(z_m, params.span_m);
  double chord = chord_at(r, params);
  double alpha = pitch_at(r, params);
  double c = std::cos(alpha);
  double s = std::sin(alpha);
  double skew_shift = r * params.span_m * std::tan(params.skew_rad);
  double rake_shift = -z_m * std::tan(params.rake_rad);

  Section3D out;
  out.station_z_m = z_m;
  out.points.reserve(section.points.size());
  for (const auto& p : section.points) {
    double x = chord * p[0];
    double y = chord * p[1];
    double xr = x * c - y * s;
    double yr = x * s + y * c;
    out.points.push_back({xr + skew_shift, yr + rake_shift, z_m});
  }
  return out;
}

std::vector<Section3D> generate_blade_sections(
    const BladeDesignParams& params) {
  params.validate_or_throw();
  AirfoilSection base = make_airfoil(params.chord_point_count,
                                     params.thickness_ratio, params.pitch_axis,
                                     params.cosine_spacing);
  std::vector<Section3D> sections;
  sections.reserve(params.section_count);
  for (int i = 0; i < params.section_count; ++i) {
    double z = params.span_m * (static_cast<double>(i) /
                                (params.section_count - 1));
    sections.push_back(transform_section(base, z, params));
  }
  return sections;
}

}  // namespace vforge
