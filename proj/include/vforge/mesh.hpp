#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vforge/errors.hpp"
#include "vforge/geometry.hpp"

namespace vforge {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& v);
double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);

// Indexed triangle mesh.  Triangles wind counter-clockwise seen from
// outside (outward normals) for every mesh this library constructs.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
};

// Parametric displacement hull: flat bottom, vertical sides, rectangular
// aft body and a superelliptic bow forward of midship.  Lengths in meters.
struct HullParams {
  double length_m = 0.30;
  double beam_m = 0.16;
  double depth_m = 0.08;
  double wall_thickness_m = 0.004;
  double bow_exponent = 2.5;  // >= 1; 2 gives an elliptical bow
  bool deck_open = true;      // true: hollow shell with a rim; false: solid

  void validate_or_throw() const;
};

// Watertightness diagnostic.  `watertight` is true iff every undirected
// edge is shared by exactly two triangles whose directed half-edges run in
// opposite directions.
struct WatertightReport {
  bool watertight = false;
  std::vector<std::array<std::uint32_t, 2>> boundary_edges;     // used once
  std::vector<std::array<std::uint32_t, 2>> nonmanifold_edges;  // used 3+ times
  std::vector<std::array<std::uint32_t, 2>> misoriented_edges;  // same direction twice
};

struct BuoyancyResult {
  double draft_m = 0.0;             // waterline height above the hull bottom
  double freeboard_m = 0.0;         // depth - draft; negative means sinking
  double displaced_mass_kg = 0.0;   // at the reported draft
  bool floats = false;
};

struct MeshStats {
  std::size_t vertex_count = 0;
  std::size_t triangle_count = 0;
  double volume_m3 = 0.0;
  bool watertight = false;
};

// Skins a stack of sections (equal point counts, strictly increasing
// station_z) with two triangles per side quad and fan-triangulated end
// caps, yielding 2*p*(s-1) + 2*(p-2) triangles on p*s vertices.
TriMesh loft_sections(const std::vector<Section3D>& sections);

// Cylindrical hub on the z axis plus blade_count lofted blades pointing
// radially outward, blade k rotated by 2*pi*k/blade_count.  Solids are kept
// separate (multi-shell mesh); each shell is individually watertight.
TriMesh assemble_propeller(const BladeDesignParams& params);

// Hollow open-deck hull shell (or the solid form when deck_open is false).
// Bottom face sits at z = 0, deck rim at z = depth; bow points toward +x.
TriMesh generate_hull(const HullParams& params);

// Signed enclosed volume by the divergence theorem; positive for outward
// orientation.  Raises MeshError if the mesh is not watertight.
double mesh_volume(const TriMesh& mesh);

WatertightReport is_watertight(const TriMesh& mesh);

// Volume of the region of the (watertight) mesh below the plane z = z_plane.
// Uses a flux integral that needs no cap triangulation.
double clipped_volume_below(const TriMesh& mesh, double z_plane);

// Solves displaced_volume(draft) * water_density = total_mass by bisection
// (draft tolerance 1e-6 m, refined until the displaced-mass residual is
// below 1e-6 relative).  If the fully submerged hull cannot displace the
// required mass, reports floats = false with a notional draft > depth and
// the corresponding negative freeboard.
BuoyancyResult buoyancy_check(const TriMesh& hull, double total_mass_kg,
                              double water_density_kg_m3);

// Appends `extra` to `base`, offsetting indices.  No vertex merging.
void append_mesh(TriMesh& base, const TriMesh& extra);

// Splits a multi-shell mesh into vertex-connected components.
std::vector<TriMesh> split_components(const TriMesh& mesh);

MeshStats mesh_stats(const TriMesh& mesh);
std::string mesh_stats_text(const MeshStats& stats);

}  // namespace vforge
