#include "vforge/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "vforge/textio.hpp"

namespace vforge {

Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}
double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

void HullParams::validate_or_throw() const {
  if (length_m <= 0.0 || beam_m <= 0.0 || depth_m <= 0.0 ||
      wall_thickness_m <= 0.0) {
    throw ValidationError("hull dimensions must all be > 0");
  }
  if (bow_exponent < 1.0) throw ValidationError("bow_exponent must be >= 1");
  if (wall_thickness_m >= std::min(beam_m, depth_m) / 2.0) {
    throw ValidationError("wall_thickness must be < min(beam, depth)/2");
  }
  if (wall_thickness_m >= length_m / 2.0) {
    throw ValidationError("wall_thickness must be < length/2");
  }
}

TriMesh loft_sections(const std::vector<Section3D>& sections) {
  if (sections.size() < 2) {
    throw MeshError("loft needs at least 2 sections, got " +
                    std::to_string(sections.size()));
  }
  const std::size_t p = sections.front().points.size();
  if (p < 3) throw MeshError("loft sections need at least 3 points");
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (sections[i].points.size() != p) {
      throw MeshError("section " + std::to_string(i) + " has " +
                      std::to_string(sections[i].points.size()) +
                      " points, expected " + std::to_string(p));
    }
    if (i > 0 && !(sections[i].station_z_m > sections[i - 1].station_z_m)) {
      throw MeshError("section stations must be strictly increasing");
    }
  }

  TriMesh mesh;
  const std::size_t s = sections.size();
  mesh.vertices.reserve(s * p);
  for (const auto& sec : sections) {
    for (const auto& pt : sec.points) {
      mesh.vertices.push_back({pt[0], pt[1], pt[2]});
    }
  }
  auto vid = [p](std::size_t i, std::size_t j) {
    return static_cast<std::uint32_t>(i * p + j);
  };

  mesh.triangles.reserve(2 * p * (s - 1) + 2 * (p - 2));
  // Side wall: sections wind counter-clockwise seen from +z, so this
  // split points the quad normals outward.
  for (std::size_t i = 0; i + 1 < s; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      std::size_t jn = (j + 1) % p;
      mesh.triangles.push_back({vid(i, j), vid(i, jn), vid(i + 1, jn)});
      mesh.triangles.push_back({vid(i, j), vid(i + 1, jn), vid(i + 1, j)});
    }
  }
  // End caps: fans anchored at vertex 0 of the first/last section (the
  // sections this library lofts are convex).  Root cap faces -z, tip +z.
  for (std::size_t j = 1; j + 1 < p; ++j) {
    mesh.triangles.push_back({vid(0, 0), vid(0, j + 1), vid(0, j)});
    mesh.triangles.push_back({vid(s - 1, 0), vid(s - 1, j), vid(s - 1, j + 1)});
  }
  return mesh;
}

void append_mesh(TriMesh& base, const TriMesh& extra) {
  const std::uint32_t offset = static_cast<std::uint32_t>(base.vertices.size());
  base.vertices.insert(base.vertices.end(), extra.vertices.begin(),
                       extra.vertices.end());
  base.triangles.reserve(base.triangles.size() + extra.triangles.size());
  for (const auto& t : extra.triangles) {
    base.triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
  }
}

TriMesh assemble_propeller(const BladeDesignParams& params) {
  params.validate_or_throw();
  if (params.chord_root_m > params.hub_length_m) {
    throw MeshError("blade root chord " + format_double(params.chord_root_m) +
                    " m does not fit hub length " +
                    format_double(params.hub_length_m) + " m");
  }

  const double hub_r = params.hub_diameter_m / 2.0;
  const double half_len = params.hub_length_m / 2.0;
  constexpr int kHubSegments = 48;

  // The hub is itself a loft of two circular sections along the z axis.
  std::vector<Section3D> hub_sections(2);
  hub_sections[0].station_z_m = -half_len;
  hub_sections[1].station_z_m = half_len;
  for (int j = 0; j < kHubSegments; ++j) {
    double a = 2.0 * std::numbers::pi * j / kHubSegments;
    double cx = hub_r * std::cos(a);
    double cy = hub_r * std::sin(a);
    hub_sections[0].points.push_back({cx, cy, -half_len});
    hub_sections[1].points.push_back({cx, cy, half_len});
  }
  TriMesh assembly = loft_sections(hub_sections);

  // One blade lofted in its local frame (x tangential, y axial, z spanwise),
  // then replicated around the hub.  Blade local axes map to global as
  // x -> tangent, y -> hub axis, z -> radial, which is a proper rotation,
  // so triangle winding and watertightness are preserved.
  const TriMesh blade = loft_sections(generate_blade_sections(params));
  for (int k = 0; k < params.blade_count; ++k) {
    double phi = 2.0 * std::numbers::pi * k / params.blade_count;
    double c = std::cos(phi);
    double s = std::sin(phi);
    TriMesh placed = blade;
    for (auto& v : placed.vertices) {
      double radial = hub_r + v.z;
      double tangential = v.x;
      double axial = v.y;
      v = {radial * c - tangential * s, radial * s + tangential * c, axial};
    }
    append_mesh(assembly, placed);
  }
  return assembly;
}

namespace {

// Plan-view boundary of the hull at the given length/beam: rectangular aft
// of midship, superelliptic forward.  Counter-clockwise seen from +z.
std::vector<std::array<double, 2>> hull_plan_boundary(double length,
                                                      double beam,
                                                      double exponent) {
  constexpr int kArcPoints = 33;  // bow arc samples, both junctions included
  const double a = length / 2.0;
  const double b = beam / 2.0;
  std::vector<std::array<double, 2>> pts;
  pts.reserve(kArcPoints + 2);
  pts.push_back({-a, -b});  // stern starboard corner
  for (int j = 0; j < kArcPoints; ++j) {
    double t = -std::numbers::pi / 2.0 +
               std::numbers::pi * j / (kArcPoints - 1);
    double ct = std::cos(t);
    double st = std::sin(t);
    double x = a * std::pow(std::abs(ct), 2.0 / exponent);
    double sy = st < 0.0 ? -1.0 : (st > 0.0 ? 1.0 : 0.0);
    double y = b * sy * std::pow(std::abs(st), 2.0 / exponent);
    pts.push_back({x, y});
  }
  pts.push_back({-a, b});  // stern port corner
  return pts;
}

std::array<double, 2> polygon_centroid(
    const std::vector<std::array<double, 2>>& poly) {
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& p : poly) {
    cx += p[0];
    cy += p[1];
  }
  return {cx / poly.size(), cy / poly.size()};
}

// Adds a horizontal cap over `ring` (vertex indices into mesh, CCW from +z)
// fanned about a new centroid vertex.  `up` selects the normal direction.
void add_cap(TriMesh& mesh, const std::vector<std::uint32_t>& ring, double z,
             const std::array<double, 2>& centroid, bool up) {
  std::uint32_t center = static_cast<std::uint32_t>(mesh.vertices.size());
  mesh.vertices.push_back({centroid[0], centroid[1], z});
  const std::size_t n = ring.size();
  for (std::size_t j = 0; j < n; ++j) {
    std::uint32_t v0 = ring[j];
    std::uint32_t v1 = ring[(j + 1) % n];
    if (up) {
      mesh.triangles.push_back({center, v0, v1});
    } else {
      mesh.triangles.push_back({center, v1, v0});
    }
  }
}

// Adds a vertical wall between two rings of existing vertices at the same
// plan positions.  `lower`/`upper` must be CCW from +z; `outward` selects
// whether normals face away from the enclosed plan region.
void add_wall(TriMesh& mesh, const std::vector<std::uint32_t>& lower,
              const std::vector<std::uint32_t>& upper, bool outward) {
  const std::size_t n = lower.size();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t jn = (j + 1) % n;
    if (outward) {
      mesh.triangles.push_back({lower[j], lower[jn], upper[jn]});
      mesh.triangles.push_back({lower[j], upper[jn], upper[j]});
    } else {
      mesh.triangles.push_back({lower[j], upper[jn], lower[jn]});
      mesh.triangles.push_back({lower[j], upper[j], upper[jn]});
    }
  }
}

std::vector<std::uint32_t> push_ring(
    TriMesh& mesh, const std::vector<std::array<double, 2>>& plan, double z) {
  std::vector<std::uint32_t> ids;
  ids.reserve(plan.size());
  for (const auto& p : plan) {
    ids.push_back(static_cast<std::uint32_t>(mesh.vertices.size()));
    mesh.vertices.push_back({p[0], p[1], z});
  }
  return ids;
}

}  // namespace

TriMesh generate_hull(const HullParams& params) {
  params.validate_or_throw();
  const double t = params.wall_thickness_m;
  const auto outer_plan =
      hull_plan_boundary(params.length_m, params.beam_m, params.bow_exponent);

  TriMesh mesh;
  const auto outer_bottom = push_ring(mesh, outer_plan, 0.0);
  const auto outer_top = push_ring(mesh, outer_plan, params.depth_m);
  add_wall(mesh, outer_bottom, outer_top, /*outward=*/true);
  add_cap(mesh, outer_bottom, 0.0, polygon_centroid(outer_plan), /*up=*/false);

  if (!params.deck_open) {
    add_cap(mesh, outer_top, params.depth_m, polygon_centroid(outer_plan),
            /*up=*/true);
    return mesh;
  }

  // Hollow shell: cavity plan uses the same construction at dimensions
  // reduced by the wall on both sides, giving a one-to-one rim pairing.
  const auto inner_plan = hull_plan_boundary(
      params.length_m - 2.0 * t, params.beam_m - 2.0 * t, params.bow_exponent);
  const auto inner_floor = push_ring(mesh, inner_plan, t);
  const auto inner_top = push_ring(mesh, inner_plan, params.depth_m);
  // Deck rim joining the outer and inner top rings, facing up: traverse
  // the outer ring CCW and the inner ring CW so the quads wind upward.
  const std::size_t n = outer_top.size();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t jn = (j + 1) % n;
    mesh.triangles.push_back({outer_top[j], outer_top[jn], inner_top[jn]});
    mesh.triangles.push_back({outer_top[j], inner_top[jn], inner_top[j]});
  }
  add_wall(mesh, inner_floor, inner_top, /*outward=*/false);
  add_cap(mesh, inner_floor, t, polygon_centroid(inner_plan), /*up=*/true);
  return mesh;
}

namespace {

using EdgeKey = std::pair<std::uint32_t, std::uint32_t>;

struct EdgeUse {
  int forward = 0;   // times seen as (min, max)
  int backward = 0;  // times seen as (max, min)
};

std::map<EdgeKey, EdgeUse> collect_edges(const TriMesh& mesh) {
  std::map<EdgeKey, EdgeUse> edges;
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      std::uint32_t u = tri[e];
      std::uint32_t v = tri[(e + 1) % 3];
      if (u < v) {
        ++edges[{u, v}].forward;
      } else {
        ++edges[{v, u}].backward;
      }
    }
  }
  return edges;
}

}  // namespace

WatertightReport is_watertight(const TriMesh& mesh) {
  WatertightReport report;
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      if (tri[e] >= mesh.vertices.size()) {
        throw MeshError("triangle vertex index out of range");
      }
    }
  }
  for (const auto& [key, use] : collect_edges(mesh)) {
    int total = use.forward + use.backward;
    if (total == 1) {
      report.boundary_edges.push_back({key.first, key.second});
    } else if (total > 2) {
      report.nonmanifold_edges.push_back({key.first, key.second});
    } else if (use.forward != 1 || use.backward != 1) {
      // Two uses in the same direction: neighbors disagree on orientation.
      report.misoriented_edges.push_back({key.first, key.second});
    }
  }
  report.watertight = report.boundary_edges.empty() &&
                      report.nonmanifold_edges.empty() &&
                      report.misoriented_edges.empty() &&
                      !mesh.triangles.empty();
  return report;
}

double mesh_volume(const TriMesh& mesh) {
  WatertightReport report = is_watertight(mesh);
  if (!report.watertight) {
    throw MeshError("volume requested for a non-watertight mesh (" +
                    std::to_string(report.boundary_edges.size()) +
                    " boundary, " +
                    std::to_string(report.nonmanifold_edges.size()) +
                    " non-manifold, " +
                    std::to_string(report.misoriented_edges.size()) +
                    " misoriented edges)");
  }
  double six_v = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    six_v += dot(a, cross(b, c));
  }
  return six_v / 6.0;
}

double clipped_volume_below(const TriMesh& mesh, double z_plane) {
  // Flux of F = (x, 0, 0) through the clipped surface equals the clipped
  // volume; the waterplane cap has zero x-normal, so it needs no facets.
  double volume = 0.0;
  std::array<Vec3, 4> poly;
  for (const auto& tri : mesh.triangles) {
    const Vec3 corners[3] = {mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                             mesh.vertices[tri[2]]};
    int n = 0;
    for (int i = 0; i < 3; ++i) {
      const Vec3& cur = corners[i];
      const Vec3& nxt = corners[(i + 1) % 3];
      bool cur_in = cur.z <= z_plane;
      bool nxt_in = nxt.z <= z_plane;
      if (cur_in) poly[n++] = cur;
      if (cur_in != nxt_in) {
        double f = (z_plane - cur.z) / (nxt.z - cur.z);
        poly[n++] = cur + f * (nxt - cur);
      }
    }
    for (int i = 2; i < n; ++i) {
      const Vec3& a = poly[0];
      const Vec3& b = poly[i - 1];
      const Vec3& c = poly[i];
      double nx2 = cross(b - a, c - a).x;  // 2 * area * normal_x
      volume += nx2 / 2.0 * (a.x + b.x + c.x) / 3.0;
    }
  }
  return volume;
}

BuoyancyResult buoyancy_check(const TriMesh& hull, double total_mass_kg,
                              double water_density_kg_m3) {
  if (total_mass_kg <= 0.0) throw DomainError("total_mass must be > 0");
  if (water_density_kg_m3 <= 0.0) {
    throw DomainError("water_density must be > 0");
  }
  if (!is_watertight(hull).watertight) {
    throw MeshError("buoyancy check needs a watertight hull");
  }
  double full_volume = mesh_volume(hull);
  if (full_volume <= 0.0) {
    throw MeshError("hull must be outward-oriented (positive volume)");
  }
  double z_min = std::numeric_limits<double>::infinity();
  double z_max = -std::numeric_limits<double>::infinity();
  for (const auto& v : hull.vertices) {
    z_min = std::min(z_min, v.z);
    z_max = std::max(z_max, v.z);
  }
  const double depth = z_max - z_min;
  const double required_volume = total_mass_kg / water_density_kg_m3;

  BuoyancyResult result;
  if (required_volume > full_volume) {
    result.floats = false;
    result.draft_m = depth * required_volume / full_volume;
    result.freeboard_m = depth - result.draft_m;
    result.displaced_mass_kg = full_volume * water_density_kg_m3;
    return result;
  }

  double lo = 0.0;
  double hi = depth;
  double mid = 0.5 * depth;
  double displaced = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    displaced = clipped_volume_below(hull, z_min + mid) * water_density_kg_m3;
    if (displaced < total_mass_kg) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-6 &&
        std::abs(displaced - total_mass_kg) < 1e-6 * total_mass_kg) {
      break;
    }
  }
  result.floats = true;
  result.draft_m = mid;
  result.freeboard_m = depth - mid;
  result.displaced_mass_kg = displaced;
  return result;
}

std::vector<TriMesh> split_components(const TriMesh& mesh) {
  // Union-find over vertices joined by triangles.
  std::vector<std::uint32_t> parent(mesh.vertices.size());
  for (std::uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&parent](std::uint32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (const auto& tri : mesh.triangles) {
    std::uint32_t r0 = find(tri[0]);
    std::uint32_t r1 = find(tri[1]);
    std::uint32_t r2 = find(tri[2]);
    parent[r1] = r0;
    parent[r2] = r0;
  }

  std::map<std::uint32_t, std::size_t> component_of_root;
  std::vector<TriMesh> components;
  std::vector<std::uint32_t> remap(mesh.vertices.size(),
                                   std::numeric_limits<std::uint32_t>::max());
  for (const auto& tri : mesh.triangles) {
    std::uint32_t root = find(tri[0]);
    auto [it, inserted] =
        component_of_root.try_emplace(root, components.size());
    if (inserted) components.emplace_back();
    TriMesh& part = components[it->second];
    std::array<std::uint32_t, 3> mapped{};
    for (int e = 0; e < 3; ++e) {
      std::uint32_t v = tri[e];
      if (remap[v] == std::numeric_limits<std::uint32_t>::max()) {
        remap[v] = static_cast<std::uint32_t>(part.vertices.size());
        part.vertices.push_back(mesh.vertices[v]);
      }
      mapped[e] = remap[v];
    }
    part.triangles.push_back(mapped);
  }
  return components;
}

MeshStats mesh_stats(const TriMesh& mesh) {
  MeshStats stats;
  stats.vertex_count = mesh.vertices.size();
  stats.triangle_count = mesh.triangles.size();
  stats.watertight = is_watertight(mesh).watertight;
  stats.volume_m3 = stats.watertight ? mesh_volume(mesh) : 0.0;
  return stats;
}

std::string mesh_stats_text(const MeshStats& stats) {
  std::ostringstream out;
  out << "vertices = " << stats.vertex_count << "\n";
  out << "triangles = " << stats.triangle_count << "\n";
  out << "watertight = " << format_bool(stats.watertight) << "\n";
  out << "volume_m3 = " << format_double(stats.volume_m3) << "\n";
  return out.str();
}

}  // namespace vforge
