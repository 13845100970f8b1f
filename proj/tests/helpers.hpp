// Shared mesh fixtures for the test binaries: analytic solids with known
// volumes and orientation.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "vforge/mesh.hpp"

namespace vforge_test {

// Axis-aligned box from `origin` with edge lengths (lx, ly, lz), outward
// CCW orientation, 12 triangles on 8 vertices.
inline vforge::TriMesh make_box(double lx, double ly, double lz,
                                vforge::Vec3 origin = {0.0, 0.0, 0.0}) {
  vforge::TriMesh mesh;
  for (int i = 0; i < 8; ++i) {
    mesh.vertices.push_back({origin.x + ((i & 1) ^ ((i >> 1) & 1)) * lx,
                             origin.y + ((i >> 1) & 1) * ly,
                             origin.z + ((i >> 2) & 1) * lz});
  }
  // The xor above orders the bottom ring 0:(0,0) 1:(1,0) 2:(1,1) 3:(0,1)
  // and the top ring the same way at indices 4..7.
  const std::array<std::array<std::uint32_t, 3>, 12> tris = {{
      {0, 2, 1}, {0, 3, 2},  // bottom, -z
      {4, 5, 6}, {4, 6, 7},  // top, +z
      {0, 1, 5}, {0, 5, 4},  // front, -y
      {1, 2, 6}, {1, 6, 5},  // right, +x
      {2, 3, 7}, {2, 7, 6},  // back, +y
      {3, 0, 4}, {3, 4, 7},  // left, -x
  }};
  mesh.triangles.assign(tris.begin(), tris.end());
  return mesh;
}

// Icosahedron subdivided `subdivisions` times with vertices projected onto
// the sphere of the given radius.
inline vforge::TriMesh make_icosphere(double radius, int subdivisions) {
  using vforge::TriMesh;
  using vforge::Vec3;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh mesh;
  const std::array<Vec3, 12> base = {{
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  }};
  auto project = [radius](const Vec3& v) {
    double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    return Vec3{radius * v.x / n, radius * v.y / n, radius * v.z / n};
  };
  for (const Vec3& v : base) mesh.vertices.push_back(project(v));
  mesh.triangles = {
      {0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10},  {0, 10, 11},
      {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6},  {7, 1, 8},
      {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},   {3, 8, 9},
      {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},   {9, 8, 1},
  };
  for (int pass = 0; pass < subdivisions; ++pass) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
    auto mid = [&](std::uint32_t a, std::uint32_t b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = project(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
      mesh.vertices.push_back(m);
      std::uint32_t idx = static_cast<std::uint32_t>(mesh.vertices.size() - 1);
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<std::uint32_t, 3>> next;
    next.reserve(mesh.triangles.size() * 4);
    for (const auto& t : mesh.triangles) {
      std::uint32_t ab = mid(t[0], t[1]);
      std::uint32_t bc = mid(t[1], t[2]);
      std::uint32_t ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.triangles = std::move(next);
  }
  return mesh;
}

}  // namespace vforge_test
