#pragma once

#include <string>
#include <string_view>

#include "vforge/mesh.hpp"

namespace vforge {

enum class StlMode { Binary, Ascii };

// Serializes a mesh to STL.  Binary layout: 80-byte header, little-endian
// uint32 triangle count, then 50 bytes per triangle (normal + 3 vertices as
// little-endian IEEE-754 float32, 2-byte attribute = 0).  ASCII uses one
// facet/endfacet block per triangle with %.9g coordinates, which round-trips
// float32 values exactly.
std::string export_stl(const TriMesh& mesh, StlMode mode,
                       std::string_view solid_name = "vforge");

// Parses binary or ASCII STL (auto-detected).  Vertices that are bitwise
// equal at float32 precision are merged; nothing else is.  Truncated or
// inconsistent streams raise StlParseError carrying the byte offset of the
// first byte that could not be consumed (stream end, for truncation).
TriMesh import_stl(std::string_view bytes);

}  // namespace vforge
