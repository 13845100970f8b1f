#include "vforge/stl_io.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>

#include "vforge/textio.hpp"

static_assert(std::endian::native == std::endian::little,
              "STL serialization assumes a little-endian host");
static_assert(sizeof(float) == 4 && sizeof(std::uint32_t) == 4);

namespace vforge {

namespace {

void put_f32(std::string& out, float v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

// Normals are derived from the float32-rounded vertices (the values that
// actually land in the file) so that exporting an imported mesh reproduces
// the bytes exactly.
std::array<float, 3> rounded(const Vec3& v) {
  return {static_cast<float>(v.x), static_cast<float>(v.y),
          static_cast<float>(v.z)};
}

std::array<float, 3> facet_normal(const std::array<float, 3>& a,
                                  const std::array<float, 3>& b,
                                  const std::array<float, 3>& c) {
  Vec3 u{static_cast<double>(b[0]) - a[0], static_cast<double>(b[1]) - a[1],
         static_cast<double>(b[2]) - a[2]};
  Vec3 v{static_cast<double>(c[0]) - a[0], static_cast<double>(c[1]) - a[1],
         static_cast<double>(c[2]) - a[2]};
  Vec3 n = cross(u, v);
  double len = norm(n);
  if (len <= 0.0) return {0.0f, 0.0f, 0.0f};
  return {static_cast<float>(n.x / len), static_cast<float>(n.y / len),
          static_cast<float>(n.z / len)};
}

std::string export_binary(const TriMesh& mesh) {
  std::string out;
  out.reserve(84 + 50 * mesh.triangles.size());
  std::string header = "vforge binary stl";
  header.resize(80, '\0');
  out += header;
  std::uint32_t count = static_cast<std::uint32_t>(mesh.triangles.size());
  char cbuf[4];
  std::memcpy(cbuf, &count, 4);
  out.append(cbuf, 4);
  for (const auto& tri : mesh.triangles) {
    auto a = rounded(mesh.vertices[tri[0]]);
    auto b = rounded(mesh.vertices[tri[1]]);
    auto c = rounded(mesh.vertices[tri[2]]);
    auto n = facet_normal(a, b, c);
    put_f32(out, n[0]);
    put_f32(out, n[1]);
    put_f32(out, n[2]);
    for (const auto* v : {&a, &b, &c}) {
      put_f32(out, (*v)[0]);
      put_f32(out, (*v)[1]);
      put_f32(out, (*v)[2]);
    }
    out.append("\0\0", 2);  // attribute byte count
  }
  return out;
}

std::string export_ascii(const TriMesh& mesh, std::string_view name) {
  std::string out;
  out += "solid ";
  out += name;
  out += "\n";
  for (const auto& tri : mesh.triangles) {
    auto a = rounded(mesh.vertices[tri[0]]);
    auto b = rounded(mesh.vertices[tri[1]]);
    auto c = rounded(mesh.vertices[tri[2]]);
    auto n = facet_normal(a, b, c);
    out += "  facet normal " + format_double(n[0]) + " " +
           format_double(n[1]) + " " + format_double(n[2]) + "\n";
    out += "    outer loop\n";
    for (const auto* v : {&a, &b, &c}) {
      out += "      vertex " + format_double((*v)[0]) + " " +
             format_double((*v)[1]) + " " + format_double((*v)[2]) + "\n";
    }
    out += "    endloop\n";
    out += "  endfacet\n";
  }
  out += "endsolid ";
  out += name;
  out += "\n";
  return out;
}

// Accumulates parsed facets, merging vertices that are bitwise equal at
// float32 precision.
class MeshBuilder {
 public:
  void add_vertex(float x, float y, float z, std::size_t offset) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      throw StlParseError("non-finite vertex coordinate", offset);
    }
    auto [it, inserted] = index_.try_emplace(
        std::array<float, 3>{x, y, z},
        static_cast<std::uint32_t>(mesh_.vertices.size()));
    if (inserted) {
      mesh_.vertices.push_back(
          {static_cast<double>(x), static_cast<double>(y),
           static_cast<double>(z)});
    }
    pending_.push_back(it->second);
    if (pending_.size() == 3) {
      mesh_.triangles.push_back({pending_[0], pending_[1], pending_[2]});
      pending_.clear();
    }
  }

  TriMesh take() { return std::move(mesh_); }

 private:
  TriMesh mesh_;
  std::map<std::array<float, 3>, std::uint32_t> index_;
  std::vector<std::uint32_t> pending_;
};

TriMesh import_binary(std::string_view bytes) {
  if (bytes.size() < 84) {
    throw StlParseError("binary STL truncated before triangle count",
                        bytes.size());
  }
  std::uint32_t count = 0;
  std::memcpy(&count, bytes.data() + 80, 4);
  const std::size_t expected = 84 + 50ull * count;
  if (bytes.size() < expected) {
    throw StlParseError("binary STL truncated: header promises " +
                            std::to_string(count) + " triangles",
                        bytes.size());
  }
  if (bytes.size() > expected) {
    throw StlParseError("binary STL has trailing bytes after " +
                            std::to_string(count) + " triangles",
                        expected);
  }
  MeshBuilder builder;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::size_t base = 84 + 50ull * i;
    for (int v = 0; v < 3; ++v) {
      std::size_t voff = base + 12 + 12ull * v;  // skip the normal
      float coords[3];
      std::memcpy(coords, bytes.data() + voff, 12);
      builder.add_vertex(coords[0], coords[1], coords[2], voff);
    }
  }
  return builder.take();
}

// Minimal whitespace tokenizer that remembers where each token started.
class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  std::string_view next() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    token_offset_ = pos_;
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  std::size_t token_offset() const { return token_offset_; }

  // Discards the remainder of the current line (e.g. an optional name).
  void skip_line() {
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t token_offset_ = 0;
};

TriMesh import_ascii(std::string_view text) {
  Tokenizer tok(text);
  auto expect = [&tok](std::string_view want) {
    std::string_view got = tok.next();
    if (got != want) {
      throw StlParseError("expected `" + std::string(want) + "`, got `" +
                              std::string(got) + "`",
                          tok.token_offset());
    }
  };
  auto number = [&tok]() {
    std::string_view t = tok.next();
    try {
      return parse_quantity(t, Quantity::Plain);
    } catch (const DomainError&) {
      throw StlParseError("expected a number, got `" + std::string(t) + "`",
                          tok.token_offset());
    }
  };

  expect("solid");
  tok.skip_line();  // optional solid name, possibly several words
  std::string_view t = tok.next();
  MeshBuilder builder;
  while (true) {
    if (t == "endsolid") break;
    if (t != "facet") {
      throw StlParseError("expected `facet` or `endsolid`, got `" +
                              std::string(t) + "`",
                          tok.token_offset());
    }
    expect("normal");
    number();
    number();
    number();
    expect("outer");
    expect("loop");
    for (int v = 0; v < 3; ++v) {
      expect("vertex");
      std::size_t off = tok.token_offset();
      float x = static_cast<float>(number());
      float y = static_cast<float>(number());
      float z = static_cast<float>(number());
      builder.add_vertex(x, y, z, off);
    }
    expect("endloop");
    expect("endfacet");
    t = tok.next();
  }
  return builder.take();
}

}  // namespace

std::string export_stl(const TriMesh& mesh, StlMode mode,
                       std::string_view solid_name) {
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      if (tri[e] >= mesh.vertices.size()) {
        throw MeshError("triangle vertex index out of range");
      }
    }
  }
  return mode == StlMode::Binary ? export_binary(mesh)
                                 : export_ascii(mesh, solid_name);
}

TriMesh import_stl(std::string_view bytes) {
  // A stream whose size matches its embedded triangle count is binary, no
  // matter what the header bytes spell; otherwise a leading `solid` means
  // ASCII.  (Binary headers are allowed to start with `solid` too.)
  if (bytes.size() >= 84) {
    std::uint32_t count = 0;
    std::memcpy(&count, bytes.data() + 80, 4);
    if (bytes.size() == 84 + 50ull * count) return import_binary(bytes);
  }
  std::size_t first = bytes.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos &&
      bytes.substr(first, 5) == "solid") {
    return import_ascii(bytes);
  }
  return import_binary(bytes);
}

}  // namespace vforge
