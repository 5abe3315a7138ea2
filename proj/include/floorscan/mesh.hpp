#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "floorscan/geometry.hpp"

namespace floorscan {

using Face = std::array<std::uint32_t, 3>;

/// Indexed triangle soup in meters, y up.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  std::string provenance;

  std::size_t face_count() const { return faces.size(); }
  bool empty() const { return faces.empty(); }
  Vec3 corner(std::size_t face, int k) const { return vertices[faces[face][k]]; }
};

/// Throws Error(kInvalidArgument) if a face index is out of range or a face
/// repeats a vertex index.
void validate(const TriangleMesh& mesh);

/// Mesh holding only `faces` of `mesh` (in the given order) with unused
/// vertices dropped. Vertex order among survivors is preserved.
TriangleMesh submesh(const TriangleMesh& mesh, std::span<const std::uint32_t> faces);

struct TriangleAttributes {
  std::uint32_t face = 0;
  Vec3 normal;
  Vec3 centroid;
  double area = 0.0;
};

/// Faces whose doubled area falls at or below this are degenerate.
inline constexpr double kDegenerateTwiceArea = 1e-14;

/// One record per non-degenerate face, in face order. Normals follow the
/// right-hand rule on stored winding.
std::vector<TriangleAttributes> compute_attributes(const TriangleMesh& mesh);

/// Attributes for every face (degenerate ones carry a zero normal and zero
/// area); index i describes face i.
std::vector<TriangleAttributes> compute_all_attributes(const TriangleMesh& mesh);

double total_area(const TriangleMesh& mesh);

enum class AnnotationKind { kSensor, kWindow, kDoor, kThermostat, kOther };

std::string_view to_string(AnnotationKind kind);
AnnotationKind annotation_kind_from_string(std::string_view s);

struct Annotation {
  std::string label;
  Vec3 position;
  Vec3 facing{1.0, 0.0, 0.0};
  AnnotationKind kind = AnnotationKind::kOther;
};

using AnnotationSet = std::vector<Annotation>;

/// Rotation plus translation: p' = rotation * p + translation.
struct RigidTransform {
  Mat3 rotation = Mat3::identity();
  Vec3 translation;

  static RigidTransform identity() { return {}; }

  Vec3 apply_point(const Vec3& p) const { return rotation * p + translation; }
  Vec3 apply_direction(const Vec3& v) const { return rotation * v; }

  /// `next` applied after *this.
  RigidTransform then(const RigidTransform& next) const;
  RigidTransform inverse() const;

  bool is_identity() const { return rotation == Mat3::identity() && translation == Vec3{}; }
};

/// True when rotation is orthonormal with determinant +1 within `tol`.
bool is_valid_rotation(const Mat3& r, double tol = 1e-9);

/// Transforms vertices and annotations together. Facing vectors are rotated,
/// not translated. Throws Error(kInvalidArgument) for a non-orthonormal
/// rotation.
void apply_transform(TriangleMesh& mesh, AnnotationSet& annotations, const RigidTransform& t);

struct BoundingBox {
  Vec3 min;
  Vec3 max;

  Vec3 extent() const { return max - min; }
};

/// Axis-aligned box of all vertices. Throws Error(kEmptyInput) on an empty mesh.
BoundingBox compute_bounding_box(const TriangleMesh& mesh);

/// Box aligned to the principal axes of the surface (area-weighted second
/// moments of the triangles).
struct OrientedBoundingBox {
  Vec3 center;
  std::array<Vec3, 3> axes;      // orthonormal, right-handed
  std::array<double, 3> extent;  // full side length along each axis
};

OrientedBoundingBox compute_oriented_bounding_box(const TriangleMesh& mesh);

// --- file I/O -------------------------------------------------------------

enum class MeshFormat { kAuto, kObj, kPly };

/// Loads OBJ (v/f records) or PLY (ASCII, binary little/big endian).
/// Polygons are fan-triangulated. Coordinates are multiplied by `unit_scale`.
TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format = MeshFormat::kAuto,
                       double unit_scale = 1.0);

TriangleMesh parse_obj(std::string_view text, double unit_scale = 1.0);

/// Writes OBJ with shortest round-trip decimal coordinates. `header` lines are
/// written as comments; provenance is stored as "# provenance: ...".
void save_obj(const std::filesystem::path& path, const TriangleMesh& mesh,
              std::span<const std::string> header = {});
std::string format_obj(const TriangleMesh& mesh, std::span<const std::string> header = {});

/// Annotation sidecar: JSON array of {label, kind, position:[x,y,z], facing:[x,y,z]}.
AnnotationSet load_annotations(const std::filesystem::path& path);
AnnotationSet parse_annotations(std::string_view json_text);
std::string format_annotations(const AnnotationSet& annotations);

}  // namespace floorscan
