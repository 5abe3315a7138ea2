#include "floorscan/mesh.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>

#include "floorscan/error.hpp"
#include "floorscan/simd/kernels.hpp"

namespace floorscan {

Mat3 rotation_between(const Vec3& from, const Vec3& to) {
  const Vec3 axis = cross(from, to);
  const double s = norm(axis);
  const double c = dot(from, to);
  if (s < 1e-15) {
    if (c > 0.0) return Mat3::identity();
    // Antiparallel: any perpendicular axis works.
    Vec3 helper = std::fabs(from.x) < 0.9 ? kUnitX : kUnitZ;
    return axis_angle(cross(from, helper), std::numbers::pi);
  }
  return axis_angle(axis / s, std::atan2(s, c));
}

void validate(const TriangleMesh& mesh) {
  const auto n = mesh.vertices.size();
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    for (auto idx : face) {
      if (idx >= n) {
        throw Error(ErrorCode::kInvalidArgument,
                    "face " + std::to_string(f) + " references vertex " + std::to_string(idx) +
                        " but mesh has " + std::to_string(n) + " vertices");
      }
    }
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
      throw Error(ErrorCode::kInvalidArgument, "face " + std::to_string(f) + " repeats a vertex");
    }
  }
}

TriangleMesh submesh(const TriangleMesh& mesh, std::span<const std::uint32_t> faces) {
  constexpr auto kUnused = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(mesh.vertices.size(), kUnused);
  for (auto f : faces) {
    for (auto v : mesh.faces[f]) remap[v] = 0;
  }
  TriangleMesh out;
  out.provenance = mesh.provenance;
  for (std::size_t v = 0; v < remap.size(); ++v) {
    if (remap[v] == kUnused) continue;
    remap[v] = static_cast<std::uint32_t>(out.vertices.size());
    out.vertices.push_back(mesh.vertices[v]);
  }
  out.faces.reserve(faces.size());
  for (auto f : faces) {
    const Face& src = mesh.faces[f];
    out.faces.push_back({remap[src[0]], remap[src[1]], remap[src[2]]});
  }
  return out;
}

std::vector<TriangleAttributes> compute_all_attributes(const TriangleMesh& mesh) {
  const std::size_t n = mesh.faces.size();
  std::vector<double> corners(9 * n);
  for (std::size_t f = 0; f < n; ++f) {
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.vertices[mesh.faces[f][k]];
      corners[(3 * k + 0) * n + f] = p.x;
      corners[(3 * k + 1) * n + f] = p.y;
      corners[(3 * k + 2) * n + f] = p.z;
    }
  }
  std::vector<double> outputs(7 * n);
  const double* c = corners.data();
  double* o = outputs.data();
  const simd::TriangleCorners in{c, c + n, c + 2 * n, c + 3 * n, c + 4 * n,
                                 c + 5 * n, c + 6 * n, c + 7 * n, c + 8 * n};
  const simd::TriangleGeometry out{o, o + n, o + 2 * n, o + 3 * n, o + 4 * n, o + 5 * n, o + 6 * n};
  simd::active_kernels().triangle_geometry(in, n, out);

  std::vector<TriangleAttributes> attrs(n);
  for (std::size_t f = 0; f < n; ++f) {
    TriangleAttributes& a = attrs[f];
    a.face = static_cast<std::uint32_t>(f);
    a.centroid = {out.gx[f], out.gy[f], out.gz[f]};
    if (out.twice_area[f] > kDegenerateTwiceArea) {
      a.normal = {out.nx[f], out.ny[f], out.nz[f]};
      a.area = 0.5 * out.twice_area[f];
    }
  }
  return attrs;
}

std::vector<TriangleAttributes> compute_attributes(const TriangleMesh& mesh) {
  auto all = compute_all_attributes(mesh);
  std::erase_if(all, [](const TriangleAttributes& a) { return a.area == 0.0; });
  return all;
}

double total_area(const TriangleMesh& mesh) {
  double sum = 0.0;
  for (const auto& a : compute_attributes(mesh)) sum += a.area;
  return sum;
}

std::string_view to_string(AnnotationKind kind) {
  switch (kind) {
    case AnnotationKind::kSensor: return "sensor";
    case AnnotationKind::kWindow: return "window";
    case AnnotationKind::kDoor: return "door";
    case AnnotationKind::kThermostat: return "thermostat";
    case AnnotationKind::kOther: return "other";
  }
  return "other";
}

AnnotationKind annotation_kind_from_string(std::string_view s) {
  if (s == "sensor") return AnnotationKind::kSensor;
  if (s == "window") return AnnotationKind::kWindow;
  if (s == "door") return AnnotationKind::kDoor;
  if (s == "thermostat") return AnnotationKind::kThermostat;
  if (s == "other") return AnnotationKind::kOther;
  throw Error(ErrorCode::kParse, "unknown annotation kind '" + std::string(s) + "'");
}

RigidTransform RigidTransform::then(const RigidTransform& next) const {
  return {next.rotation * rotation, next.rotation * translation + next.translation};
}

RigidTransform RigidTransform::inverse() const {
  const Mat3 rt = rotation.transposed();
  return {rt, -(rt * translation)};
}

bool is_valid_rotation(const Mat3& r, double tol) {
  const Mat3 p = r.transposed() * r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (std::fabs(p(i, j) - (i == j ? 1.0 : 0.0)) > tol) return false;
    }
  }
  return std::fabs(r.determinant() - 1.0) <= tol;
}

void apply_transform(TriangleMesh& mesh, AnnotationSet& annotations, const RigidTransform& t) {
  if (!is_valid_rotation(t.rotation)) {
    throw Error(ErrorCode::kInvalidArgument, "transform rotation is not orthonormal");
  }
  if (t.is_identity()) return;
  for (Vec3& v : mesh.vertices) v = t.apply_point(v);
  for (Annotation& a : annotations) {
    a.position = t.apply_point(a.position);
    a.facing = normalized(t.apply_direction(a.facing));
  }
}

BoundingBox compute_bounding_box(const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw Error(ErrorCode::kEmptyInput, "bounding box of empty mesh");
  BoundingBox box{mesh.vertices.front(), mesh.vertices.front()};
  for (const Vec3& v : mesh.vertices) {
    box.min = {std::min(box.min.x, v.x), std::min(box.min.y, v.y), std::min(box.min.z, v.z)};
    box.max = {std::max(box.max.x, v.x), std::max(box.max.y, v.y), std::max(box.max.z, v.z)};
  }
  return box;
}

OrientedBoundingBox compute_oriented_bounding_box(const TriangleMesh& mesh) {
  if (mesh.faces.empty()) throw Error(ErrorCode::kEmptyInput, "bounding box of empty mesh");

  // Surface moments: for a triangle with area A, corners a, b, c and centroid
  // g, the integral of p p^T is A/12 (9 g g^T + a a^T + b b^T + c c^T).
  double total = 0.0;
  Eigen::Vector3d first = Eigen::Vector3d::Zero();
  Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
  for (const auto& attr : compute_attributes(mesh)) {
    const Eigen::Vector3d g(attr.centroid.x, attr.centroid.y, attr.centroid.z);
    Eigen::Matrix3d m = 9.0 * g * g.transpose();
    for (int k = 0; k < 3; ++k) {
      const Vec3 p = mesh.corner(attr.face, k);
      const Eigen::Vector3d e(p.x, p.y, p.z);
      m += e * e.transpose();
    }
    second += (attr.area / 12.0) * m;
    first += attr.area * g;
    total += attr.area;
  }
  if (total <= 0.0) throw Error(ErrorCode::kEmptyInput, "mesh has no area");
  const Eigen::Vector3d mean = first / total;
  const Eigen::Matrix3d cov = second / total - mean * mean.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);

  OrientedBoundingBox box;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d e = solver.eigenvectors().col(k);
    box.axes[k] = normalized(Vec3{e.x(), e.y(), e.z()});
  }
  if (dot(cross(box.axes[0], box.axes[1]), box.axes[2]) < 0.0) box.axes[2] = -box.axes[2];

  std::array<double, 3> lo{}, hi{};
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const Vec3& v : mesh.vertices) {
    for (int k = 0; k < 3; ++k) {
      const double s = dot(v, box.axes[k]);
      lo[k] = std::min(lo[k], s);
      hi[k] = std::max(hi[k], s);
    }
  }
  Vec3 center;
  for (int k = 0; k < 3; ++k) {
    box.extent[k] = hi[k] - lo[k];
    center += box.axes[k] * (0.5 * (lo[k] + hi[k]));
  }
  box.center = center;
  return box;
}

}  // namespace floorscan
