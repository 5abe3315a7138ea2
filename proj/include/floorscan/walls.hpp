#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "floorscan/mesh.hpp"
#include "floorscan/orientation.hpp"
#include "floorscan/simd/kernels.hpp"

namespace floorscan {

enum class DirectionSource { kPrincipal4, kKMeans };

std::string_view to_string(DirectionSource s);

/// Horizontal unit wall directions.
struct WallDirectionSet {
  std::vector<Vec3> directions;
  DirectionSource source = DirectionSource::kPrincipal4;
  std::vector<std::string> warnings;
};

/// +x, -x, +z, -z.
WallDirectionSet principal_directions();

struct KMeansDirectionParams {
  std::size_t k = 4;
  TrimSchedule schedule = TrimSchedule::walls();
  std::uint64_t seed = 42;
  /// Triangles within this angle of +-y are not wall evidence.
  double vertical_angle_deg = 30.0;
};

/// Trimmed spherical k-means over wall-triangle normals, centers projected
/// onto the x-z plane. Throws Error(kEmptyInput) when the mesh has no wall
/// triangles.
WallDirectionSet kmeans_directions(const TriangleMesh& mesh, const KMeansDirectionParams& params = {});

/// Face indices per direction. A triangle joins the direction with the largest
/// normal dot product (lowest index on ties) when that direction lies within
/// cone_angle_deg.
std::vector<std::vector<std::uint32_t>> assign_to_direction(std::span<const TriangleAttributes> attrs,
                                                            const WallDirectionSet& dirs,
                                                            double cone_angle_deg = 30.0);

/// Block neighbourhood extents, meters.
struct BlockParams {
  double l = 0.4572;  // along the wall
  double w = 0.2032;  // across the wall
  double h = 2.4384;  // vertical
  /// Other points a core point needs inside its block.
  std::size_t min_neighbors = 8;

  void validate() const;
};

/// Block oriented on horizontal unit `direction`, centered on `center`.
simd::BlockQuery make_block(const Vec3& center, const Vec3& direction, const BlockParams& params);

struct DbscanResult {
  /// Member indices, ascending; clusters ordered by their lowest member.
  std::vector<std::vector<std::uint32_t>> clusters;
  std::vector<std::uint32_t> noise;
};

/// DBSCAN whose neighbourhood is a wall-aligned block instead of a sphere.
/// Core points (>= min_neighbors other points in the block) are linked when
/// each lies in the other's block; a border point joins the cluster of its
/// nearest core neighbour. Candidates come from a uniform grid in the wall
/// frame, so only 27 cells are inspected per point.
DbscanResult block_dbscan(std::span<const Vec3> points, const Vec3& direction,
                          const BlockParams& params = {});

struct WallSegment {
  std::size_t direction_index = 0;
  Vec3 direction;
  int cluster_id = 0;
  std::vector<std::uint32_t> faces;  // source face per member
  std::vector<Vec3> centroids;
  std::vector<double> areas;
  double area = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double lateral_min = 0.0;  // along direction x y
  double lateral_max = 0.0;
};

Vec3 lateral_axis(const Vec3& direction);

/// Collects member statistics for one cluster of a direction.
WallSegment make_segment(std::span<const TriangleAttributes> members, std::size_t direction_index,
                         const Vec3& direction, int cluster_id);

struct SegmentFilter {
  double min_area = 0.5;    // m^2
  double reach_tol = 0.35;  // how close a wall must come to floor and ceiling
};

/// Keeps segments of at least min_area that reach within reach_tol of both
/// the floor and the ceiling.
std::vector<WallSegment> filter_segments(std::span<const WallSegment> segments, double floor_y,
                                         double ceiling_y, const SegmentFilter& filter = {});

enum class PlaneFitMode { kAnyCentroid, kMedian };

std::string_view to_string(PlaneFitMode m);

/// Points p with dot(normal, p) == offset.
struct Plane {
  Vec3 normal;
  double offset = 0.0;
};

/// Plane with the segment's direction as normal, through the lowest-index
/// member (kAnyCentroid) or at the lower median member projection (kMedian).
Plane fit_plane(const WallSegment& segment, PlaneFitMode mode = PlaneFitMode::kMedian);

struct PlanarWall {
  Plane plane;
  /// (lat_min, y_min), (lat_min, y_max), (lat_max, y_max), (lat_max, y_min).
  std::array<Vec3, 4> corners;
  int segment_id = 0;

  double width() const { return norm(corners[3] - corners[0]); }
  double height() const { return norm(corners[1] - corners[0]); }
  double area() const { return width() * height(); }
};

/// Rectangle on `plane` spanning the members' lateral and vertical extents.
/// Throws Error(kDegenerateWall) when either extent is zero.
PlanarWall build_rectangle(const WallSegment& segment, const Plane& plane);

/// Two triangles per wall, wound so their normal equals the wall normal.
TriangleMesh assemble_walls(std::span<const PlanarWall> walls);

struct WallParams {
  DirectionSource source = DirectionSource::kPrincipal4;
  KMeansDirectionParams kmeans;
  double cone_angle_deg = 30.0;
  BlockParams block;
  SegmentFilter filter;
  PlaneFitMode fit = PlaneFitMode::kMedian;
};

struct WallExtraction {
  WallDirectionSet directions;
  std::vector<std::size_t> assigned_per_direction;
  std::vector<WallSegment> segments;  // every cluster before filtering
  std::size_t noise_count = 0;
  std::vector<WallSegment> kept;
  std::vector<PlanarWall> walls;
  TriangleMesh mesh;
};

/// Directions, assignment, block DBSCAN, filtering, plane fitting and
/// rectangle construction on a mesh whose floor and ceiling were removed.
WallExtraction extract_walls(const TriangleMesh& mesh, double floor_y, double ceiling_y,
                             const WallParams& params = {});

}  // namespace floorscan
